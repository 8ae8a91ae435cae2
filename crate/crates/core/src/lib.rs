//! Two-time pilot-wave model of a free relativistic particle.
//!
//! The particle position depends on the laboratory time `t` and on an
//! independent intrinsic time `τ`. The amplitude `R(ℓ)` of the Klein–Gordon
//! wave follows the particle and produces a quantum potential that drives an
//! unobservable oscillation in `τ`, a generalized Zitterbewegung.
//!
//! Modules, bottom-up:
//!
//! * [`kinematics`]: physical constants, Lorentz factors, reduced Compton length.
//! * [`profile`]: shape constant `f`, closed-form derivatives and the numerical
//!   amplitude profile.
//! * [`field`]: quantum potential, Hamiltonian, energy budget and the
//!   Klein–Gordon split-equation certifier.
//! * [`dynamics`]: the intrinsic motion in `τ`, its harmonic limit and the
//!   uncertainty products.
//! * [`nonrel`]: non-relativistic solutions, no-go demonstrations and the
//!   validity check of the non-relativistic expansion.
//!
//! Natural units (`ħ = c = m = 1`) are the default throughout.

// `!(x > 0.0)` guards reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod fd;
pub mod field;
pub mod interp;
pub mod kinematics;
pub mod nonrel;
pub mod profile;
pub mod quadrature;
pub mod roots;

pub use error::{Error, Result};
pub use kinematics::PhysicalParams;
pub use profile::{ProfileGrid, ProfileParams};
