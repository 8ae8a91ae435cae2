//! Intrinsic motion in the internal time `τ`.
//!
//! The particle sits in the quantum potential of its own wave. With
//! `dℓ/dτ = −v_i` and `E_Q = V_Q(ℓ) + ½mγ_o v_i²` conserved, the
//! displacement obeys `d²ℓ/dτ² = −(1/mγ_o) dV_Q/dℓ`, a bounded oscillation
//! around the potential minimum at `ℓ = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::field::quantum_potential;
use crate::kinematics::PhysicalParams;
use crate::profile::{profile_derivatives, shape_map, solve_f, ProfileGrid, ProfileParams, Side};

/// Sinusoidal intrinsic motion `ℓ = −A sin ωτ`, `v_i = Aω cos ωτ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSpec {
    pub amplitude: f64,
    pub omega: f64,
}

impl HarmonicSpec {
    pub fn new(amplitude: f64, omega: f64) -> Result<Self> {
        if !(amplitude > 0.0 && omega > 0.0) || !(amplitude * omega).is_finite() {
            return domain(format!("amplitude and frequency must be positive, got A = {amplitude}, ω = {omega}"));
        }
        Ok(Self { amplitude, omega })
    }

    /// Small-oscillation limit of a profile, `ω = (c/λ_r) f√(2(f+2))`,
    /// scaled to peak speed `v_max`.
    pub fn for_profile(params: &ProfileParams, phys: &PhysicalParams, v_max: f64) -> Result<Self> {
        let omega = phys.c() / params.lambda_r() * shape_map(params.f());
        Self::new(v_max / omega, omega)
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn v_max(&self) -> f64 {
        self.amplitude * self.omega
    }
}

pub fn harmonic_trajectory(tau: f64, spec: &HarmonicSpec) -> (f64, f64) {
    let (s, c) = (spec.omega * tau).sin_cos();
    (-spec.amplitude * s, spec.amplitude * spec.omega * c)
}

/// Classical Zitterbewegung and the shape constant that reproduces it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardZbw {
    pub spec: HarmonicSpec,
    /// Solves `γ_o f√(2(f+2)) = 2`.
    pub f: f64,
}

pub fn standard_zbw(phys: &PhysicalParams) -> Result<StandardZbw> {
    let mg = phys.m() * phys.gamma_o();
    let spec = HarmonicSpec::new(phys.hbar() / (2.0 * mg * phys.c()), 2.0 * mg * phys.c() * phys.c() / phys.hbar())?;
    Ok(StandardZbw {
        spec,
        f: solve_f(2.0 / phys.gamma_o())?,
    })
}

/// `(Δx·Δp, ΔE·Δt)` of the intrinsic motion at peak speed `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyProducts {
    pub dx_dp: f64,
    pub de_dt: f64,
}

/// `Δx·Δp = ħ/(f√(2(f+2)) γ_s)` and `ΔE·Δt = (π/2) Δx·Δp`.
pub fn uncertainty_products(f: f64, phys: &PhysicalParams) -> Result<UncertaintyProducts> {
    if !(f > 0.0) || !f.is_finite() {
        return domain(format!("shape constant must be positive, got {f}"));
    }
    let dx_dp = phys.hbar() / (shape_map(f) * phys.direction().gamma_s);
    Ok(UncertaintyProducts {
        dx_dp,
        de_dt: 0.5 * PI * dx_dp,
    })
}

/// `d²ℓ/dτ² = −(1/mγ_o) (dV_Q/dR) Ṙ` at `ℓ`, with `R(ℓ)` from the grid.
pub fn tau_acceleration(ell: f64, grid: &ProfileGrid, phys: &PhysicalParams) -> Result<f64> {
    Ok(force_and_potential(ell, grid, phys)?.0)
}

fn force_and_potential(ell: f64, grid: &ProfileGrid, phys: &PhysicalParams) -> Result<(f64, f64)> {
    let params = grid.params();
    let r = grid.eval(ell)?.min(params.r_max());
    let (rdot, _) = profile_derivatives(r, Side::of(ell), params)?;
    let v_q = quantum_potential(r, params, phys)?;
    let dv_dr = -2.0 * v_q / r;
    Ok((-dv_dr * rdot / (phys.m() * phys.gamma_o()), v_q))
}

/// The `ℓ > 0` where `V_Q(ℓ) = E_Q` for a launch from the origin at `v_i0`.
pub fn turning_point(grid: &ProfileGrid, phys: &PhysicalParams, v_i0: f64) -> Result<f64> {
    let params = grid.params();
    let scale = phys.energy_scale() * params.f();
    let e_q = scale + 0.5 * phys.m() * phys.gamma_o() * v_i0 * v_i0;
    grid.ell_at(params.r_max() * (scale / e_q).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauState {
    pub tau: f64,
    pub ell: f64,
    pub v_i: f64,
    pub v_q: f64,
    pub e_q: f64,
}

impl TauState {
    pub fn drift_from(&self, e0: f64) -> f64 {
        ((self.e_q - e0) / e0).abs()
    }
}

pub const SCHEME: &str = "leapfrog-kdk";

/// Integrated orbit; immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauTrajectory {
    pub states: Vec<TauState>,
    /// Mean period over all full oscillations.
    pub period_estimate: f64,
    pub first_period: f64,
    pub last_period: f64,
    /// `max |E_Q(τ) − E_Q(0)| / E_Q(0)` over every step.
    pub energy_drift: f64,
    /// Largest `|ℓ|` seen over every step.
    pub max_excursion: f64,
    pub dtau: f64,
    pub steps: usize,
    pub scheme: String,
}

impl TauTrajectory {
    pub fn initial_energy(&self) -> f64 {
        self.states[0].e_q
    }

    pub fn tau_span(&self) -> (f64, f64) {
        (self.states[0].tau, self.states[self.states.len() - 1].tau)
    }

    /// `ℓ(τ)` by cubic Hermite interpolation using `dℓ/dτ = −v_i`.
    pub fn ell_at(&self, tau: f64) -> Result<f64> {
        let (lo, hi) = self.tau_span();
        if !(tau >= lo && tau <= hi) {
            return domain(format!("τ = {tau} outside trajectory span [{lo}, {hi}]"));
        }
        let k = self.states.partition_point(|s| s.tau <= tau).clamp(1, self.states.len() - 1) - 1;
        let (a, b) = (&self.states[k], &self.states[k + 1]);
        let h = b.tau - a.tau;
        if h == 0.0 {
            return Ok(a.ell);
        }
        let s = (tau - a.tau) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        Ok((2.0 * s3 - 3.0 * s2 + 1.0) * a.ell
            + (s3 - 2.0 * s2 + s) * (-a.v_i * h)
            + (-2.0 * s3 + 3.0 * s2) * b.ell
            + (s3 - s2) * (-b.v_i * h))
    }
}

/// Controls for [`integrate_tau`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauOptions {
    /// Step size; `None` uses the harmonic period over [`DEFAULT_STEPS_PER_PERIOD`].
    pub dtau: Option<f64>,
    pub drift_tol: f64,
    /// Keep every n-th step; the first and last states are always kept.
    pub record_every: usize,
    /// Step budget; `None` allows four harmonic periods per requested period.
    pub max_steps: Option<usize>,
}

pub const DEFAULT_STEPS_PER_PERIOD: f64 = 50_000.0;
pub const DEFAULT_DRIFT_TOL: f64 = 1e-8;

impl Default for TauOptions {
    fn default() -> Self {
        Self {
            dtau: None,
            drift_tol: DEFAULT_DRIFT_TOL,
            record_every: 1,
            max_steps: None,
        }
    }
}

/// Kick–drift–kick leapfrog for `(ℓ, v_i)`; symplectic and time-reversible.
#[derive(Debug, Clone, Copy)]
pub struct Leapfrog<'a> {
    grid: &'a ProfileGrid,
    phys: &'a PhysicalParams,
    dtau: f64,
}

impl<'a> Leapfrog<'a> {
    pub fn new(grid: &'a ProfileGrid, phys: &'a PhysicalParams, dtau: f64) -> Result<Self> {
        if !dtau.is_finite() || dtau == 0.0 {
            return domain(format!("step must be finite and nonzero, got {dtau}"));
        }
        Ok(Self { grid, phys, dtau })
    }

    pub fn dtau(&self) -> f64 {
        self.dtau
    }

    /// One step; negative `dtau` runs the motion backward.
    /// Returns the new `(ℓ, v_i)` and `V_Q` there.
    pub fn step(&self, ell: f64, v_i: f64) -> Result<(f64, f64, f64)> {
        let half = 0.5 * self.dtau;
        let (a0, _) = force_and_potential(ell, self.grid, self.phys)?;
        // The velocity of ℓ is −v_i, so kicks subtract.
        let v_half = v_i - half * a0;
        let ell_new = ell - self.dtau * v_half;
        let (a1, v_q) = force_and_potential(ell_new, self.grid, self.phys)?;
        Ok((ell_new, v_half - half * a1, v_q))
    }

    pub fn run(&self, mut ell: f64, mut v_i: f64, steps: usize) -> Result<(f64, f64)> {
        for _ in 0..steps {
            let (l, v, _) = self.step(ell, v_i)?;
            ell = l;
            v_i = v;
        }
        Ok((ell, v_i))
    }
}

/// Integrates from `ℓ = 0`, `v_i = v_i0` for `n_periods` full oscillations,
/// counted by zero crossings of `v_i`.
pub fn integrate_tau(
    grid: &ProfileGrid,
    phys: &PhysicalParams,
    v_i0: f64,
    n_periods: usize,
    options: &TauOptions,
) -> Result<TauTrajectory> {
    if !(v_i0 > 0.0) || v_i0 > phys.c() {
        return domain(format!("launch speed must satisfy 0 < v_i0 ≤ c, got {v_i0}"));
    }
    if n_periods == 0 {
        return domain("at least one period is required");
    }
    if !(options.drift_tol > 0.0) {
        return domain("drift tolerance must be positive");
    }
    let harmonic = HarmonicSpec::for_profile(grid.params(), phys, phys.c())?;
    let dtau = options.dtau.unwrap_or(harmonic.period() / DEFAULT_STEPS_PER_PERIOD);
    if !(dtau > 0.0) || !dtau.is_finite() {
        return domain(format!("step must be positive, got {dtau}"));
    }
    let max_steps = options
        .max_steps
        .unwrap_or_else(|| (4.0 * (n_periods as f64 + 1.0) * harmonic.period() / dtau).ceil() as usize);
    let every = options.record_every.max(1);
    let stepper = Leapfrog::new(grid, phys, dtau)?;
    let mg = phys.m() * phys.gamma_o();

    let (_, v_q0) = force_and_potential(0.0, grid, phys)?;
    let e0 = v_q0 + 0.5 * mg * v_i0 * v_i0;
    let first = TauState {
        tau: 0.0,
        ell: 0.0,
        v_i: v_i0,
        v_q: v_q0,
        e_q: e0,
    };
    let mut states = vec![first];
    let mut current = first;
    let mut crossings: Vec<f64> = Vec::with_capacity(2 * n_periods + 1);
    let mut drift = 0.0f64;
    let mut excursion = 0.0f64;
    let mut step = 0usize;

    while crossings.len() < 2 * n_periods + 1 {
        if step >= max_steps {
            return Err(Error::Numeric(format!(
                "{} of {} turning points reached within {max_steps} steps",
                crossings.len(),
                2 * n_periods + 1
            )));
        }
        let (ell, v_i, v_q) = stepper.step(current.ell, current.v_i)?;
        step += 1;
        let next = TauState {
            tau: step as f64 * dtau,
            ell,
            v_i,
            v_q,
            e_q: v_q + 0.5 * mg * v_i * v_i,
        };
        if current.v_i != 0.0 && (current.v_i > 0.0) != (next.v_i > 0.0) {
            crossings.push(current.tau + dtau * current.v_i / (current.v_i - next.v_i));
        }
        drift = drift.max(next.drift_from(e0));
        excursion = excursion.max(ell.abs());
        current = next;
        if step.is_multiple_of(every) {
            states.push(current);
        }
    }
    if !step.is_multiple_of(every) {
        states.push(current);
    }
    if drift > options.drift_tol {
        return Err(Error::EnergyDrift {
            drift,
            tolerance: options.drift_tol,
        });
    }

    let last = crossings.len() - 1;
    Ok(TauTrajectory {
        states,
        period_estimate: (crossings[last] - crossings[0]) / n_periods as f64,
        first_period: crossings[2] - crossings[0],
        last_period: crossings[last] - crossings[last - 2],
        energy_drift: drift,
        max_excursion: excursion,
        dtau,
        steps: step,
        scheme: SCHEME.to_string(),
    })
}

/// Source of the intrinsic displacement for [`two_time_position`].
#[derive(Debug, Clone, Copy)]
pub enum IntrinsicMotion<'a> {
    Harmonic(&'a HarmonicSpec),
    Trajectory(&'a TauTrajectory),
}

/// `x(t, τ) = x₀ + v_o t − ℓ(τ)` for a free particle.
pub fn two_time_position(x0: f64, t: f64, tau: f64, phys: &PhysicalParams, motion: IntrinsicMotion) -> Result<f64> {
    let ell = match motion {
        IntrinsicMotion::Harmonic(spec) => harmonic_trajectory(tau, spec).0,
        IntrinsicMotion::Trajectory(traj) => traj.ell_at(tau)?,
    };
    Ok(x0 + phys.v_o() * t - ell)
}
