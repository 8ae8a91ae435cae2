//! Lorentz factors and the direction-dependent reduced Compton length.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// `1/√(1 − v²/c²)` for `0 ≤ v < c`.
pub fn lorentz_gamma(v: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return domain(format!("light speed must be positive, got {c}"));
    }
    if !(v >= 0.0) {
        return domain(format!("speed must be non-negative, got {v}"));
    }
    if v >= c {
        return domain(format!("speed {v} is not below c = {c}"));
    }
    let beta = v / c;
    Ok(1.0 / (1.0 - beta * beta).sqrt())
}

/// Particle and unit constants.
///
/// `theta` is the angle between the probe direction `ŝ` and the observable
/// velocity `v̂_o`, in radians within `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    m: f64,
    hbar: f64,
    c: f64,
    v_o: f64,
    theta: f64,
}

/// The projection of the observable motion on the probe direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionSpec {
    pub theta: f64,
    pub v_s: f64,
    pub gamma_s: f64,
}

impl PhysicalParams {
    pub fn new(m: f64, hbar: f64, c: f64, v_o: f64, theta: f64) -> Result<Self> {
        for (name, value) in [("m", m), ("hbar", hbar), ("c", c)] {
            if !(value > 0.0) || !value.is_finite() {
                return domain(format!("{name} must be positive and finite, got {value}"));
            }
        }
        if v_o == 0.0 {
            return Err(Error::SingularStatic);
        }
        if !(v_o > 0.0) || v_o >= c {
            return domain(format!("observable speed must satisfy 0 < v_o < c, got {v_o}"));
        }
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return domain(format!("theta must lie in [0, π/2], got {theta}"));
        }
        Ok(Self { m, hbar, c, v_o, theta })
    }

    /// `ħ = c = m = 1`.
    pub fn natural(v_o: f64, theta: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, v_o, theta)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn v_o(&self) -> f64 {
        self.v_o
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn with_theta(self, theta: f64) -> Result<Self> {
        Self::new(self.m, self.hbar, self.c, self.v_o, theta)
    }

    pub fn with_v_o(self, v_o: f64) -> Result<Self> {
        Self::new(self.m, self.hbar, self.c, v_o, self.theta)
    }

    pub fn with_hbar(self, hbar: f64) -> Result<Self> {
        Self::new(self.m, hbar, self.c, self.v_o, self.theta)
    }

    pub fn with_mass(self, m: f64) -> Result<Self> {
        Self::new(m, self.hbar, self.c, self.v_o, self.theta)
    }

    pub fn gamma_o(&self) -> f64 {
        // Construction guarantees v_o < c.
        lorentz_gamma(self.v_o, self.c).expect("validated observable speed")
    }

    pub fn direction(&self) -> DirectionSpec {
        direction_gamma(self)
    }

    pub fn lambda_r(&self) -> f64 {
        reduced_compton(self)
    }

    /// `m γ_o c²`, the energy unit of the quantum potential.
    pub fn energy_scale(&self) -> f64 {
        self.m * self.gamma_o() * self.c * self.c
    }

    /// Observable momentum `p_o = m γ_o v_o`.
    pub fn momentum(&self) -> f64 {
        self.m * self.gamma_o() * self.v_o
    }
}

pub fn direction_gamma(params: &PhysicalParams) -> DirectionSpec {
    let v_s = params.v_o * params.theta.cos();
    let gamma_s = lorentz_gamma(v_s.max(0.0), params.c).expect("projected speed below c");
    DirectionSpec {
        theta: params.theta,
        v_s,
        gamma_s,
    }
}

/// `λ_r = ħ/(m c γ_o γ_s)`; at `θ = 0` this is `ħ/(m c γ_o²)`.
pub fn reduced_compton(params: &PhysicalParams) -> f64 {
    let gamma_s = direction_gamma(params).gamma_s;
    params.hbar / (params.m * params.c * params.gamma_o() * gamma_s)
}
