//! The amplitude profile `R(ℓ)` of the wave that follows the particle.
//!
//! `R` is even in `ℓ` with its maximum `R_M` at the origin. Its derivatives
//! are known in closed form as functions of `R`, but `R(ℓ)` itself is only
//! available through the quadrature
//!
//! ```text
//! |ℓ| = λ_r/(R_M √f) ∫_R^{R_M} dR' / √g(R'),   g = f(R_M²/R'² − 1) + 4 ln(R_M/R')
//! ```
//!
//! whose integrand has an inverse-square-root singularity at `R' = R_M`.
//! With `u² = 1 − R/R_M` the integral becomes
//! `|ℓ| = (2λ_r/√f) ∫_0^u h(s) ds` where `h = s/√g` is bounded and smooth,
//! `h(0) = 1/√(2(f+2))`. Grids are therefore built uniform in `u`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::interp::MonotoneCubic;
use crate::kinematics::PhysicalParams;
use crate::quadrature::{self, Tolerance};
use crate::roots::newton_bisect;

/// `t ↦ t √(2(t+2))`, strictly increasing on `t > 0`.
pub fn shape_map(f: f64) -> f64 {
    f * (2.0 * (f + 2.0)).sqrt()
}

/// The shape constant `f > 0` with `f √(2(f+2)) = target`.
pub fn solve_f(target: f64) -> Result<f64> {
    if !(target > 0.0) || !target.is_finite() {
        return domain(format!("shape target must be positive and finite, got {target}"));
    }
    // shape_map(t) ≥ 2t for t > 0, and shape_map(t) ≥ √2 t^{3/2}.
    let hi = (0.5 * target).min((target / 2f64.sqrt()).powf(2.0 / 3.0)).max(f64::MIN_POSITIVE) * 1.0001;
    let root = newton_bisect(
        |t| {
            let s = (2.0 * (t + 2.0)).sqrt();
            (t * s - target, s + t / s)
        },
        0.0,
        hi,
        4.0 * f64::EPSILON * hi,
        200,
    )?;
    Ok(root)
}

/// Shape constant, peak amplitude and length scale of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileParams {
    f: f64,
    r_max: f64,
    lambda_r: f64,
    c1: f64,
}

impl ProfileParams {
    pub fn new(f: f64, r_max: f64, lambda_r: f64) -> Result<Self> {
        for (name, v) in [("f", f), ("R_M", r_max), ("lambda_r", lambda_r)] {
            if !(v > 0.0) || !v.is_finite() {
                return domain(format!("{name} must be positive and finite, got {v}"));
            }
        }
        Ok(Self {
            f,
            r_max,
            lambda_r,
            c1: f * r_max * r_max,
        })
    }

    /// Profile whose length scale is the reduced Compton length of `phys`.
    pub fn for_particle(f: f64, r_max: f64, phys: &PhysicalParams) -> Result<Self> {
        Self::new(f, r_max, phys.lambda_r())
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn lambda_r(&self) -> f64 {
        self.lambda_r
    }

    /// First-integral constant `c₁ = f R_M²`.
    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn with_r_max(&self, r_max: f64) -> Result<Self> {
        Self::new(self.f, r_max, self.lambda_r)
    }

    pub fn with_lambda_r(&self, lambda_r: f64) -> Result<Self> {
        Self::new(self.f, self.r_max, lambda_r)
    }

    /// Curvature of the profile at the peak in units of `λ_r⁻²`: `f(f+2)`.
    pub fn peak_curvature(&self) -> f64 {
        self.f * (self.f + 2.0)
    }
}

/// Sign of `ℓ`, selecting the branch of `Ṙ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    pub fn of(ell: f64) -> Self {
        if ell < 0.0 {
            Side::Negative
        } else {
            Side::Positive
        }
    }

    fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }
}

/// `g(R)/x` with `x = 1 − R/R_M`, evaluated without cancellation near the peak.
fn radicand_over_x(x: f64, f: f64) -> f64 {
    let rho = 1.0 - x;
    let log_term = if x == 0.0 { 1.0 } else { -(-x).ln_1p() / x };
    f * (2.0 - x) / (rho * rho) + 4.0 * log_term
}

/// The bounded integrand `h(u) = u/√g` of the substituted quadrature.
pub(crate) fn ell_integrand(u: f64, f: f64) -> f64 {
    1.0 / radicand_over_x(u * u, f).sqrt()
}

/// `(Ṙ, R̈)` at amplitude `R`; `Ṙ` is negative for `ℓ > 0`.
pub fn profile_derivatives(r: f64, side: Side, params: &ProfileParams) -> Result<(f64, f64)> {
    if !(r > 0.0) || r > params.r_max {
        return domain(format!("amplitude {r} outside (0, R_M = {}]", params.r_max));
    }
    let x = 1.0 - r / params.r_max;
    let g = (x * radicand_over_x(x, params.f)).max(0.0);
    let rdot = -side.sign() * params.f.sqrt() * params.r_max / params.lambda_r * g.sqrt();
    let q = params.c1 / (r * r);
    let rddot = -r * q * (2.0 + q) / (params.lambda_r * params.lambda_r);
    Ok((rdot, rddot))
}

/// Quadratic approximation of the profile around the origin.
pub fn small_ell_profile(ell: f64, params: &ProfileParams) -> f64 {
    let s = ell / params.lambda_r;
    params.r_max * (1.0 - 0.5 * params.peak_curvature() * s * s)
}

/// Accuracy controls for [`integrate_profile_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Relative tolerance of each panel integral, hence of every `ℓ`.
    pub rel_tol: f64,
    pub max_segments_per_panel: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_segments_per_panel: 64,
        }
    }
}

pub const DEFAULT_R_FLOOR: f64 = 0.05;
pub const DEFAULT_GRID_POINTS: usize = 4001;

/// Sampled even profile on `ℓ ≥ 0`. Negative `ℓ` is served by reflection.
///
/// Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileGrid {
    params: ProfileParams,
    r_floor: f64,
    curve: MonotoneCubic,
    quadrature_error: f64,
}

pub fn integrate_profile(params: &ProfileParams, r_floor: f64, n_points: usize) -> Result<ProfileGrid> {
    integrate_profile_with(params, r_floor, n_points, &GridOptions::default())
}

pub fn integrate_profile_with(
    params: &ProfileParams,
    r_floor: f64,
    n_points: usize,
    opts: &GridOptions,
) -> Result<ProfileGrid> {
    if !(r_floor > 0.0 && r_floor < 1.0) {
        return domain(format!("r_floor must lie in (0, 1), got {r_floor}"));
    }
    if n_points < 16 {
        return domain(format!("at least 16 grid points required, got {n_points}"));
    }
    let f = params.f;
    let u_end = (1.0 - r_floor).sqrt();
    let du = u_end / (n_points - 1) as f64;
    let scale = 2.0 * params.lambda_r / f.sqrt();
    let slope_scale = f.sqrt() * params.r_max / params.lambda_r;

    let mut ell = Vec::with_capacity(n_points);
    let mut r = Vec::with_capacity(n_points);
    let mut slope = Vec::with_capacity(n_points);
    let mut acc = 0.0;
    let mut worst_rel = 0.0f64;
    let tol = Tolerance::relative(opts.rel_tol);

    let mut u_prev = 0.0;
    for k in 0..n_points {
        let u = if k == n_points - 1 { u_end } else { k as f64 * du };
        if k > 0 {
            let panel = quadrature::integrate(|s| ell_integrand(s, f), u_prev, u, tol, opts.max_segments_per_panel)?;
            acc += panel.value;
            if panel.value > 0.0 {
                worst_rel = worst_rel.max(panel.abs_error / panel.value);
            }
        }
        ell.push(scale * acc);
        r.push(params.r_max * (1.0 - u * u));
        slope.push(-slope_scale * u / ell_integrand(u, f));
        u_prev = u;
    }

    Ok(ProfileGrid {
        params: *params,
        r_floor,
        curve: MonotoneCubic::with_slopes(ell, r, slope)?,
        quadrature_error: worst_rel,
    })
}

impl ProfileGrid {
    /// Wraps externally sampled data, e.g. a trial shape to be certified.
    ///
    /// Requires `ell[0] = 0`, strictly increasing `ell` and strictly
    /// decreasing positive `r`. Slopes are estimated from the samples.
    pub fn from_samples(ell: Vec<f64>, r: Vec<f64>, params: ProfileParams) -> Result<Self> {
        if ell.first() != Some(&0.0) {
            return domain("samples must start at ℓ = 0");
        }
        if r.iter().any(|&v| !(v > 0.0)) || r.windows(2).any(|w| !(w[1] < w[0])) {
            return domain("sampled amplitudes must be positive and strictly decreasing");
        }
        let r_floor = r[r.len() - 1] / r[0];
        let mut curve = MonotoneCubic::pchip(ell, r)?;
        // Evenness forces a flat top.
        let (x, y, mut s) = (curve.x().to_vec(), curve.y().to_vec(), curve.slopes().to_vec());
        s[0] = 0.0;
        curve = MonotoneCubic::with_slopes(x, y, s)?;
        Ok(Self {
            params,
            r_floor,
            curve,
            quadrature_error: 0.0,
        })
    }

    pub fn params(&self) -> &ProfileParams {
        &self.params
    }

    /// Smallest sampled amplitude as a fraction of `R_M`.
    pub fn r_floor(&self) -> f64 {
        self.r_floor
    }

    pub fn ell(&self) -> &[f64] {
        self.curve.x()
    }

    pub fn r(&self) -> &[f64] {
        self.curve.y()
    }

    /// Node slopes `Ṙ` used by the interpolant.
    pub fn slopes(&self) -> &[f64] {
        self.curve.slopes()
    }

    pub fn len(&self) -> usize {
        self.curve.x().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest panel error estimate relative to the panel integral.
    pub fn quadrature_error(&self) -> f64 {
        self.quadrature_error
    }

    pub fn ell_max(&self) -> f64 {
        self.curve.x_max()
    }

    /// `R(ℓ)` for `|ℓ| ≤ ell_max`.
    pub fn eval(&self, ell: f64) -> Result<f64> {
        self.curve
            .eval(ell.abs())
            .ok_or_else(|| Error::Domain(format!("ℓ = {ell} outside grid span ±{}", self.ell_max())))
    }

    /// `(R, dR/dℓ)` of the interpolant.
    pub fn eval_with_slope(&self, ell: f64) -> Result<(f64, f64)> {
        let (r, s) = self
            .curve
            .eval_with_derivative(ell.abs())
            .ok_or_else(|| Error::Domain(format!("ℓ = {ell} outside grid span ±{}", self.ell_max())))?;
        Ok((r, if ell < 0.0 { -s } else { s }))
    }

    /// The `ℓ ≥ 0` at which the interpolated profile equals `r`.
    pub fn ell_at(&self, r: f64) -> Result<f64> {
        let ys = self.curve.y();
        let (top, bottom) = (ys[0], ys[ys.len() - 1]);
        if !(r <= top && r >= bottom) {
            return domain(format!("amplitude {r} outside sampled range [{bottom}, {top}]"));
        }
        if r == top {
            return Ok(0.0);
        }
        // First node whose amplitude is at or below r.
        let k = ys.partition_point(|&y| y > r);
        let xs = self.curve.x();
        let (lo, hi) = (xs[k - 1], xs[k]);
        newton_bisect(
            |t| {
                let (v, d) = self.curve.eval_with_derivative(t).expect("inside span");
                (v - r, d)
            },
            lo,
            hi,
            1e-16 * hi.max(self.params.lambda_r),
            200,
        )
    }

    /// Copy with every amplitude multiplied by `factor`; `R_M` and `c₁` follow.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return domain(format!("scale factor must be positive, got {factor}"));
        }
        let params = self.params.with_r_max(self.params.r_max * factor)?;
        let y = self.curve.y().iter().map(|v| v * factor).collect();
        let s = self.curve.slopes().iter().map(|v| v * factor).collect();
        Ok(Self {
            params,
            r_floor: self.r_floor,
            curve: MonotoneCubic::with_slopes(self.curve.x().to_vec(), y, s)?,
            quadrature_error: self.quadrature_error,
        })
    }
}

/// Amplitude minimum reached at the turning point and its distance from the peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileExtremes {
    /// `R_m/R_M = 1/√(1 + 1/(2f))`.
    pub r_m_ratio: f64,
    /// `ℓ` where the numerical profile reaches `R_m`.
    pub ell_m: f64,
    /// The same distance from the quadratic small-ℓ profile; kept for comparison.
    pub ell_m_quadratic_estimate: f64,
}

pub fn profile_extremes(params: &ProfileParams) -> Result<ProfileExtremes> {
    let ratio = 1.0 / (1.0 + 0.5 / params.f).sqrt();
    let grid = integrate_profile(params, DEFAULT_R_FLOOR.min(0.5 * ratio), DEFAULT_GRID_POINTS)?;
    let ell_m = grid.ell_at(ratio * params.r_max)?;
    let quadratic = params.lambda_r * (2.0 * (1.0 - ratio) / params.peak_curvature()).sqrt();
    Ok(ProfileExtremes {
        r_m_ratio: ratio,
        ell_m,
        ell_m_quadratic_estimate: quadratic,
    })
}

/// Result of normalizing `∫ R² dℓ = 1` over the grid's even domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    /// Peak amplitude that normalizes the profile.
    pub r_max: f64,
    /// `∫ R² dℓ` of the input grid over `[−ℓ_max, ℓ_max]`.
    pub integral: f64,
    /// Upper bound on the neglected tail, relative to `integral`.
    pub tail_estimate: f64,
    /// Rescaled copy of the input grid; the input is left untouched.
    pub grid: ProfileGrid,
}

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-4;

pub fn normalize_profile(grid: &ProfileGrid) -> Result<Normalization> {
    normalize_profile_with(grid, DEFAULT_TAIL_TOLERANCE)
}

pub fn normalize_profile_with(grid: &ProfileGrid, tail_tolerance: f64) -> Result<Normalization> {
    let p = &grid.params;
    let integral = 2.0 * grid.curve.integral_of_square();
    // Below R_f, g ≥ f R_M²(1 − r_f²)/R², so |dℓ/dR| ≤ λ_r R/(f R_M² √(1 − r_f²)) and
    // each side's tail ∫R² dℓ is at most λ_r R_M² r_f⁴ / (4 f √(1 − r_f²)).
    let rf = grid.r()[grid.len() - 1] / p.r_max;
    let tail = p.lambda_r * p.r_max * p.r_max * rf.powi(4) / (2.0 * p.f * (1.0 - rf * rf).sqrt());
    let tail_estimate = tail / integral;
    if tail_estimate > tail_tolerance {
        return Err(Error::TailTruncation {
            estimate: tail_estimate,
            tolerance: tail_tolerance,
        });
    }
    let factor = 1.0 / integral.sqrt();
    Ok(Normalization {
        r_max: p.r_max * factor,
        integral,
        tail_estimate,
        grid: grid.rescaled(factor)?,
    })
}
