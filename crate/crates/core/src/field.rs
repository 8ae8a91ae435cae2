//! Quantum potential, Hamiltonian wave and the Klein–Gordon split check.
//!
//! With `ψ = R e^{iS/ħ}`, `∇S = p_o` and `−∂S/∂t = H`, the real part of
//! the Klein–Gordon equation gives `H = mγ_o c² √β` with
//! `β = 1 − λ_r² R̈/R`, and the imaginary part has the first integral
//! `1 + c₁/R² = √β`. Hence `H = mγ_o c² (1 + c₁/R²)` and
//! `V_Q = mγ_o c² f R_M²/R²`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::fd::fornberg_weights;
use crate::kinematics::PhysicalParams;
use crate::profile::{profile_derivatives, ProfileGrid, ProfileParams, Side};

fn check_amplitude(r: f64, params: &ProfileParams) -> Result<()> {
    if !(r > 0.0) || r > params.r_max() {
        return domain(format!("amplitude {r} outside (0, R_M = {}]", params.r_max()));
    }
    Ok(())
}

/// `V_Q = mγ_o c² f R_M²/R²`.
pub fn quantum_potential(r: f64, params: &ProfileParams, phys: &PhysicalParams) -> Result<f64> {
    check_amplitude(r, params)?;
    let ratio = params.r_max() / r;
    Ok(phys.energy_scale() * params.f() * ratio * ratio)
}

/// `H = mγ_o c² + V_Q`.
pub fn hamiltonian(r: f64, params: &ProfileParams, phys: &PhysicalParams) -> Result<f64> {
    Ok(phys.energy_scale() + quantum_potential(r, params, phys)?)
}

/// `β = 1 − λ_r² R̈/R` from the closed-form curvature.
pub fn beta(r: f64, params: &ProfileParams) -> Result<f64> {
    let (_, rddot) = profile_derivatives(r, Side::Positive, params)?;
    let lam = params.lambda_r();
    Ok(1.0 - lam * lam * rddot / r)
}

/// `H = mγ_o c² √β`, the real-part form of the Hamiltonian.
pub fn hamiltonian_from_curvature(r: f64, params: &ProfileParams, phys: &PhysicalParams) -> Result<f64> {
    Ok(phys.energy_scale() * beta(r, params)?.sqrt())
}

/// Harmonic approximation of `V_Q` around the origin, valid for small `|ℓ|` only.
pub fn harmonic_potential(ell: f64, params: &ProfileParams, phys: &PhysicalParams) -> f64 {
    let s = ell / params.lambda_r();
    phys.energy_scale() * params.f() * (1.0 + params.peak_curvature() * s * s)
}

/// Phase gradients of `S`: `∂S/∂x = p_o` and `−∂S/∂t = H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseRates {
    pub momentum: f64,
    pub energy: f64,
}

/// Co-located field values at one `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub ell: f64,
    pub r: f64,
    pub rdot: f64,
    pub rddot: f64,
    pub beta: f64,
    pub v_q: f64,
    pub h: f64,
    pub phase: PhaseRates,
}

pub fn field_sample(ell: f64, grid: &ProfileGrid, phys: &PhysicalParams) -> Result<FieldSample> {
    let params = grid.params();
    let r = grid.eval(ell)?.min(params.r_max());
    let (rdot, rddot) = profile_derivatives(r, Side::of(ell), params)?;
    let lam = params.lambda_r();
    let h = hamiltonian(r, params, phys)?;
    Ok(FieldSample {
        ell,
        r,
        rdot,
        rddot,
        beta: 1.0 - lam * lam * rddot / r,
        v_q: quantum_potential(r, params, phys)?,
        h,
        phase: PhaseRates {
            momentum: phys.momentum(),
            energy: h,
        },
    })
}

/// Energy bookkeeping of a free particle whose intrinsic motion starts at
/// the potential minimum with speed `v_i0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBudget {
    /// Purely quantum energy `V_Q + ½mγ_o v_i²`, conserved in `τ`.
    pub e_q: f64,
    /// Non-quantum energy `mγ_o c² + V`, here `V = 0`.
    pub e_nq: f64,
    pub v_q_min: f64,
    /// Largest potential reached on the orbit, at the turning points.
    pub v_q_max: f64,
    pub h_min: f64,
    pub h_max: f64,
    /// `E_NQ + E_Q`.
    pub e_full: f64,
}

pub fn energy_budget(params: &ProfileParams, phys: &PhysicalParams, v_i0: f64) -> Result<EnergyBudget> {
    if !(v_i0 > 0.0) || v_i0 > phys.c() {
        return domain(format!("launch speed must satisfy 0 < v_i0 ≤ c, got {v_i0}"));
    }
    let scale = phys.energy_scale();
    let v_q_min = scale * params.f();
    let kinetic = 0.5 * phys.m() * phys.gamma_o() * v_i0 * v_i0;
    let e_q = v_q_min + kinetic;
    Ok(EnergyBudget {
        e_q,
        e_nq: scale,
        v_q_min,
        v_q_max: e_q,
        h_min: scale + v_q_min,
        h_max: scale + e_q,
        e_full: scale + e_q,
    })
}

/// Certification threshold on every normalized residual.
pub const CERTIFY_THRESHOLD: f64 = 1e-6;

/// Per-sample residuals of [`kg_split_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitResidual {
    pub ell: f64,
    pub first_integral: f64,
    pub ode: f64,
}

/// Outcome of checking a sampled profile against the split Klein–Gordon
/// equations.
///
/// Derivatives are taken from the samples alone, so the check is
/// independent of the closed forms used to build the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KgSplitReport {
    pub n_samples: usize,
    /// `|(1 + c₁/R²) − √β| / (1 + c₁/R²)`.
    pub max_residual_a: f64,
    pub mean_residual_a: f64,
    /// `|Ṙ/R − ¼ β̇/(√β − β)| · λ_r / (1 + λ_r |Ṙ/R|)`.
    pub max_residual_b: f64,
    pub mean_residual_b: f64,
    /// `|ħ Im(∇ψ/ψ) − p_o| / p_o`.
    pub max_guidance_residual: f64,
    pub certified: bool,
    #[serde(skip)]
    pub samples: Vec<SplitResidual>,
}

const STENCIL_HALF_WIDTH: i64 = 4;

fn finite_or_max(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        f64::MAX
    }
}

/// Checks every interior sample of `grid` against the first integral
/// `1 + c₁/R² = √β` and its differential form `Ṙ/R = ¼ β̇/(√β − β)`.
///
/// Samples are treated as a smooth curve `(ℓ(σ), R(σ))` of their index,
/// extended to negative `σ` by evenness, and differentiated with a 9-point
/// stencil of stride `⌊(n−1)/400⌋`; the last four strides are not reported.
pub fn kg_split_residual(grid: &ProfileGrid, phys: &PhysicalParams) -> KgSplitReport {
    let params = grid.params();
    let (ells, rs) = (grid.ell(), grid.r());
    let n = ells.len() as i64;
    let lam = params.lambda_r();
    let c1 = params.c1();
    let stride = ((n - 1) / 400).max(1);
    let offsets: Vec<f64> = (-STENCIL_HALF_WIDTH..=STENCIL_HALF_WIDTH).map(|q| q as f64).collect();
    let w = fornberg_weights(0.0, &offsets, 3);

    let at = |j: i64| -> (f64, f64) {
        if j < 0 {
            (-ells[(-j) as usize], rs[(-j) as usize])
        } else {
            (ells[j as usize], rs[j as usize])
        }
    };

    let last = n - 1 - STENCIL_HALF_WIDTH * stride;
    let mut samples = Vec::new();
    for k in 0..=last.max(-1) {
        let mut dl = [0.0; 4];
        let mut dr = [0.0; 4];
        for (i, q) in (-STENCIL_HALF_WIDTH..=STENCIL_HALF_WIDTH).enumerate() {
            let (l, r) = at(k + q * stride);
            for d in 1..=3 {
                dl[d] += w[d][i] * l;
                dr[d] += w[d][i] * r;
            }
        }
        let (l1, l2, l3) = (dl[1], dl[2], dl[3]);
        let (r1, r2, r3) = (dr[1], dr[2], dr[3]);
        let r = rs[k as usize];

        // Chain rule from the index parameter to ℓ.
        let rdot = r1 / l1;
        let num = r2 * l1 - r1 * l2;
        let rddot = num / l1.powi(3);
        let num_prime = r3 * l1 - r1 * l3;
        let rdddot = (num_prime * l1 - 3.0 * num * l2) / l1.powi(5);

        let beta = 1.0 - lam * lam * rddot / r;
        let beta_dot = -lam * lam * (rdddot / r - rddot * rdot / (r * r));
        let sqrt_beta = beta.max(0.0).sqrt();
        let lhs = 1.0 + c1 / (r * r);

        let first_integral = finite_or_max((lhs - sqrt_beta).abs() / lhs);
        let log_slope = rdot / r;
        let ode = finite_or_max(
            (log_slope - 0.25 * beta_dot / (sqrt_beta - beta)).abs() * lam / (1.0 + lam * log_slope.abs()),
        );
        samples.push(SplitResidual {
            ell: ells[k as usize],
            first_integral,
            ode,
        });
    }

    let max_guidance_residual = guidance_residual(grid, phys);
    let count = samples.len();
    let stat = |pick: fn(&SplitResidual) -> f64| -> (f64, f64) {
        if count == 0 {
            return (f64::MAX, f64::MAX);
        }
        let max = samples.iter().map(pick).fold(0.0, f64::max);
        let mean = samples.iter().map(pick).sum::<f64>() / count as f64;
        (max, mean)
    };
    let (max_a, mean_a) = stat(|s| s.first_integral);
    let (max_b, mean_b) = stat(|s| s.ode);

    KgSplitReport {
        n_samples: count,
        max_residual_a: max_a,
        mean_residual_a: mean_a,
        max_residual_b: max_b,
        mean_residual_b: mean_b,
        max_guidance_residual,
        certified: count > 0
            && max_a < CERTIFY_THRESHOLD
            && max_b < CERTIFY_THRESHOLD
            && max_guidance_residual < CERTIFY_THRESHOLD,
        samples,
    }
}

/// Guidance relation `p_o = ħ Im(∇ψ/ψ)` for `ψ = R e^{i p_o x/ħ}` at `t = 0`,
/// with `∇ψ` from central differences of the interpolated profile.
fn guidance_residual(grid: &ProfileGrid, phys: &PhysicalParams) -> f64 {
    let p = phys.momentum();
    let hbar = phys.hbar();
    let params = grid.params();
    let psi = |x: f64| -> Option<Complex64> {
        let r = grid.eval(x).ok()?;
        Some(Complex64::from_polar(r, p * x / hbar))
    };
    let mut worst = 0.0f64;
    for i in 0..=64 {
        let x = grid.ell_max() * (i as f64 / 64.0);
        let Some(centre) = psi(x) else { continue };
        // Curvature grows like R_M⁴/R⁴ toward the floor; shrink the step with it.
        let ratio = centre.norm() / params.r_max();
        let h = 1e-4 * params.lambda_r() * ratio * ratio;
        let (Some(plus), Some(minus)) = (psi(x + h), psi(x - h)) else {
            continue;
        };
        let grad = (plus - minus) / (2.0 * h);
        let momentum = hbar * (grad / centre).im;
        worst = worst.max(finite_or_max((momentum - p).abs() / p));
    }
    worst
}
