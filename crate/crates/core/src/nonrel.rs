//! Non-relativistic Bohm solutions and the checks that rule out the naive
//! relativistic alternatives.
//!
//! A free stationary solution with constant `p` needs `∇²R/R` constant, so
//! `R(ℓ)` with `ℓ = x − vt` is either a cosine (bounded, `V_Q > 0`) or a
//! sum of real exponentials (divergent, `V_Q < 0`).

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::field::quantum_potential;
use crate::kinematics::{lorentz_gamma, PhysicalParams};
use crate::profile::{profile_derivatives, ProfileParams, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonRelKind {
    Cosine,
    Exponential,
}

/// Stationary free-particle profile travelling at speed `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonRelProfile {
    pub kind: NonRelKind,
    /// `k = 2m|V_Q|/ħ²`.
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub v: f64,
    pub m: f64,
    pub hbar: f64,
    /// Set for exponential profiles, which grow without bound.
    pub divergent: bool,
}

pub fn nonrel_profile(kind: NonRelKind, k: f64, a: f64, b: f64, v: f64, m: f64) -> Result<NonRelProfile> {
    NonRelProfile::new(kind, k, a, b, v, m, 1.0)
}

impl NonRelProfile {
    pub fn new(kind: NonRelKind, k: f64, a: f64, b: f64, v: f64, m: f64, hbar: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return domain(format!("scale k must be positive, got {k}"));
        }
        if !(m > 0.0) || !(hbar > 0.0) {
            return domain("mass and ħ must be positive");
        }
        if [a, b, v].iter().any(|x| !x.is_finite()) {
            return domain("amplitudes and speed must be finite");
        }
        Ok(Self {
            kind,
            k,
            a,
            b,
            v,
            m,
            hbar,
            divergent: kind == NonRelKind::Exponential,
        })
    }

    pub fn wavenumber(&self) -> f64 {
        self.k.sqrt()
    }

    /// `V_Q = ±ħ²k/(2m)`: positive for the cosine, negative for exponentials.
    pub fn v_q(&self) -> f64 {
        let mag = self.hbar * self.hbar * self.k / (2.0 * self.m);
        match self.kind {
            NonRelKind::Cosine => mag,
            NonRelKind::Exponential => -mag,
        }
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let ell = x - self.v * t;
        let s = self.wavenumber() * ell;
        match self.kind {
            NonRelKind::Cosine => (self.a * s.cos()).abs(),
            NonRelKind::Exponential => self.a * s.exp() + self.b * (-s).exp(),
        }
    }

    /// Point past which `|R|` grows monotonically in both directions,
    /// when `A` and `B` are both positive.
    pub fn divergence_onset(&self) -> Option<f64> {
        match self.kind {
            NonRelKind::Exponential if self.a > 0.0 && self.b > 0.0 => {
                Some((self.b / self.a).ln() / (2.0 * self.wavenumber()))
            }
            _ => None,
        }
    }

    /// Distance from `ℓ` to the nearest zero of the cosine, or `∞`.
    fn zero_distance(&self, ell: f64) -> f64 {
        match self.kind {
            NonRelKind::Cosine => {
                let kq = self.wavenumber();
                let period = std::f64::consts::PI / kq;
                let shifted = ell - 0.5 * period;
                let frac = shifted.rem_euclid(period);
                frac.min(period - frac)
            }
            NonRelKind::Exponential => f64::INFINITY,
        }
    }
}

/// Residual bound, in units of `max(1, |V_Q|)`.
pub const NONREL_TOLERANCE: f64 = 1e-5;

/// Finite-difference checks of the Bohm equations for `S = p x − E t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonRelResiduals {
    pub n_points: usize,
    /// Sample points dropped for lying within `0.1/√k` of a cosine zero.
    pub excluded: usize,
    pub v_q_expected: f64,
    pub v_q_mean: f64,
    pub v_q_stddev: f64,
    pub v_q_max_deviation: f64,
    /// `max |∂S/∂t + (∇S)²/2m + V_Q|`.
    pub hj_max: f64,
    /// Signed mean of the same residual.
    pub hj_mean: f64,
    /// `max |∂R²/∂t + ∇·(R² ∇S/m)|`.
    pub continuity_max: f64,
    pub certified: bool,
}

const SAMPLE_TIMES: [f64; 3] = [0.0, 0.5, 1.3];
const SAMPLES_PER_TIME: usize = 301;

/// Samples `1.5` wavelengths either side of the peak at three instants.
pub fn nonrel_split_residuals(profile: &NonRelProfile, p: f64, energy: f64) -> Result<NonRelResiduals> {
    if !p.is_finite() || !energy.is_finite() {
        return domain("momentum and energy must be finite");
    }
    let kq = profile.wavenumber();
    let h = 1e-4 / kq;
    let half_width = 1.5 * std::f64::consts::PI / kq;
    let exclusion = 0.1 / kq;
    let (m, hbar) = (profile.m, profile.hbar);
    let action = |x: f64, t: f64| p * x - energy * t;
    // Equal ℓ-steps in x and t keep the two transport terms' truncation errors aligned.
    let ht = if profile.v != 0.0 { h / profile.v.abs() } else { h };

    let mut v_qs = Vec::new();
    let mut hj = Vec::new();
    let mut continuity_max = 0.0f64;
    let mut excluded = 0;
    for &t in &SAMPLE_TIMES {
        for i in 0..SAMPLES_PER_TIME {
            let x = profile.v * t - half_width + 2.0 * half_width * i as f64 / (SAMPLES_PER_TIME - 1) as f64;
            if profile.zero_distance(x - profile.v * t) <= exclusion {
                excluded += 1;
                continue;
            }
            let r = profile.eval(x, t);
            let lap = (profile.eval(x + h, t) - 2.0 * r + profile.eval(x - h, t)) / (h * h);
            let v_q = -hbar * hbar / (2.0 * m) * lap / r;

            let s_t = (action(x, t + h) - action(x, t - h)) / (2.0 * h);
            let s_x = (action(x + h, t) - action(x - h, t)) / (2.0 * h);
            hj.push(s_t + s_x * s_x / (2.0 * m) + v_q);

            let rho = |x: f64, t: f64| profile.eval(x, t).powi(2);
            // ∇S = p exactly; differencing S here as well would compound rounding as ε/h².
            let flux = |x: f64| rho(x, t) * p / m;
            let d_rho = (rho(x, t + ht) - rho(x, t - ht)) / (2.0 * ht);
            let d_flux = (flux(x + h) - flux(x - h)) / (2.0 * h);
            continuity_max = continuity_max.max((d_rho + d_flux).abs());
            v_qs.push(v_q);
        }
    }
    let n = v_qs.len();
    if n == 0 {
        return domain("every sample point was excluded");
    }
    let expected = profile.v_q();
    let mean = v_qs.iter().sum::<f64>() / n as f64;
    let var = v_qs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    let max_dev = v_qs.iter().map(|v| (v - expected).abs()).fold(0.0, f64::max);
    let hj_max = hj.iter().map(|r| r.abs()).fold(0.0, f64::max);
    let hj_mean = hj.iter().sum::<f64>() / n as f64;
    let stddev = var.sqrt();
    Ok(NonRelResiduals {
        n_points: n,
        excluded,
        v_q_expected: expected,
        v_q_mean: mean,
        v_q_stddev: stddev,
        v_q_max_deviation: max_dev,
        hj_max,
        hj_mean,
        continuity_max,
        certified: [stddev, max_dev, hj_max, continuity_max]
            .iter()
            .all(|&r| r < NONREL_TOLERANCE * expected.abs().max(1.0)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitVerdict {
    #[serde(rename = "expansion valid")]
    ExpansionValid,
    #[serde(rename = "expansion invalid")]
    ExpansionInvalid,
}

/// Largest correction `|λ_r² R̈/R|` for which the square root may be expanded.
pub const EXPANSION_THRESHOLD: f64 = 0.1;

/// Whether `H = mγ_o c² √(1 − λ_r² R̈/R)` may be expanded to first order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    /// `|λ_r² R̈/R|` at the origin, `f(f+2)`.
    pub correction: f64,
    pub verdict: LimitVerdict,
    /// `V_QM/(mγ_o c²) = f + ½`.
    pub v_qm_ratio: f64,
    /// `H` at the origin, exact.
    pub h_exact: f64,
    /// `H` at the origin with the square root expanded to first order.
    pub h_linearized: f64,
    /// `mc² + ½mv_o² − (ħ²/2m) R̈/R`, the Schrödinger-Bohm form.
    pub h_schrodinger_form: f64,
    pub linearization_error: f64,
}

pub fn nonrel_limit_check(params: &ProfileParams, phys: &PhysicalParams) -> Result<LimitReport> {
    let r_m = params.r_max();
    let lam = params.lambda_r();
    let (_, rddot) = profile_derivatives(r_m, Side::Positive, params)?;
    let curvature = rddot / r_m;
    let correction = (lam * lam * curvature).abs();
    let verdict = if correction < EXPANSION_THRESHOLD {
        LimitVerdict::ExpansionValid
    } else {
        LimitVerdict::ExpansionInvalid
    };

    let scale = phys.energy_scale();
    let r_min = r_m / (1.0 + 0.5 / params.f()).sqrt();
    let v_qm_ratio = quantum_potential(r_min, params, phys)? / scale;

    let h_exact = scale * (1.0 - lam * lam * curvature).sqrt();
    let h_linearized = scale * (1.0 - 0.5 * lam * lam * curvature);
    let (m, c, hbar) = (phys.m(), phys.c(), phys.hbar());
    let h_schrodinger_form = m * c * c + 0.5 * m * phys.v_o() * phys.v_o() - hbar * hbar / (2.0 * m) * curvature;
    Ok(LimitReport {
        correction,
        verdict,
        v_qm_ratio,
        h_exact,
        h_linearized,
        h_schrodinger_form,
        linearization_error: ((h_linearized - h_exact) / h_exact).abs(),
    })
}

/// Zero-product check `v Ṙ (mγc² − H) = 0` for constant `H` and `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantHCheck {
    pub v: f64,
    pub rdot: f64,
    pub rest_energy: f64,
    /// The only `H` that satisfies the equation.
    pub forced_h: f64,
    pub unique: bool,
    /// `H − mγc²`, the quantum potential it leaves.
    pub v_q: f64,
}

pub fn constant_h_check(v: f64, rdot: f64, phys: &PhysicalParams) -> Result<ConstantHCheck> {
    let gamma = lorentz_gamma(v, phys.c())?;
    let rest = phys.m() * gamma * phys.c() * phys.c();
    // Linear in H with slope −vṘ; a nonzero slope pins a single root.
    let residual = |h: f64| v * rdot * (rest - h);
    let slope = residual(1.0) - residual(0.0);
    let unique = slope != 0.0;
    let forced_h = if unique { -residual(0.0) / slope } else { f64::NAN };
    Ok(ConstantHCheck {
        v,
        rdot,
        rest_energy: rest,
        forced_h,
        unique,
        v_q: forced_h - rest,
    })
}

/// The four addends of the variable-`H`, variable-`p` consistency condition
/// at one mass, evaluated on the test profile `R = cos(kℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoGoTerms {
    pub m: f64,
    pub terms: [f64; 3],
    /// `2γ³`, the only addend free of `ħ` and `m`.
    pub last: f64,
    pub hbar_sum: f64,
    pub total: f64,
}

/// Kinematic state at which the no-go condition is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoGoPoint {
    pub ell: f64,
    pub k: f64,
    pub v: f64,
    pub v_dot: f64,
    pub v_ddot: f64,
}

impl Default for NoGoPoint {
    fn default() -> Self {
        Self {
            ell: 0.3,
            k: 1.0,
            v: 0.6,
            v_dot: 0.5,
            v_ddot: 0.1,
        }
    }
}

pub fn nogo_terms(m: f64, hbar: f64, c: f64, pt: &NoGoPoint) -> Result<NoGoTerms> {
    if !(m > 0.0) {
        return domain(format!("mass must be positive, got {m}"));
    }
    if pt.v == 0.0 || pt.v_dot == 0.0 {
        return domain("the condition needs v ≠ 0 and v' ≠ 0");
    }
    let gamma = lorentz_gamma(pt.v, c)?;
    let (s, co) = (pt.k * pt.ell).sin_cos();
    if co == 0.0 {
        return domain("test point sits on a zero of the test profile");
    }
    let k = pt.k;
    let r1 = -k * s / co;
    let r2 = -k * k;
    let r3 = k * k * k * s / co;
    let h2 = hbar * hbar;
    let e = m * gamma * c * c;

    // H from the real part; H − mγc² formed without cancellation.
    let rad = -h2 * c * c / (gamma * gamma) * r2 - h2 * pt.v_dot * r1;
    let root = (e * e + rad).sqrt();
    let excess = rad / (root + e);

    let t1 = (excess - h2 * pt.v_ddot / (4.0 * m * gamma * c * c * pt.v)) * 4.0 * r1 / (m * pt.v_dot);
    let t2 = 3.0 * h2 / (m * m * gamma * c * c) * (r1 * r1 + r2);
    let t3 = h2 / (m * m * gamma.powi(3) * pt.v_dot) * (3.0 * r2 * r1 + r3);
    let last = 2.0 * gamma.powi(3);
    let hbar_sum = t1 + t2 + t3;
    Ok(NoGoTerms {
        m,
        terms: [t1, t2, t3],
        last,
        hbar_sum,
        total: hbar_sum + last,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoGoReport {
    pub constant_h: ConstantHCheck,
    pub point: NoGoPoint,
    pub per_mass: Vec<NoGoTerms>,
    /// `d ln|Σ ħ-terms| / d ln m` between consecutive masses.
    pub log_slopes: Vec<f64>,
    pub last_term_spread: f64,
    /// No sign change of the full condition on the mass list.
    pub no_root: bool,
    pub confirmed: bool,
}

pub const NOGO_SLOPE_TOLERANCE: f64 = 0.05;

pub fn nogo_checks(masses: &[f64]) -> Result<NoGoReport> {
    nogo_checks_at(masses, &NoGoPoint::default())
}

pub fn nogo_checks_at(masses: &[f64], point: &NoGoPoint) -> Result<NoGoReport> {
    if masses.len() < 3 {
        return domain(format!("need at least three masses, got {}", masses.len()));
    }
    if masses.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("masses must be strictly increasing");
    }
    let (hbar, c) = (1.0, 1.0);
    let constant_h = constant_h_check(0.5, 1.0, &PhysicalParams::natural(0.5, 0.0)?)?;
    let per_mass = masses
        .iter()
        .map(|&m| nogo_terms(m, hbar, c, point))
        .collect::<Result<Vec<_>>>()?;
    let log_slopes: Vec<f64> = per_mass
        .windows(2)
        .map(|w| (w[1].hbar_sum.abs() / w[0].hbar_sum.abs()).ln() / (w[1].m / w[0].m).ln())
        .collect();
    let lasts = per_mass.iter().map(|t| t.last);
    let last_term_spread = lasts.clone().fold(f64::MIN, f64::max) - lasts.fold(f64::MAX, f64::min);
    let sign = per_mass[0].total.signum();
    let no_root = per_mass.iter().all(|t| t.total.signum() == sign && t.total != 0.0);
    let scaling = log_slopes.iter().all(|s| (s + 2.0).abs() <= NOGO_SLOPE_TOLERANCE);
    Ok(NoGoReport {
        confirmed: constant_h.unique && constant_h.v_q == 0.0 && no_root && scaling && last_term_spread <= 1e-12,
        constant_h,
        point: *point,
        per_mass,
        log_slopes,
        last_term_spread,
        no_root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosine() -> NonRelProfile {
        nonrel_profile(NonRelKind::Cosine, 1.0, 1.0, 0.0, 0.6, 1.0).unwrap()
    }

    #[test]
    fn profile_examples() {
        let p = cosine();
        assert_eq!(p.eval(0.6 * 2.0, 2.0), 1.0);
        assert_eq!(p.v_q(), 0.5);
        assert!(!p.divergent);
        let e = nonrel_profile(NonRelKind::Exponential, 1.0, 1.0, 1.0, 0.6, 1.0).unwrap();
        assert!(e.divergent);
        assert_eq!(e.v_q(), -0.5);
        assert!(nonrel_profile(NonRelKind::Cosine, 0.0, 1.0, 0.0, 0.6, 1.0).is_err());
        assert!(nonrel_profile(NonRelKind::Cosine, -1.0, 1.0, 0.0, 0.6, 1.0).is_err());
    }

    #[test]
    fn exponential_grows_past_onset() {
        let e = nonrel_profile(NonRelKind::Exponential, 4.0, 1.0, 3.0, 0.0, 1.0).unwrap();
        let onset = e.divergence_onset().unwrap();
        assert!((onset - 3f64.ln() / 4.0).abs() < 1e-15);
        let mut prev = e.eval(onset, 0.0);
        for i in 1..200 {
            let v = e.eval(onset + 0.05 * i as f64, 0.0);
            assert!(v > prev);
            prev = v;
        }
        assert!(e.eval(onset + 20.0, 0.0) > 1e15);
        assert!(e.eval(onset - 20.0, 0.0) > 1e15);
    }

    #[test]
    fn cosine_residuals() {
        let p = cosine();
        let mom = 0.6;
        let e = mom * mom / 2.0 + 0.5;
        let r = nonrel_split_residuals(&p, mom, e).unwrap();
        assert!(r.certified, "{r:?}");
        assert!(r.v_q_max_deviation < 1e-5);
        assert!(r.hj_max < 1e-6);
        assert!(r.continuity_max < 1e-8, "{}", r.continuity_max);
        assert!(r.excluded > 0);
        assert_eq!(r.n_points + r.excluded, 3 * 301);
    }

    #[test]
    fn energy_offset_shows_in_hj() {
        let p = cosine();
        let e = 0.18 + 0.5 + 0.1;
        let r = nonrel_split_residuals(&p, 0.6, e).unwrap();
        assert!((r.hj_mean + 0.1).abs() < 1e-6);
        assert!((r.hj_max - 0.1).abs() < 1e-6);
        assert!(!r.certified);
    }

    #[test]
    fn exponential_residuals_are_consistent() {
        let p = nonrel_profile(NonRelKind::Exponential, 2.0, 1.0, 0.5, 0.3, 1.0).unwrap();
        let r = nonrel_split_residuals(&p, 0.3, 0.045 - 1.0).unwrap();
        assert_eq!(r.excluded, 0);
        assert!((r.v_q_mean + 1.0).abs() < 1e-5);
    }

    #[test]
    fn limit_examples() {
        let phys = PhysicalParams::natural(1e-9, 0.0).unwrap();
        let p = ProfileParams::new(0.839, 1.0, 1.0).unwrap();
        let rep = nonrel_limit_check(&p, &phys).unwrap();
        assert!((rep.correction - 0.839 * 2.839).abs() < 1e-12);
        assert_eq!(rep.verdict, LimitVerdict::ExpansionInvalid);
        assert!((rep.v_qm_ratio - 1.339).abs() < 1e-12);
        assert!((rep.h_exact - 1.839).abs() < 1e-12);
        assert!((rep.h_linearized - (1.0 + 0.5 * 0.839 * 2.839)).abs() < 1e-12);
        assert!((rep.h_schrodinger_form - rep.h_linearized).abs() < 1e-12);

        let tiny = ProfileParams::new(0.01, 1.0, 1.0).unwrap();
        let r2 = nonrel_limit_check(&tiny, &phys).unwrap();
        assert!((r2.correction - 0.0201).abs() < 1e-12);
        assert_eq!(r2.verdict, LimitVerdict::ExpansionValid);
    }

    #[test]
    fn peak_potential_ignores_hbar() {
        let base = PhysicalParams::natural(0.4, 0.2).unwrap();
        let mut ratios = Vec::new();
        for hbar in [1.0, 1e-3, 7.5] {
            let phys = base.with_hbar(hbar).unwrap();
            let p = ProfileParams::for_particle(0.839, 1.0, &phys).unwrap();
            ratios.push(nonrel_limit_check(&p, &phys).unwrap().v_qm_ratio);
        }
        for r in &ratios {
            assert!((r - 1.339).abs() < 1e-12);
        }
    }

    #[test]
    fn verdict_serializes_as_phrase() {
        let s = serde_json::to_string(&LimitVerdict::ExpansionInvalid).unwrap();
        assert_eq!(s, "\"expansion invalid\"");
    }

    #[test]
    fn constant_h_is_forced() {
        let phys = PhysicalParams::natural(0.5, 0.0).unwrap();
        let chk = constant_h_check(0.5, 1.0, &phys).unwrap();
        assert!(chk.unique);
        assert!((chk.forced_h - 1.0 / 0.75f64.sqrt()).abs() < 1e-15);
        assert_eq!(chk.v_q, 0.0);
    }

    #[test]
    fn nogo_examples() {
        let rep = nogo_checks(&[1.0, 10.0, 100.0]).unwrap();
        for t in &rep.per_mass {
            assert!((t.last - 3.90625).abs() < 1e-12);
        }
        for s in &rep.log_slopes {
            assert!((s + 2.0).abs() < NOGO_SLOPE_TOLERANCE, "{s}");
        }
        let ratio = rep.per_mass[2].hbar_sum / rep.per_mass[1].hbar_sum;
        assert!((ratio - 1e-2).abs() < 1e-4);
        assert!(rep.no_root && rep.confirmed);
        assert!(nogo_checks(&[1.0, 10.0]).is_err());
        assert!(nogo_checks(&[1.0, 10.0, 5.0]).is_err());
    }
}
