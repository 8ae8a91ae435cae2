//! Reference computations shared by the integration and acceptance tests.
//! Nothing here calls into the library's numerics.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Plain bisection on `t √(2(t+2)) = target`.
pub fn bisect_f(target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, target.max(1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * (2.0 * (mid + 2.0)).sqrt() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `R̈ = −(R/λ²) q (2 + q)`, `q = f R_M²/R²`, by classical RK4 from the peak.
pub fn rk4_profile(f: f64, lambda: f64, ell_end: f64, steps: usize) -> Vec<(f64, f64)> {
    let acc = |r: f64| {
        let q = f / (r * r);
        -r * q * (2.0 + q) / (lambda * lambda)
    };
    let h = ell_end / steps as f64;
    let (mut r, mut v) = (1.0f64, 0.0f64);
    let mut out = vec![(0.0, r)];
    for i in 0..steps {
        let (k1r, k1v) = (v, acc(r));
        let (k2r, k2v) = (v + 0.5 * h * k1v, acc(r + 0.5 * h * k1r));
        let (k3r, k3v) = (v + 0.5 * h * k2v, acc(r + 0.5 * h * k2r));
        let (k4r, k4v) = (v + h * k3v, acc(r + h * k3r));
        r += h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        out.push(((i + 1) as f64 * h, r));
    }
    out
}

/// `T = 4 ∫ dℓ / v_i` written over `R ∈ [R_m, R_M]` with
/// `R = R_m + (R_M − R_m)(1 − cos φ)/2`. The integrand becomes a smooth even
/// function of `cos φ`, so the midpoint rule converges spectrally.
pub fn period_oracle(f: f64, lambda: f64, v_i0: f64) -> f64 {
    let e_q = f + 0.5 * v_i0 * v_i0;
    let r_m = (f / e_q).sqrt();
    let span = 1.0 - r_m;
    let integrand = |phi: f64| {
        let (s, c) = (0.5 * phi).sin_cos();
        let below_peak = span * c * c;
        let above_min = span * s * s;
        let r = 1.0 - below_peak;
        let g = f * below_peak * (2.0 - below_peak) / (r * r) - 4.0 * (-below_peak).ln_1p();
        let rdot = f.sqrt() / lambda * g.sqrt();
        let v_i = (2.0 * f * above_min * (r + r_m) / (r_m * r_m * r * r)).sqrt();
        span * phi.sin() / 2.0 / (rdot * v_i)
    };
    let n = 400;
    let h = PI / n as f64;
    let sum: f64 = (0..n).map(|i| integrand((i as f64 + 0.5) * h)).sum();
    4.0 * sum * h
}
