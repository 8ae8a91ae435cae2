//! Safeguarded Newton iteration on a sign-changing bracket.

use crate::error::{domain, Error, Result};

/// Finds a root of `f` in `[lo, hi]`, where `f` returns `(value, derivative)`.
///
/// A Newton step is taken whenever it stays inside the current bracket and
/// shrinks the residual fast enough; otherwise the bracket is bisected. The
/// iteration stops once the bracket width, or the last step, falls below
/// `x_tol`.
pub fn newton_bisect<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let (f_lo, _) = f(lo);
    let (f_hi, _) = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return domain(format!("no sign change on [{lo}, {hi}]"));
    }
    let rising = f_hi > 0.0;

    let mut x = 0.5 * (lo + hi);
    let mut last_residual = f64::INFINITY;
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx > 0.0) == rising {
            hi = x;
        } else {
            lo = x;
        }

        let newton = x - fx / dfx;
        let use_newton =
            dfx != 0.0 && newton.is_finite() && newton > lo && newton < hi && fx.abs() < 0.5 * last_residual;
        let next = if use_newton { newton } else { 0.5 * (lo + hi) };
        last_residual = fx.abs();

        if (next - x).abs() <= x_tol || hi - lo <= x_tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::RootNotConverged {
        iterations: max_iter,
        residual: f(x).0.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = newton_bisect(|x| (x * x - 2.0, 2.0 * x), 0.0, 5.0, 1e-15, 100).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn handles_flat_derivative() {
        // Newton from the midpoint would run far outside; bisection must take over.
        let r = newton_bisect(|x| (x.powi(3), 3.0 * x * x), -1.0, 2.0, 1e-12, 500).unwrap();
        assert!(r.abs() < 1e-4);
    }

    #[test]
    fn decreasing_function() {
        let r = newton_bisect(|x| (1.0 - x.exp(), -x.exp()), -3.0, 3.0, 1e-14, 100).unwrap();
        assert!(r.abs() < 1e-14);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        assert!(newton_bisect(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, 1e-12, 50).is_err());
    }
}
