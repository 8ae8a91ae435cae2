//! Finite-difference stencils.

/// Fornberg's recursion: weights `w[d][j]` such that
/// `f^{(d)}(x0) ≈ Σ_j w[d][j] f(x_j)`, for derivative orders `0..=max_order`.
pub fn fornberg_weights(x0: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut w = vec![vec![0.0; n]; max_order + 1];
    w[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = (c4 * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

/// Second-order central first derivative.
pub fn central_first<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Second-order central second derivative.
pub fn central_second<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_central_weights() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        let expect1 = [-0.5, 0.0, 0.5];
        let expect2 = [1.0, -2.0, 1.0];
        for j in 0..3 {
            assert!((w[1][j] - expect1[j]).abs() < 1e-15);
            assert!((w[2][j] - expect2[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn nine_point_stencil_differentiates_polynomials_exactly() {
        let xs: Vec<f64> = (-4..=4).map(f64::from).collect();
        let w = fornberg_weights(0.0, &xs, 3);
        // p(x) = x^3 - 2x^2 + 5x: p' (0) = 5, p''(0) = -4, p'''(0) = 6.
        let p = |x: f64| x.powi(3) - 2.0 * x * x + 5.0 * x;
        let d: Vec<f64> = (1..=3).map(|k| w[k].iter().zip(&xs).map(|(wi, &x)| wi * p(x)).sum()).collect();
        assert!((d[0] - 5.0).abs() < 1e-12);
        assert!((d[1] + 4.0).abs() < 1e-12);
        assert!((d[2] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn central_differences_on_sine() {
        let x = 0.4;
        assert!((central_first(f64::sin, x, 1e-4) - x.cos()).abs() < 1e-8);
        assert!((central_second(f64::sin, x, 1e-3) + x.sin()).abs() < 1e-6);
    }
}
