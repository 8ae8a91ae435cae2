//! Monotone piecewise-cubic Hermite interpolation on strictly increasing nodes.

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

fn check_nodes(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return domain(format!("{} abscissae but {} ordinates", x.len(), y.len()));
    }
    if x.len() < 2 {
        return domain("interpolation needs at least two nodes");
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("abscissae must be strictly increasing");
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return domain("nodes must be finite");
    }
    Ok(())
}

fn limit_slopes(x: &[f64], y: &[f64], slope: &mut [f64]) {
    // Fritsch–Carlson: keep each cubic piece monotone on its interval.
    for k in 0..x.len() - 1 {
        let secant = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        if secant == 0.0 {
            slope[k] = 0.0;
            slope[k + 1] = 0.0;
            continue;
        }
        let mut alpha = slope[k] / secant;
        let mut beta = slope[k + 1] / secant;
        if alpha < 0.0 {
            slope[k] = 0.0;
            alpha = 0.0;
        }
        if beta < 0.0 {
            slope[k + 1] = 0.0;
            beta = 0.0;
        }
        let norm = alpha.hypot(beta);
        if norm > 3.0 {
            let tau = 3.0 / norm;
            slope[k] = tau * alpha * secant;
            slope[k + 1] = tau * beta * secant;
        }
    }
}

impl MonotoneCubic {
    /// Hermite interpolant with caller-supplied node slopes, limited where
    /// they would break monotonicity.
    pub fn with_slopes(x: Vec<f64>, y: Vec<f64>, mut slope: Vec<f64>) -> Result<Self> {
        check_nodes(&x, &y)?;
        if slope.len() != x.len() || slope.iter().any(|s| !s.is_finite()) {
            return domain("one finite slope per node required");
        }
        limit_slopes(&x, &y, &mut slope);
        Ok(Self { x, y, slope })
    }

    /// Slopes estimated from the data alone (PCHIP).
    pub fn pchip(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check_nodes(&x, &y)?;
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut slope = vec![0.0; n];
        if n == 2 {
            slope[0] = d[0];
            slope[1] = d[0];
        } else {
            for k in 1..n - 1 {
                if d[k - 1] * d[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    slope[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
                }
            }
            slope[0] = end_slope(h[0], h[1], d[0], d[1]);
            slope[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        }
        limit_slopes(&x, &y, &mut slope);
        Ok(Self { x, y, slope })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slope
    }

    pub fn x_min(&self) -> f64 {
        self.x[0]
    }

    pub fn x_max(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    /// Index `k` of the interval `[x_k, x_{k+1}]` that holds `t`.
    fn segment(&self, t: f64) -> Option<usize> {
        if !(t >= self.x_min() && t <= self.x_max()) {
            return None;
        }
        let k = self.x.partition_point(|&xi| xi <= t);
        Some(k.saturating_sub(1).min(self.x.len() - 2))
    }

    fn hermite(&self, k: usize, t: f64) -> (f64, f64) {
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (y0, y1) = (self.y[k], self.y[k + 1]);
        let (m0, m1) = (self.slope[k] * h, self.slope[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1;
        let deriv = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h;
        (value, deriv)
    }

    pub fn eval(&self, t: f64) -> Option<f64> {
        self.segment(t).map(|k| self.hermite(k, t).0)
    }

    /// Value and first derivative.
    pub fn eval_with_derivative(&self, t: f64) -> Option<(f64, f64)> {
        self.segment(t).map(|k| self.hermite(k, t))
    }

    /// `∫ y(x)² dx` over the node span, exact for the piecewise cubic.
    pub fn integral_of_square(&self) -> f64 {
        // 4-point Gauss–Legendre integrates the degree-6 square exactly.
        const NODES: [f64; 4] = [
            -0.861_136_311_594_052_6,
            -0.339_981_043_584_856_3,
            0.339_981_043_584_856_3,
            0.861_136_311_594_052_6,
        ];
        const WEIGHTS: [f64; 4] = [
            0.347_854_845_137_453_9,
            0.652_145_154_862_546_1,
            0.652_145_154_862_546_1,
            0.347_854_845_137_453_9,
        ];
        (0..self.x.len() - 1)
            .map(|k| {
                let (a, b) = (self.x[k], self.x[k + 1]);
                let (c, half) = (0.5 * (a + b), 0.5 * (b - a));
                let sum: f64 = NODES
                    .iter()
                    .zip(WEIGHTS)
                    .map(|(&z, w)| {
                        let v = self.hermite(k, c + half * z).0;
                        w * v * v
                    })
                    .sum();
                sum * half
            })
            .sum()
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
