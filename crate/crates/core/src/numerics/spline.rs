//! Natural cubic spline on a uniform grid, used where a smooth functional
//! form of gridded data (and its strike derivatives) is needed.

/// Natural cubic spline interpolant.
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    second: Vec<f64>, // second derivatives at the knots
}

impl CubicSpline {
    pub fn fit(xs: &[f64], ys: &[f64]) -> Self {
        assert!(xs.len() == ys.len() && xs.len() >= 3);
        let n = xs.len();
        let mut a = vec![0.0; n];
        let mut b = vec![1.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            let hl = xs[i] - xs[i - 1];
            let hr = xs[i + 1] - xs[i];
            a[i] = hl / 6.0;
            b[i] = (hl + hr) / 3.0;
            c[i] = hr / 6.0;
            d[i] = (ys[i + 1] - ys[i]) / hr - (ys[i] - ys[i - 1]) / hl;
        }
        // Thomas algorithm; natural ends already encoded by b=1, d=0.
        let mut cp = vec![0.0; n];
        let mut dp = vec![0.0; n];
        cp[0] = c[0] / b[0];
        dp[0] = d[0] / b[0];
        for i in 1..n {
            let m = b[i] - a[i] * cp[i - 1];
            cp[i] = c[i] / m;
            dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
        }
        let mut second = vec![0.0; n];
        second[n - 1] = dp[n - 1];
        for i in (0..n - 1).rev() {
            second[i] = dp[i] - cp[i] * second[i + 1];
        }
        CubicSpline {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            second,
        }
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / 6.0
    }

    /// Second derivative (piecewise linear between knots).
    pub fn eval_d2(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.second[i] + b * self.second[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linspace;
    use approx::assert_relative_eq;

    #[test]
    fn interpolates_smooth_function() {
        let xs = linspace(0.0, 1.0, 101);
        let ys: Vec<f64> = xs.iter().map(|x| (3.0 * x).sin()).collect();
        let s = CubicSpline::fit(&xs, &ys);
        for &x in &[0.123, 0.5, 0.87] {
            assert_relative_eq!(s.eval(x), (3.0 * x).sin(), epsilon = 1e-7);
            assert_relative_eq!(s.eval_d2(x), -9.0 * (3.0 * x).sin(), epsilon = 1e-2);
        }
    }
}
