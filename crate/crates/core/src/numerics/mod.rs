//! Shared numerical kernels: Gauss-Legendre quadrature, composite Simpson,
//! finite-difference stencils and deterministic summation.

pub mod special;
pub mod spline;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Computed once per order by Newton iteration on the Legendre recurrence and
/// cached process-wide.
pub fn gauss_legendre(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(gauss_legendre_raw(n)))
        .clone()
}

fn gauss_legendre_raw(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integrate `f` on `[a, b]` with a fixed `n`-point Gauss-Legendre rule.
pub fn integrate_gl<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in rule.0.iter().zip(rule.1.iter()) {
        acc += w * f(mid + c * x);
    }
    acc * c
}

/// Adaptive Gauss-Legendre integration by dyadic panel subdivision.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: FnMut(f64) -> f64>(
        f: &mut F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let mid = 0.5 * (a + b);
        let left = integrate_gl(&mut *f, a, mid, 16);
        let right = integrate_gl(&mut *f, mid, b, 16);
        let refined = left + right;
        if depth >= 24 || (refined - whole).abs() <= tol * (1.0 + refined.abs()) {
            return refined;
        }
        recurse(f, a, mid, left, 0.5 * tol, depth + 1)
            + recurse(f, mid, b, right, 0.5 * tol, depth + 1)
    }
    let whole = integrate_gl(&mut *f, a, b, 16);
    recurse(f, a, b, whole, tol, 0)
}

/// Adaptive integration with explicit interior split points (payoff kinks).
///
/// Splits are clipped to `[a, b]`; duplicates and out-of-range points are
/// ignored.
pub fn integrate_with_splits<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    splits: &[f64],
    tol: f64,
) -> f64 {
    let mut pts: Vec<f64> = splits
        .iter()
        .copied()
        .filter(|s| *s > a && *s < b)
        .collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let mut acc = 0.0;
    for pair in pts.windows(2) {
        acc += integrate_adaptive(f, pair[0], pair[1], tol);
    }
    acc
}

/// Composite Simpson rule on a uniform grid (odd number of points).
///
/// Falls back to a trapezoid correction on the final panel when the point
/// count is even.
pub fn simpson_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    assert!(n >= 3, "simpson_uniform needs at least 3 points");
    let odd_len = if n % 2 == 1 { n } else { n - 1 };
    let mut acc = values[0] + values[odd_len - 1];
    for (i, v) in values.iter().enumerate().take(odd_len - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    let mut total = acc * h / 3.0;
    if n % 2 == 0 {
        total += 0.5 * h * (values[n - 2] + values[n - 1]);
    }
    total
}

/// Fornberg weights for the `m`-th derivative at `x0` from nodes `xs`.
pub fn fd_weights(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > m);
    // c[k][j]: weight of node j for the k-th derivative.
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c[m].clone()
}

/// Second derivative of grid samples: 5-point central stencils in the
/// interior, 4th-order one-sided 6-point stencils at the edges.
pub fn second_derivative_grid(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 6, "second_derivative_grid needs at least 6 points");
    let mut out = vec![0.0; n];
    let offsets: Vec<f64> = (0..6).map(|k| k as f64).collect();
    for i in 0..n {
        if i >= 2 && i + 2 < n {
            out[i] = (-values[i - 2] + 16.0 * values[i - 1] - 30.0 * values[i]
                + 16.0 * values[i + 1]
                - values[i + 2])
                / (12.0 * h * h);
        } else {
            let (base, at) = if i < 2 { (0, i) } else { (n - 6, i - (n - 6)) };
            let w = fd_weights(at as f64, &offsets, 2);
            let mut acc = 0.0;
            for (k, wk) in w.iter().enumerate() {
                acc += wk * values[base + k];
            }
            out[i] = acc / (h * h);
        }
    }
    out
}

/// Deterministic pairwise summation (order independent of chunking).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Uniform grid of `n` points covering `[a, b]` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + i as f64 * h).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // 16-point rule is exact through degree 31.
        let v = integrate_gl(|x| x.powi(10) - 3.0 * x.powi(3) + 1.0, -1.0, 2.0, 16);
        let exact = (2048.0 + 1.0) / 11.0 - 3.0 * (16.0 - 1.0) / 4.0 + 3.0;
        assert_relative_eq!(v, exact, max_relative = 1e-13);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let mut f = |x: f64| (-(x * x) / 2e-4).exp();
        let v = integrate_adaptive(&mut f, -1.0, 1.0, 1e-12);
        let exact = (std::f64::consts::PI * 2e-4).sqrt();
        assert_relative_eq!(v, exact, max_relative = 1e-10);
    }

    #[test]
    fn splits_capture_kinks() {
        let mut f = |x: f64| (x - 0.3).abs();
        let v = integrate_with_splits(&mut f, 0.0, 1.0, &[0.3], 1e-13);
        let exact = 0.3 * 0.3 / 2.0 + 0.7 * 0.7 / 2.0;
        assert_relative_eq!(v, exact, max_relative = 1e-13);
    }

    #[test]
    fn simpson_matches_closed_form() {
        let xs = linspace(0.0, 2.0, 401);
        let vals: Vec<f64> = xs.iter().map(|x| (2.0 * x).sin()).collect();
        let v = simpson_uniform(&vals, xs[1] - xs[0]);
        let exact = (1.0 - 4.0f64.cos()) / 2.0;
        assert_relative_eq!(v, exact, epsilon = 1e-10);
    }

    #[test]
    fn fd_weights_reproduce_central_second_derivative() {
        let xs: Vec<f64> = (-2..=2).map(|k| k as f64).collect();
        let w = fd_weights(0.0, &xs, 2);
        let expect = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn second_derivative_exact_on_quintic() {
        let xs = linspace(-1.0, 1.0, 41);
        let h = xs[1] - xs[0];
        let vals: Vec<f64> = xs.iter().map(|x| x.powi(5) - x.powi(3) + 2.0).collect();
        let d2 = second_derivative_grid(&vals, h);
        for (x, d) in xs.iter().zip(d2.iter()) {
            let exact = 20.0 * x.powi(3) - 6.0 * x;
            assert_relative_eq!(*d, exact, epsilon = 1e-9);
        }
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_input() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = v.iter().sum();
        assert_relative_eq!(pairwise_sum(&v), naive, epsilon = 1e-12);
    }
}
