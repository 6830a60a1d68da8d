//! Gaussian kernels in one and two dimensions and polynomial evaluation of
//! their mixed partial derivatives.

use std::collections::BTreeMap;

use crate::error::{HedgeError, Result};
use crate::market_models::{MultiIndex, Point};

/// Mean vector and covariance matrix of the order-0 kernel.
#[derive(Debug, Clone, Copy)]
pub struct GaussianKernelParams {
    pub dim: usize,
    pub mean: Point,
    pub cov: [[f64; 2]; 2],
}

impl GaussianKernelParams {
    pub fn validate(&self) -> Result<()> {
        let c = &self.cov;
        let ok = if self.dim == 1 {
            c[0][0] > 0.0
        } else {
            c[0][0] > 0.0 && c[1][1] > 0.0 && c[0][0] * c[1][1] - c[0][1] * c[0][1] > 0.0
        };
        if ok {
            Ok(())
        } else {
            Err(HedgeError::EllipticityViolation(format!(
                "kernel covariance not positive definite: {c:?}"
            )))
        }
    }

    pub fn det(&self) -> f64 {
        if self.dim == 1 {
            self.cov[0][0]
        } else {
            self.cov[0][0] * self.cov[1][1] - self.cov[0][1] * self.cov[0][1]
        }
    }

    pub fn inverse(&self) -> [[f64; 2]; 2] {
        if self.dim == 1 {
            [[1.0 / self.cov[0][0], 0.0], [0.0, 0.0]]
        } else {
            let d = self.det();
            [
                [self.cov[1][1] / d, -self.cov[0][1] / d],
                [-self.cov[0][1] / d, self.cov[0][0] / d],
            ]
        }
    }

    pub fn density(&self, y: Point) -> f64 {
        let w = [y[0] - self.mean[0], y[1] - self.mean[1]];
        let ci = self.inverse();
        let quad = if self.dim == 1 {
            w[0] * w[0] * ci[0][0]
        } else {
            w[0] * w[0] * ci[0][0] + 2.0 * w[0] * w[1] * ci[0][1] + w[1] * w[1] * ci[1][1]
        };
        let norm = (2.0 * std::f64::consts::PI).powf(self.dim as f64 / 2.0) * self.det().sqrt();
        (-0.5 * quad).exp() / norm
    }

    /// Implied correlation of a 2D kernel.
    pub fn correlation(&self) -> f64 {
        self.cov[0][1] / (self.cov[0][0] * self.cov[1][1]).sqrt()
    }
}

/// Polynomial in the centered variable `w = y - mean`.
pub type WPoly = BTreeMap<MultiIndex, f64>;

fn wpoly_add(into: &mut WPoly, from: &WPoly, scale: f64) {
    for (&k, &c) in from {
        let e = into.entry(k).or_insert(0.0);
        *e += c * scale;
    }
}

/// `h` polynomial of the derivative: `d^delta N = N * h_delta(w)`, built by
/// the recursion `h_{delta+e_i} = -(C^{-1} w)_i h + d h / d w_i`.
fn hermite_poly(delta: MultiIndex, cinv: &[[f64; 2]; 2], dim: usize) -> WPoly {
    let mut h: WPoly = BTreeMap::new();
    h.insert([0, 0], 1.0);
    for axis in 0..dim.max(1) {
        for _ in 0..delta[axis] {
            let mut next: WPoly = BTreeMap::new();
            for (&k, &c) in &h {
                // -(C^{-1} w)_axis * term
                for l in 0..dim {
                    let mut kk = k;
                    kk[l] += 1;
                    *next.entry(kk).or_insert(0.0) += -cinv[axis][l] * c;
                }
                // d/dw_axis term
                if k[axis] > 0 {
                    let mut kk = k;
                    kk[axis] -= 1;
                    *next.entry(kk).or_insert(0.0) += c * k[axis] as f64;
                }
            }
            h = next;
        }
    }
    h
}

/// A finite mix `sum_delta w_delta d_y^delta` applied to a Gaussian,
/// compiled into a single polynomial factor.
#[derive(Debug, Clone)]
pub struct CompiledCorrection {
    poly: WPoly,
}

impl CompiledCorrection {
    pub fn compile(weights: &BTreeMap<MultiIndex, f64>, kernel: &GaussianKernelParams) -> Self {
        let cinv = kernel.inverse();
        let mut poly: WPoly = BTreeMap::new();
        for (&delta, &w) in weights {
            let h = hermite_poly(delta, &cinv, kernel.dim);
            wpoly_add(&mut poly, &h, w);
        }
        CompiledCorrection { poly }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.values().all(|c| c.abs() < 1e-300)
    }

    /// Evaluate `sum w_delta d^delta N` at `y` given the kernel density there.
    pub fn eval(&self, kernel: &GaussianKernelParams, y: Point, density: f64) -> f64 {
        let w = [y[0] - kernel.mean[0], y[1] - kernel.mean[1]];
        let mut acc = 0.0;
        for (&k, &c) in &self.poly {
            acc += c * w[0].powi(k[0] as i32) * w[1].powi(k[1] as i32);
        }
        acc * density
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn first_and_second_derivatives_match_finite_differences() {
        let kernel = GaussianKernelParams {
            dim: 2,
            mean: [0.1, -0.2],
            cov: [[0.04, 0.012], [0.012, 0.02]],
        };
        kernel.validate().unwrap();
        let y: Point = [0.15, -0.12];
        let h = 1e-5;
        for delta in [[1usize, 0usize], [0, 1], [2, 0], [1, 1], [0, 2]] {
            let mut weights = BTreeMap::new();
            weights.insert(delta, 1.0);
            let compiled = CompiledCorrection::compile(&weights, &kernel);
            let got = compiled.eval(&kernel, y, kernel.density(y));
            // central differences on the density
            let fd = match delta {
                [1, 0] => {
                    (kernel.density([y[0] + h, y[1]]) - kernel.density([y[0] - h, y[1]])) / (2.0 * h)
                }
                [0, 1] => {
                    (kernel.density([y[0], y[1] + h]) - kernel.density([y[0], y[1] - h])) / (2.0 * h)
                }
                [2, 0] => {
                    (kernel.density([y[0] + h, y[1]]) - 2.0 * kernel.density(y)
                        + kernel.density([y[0] - h, y[1]]))
                        / (h * h)
                }
                [0, 2] => {
                    (kernel.density([y[0], y[1] + h]) - 2.0 * kernel.density(y)
                        + kernel.density([y[0], y[1] - h]))
                        / (h * h)
                }
                _ => {
                    (kernel.density([y[0] + h, y[1] + h]) - kernel.density([y[0] + h, y[1] - h])
                        - kernel.density([y[0] - h, y[1] + h])
                        + kernel.density([y[0] - h, y[1] - h]))
                        / (4.0 * h * h)
                }
            };
            assert_relative_eq!(got, fd, max_relative = 1e-4);
        }
    }

    #[test]
    fn third_derivative_1d_hermite() {
        // d^3/dy^3 N(y; 0, s2) = N * (3 w / s2^2 - w^3 / s2^3).
        let kernel = GaussianKernelParams {
            dim: 1,
            mean: [0.0, 0.0],
            cov: [[0.25, 0.0], [0.0, 0.0]],
        };
        let mut weights = BTreeMap::new();
        weights.insert([3usize, 0usize], 1.0);
        let compiled = CompiledCorrection::compile(&weights, &kernel);
        let y: Point = [0.3, 0.0];
        let n = kernel.density(y);
        let s2 = 0.25;
        let w = 0.3;
        let exact = n * (3.0 * w / (s2 * s2) - w * w * w / (s2 * s2 * s2));
        assert_relative_eq!(compiled.eval(&kernel, y, n), exact, max_relative = 1e-12);
    }
}
