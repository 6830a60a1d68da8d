//! Exact transition density of the CEV price process via its noncentral
//! chi-square representation, including the absorption mass at zero.
//!
//! In price coordinates, `dS = m S dt + delta S^eta dW` with `eta` in (0, 1).
//! With `q = 1 - eta`:
//!
//! ```text
//!   k = 2 m / (delta^2 q (e^{2 m q T} - 1))        (limit 1/(delta^2 q^2 T) as m -> 0)
//!   x = k S_0^{2q} e^{2 m q T},   w = k s^{2q}
//!   f(s) = 2 q k^{1/(2q)} (x w^{1 - 4 q})^{1/(4 q)} e^{-x - w} I_{1/(2q)}(2 sqrt(x w))
//! ```
//!
//! and the process is absorbed at zero with probability
//! `Gamma_upper(1/(2q), x) / Gamma(1/(2q))`.

use statrs::function::gamma::gamma_ur;

use crate::error::{HedgeError, Result};
use crate::numerics::special::bessel_iv_scaled;

#[derive(Debug, Clone, Copy)]
pub struct CevDensity {
    q: f64,
    k: f64,
    x_ncp: f64,
    nu: f64,
}

impl CevDensity {
    /// Transition parameters from `s0` over a horizon `t` with drift `m`.
    pub fn new(m: f64, delta: f64, eta: f64, s0: f64, t: f64) -> Result<Self> {
        if !(0.0 < eta && eta < 1.0) {
            return Err(HedgeError::UnsupportedModel(format!(
                "exact CEV density needs eta in (0, 1), got {eta}"
            )));
        }
        if delta <= 0.0 || s0 <= 0.0 || t <= 0.0 {
            return Err(HedgeError::InvalidArgument(
                "CEV density needs delta, s0, t > 0".into(),
            ));
        }
        let q = 1.0 - eta;
        let growth = 2.0 * m * q;
        let k = if m.abs() < 1e-14 {
            1.0 / (delta * delta * q * q * t)
        } else {
            2.0 * m / (delta * delta * q * ((growth * t).exp() - 1.0))
        };
        let x_ncp = k * s0.powf(2.0 * q) * (growth * t).exp();
        Ok(CevDensity {
            q,
            k,
            x_ncp,
            nu: 1.0 / (2.0 * q),
        })
    }

    /// Density of the terminal price `s > 0`.
    pub fn price_density(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let q = self.q;
        let w = self.k * s.powf(2.0 * q);
        let z = 2.0 * (self.x_ncp * w).sqrt();
        // e^{-x-w} I_nu(z) = e^{-(sqrt x - sqrt w)^2} * (e^{-z} I_nu(z))
        let scaled = bessel_iv_scaled(self.nu, z);
        let expo = -(self.x_ncp.sqrt() - w.sqrt()).powi(2);
        let prefactor = 2.0 * q
            * self.k.powf(1.0 / (2.0 * q))
            * (self.x_ncp * w.powf(1.0 - 4.0 * q)).powf(1.0 / (4.0 * q));
        prefactor * expo.exp() * scaled
    }

    /// Density of the terminal log price `y = log s`.
    pub fn log_density(&self, y: f64) -> f64 {
        let s = y.exp();
        self.price_density(s) * s
    }

    /// Probability of absorption at zero before the horizon.
    pub fn absorption_mass(&self) -> f64 {
        gamma_ur(self.nu, self.x_ncp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_adaptive, linspace};
    use approx::assert_relative_eq;

    fn fig4_density() -> CevDensity {
        // delta = 0.2, eta = 0.7, m = 0.1, S0 = 1, T = 1.
        CevDensity::new(0.1, 0.2, 0.7, 1.0, 1.0).unwrap()
    }

    #[test]
    fn integrates_to_one_minus_absorption() {
        let d = fig4_density();
        let mut f = |s: f64| d.price_density(s);
        let total = integrate_adaptive(&mut f, 1e-8, 6.0, 1e-10) + d.absorption_mass();
        assert!(
            (0.999..=1.0 + 1e-6).contains(&total),
            "total mass {total}"
        );
    }

    #[test]
    fn mean_is_martingale_growth() {
        // E[S_T] = S0 e^{mT} including the absorbed mass at zero.
        let d = fig4_density();
        let mut f = |s: f64| s * d.price_density(s);
        let mean = integrate_adaptive(&mut f, 1e-8, 8.0, 1e-11);
        assert_relative_eq!(mean, (0.1f64).exp(), max_relative = 1e-6);
    }

    #[test]
    fn log_density_consistent_with_price_density() {
        let d = fig4_density();
        let ys = linspace(-1.0, 1.0, 9);
        for &y in &ys {
            let s = y.exp();
            assert_relative_eq!(d.log_density(y), d.price_density(s) * s, epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_drift_limit_continuous() {
        let a = CevDensity::new(1e-15, 0.2, 0.7, 1.0, 1.0).unwrap();
        let b = CevDensity::new(1e-6, 0.2, 0.7, 1.0, 1.0).unwrap();
        for &s in &[0.6, 1.0, 1.5] {
            assert_relative_eq!(a.price_density(s), b.price_density(s), max_relative = 1e-4);
        }
    }
}
