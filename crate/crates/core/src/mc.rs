//! Independent Monte Carlo engine.
//!
//! Every expectation the analytic engines produce can be re-estimated here.
//! Paths use counter-based random streams (one ChaCha stream per path index),
//! so results are bit-exact for any worker count, and reductions run in a
//! fixed order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{HedgeError, Result};
use crate::market_models::{Measure, ModelSpec, NamedModel};
use crate::numerics::pairwise_sum;
use crate::payoffs::TerminalState;

/// Path-generation scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimScheme {
    /// Terminal sampling for 1D constant-coefficient log dynamics.
    ExactLognormal,
    /// Terminal sampling for jointly Gaussian 2D log dynamics (correlated
    /// Brownian pairs and running averages of Brownian log prices).
    ExactGaussian2D,
    /// Euler scheme for Heston with the variance floored at zero inside both
    /// drift and diffusion at every step.
    EulerFullTruncation { steps_per_year: usize },
    /// Euler scheme on log coordinates for generic diffusions.
    EulerLog { steps_per_year: usize },
}

impl SimScheme {
    fn steps(&self, horizon: f64) -> usize {
        match self {
            SimScheme::ExactLognormal | SimScheme::ExactGaussian2D => 1,
            SimScheme::EulerFullTruncation { steps_per_year }
            | SimScheme::EulerLog { steps_per_year } => {
                ((*steps_per_year as f64) * horizon).ceil().max(1.0) as usize
            }
        }
    }
}

/// Which terminal functionals to record per path.
#[derive(Debug, Clone, Copy, Default)]
pub struct RecordFlags {
    /// Second coordinate (correlated log price, variance, or running average).
    pub x2: bool,
    /// Quadratic variation of the log price, accumulated as
    /// `sum sigma_1^2(t_k, X_k) dt`.
    pub quad_var: bool,
}

/// Terminal records of a simulated batch; reproducible bit-exactly from
/// `(seed, paths, steps, scheme)`.
#[derive(Debug, Clone)]
pub struct PathBatch {
    pub x1: Vec<f64>,
    pub x2: Option<Vec<f64>>,
    pub quad_var: Option<Vec<f64>>,
    pub x1_0: f64,
    pub seed: u64,
    pub scheme: SimScheme,
}

impl PathBatch {
    pub fn len(&self) -> usize {
        self.x1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x1.is_empty()
    }

    pub fn terminal_state(&self, i: usize) -> TerminalState {
        TerminalState {
            x1: self.x1[i],
            x1_0: self.x1_0,
            x2: self.x2.as_ref().map(|v| v[i]),
            quad_var: self.quad_var.as_ref().map(|v| v[i]),
        }
    }
}

/// A Monte Carlo value with its standard error and seed provenance.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub paths: usize,
    pub seed: u64,
}

impl McEstimate {
    /// |value - other| measured in standard errors (guarding zero).
    pub fn sigmas_from(&self, other: f64) -> f64 {
        (self.value - other).abs() / self.std_error.max(1e-300)
    }
}

fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

struct PathOut {
    x1: f64,
    x2: f64,
    qv: f64,
    bad_step: Option<usize>,
}

/// Simulate terminal records under the chosen measure.
pub fn simulate(
    model: &ModelSpec,
    measure: Measure,
    scheme: SimScheme,
    flags: RecordFlags,
    horizon: f64,
    paths: usize,
    seed: u64,
) -> Result<PathBatch> {
    if paths == 0 {
        return Err(HedgeError::InvalidArgument("need at least one path".into()));
    }
    if horizon <= 0.0 {
        return Err(HedgeError::InvalidArgument("horizon must be positive".into()));
    }
    let n_steps = scheme.steps(horizon);
    let results: Vec<PathOut> = (0..paths)
        .into_par_iter()
        .map(|i| one_path(model, measure, scheme, horizon, n_steps, seed, i as u64))
        .collect();

    if let Some(bad) = results.iter().find_map(|r| r.bad_step) {
        return Err(HedgeError::SimulationError {
            step: bad,
            detail: format!("scheme {scheme:?} produced a non-finite state"),
        });
    }
    Ok(PathBatch {
        x1: results.iter().map(|r| r.x1).collect(),
        x2: flags.x2.then(|| results.iter().map(|r| r.x2).collect()),
        quad_var: flags.quad_var.then(|| results.iter().map(|r| r.qv).collect()),
        x1_0: model.x0[0],
        seed,
        scheme,
    })
}

fn one_path(
    model: &ModelSpec,
    measure: Measure,
    scheme: SimScheme,
    horizon: f64,
    n_steps: usize,
    seed: u64,
    path: u64,
) -> PathOut {
    let mut rng = path_rng(seed, path);
    let mut normal = || -> f64 { rng.sample(StandardNormal) };
    match scheme {
        SimScheme::ExactLognormal => {
            let drift = model.drift(measure, 0.0, model.x0)[0];
            let var = model.sigma_sigma_t(0.0, model.x0)[0][0];
            let z: f64 = normal();
            let x1 = model.x0[0] + drift * horizon + (var * horizon).sqrt() * z;
            PathOut {
                x1,
                x2: f64::NAN,
                qv: var * horizon,
                bad_step: None,
            }
        }
        SimScheme::ExactGaussian2D => {
            let drift = model.drift(measure, 0.0, model.x0);
            let ss = model.sigma_sigma_t(0.0, model.x0);
            let (mean, cov) = if model.averaging_horizon.is_some() {
                // Running average of a Brownian log price.
                let v = ss[0][0];
                (
                    [
                        model.x0[0] + drift[0] * horizon,
                        model.x0[0] + 0.5 * drift[0] * horizon,
                    ],
                    [
                        [v * horizon, 0.5 * v * horizon],
                        [0.5 * v * horizon, v * horizon / 3.0],
                    ],
                )
            } else {
                (
                    [
                        model.x0[0] + drift[0] * horizon,
                        model.x0[1] + drift[1] * horizon,
                    ],
                    [
                        [ss[0][0] * horizon, ss[0][1] * horizon],
                        [ss[0][1] * horizon, ss[1][1] * horizon],
                    ],
                )
            };
            // 2x2 Cholesky.
            let l11 = cov[0][0].sqrt();
            let l21 = cov[0][1] / l11;
            let l22 = (cov[1][1] - l21 * l21).max(0.0).sqrt();
            let z1: f64 = normal();
            let z2: f64 = normal();
            PathOut {
                x1: mean[0] + l11 * z1,
                x2: mean[1] + l21 * z1 + l22 * z2,
                qv: ss[0][0] * horizon,
                bad_step: None,
            }
        }
        SimScheme::EulerFullTruncation { .. } => {
            let Some(NamedModel::Heston {
                m,
                kappa,
                theta_heston,
                delta_vov,
                rho,
                x1: x10,
                x2: v0,
            }) = model.named
            else {
                return PathOut {
                    x1: f64::NAN,
                    x2: f64::NAN,
                    qv: f64::NAN,
                    bad_step: Some(0),
                };
            };
            let m_eff = match measure {
                Measure::P => m,
                Measure::Q => 0.0,
            };
            let dt = horizon / n_steps as f64;
            let sdt = dt.sqrt();
            let rho_c = (1.0 - rho * rho).sqrt();
            let mut x = x10;
            let mut v = v0;
            let mut qv = 0.0;
            for step in 0..n_steps {
                let vp = v.max(0.0);
                let sv = vp.sqrt();
                let z1: f64 = normal();
                let z2: f64 = normal();
                qv += vp * dt;
                x += (m_eff - 0.5 * vp) * dt + sv * sdt * z1;
                v += kappa * (theta_heston - vp) * dt
                    + delta_vov * sv * sdt * (rho * z1 + rho_c * z2);
                if !(x.is_finite() && v.is_finite()) {
                    return PathOut {
                        x1: f64::NAN,
                        x2: f64::NAN,
                        qv: f64::NAN,
                        bad_step: Some(step),
                    };
                }
            }
            PathOut {
                x1: x,
                x2: v,
                qv,
                bad_step: None,
            }
        }
        SimScheme::EulerLog { .. } => {
            let dt = horizon / n_steps as f64;
            let sdt = dt.sqrt();
            let averaging = model.averaging_horizon;
            let mut x = model.x0;
            let mut qv = 0.0;
            let mut avg = 0.0;
            let mut prev_x1 = x[0];
            for step in 0..n_steps {
                let t = step as f64 * dt;
                let mu = model.drift(measure, t, x);
                let sig = model.sigma(t, x);
                qv += model.sigma_sigma_t(t, x)[0][0] * dt;
                let z1: f64 = normal();
                let z2: f64 = if model.brownian_dim > 1 { normal() } else { 0.0 };
                let x1new = x[0] + mu[0] * dt + (sig[0][0] * z1 + sig[0][1] * z2) * sdt;
                let x2new = if let Some(h) = averaging {
                    // Trapezoid accumulation of the running average.
                    avg += 0.5 * (prev_x1 + x1new) * dt;
                    prev_x1 = x1new;
                    avg / h
                } else if model.dim > 1 {
                    x[1] + mu[1] * dt + (sig[1][0] * z1 + sig[1][1] * z2) * sdt
                } else {
                    0.0
                };
                x = [x1new, x2new];
                if !(x[0].is_finite() && x[1].is_finite()) {
                    return PathOut {
                        x1: f64::NAN,
                        x2: f64::NAN,
                        qv: f64::NAN,
                        bad_step: Some(step),
                    };
                }
            }
            PathOut {
                x1: x[0],
                x2: x[1],
                qv,
                bad_step: None,
            }
        }
    }
}

/// Mean and standard error of a terminal functional over a batch.
pub fn estimate<F>(batch: &PathBatch, functional: F) -> Result<McEstimate>
where
    F: Fn(&TerminalState) -> Result<f64> + Sync,
{
    let n = batch.len();
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| functional(&batch.terminal_state(i)))
        .collect::<Result<Vec<f64>>>()?;
    let mean = pairwise_sum(&values) / n as f64;
    let centered: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = if n > 1 {
        pairwise_sum(&centered) / (n as f64 - 1.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        value: mean,
        std_error: (var / n as f64).sqrt(),
        paths: n,
        seed: batch.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_models::NamedModel;

    fn gbm() -> ModelSpec {
        NamedModel::Gbm1D {
            mu: 0.1,
            sigma: 0.2,
            s0: 1.0,
        }
        .spec()
        .unwrap()
    }

    fn heston() -> ModelSpec {
        NamedModel::Heston {
            m: 0.1,
            kappa: 1.0,
            theta_heston: 0.04,
            delta_vov: 0.1,
            rho: 0.0,
            x1: 0.0,
            x2: 0.04,
        }
        .spec()
        .unwrap()
    }

    #[test]
    fn constant_functional_has_zero_error() {
        let batch = simulate(
            &gbm(),
            Measure::P,
            SimScheme::ExactLognormal,
            RecordFlags::default(),
            0.5,
            2000,
            1,
        )
        .unwrap();
        let est = estimate(&batch, |_| Ok(2.5)).unwrap();
        assert_eq!(est.value, 2.5);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn gbm_exact_mean_within_three_se() {
        let batch = simulate(
            &gbm(),
            Measure::P,
            SimScheme::ExactLognormal,
            RecordFlags::default(),
            0.5,
            200_000,
            42,
        )
        .unwrap();
        let est = estimate(&batch, |st| Ok(st.x1.exp())).unwrap();
        let exact = (0.1f64 * 0.5).exp();
        assert!(est.sigmas_from(exact) < 3.0, "{} vs {}", est.value, exact);
    }

    #[test]
    fn heston_martingale_under_pricing_measure() {
        let batch = simulate(
            &heston(),
            Measure::Q,
            SimScheme::EulerFullTruncation { steps_per_year: 250 },
            RecordFlags {
                x2: true,
                quad_var: true,
            },
            0.25,
            200_000,
            7,
        )
        .unwrap();
        let est = estimate(&batch, |st| Ok(st.x1.exp())).unwrap();
        assert!(est.sigmas_from(1.0) < 3.0, "{} +- {}", est.value, est.std_error);
    }

    #[test]
    fn asian_average_matches_gaussian_law() {
        let model = NamedModel::Gbm1D {
            mu: 0.1,
            sigma: 0.2,
            s0: 1.0,
        }
        .asian_pair(1.0)
        .unwrap();
        // Exact sampler against Euler with trapezoid averaging.
        let exact = simulate(
            &model,
            Measure::P,
            SimScheme::ExactGaussian2D,
            RecordFlags {
                x2: true,
                quad_var: false,
            },
            1.0,
            150_000,
            3,
        )
        .unwrap();
        let euler = simulate(
            &model,
            Measure::P,
            SimScheme::EulerLog { steps_per_year: 250 },
            RecordFlags {
                x2: true,
                quad_var: false,
            },
            1.0,
            150_000,
            4,
        )
        .unwrap();
        let m_exact = estimate(&exact, |st| Ok(st.x2.unwrap())).unwrap();
        let m_euler = estimate(&euler, |st| Ok(st.x2.unwrap())).unwrap();
        let truth = 0.5 * (0.1 - 0.02);
        assert!(m_exact.sigmas_from(truth) < 3.0);
        assert!(m_euler.sigmas_from(truth) < 4.0);
        let v_exact = estimate(&exact, |st| {
            let d = st.x2.unwrap() - truth;
            Ok(d * d)
        })
        .unwrap();
        assert!((v_exact.value - 0.04 / 3.0).abs() < 4.0 * v_exact.std_error);
    }

    #[test]
    fn reproducible_across_worker_counts() {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                simulate(
                    &heston(),
                    Measure::P,
                    SimScheme::EulerFullTruncation { steps_per_year: 50 },
                    RecordFlags {
                        x2: true,
                        quad_var: true,
                    },
                    0.25,
                    20_000,
                    9,
                )
                .unwrap()
            })
        };
        let one = run(1);
        let two = run(2);
        let eight = run(8);
        assert_eq!(one.x1, two.x1);
        assert_eq!(one.x1, eight.x1);
        assert_eq!(one.quad_var, eight.quad_var);
    }

    #[test]
    fn missing_record_is_state_mismatch() {
        let batch = simulate(
            &gbm(),
            Measure::P,
            SimScheme::ExactLognormal,
            RecordFlags::default(),
            0.5,
            100,
            1,
        )
        .unwrap();
        let claim = crate::payoffs::ClaimSpec::GeometricAsianCall { k_prime: 1.0 };
        let res = estimate(&batch, |st| claim.payoff(st));
        assert!(matches!(res, Err(HedgeError::StateMismatch(_))));
    }
}
