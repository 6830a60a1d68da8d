//! Market models: Markov diffusions under the physical measure `P` and the
//! pricing measure `Q`, together with their generator coefficients.
//!
//! State is the log-price `x1` plus, when the model or claim needs one, an
//! auxiliary coordinate `x2` (second log-price, instantaneous variance, or a
//! running average). Everything here is immutable after construction and the
//! coefficient evaluators are pure functions of `(t, x)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{HedgeError, Result};

/// Probability measure selector: `P` physical, `Q` pricing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    P,
    Q,
}

/// Tag for models whose transition law has a usable closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Lognormal1D,
    Gaussian2D,
    HestonJoint,
    CevExact,
}

/// State vector; one or two coordinates are used depending on `dim`.
pub type Point = [f64; 2];

/// Multi-index over at most two coordinates.
pub type MultiIndex = [usize; 2];

pub fn index_order(alpha: MultiIndex) -> usize {
    alpha[0] + alpha[1]
}

type ScalarFn = Arc<dyn Fn(f64, Point) -> f64 + Send + Sync>;
type DerivFn = Arc<dyn Fn(f64, Point, MultiIndex) -> f64 + Send + Sync>;

/// A scalar coefficient field `a(t, x)` with spatial derivatives.
pub trait CoeffField: Send + Sync {
    fn eval(&self, t: f64, x: Point) -> f64;
    /// Spatial partial derivative `d^beta a / dx^beta` at `(t, x)`.
    fn deriv(&self, t: f64, x: Point, beta: MultiIndex) -> Result<f64>;
}

/// Coefficient with hand-supplied analytic derivatives.
struct AnalyticCoeff {
    f: ScalarFn,
    d: DerivFn,
}

impl AnalyticCoeff {
    fn constant(c: f64) -> Arc<dyn CoeffField> {
        Arc::new(AnalyticCoeff {
            f: Arc::new(move |_, _| c),
            d: Arc::new(|_, _, _| 0.0),
        })
    }
}

impl CoeffField for AnalyticCoeff {
    fn eval(&self, t: f64, x: Point) -> f64 {
        (self.f)(t, x)
    }
    fn deriv(&self, t: f64, x: Point, beta: MultiIndex) -> Result<f64> {
        if index_order(beta) == 0 {
            return Ok(self.eval(t, x));
        }
        Ok((self.d)(t, x, beta))
    }
}

/// Coefficient differentiated by 4th-order central differences with step
/// `1e-4 * max(1, |x_i|)`; mixed and higher orders by nesting the stencil.
struct FdCoeff {
    f: ScalarFn,
}

impl FdCoeff {
    fn d1(&self, t: f64, x: Point, axis: usize, remaining: MultiIndex) -> Result<f64> {
        let h = 1e-4 * x[axis].abs().max(1.0);
        let mut vals = [0.0; 4];
        for (k, off) in [-2.0, -1.0, 1.0, 2.0].iter().enumerate() {
            let mut xs = x;
            xs[axis] += off * h;
            vals[k] = self.deriv_inner(t, xs, remaining)?;
        }
        let v = (vals[0] - 8.0 * vals[1] + 8.0 * vals[2] - vals[3]) / (12.0 * h);
        if !v.is_finite() {
            return Err(HedgeError::NumericalDerivative(format!(
                "non-finite central difference at x = {x:?}"
            )));
        }
        Ok(v)
    }

    fn deriv_inner(&self, t: f64, x: Point, beta: MultiIndex) -> Result<f64> {
        if beta[0] > 0 {
            let mut rest = beta;
            rest[0] -= 1;
            self.d1(t, x, 0, rest)
        } else if beta[1] > 0 {
            let mut rest = beta;
            rest[1] -= 1;
            self.d1(t, x, 1, rest)
        } else {
            Ok((self.f)(t, x))
        }
    }
}

impl CoeffField for FdCoeff {
    fn eval(&self, t: f64, x: Point) -> f64 {
        (self.f)(t, x)
    }
    fn deriv(&self, t: f64, x: Point, beta: MultiIndex) -> Result<f64> {
        self.deriv_inner(t, x, beta)
    }
}

/// The named diffusions used throughout the examples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedModel {
    /// Price follows `dS/S = mu dt + sigma dW`; state is `x = log S`.
    Gbm1D { mu: f64, sigma: f64, s0: f64 },
    /// Two correlated log-price Brownian motions (both assets traded).
    CorrelatedGbm2D {
        mu1: f64,
        mu2: f64,
        sigma1: f64,
        sigma2: f64,
        rho: f64,
        s0: f64,
        v0: f64,
    },
    /// Log price with CIR instantaneous variance as `x2`.
    Heston {
        m: f64,
        kappa: f64,
        theta_heston: f64,
        delta_vov: f64,
        rho: f64,
        x1: f64,
        x2: f64,
    },
    /// Log-price volatility `delta_scale * exp((eta - 1) x)`.
    Cev {
        m: f64,
        delta_scale: f64,
        eta_exponent: f64,
        x1: f64,
    },
}

impl NamedModel {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HedgeError::InvalidArgument(msg));
        match *self {
            NamedModel::Gbm1D { sigma, s0, .. } => {
                if sigma <= 0.0 || s0 <= 0.0 {
                    return bad(format!("gbm requires sigma, s0 > 0 (got {sigma}, {s0})"));
                }
            }
            NamedModel::CorrelatedGbm2D {
                sigma1,
                sigma2,
                rho,
                s0,
                v0,
                ..
            } => {
                if sigma1 <= 0.0 || sigma2 <= 0.0 || s0 <= 0.0 || v0 <= 0.0 {
                    return bad("correlated gbm requires positive sigmas and spots".into());
                }
                if !(-1.0..=1.0).contains(&rho) {
                    return bad(format!("correlation {rho} outside [-1, 1]"));
                }
            }
            NamedModel::Heston {
                kappa,
                theta_heston,
                delta_vov,
                rho,
                x2,
                ..
            } => {
                if kappa <= 0.0 || theta_heston <= 0.0 || delta_vov <= 0.0 {
                    return bad(format!(
                        "heston requires kappa, theta, delta > 0 (got {kappa}, {theta_heston}, {delta_vov})"
                    ));
                }
                if !(-1.0..=1.0).contains(&rho) {
                    return bad(format!("correlation {rho} outside [-1, 1]"));
                }
                if x2 < 0.0 {
                    return bad(format!("initial variance {x2} negative"));
                }
            }
            NamedModel::Cev {
                delta_scale,
                eta_exponent,
                ..
            } => {
                if delta_scale <= 0.0 {
                    return bad(format!("cev requires delta > 0 (got {delta_scale})"));
                }
                if !(0.0 < eta_exponent && eta_exponent <= 1.0) {
                    return bad(format!("cev exponent {eta_exponent} outside (0, 1]"));
                }
            }
        }
        Ok(())
    }

    /// Initial spot of the traded asset.
    pub fn s0(&self) -> f64 {
        match *self {
            NamedModel::Gbm1D { s0, .. } => s0,
            NamedModel::CorrelatedGbm2D { s0, .. } => s0,
            NamedModel::Heston { x1, .. } => x1.exp(),
            NamedModel::Cev { x1, .. } => x1.exp(),
        }
    }

    /// Build the full model specification.
    pub fn spec(&self) -> Result<ModelSpec> {
        self.validate()?;
        let model = *self;
        Ok(match model {
            NamedModel::Gbm1D { mu, sigma, s0 } => ModelSpec {
                dim: 1,
                brownian_dim: 1,
                x0: [s0.ln(), 0.0],
                time_homogeneous: true,
                closed_form: Some(ClosedForm::Lognormal1D),
                linear_drift: None,
                named: Some(model),
                averaging_horizon: None,
                drift_p: Arc::new(move |_, _| [mu - 0.5 * sigma * sigma, 0.0]),
                drift_q: Arc::new(move |_, _| [-0.5 * sigma * sigma, 0.0]),
                diffusion: Arc::new(move |_, _| [[sigma, 0.0], [0.0, 0.0]]),
            },
            NamedModel::CorrelatedGbm2D {
                mu1,
                mu2,
                sigma1,
                sigma2,
                rho,
                s0,
                v0,
            } => ModelSpec {
                dim: 2,
                brownian_dim: 2,
                x0: [s0.ln(), v0.ln()],
                time_homogeneous: true,
                closed_form: Some(ClosedForm::Gaussian2D),
                linear_drift: None,
                named: Some(model),
                averaging_horizon: None,
                drift_p: Arc::new(move |_, _| {
                    [mu1 - 0.5 * sigma1 * sigma1, mu2 - 0.5 * sigma2 * sigma2]
                }),
                drift_q: Arc::new(move |_, _| [-0.5 * sigma1 * sigma1, -0.5 * sigma2 * sigma2]),
                diffusion: Arc::new(move |_, _| {
                    [
                        [sigma1, 0.0],
                        [sigma2 * rho, sigma2 * (1.0 - rho * rho).sqrt()],
                    ]
                }),
            },
            NamedModel::Heston {
                m,
                kappa,
                theta_heston,
                delta_vov,
                rho,
                x1,
                x2,
            } => ModelSpec {
                dim: 2,
                brownian_dim: 2,
                x0: [x1, x2],
                time_homogeneous: true,
                closed_form: Some(ClosedForm::HestonJoint),
                linear_drift: None,
                named: Some(model),
                averaging_horizon: None,
                // Variance is floored at zero inside every coefficient.
                drift_p: Arc::new(move |_, x| {
                    let v = x[1].max(0.0);
                    [m - 0.5 * v, kappa * (theta_heston - v)]
                }),
                drift_q: Arc::new(move |_, x| {
                    let v = x[1].max(0.0);
                    [-0.5 * v, kappa * (theta_heston - v)]
                }),
                diffusion: Arc::new(move |_, x| {
                    let sv = x[1].max(0.0).sqrt();
                    [
                        [sv, 0.0],
                        [
                            delta_vov * sv * rho,
                            delta_vov * sv * (1.0 - rho * rho).sqrt(),
                        ],
                    ]
                }),
            },
            NamedModel::Cev {
                m,
                delta_scale,
                eta_exponent,
                x1,
            } => {
                let half_var = move |x: f64| {
                    0.5 * delta_scale * delta_scale * (2.0 * (eta_exponent - 1.0) * x).exp()
                };
                ModelSpec {
                    dim: 1,
                    brownian_dim: 1,
                    x0: [x1, 0.0],
                    time_homogeneous: true,
                    closed_form: Some(ClosedForm::CevExact),
                    linear_drift: None,
                    named: Some(model),
                    averaging_horizon: None,
                    drift_p: Arc::new(move |_, x| [m - half_var(x[0]), 0.0]),
                    drift_q: Arc::new(move |_, x| [-half_var(x[0]), 0.0]),
                    diffusion: Arc::new(move |_, x| {
                        [
                            [delta_scale * ((eta_exponent - 1.0) * x[0]).exp(), 0.0],
                            [0.0, 0.0],
                        ]
                    }),
                }
            }
        })
    }

    /// Augment a one-dimensional model with the running time-average of its
    /// log price as the second coordinate: `dx2 = (x1 / horizon) dt`.
    pub fn asian_pair(&self, horizon: f64) -> Result<ModelSpec> {
        if horizon <= 0.0 {
            return Err(HedgeError::InvalidArgument(
                "asian averaging horizon must be positive".into(),
            ));
        }
        let base = self.spec()?;
        if base.dim != 1 {
            return Err(HedgeError::InvalidArgument(
                "asian averaging needs a one-dimensional base model".into(),
            ));
        }
        let closed_form = match base.closed_form {
            Some(ClosedForm::Lognormal1D) => Some(ClosedForm::Gaussian2D),
            _ => None,
        };
        let dp = base.drift_p.clone();
        let dq = base.drift_q.clone();
        let df = base.diffusion.clone();
        Ok(ModelSpec {
            dim: 2,
            brownian_dim: 1,
            x0: [base.x0[0], 0.0],
            time_homogeneous: true,
            closed_form,
            linear_drift: Some([[0.0, 0.0], [1.0 / horizon, 0.0]]),
            named: Some(*self),
            averaging_horizon: Some(horizon),
            drift_p: Arc::new(move |t, x| [dp(t, x)[0], x[0] / horizon]),
            drift_q: Arc::new(move |t, x| [dq(t, x)[0], x[0] / horizon]),
            diffusion: Arc::new(move |t, x| [[df(t, x)[0][0], 0.0], [0.0, 0.0]]),
        })
    }
}

/// A Markov diffusion with drift under both measures and a common diffusion
/// matrix.
#[derive(Clone)]
pub struct ModelSpec {
    pub dim: usize,
    pub brownian_dim: usize,
    pub x0: Point,
    pub time_homogeneous: bool,
    pub closed_form: Option<ClosedForm>,
    /// Exact affine drift map `B` retained by the order-0 expansion kernel
    /// (running-average coordinates); must be nilpotent.
    pub linear_drift: Option<[[f64; 2]; 2]>,
    pub named: Option<NamedModel>,
    /// Averaging horizon when `x2` is a running average of `x1`.
    pub averaging_horizon: Option<f64>,
    drift_p: Arc<dyn Fn(f64, Point) -> Point + Send + Sync>,
    drift_q: Arc<dyn Fn(f64, Point) -> Point + Send + Sync>,
    diffusion: Arc<dyn Fn(f64, Point) -> [[f64; 2]; 2] + Send + Sync>,
}

impl fmt::Debug for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelSpec")
            .field("dim", &self.dim)
            .field("x0", &self.x0)
            .field("closed_form", &self.closed_form)
            .field("named", &self.named)
            .finish()
    }
}

impl ModelSpec {
    /// A user-supplied model; coefficient derivatives fall back to central
    /// differences.
    pub fn custom(
        dim: usize,
        brownian_dim: usize,
        x0: Point,
        time_homogeneous: bool,
        drift_p: Arc<dyn Fn(f64, Point) -> Point + Send + Sync>,
        drift_q: Arc<dyn Fn(f64, Point) -> Point + Send + Sync>,
        diffusion: Arc<dyn Fn(f64, Point) -> [[f64; 2]; 2] + Send + Sync>,
    ) -> Result<Self> {
        if dim == 0 || dim > 2 || brownian_dim == 0 || brownian_dim > 2 {
            return Err(HedgeError::InvalidArgument(
                "supported dimensions are 1 and 2".into(),
            ));
        }
        Ok(ModelSpec {
            dim,
            brownian_dim,
            x0,
            time_homogeneous,
            closed_form: None,
            linear_drift: None,
            named: None,
            averaging_horizon: None,
            drift_p,
            drift_q,
            diffusion,
        })
    }

    pub fn drift(&self, measure: Measure, t: f64, x: Point) -> Point {
        match measure {
            Measure::P => (self.drift_p)(t, x),
            Measure::Q => (self.drift_q)(t, x),
        }
    }

    pub fn sigma(&self, t: f64, x: Point) -> [[f64; 2]; 2] {
        (self.diffusion)(t, x)
    }

    /// `sigma sigma^T` at a point.
    pub fn sigma_sigma_t(&self, t: f64, x: Point) -> [[f64; 2]; 2] {
        let s = self.sigma(t, x);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate().take(self.dim) {
            for (j, cell) in row.iter_mut().enumerate().take(self.dim) {
                let mut acc = 0.0;
                for k in 0..self.brownian_dim {
                    acc += s[i][k] * s[j][k];
                }
                *cell = acc;
            }
        }
        out
    }

    pub fn s0(&self) -> f64 {
        self.x0[0].exp()
    }
}

/// Generator coefficients `a_alpha(t, x)` for `1 <= |alpha| <= 2`.
///
/// First-order entries are the drift components; `a_{2 e_i} = (sigma
/// sigma^T)_{ii} / 2` and `a_{e_i + e_j} = (sigma sigma^T)_{ij}` for `i < j`,
/// so the order-0 kernel covariance reads directly off the entries.
#[derive(Clone)]
pub struct GeneratorCoefficients {
    pub dim: usize,
    pub time_homogeneous: bool,
    /// See [`ModelSpec::linear_drift`].
    pub linear_drift: Option<[[f64; 2]; 2]>,
    entries: Vec<(MultiIndex, Arc<dyn CoeffField>)>,
}

impl GeneratorCoefficients {
    pub fn coeff(&self, alpha: MultiIndex) -> Result<&Arc<dyn CoeffField>> {
        self.entries
            .iter()
            .find(|(a, _)| *a == alpha)
            .map(|(_, c)| c)
            .ok_or_else(|| {
                HedgeError::InvalidArgument(format!(
                    "no generator coefficient for alpha {alpha:?}"
                ))
            })
    }

    pub fn multi_indices(&self) -> Vec<MultiIndex> {
        self.entries.iter().map(|(a, _)| *a).collect()
    }

    pub fn eval(&self, alpha: MultiIndex, t: f64, x: Point) -> Result<f64> {
        Ok(self.coeff(alpha)?.eval(t, x))
    }
}

fn first_order_indices(dim: usize) -> Vec<MultiIndex> {
    if dim == 1 {
        vec![[1, 0]]
    } else {
        vec![[1, 0], [0, 1]]
    }
}

fn second_order_indices(dim: usize) -> Vec<MultiIndex> {
    if dim == 1 {
        vec![[2, 0]]
    } else {
        vec![[2, 0], [1, 1], [0, 2]]
    }
}

/// Expose the generator of the model under the chosen measure.
///
/// Named models carry analytic coefficient derivatives; custom models fall
/// back to finite differences. Second-order entries are measure independent.
pub fn generator(model: &ModelSpec, measure: Measure) -> GeneratorCoefficients {
    let entries = match model.named {
        Some(named) => named_entries(model, named, measure),
        None => generic_entries(model, measure),
    };
    GeneratorCoefficients {
        dim: model.dim,
        time_homogeneous: model.time_homogeneous,
        linear_drift: model.linear_drift,
        entries,
    }
}

fn generic_entries(
    model: &ModelSpec,
    measure: Measure,
) -> Vec<(MultiIndex, Arc<dyn CoeffField>)> {
    let mut entries: Vec<(MultiIndex, Arc<dyn CoeffField>)> = Vec::new();
    for (i, alpha) in first_order_indices(model.dim).into_iter().enumerate() {
        let m = model.clone();
        entries.push((
            alpha,
            Arc::new(FdCoeff {
                f: Arc::new(move |t, x| m.drift(measure, t, x)[i]),
            }),
        ));
    }
    for alpha in second_order_indices(model.dim) {
        let m = model.clone();
        let (i, j, half) = match alpha {
            [2, 0] => (0, 0, 0.5),
            [0, 2] => (1, 1, 0.5),
            _ => (0, 1, 1.0),
        };
        entries.push((
            alpha,
            Arc::new(FdCoeff {
                f: Arc::new(move |t, x| half * m.sigma_sigma_t(t, x)[i][j]),
            }),
        ));
    }
    entries
}

fn named_entries(
    model: &ModelSpec,
    named: NamedModel,
    measure: Measure,
) -> Vec<(MultiIndex, Arc<dyn CoeffField>)> {
    // A coefficient `c + slope * max(x2, 0)`, linear in the floored variance.
    let v_linear = |c: f64, slope: f64| -> Arc<dyn CoeffField> {
        Arc::new(AnalyticCoeff {
            f: Arc::new(move |_, x| c + slope * x[1].max(0.0)),
            d: Arc::new(move |_, x, beta| {
                if beta == [0, 1] && x[1] > 0.0 {
                    slope
                } else {
                    0.0
                }
            }),
        })
    };
    // CEV half-variance `hv(x1) = delta^2/2 exp(2 (eta-1) x1)` scaled by `s`,
    // shifted by `c`; every x1-derivative multiplies by `2 (eta - 1)`.
    let cev_like = |c: f64, s: f64, delta: f64, eta: f64| -> Arc<dyn CoeffField> {
        let rate = 2.0 * (eta - 1.0);
        let hv = move |x: f64| 0.5 * delta * delta * (rate * x).exp();
        Arc::new(AnalyticCoeff {
            f: Arc::new(move |_, x| c + s * hv(x[0])),
            d: Arc::new(move |_, x, beta| {
                if beta[1] > 0 {
                    0.0
                } else {
                    s * rate.powi(beta[0] as i32) * hv(x[0])
                }
            }),
        })
    };

    let is_asian = model.averaging_horizon.is_some();
    match (named, is_asian) {
        (NamedModel::Gbm1D { mu, sigma, .. }, false) => {
            let drift = match measure {
                Measure::P => mu - 0.5 * sigma * sigma,
                Measure::Q => -0.5 * sigma * sigma,
            };
            vec![
                ([1, 0], AnalyticCoeff::constant(drift)),
                ([2, 0], AnalyticCoeff::constant(0.5 * sigma * sigma)),
            ]
        }
        (NamedModel::Cev { m, delta_scale, eta_exponent, .. }, false) => {
            let m_eff = match measure {
                Measure::P => m,
                Measure::Q => 0.0,
            };
            vec![
                ([1, 0], cev_like(m_eff, -1.0, delta_scale, eta_exponent)),
                ([2, 0], cev_like(0.0, 1.0, delta_scale, eta_exponent)),
            ]
        }
        (
            NamedModel::CorrelatedGbm2D {
                mu1,
                mu2,
                sigma1,
                sigma2,
                rho,
                ..
            },
            _,
        ) => {
            let (d1, d2) = match measure {
                Measure::P => (mu1 - 0.5 * sigma1 * sigma1, mu2 - 0.5 * sigma2 * sigma2),
                Measure::Q => (-0.5 * sigma1 * sigma1, -0.5 * sigma2 * sigma2),
            };
            vec![
                ([1, 0], AnalyticCoeff::constant(d1)),
                ([0, 1], AnalyticCoeff::constant(d2)),
                ([2, 0], AnalyticCoeff::constant(0.5 * sigma1 * sigma1)),
                ([1, 1], AnalyticCoeff::constant(rho * sigma1 * sigma2)),
                ([0, 2], AnalyticCoeff::constant(0.5 * sigma2 * sigma2)),
            ]
        }
        (
            NamedModel::Heston {
                m,
                kappa,
                theta_heston,
                delta_vov,
                rho,
                ..
            },
            _,
        ) => {
            let m_eff = match measure {
                Measure::P => m,
                Measure::Q => 0.0,
            };
            vec![
                ([1, 0], v_linear(m_eff, -0.5)),
                ([0, 1], v_linear(kappa * theta_heston, -kappa)),
                ([2, 0], v_linear(0.0, 0.5)),
                ([1, 1], v_linear(0.0, rho * delta_vov)),
                ([0, 2], v_linear(0.0, 0.5 * delta_vov * delta_vov)),
            ]
        }
        // Asian pair over a 1D base: second coordinate drifts at x1 / horizon
        // and carries no diffusion.
        (base, true) => {
            let horizon = model.averaging_horizon.expect("asian flag checked");
            let mut entries = match base {
                NamedModel::Gbm1D { mu, sigma, .. } => {
                    let drift = match measure {
                        Measure::P => mu - 0.5 * sigma * sigma,
                        Measure::Q => -0.5 * sigma * sigma,
                    };
                    vec![
                        ([1, 0], AnalyticCoeff::constant(drift)),
                        ([2, 0], AnalyticCoeff::constant(0.5 * sigma * sigma)),
                    ]
                }
                NamedModel::Cev {
                    m,
                    delta_scale,
                    eta_exponent,
                    ..
                } => {
                    let m_eff = match measure {
                        Measure::P => m,
                        Measure::Q => 0.0,
                    };
                    vec![
                        ([1, 0], cev_like(m_eff, -1.0, delta_scale, eta_exponent)),
                        ([2, 0], cev_like(0.0, 1.0, delta_scale, eta_exponent)),
                    ]
                }
                _ => unreachable!("asian_pair only wraps 1D bases"),
            };
            let avg: Arc<dyn CoeffField> = Arc::new(AnalyticCoeff {
                f: Arc::new(move |_, x| x[0] / horizon),
                d: Arc::new(move |_, _, beta| if beta == [1, 0] { 1.0 / horizon } else { 0.0 }),
            });
            entries.push(([0, 1], avg));
            entries.push(([1, 1], AnalyticCoeff::constant(0.0)));
            entries.push(([0, 2], AnalyticCoeff::constant(0.0)));
            entries
        }
    }
}

/// Report of the no-arbitrage drift condition `mu_q_1 = -1/2 sum_j
/// sigma_1j^2` at the sampled points.
#[derive(Debug, Clone)]
pub struct MartingaleReport {
    pub passed: bool,
    pub max_rel_error: f64,
    pub failures: Vec<(f64, Point)>,
}

/// Check the traded-asset drift restriction under the pricing measure.
pub fn martingale_drift_check(model: &ModelSpec, sample_points: &[(f64, Point)]) -> MartingaleReport {
    assert!(!sample_points.is_empty(), "need at least one sample point");
    let mut max_rel = 0.0f64;
    let mut failures = Vec::new();
    for &(t, x) in sample_points {
        let drift1 = model.drift(Measure::Q, t, x)[0];
        let target = -0.5 * model.sigma_sigma_t(t, x)[0][0];
        let scale = target.abs().max(1e-30);
        let rel = (drift1 - target).abs() / scale;
        max_rel = max_rel.max(rel);
        if rel > 1e-12 {
            failures.push((t, x));
        }
    }
    MartingaleReport {
        passed: failures.is_empty(),
        max_rel_error: max_rel,
        failures,
    }
}
