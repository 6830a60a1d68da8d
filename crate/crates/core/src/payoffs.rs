//! Terminal payoffs of hedging instruments and of the claims to hedge.

use std::sync::Arc;

use crate::error::{HedgeError, Result};

/// Put/call side of a vanilla instrument, chosen by strike versus spot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionSide {
    Put,
    Call,
}

/// A vanilla European option; puts trade at strikes below the spot, calls at
/// or above it.
#[derive(Debug, Clone, Copy)]
pub struct VanillaPayoff {
    pub strike: f64,
    pub side: OptionSide,
}

impl VanillaPayoff {
    pub fn new(strike: f64, s0: f64) -> Self {
        let side = if strike < s0 {
            OptionSide::Put
        } else {
            OptionSide::Call
        };
        VanillaPayoff { strike, side }
    }

    pub fn value(&self, s: f64) -> f64 {
        match self.side {
            OptionSide::Put => (self.strike - s).max(0.0),
            OptionSide::Call => (s - self.strike).max(0.0),
        }
    }
}

/// `g(K, s)`: the payoff of the put/call with strike `K` given spot `s0`.
pub fn vanilla_payoff(strike: f64, s: f64, s0: f64) -> f64 {
    VanillaPayoff::new(strike, s0).value(s)
}

/// Terminal LETF value `L0 exp(l (x1_T - x1_0) + l (1 - l)/2 <X1>_T)`.
pub fn letf_terminal(ell: f64, l0: f64, x1_t: f64, x1_0: f64, qv_t: f64) -> f64 {
    l0 * (ell * (x1_t - x1_0) + 0.5 * ell * (1.0 - ell) * qv_t).exp()
}

/// Everything a claim may need about the terminal state of one path.
#[derive(Debug, Clone, Copy, Default)]
pub struct TerminalState {
    /// Terminal log price of the traded asset.
    pub x1: f64,
    /// Initial log price (LETF claims need the increment).
    pub x1_0: f64,
    /// Second coordinate: log of a correlated asset or a running average.
    pub x2: Option<f64>,
    /// Accumulated quadratic variation of the log price.
    pub quad_var: Option<f64>,
}

type PayoffFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The contingent claim to hedge.
#[derive(Clone)]
pub enum ClaimSpec {
    /// Call on a correlated asset: `(exp(x2_T) - k_prime)^+`.
    CorrelatedCall { k_prime: f64 },
    /// Call on a leveraged ETF of the traded asset.
    LetfCall { k_prime: f64, ell: f64, l0: f64 },
    /// Geometric Asian call: `(exp(x2_T) - k_prime)^+` with `x2` the running
    /// average of the log price.
    GeometricAsianCall { k_prime: f64 },
    /// Arbitrary terminal function of the traded price `S_T`, with optional
    /// first and second derivatives for replication tests.
    GenericEuropean {
        f: PayoffFn,
        df: Option<PayoffFn>,
        d2f: Option<PayoffFn>,
    },
}

impl std::fmt::Debug for ClaimSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClaimSpec::CorrelatedCall { k_prime } => {
                write!(f, "CorrelatedCall {{ k_prime: {k_prime} }}")
            }
            ClaimSpec::LetfCall { k_prime, ell, l0 } => {
                write!(f, "LetfCall {{ k_prime: {k_prime}, ell: {ell}, l0: {l0} }}")
            }
            ClaimSpec::GeometricAsianCall { k_prime } => {
                write!(f, "GeometricAsianCall {{ k_prime: {k_prime} }}")
            }
            ClaimSpec::GenericEuropean { .. } => write!(f, "GenericEuropean {{ .. }}"),
        }
    }
}

/// Leverage ratios quoted in practice; others work but are unusual.
pub const COMMON_LEVERAGE_RATIOS: [f64; 5] = [-3.0, -2.0, -1.0, 2.0, 3.0];

impl ClaimSpec {
    pub fn generic<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ClaimSpec::GenericEuropean {
            f: Arc::new(f),
            df: None,
            d2f: None,
        }
    }

    pub fn generic_with_derivatives<F, G, H>(f: F, df: G, d2f: H) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ClaimSpec::GenericEuropean {
            f: Arc::new(f),
            df: Some(Arc::new(df)),
            d2f: Some(Arc::new(d2f)),
        }
    }

    /// True when the leverage ratio is outside the commonly traded set.
    pub fn unusual_leverage(&self) -> bool {
        match self {
            ClaimSpec::LetfCall { ell, .. } => !COMMON_LEVERAGE_RATIOS.contains(ell),
            _ => false,
        }
    }

    /// Evaluate the claim payoff on a terminal state.
    pub fn payoff(&self, state: &TerminalState) -> Result<f64> {
        match self {
            ClaimSpec::CorrelatedCall { k_prime } | ClaimSpec::GeometricAsianCall { k_prime } => {
                let x2 = state.x2.ok_or_else(|| {
                    HedgeError::StateMismatch("claim needs the second coordinate x2".into())
                })?;
                Ok((x2.exp() - k_prime).max(0.0))
            }
            ClaimSpec::LetfCall { k_prime, ell, l0 } => {
                let qv = state.quad_var.ok_or_else(|| {
                    HedgeError::StateMismatch("LETF claim needs the quadratic variation".into())
                })?;
                let l_t = letf_terminal(*ell, *l0, state.x1, state.x1_0, qv);
                Ok((l_t - k_prime).max(0.0))
            }
            ClaimSpec::GenericEuropean { f, .. } => Ok(f(state.x1.exp())),
        }
    }

    /// First derivative of a generic claim, central differences when no
    /// closed form was supplied.
    pub fn generic_d1(&self, s: f64) -> Result<f64> {
        match self {
            ClaimSpec::GenericEuropean { f, df, .. } => Ok(match df {
                Some(d) => d(s),
                None => {
                    let h = 1e-4;
                    (f(s + h) - f(s - h)) / (2.0 * h)
                }
            }),
            _ => Err(HedgeError::InvalidArgument(
                "derivatives only defined for generic European claims".into(),
            )),
        }
    }

    /// Second derivative of a generic claim.
    pub fn generic_d2(&self, s: f64) -> Result<f64> {
        match self {
            ClaimSpec::GenericEuropean { f, d2f, .. } => Ok(match d2f {
                Some(d) => d(s),
                None => {
                    let h = 1e-4;
                    (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h)
                }
            }),
            _ => Err(HedgeError::InvalidArgument(
                "derivatives only defined for generic European claims".into(),
            )),
        }
    }
}

/// Strike specification: a continuum on a band or a finite list.
#[derive(Debug, Clone)]
pub enum StrikeSpec {
    ContinuousBand { l: f64, r: f64, grid_size: usize },
    DiscreteStrikes(Vec<f64>),
}

/// The instruments available for hedging.
#[derive(Debug, Clone)]
pub struct InstrumentSet {
    pub includes_bond: bool,
    pub includes_forward: bool,
    pub strikes: StrikeSpec,
    pub s0: f64,
}

impl InstrumentSet {
    /// Discrete strikes are sorted on construction; duplicates are kept and
    /// surface later as a redundant-instrument error from the moment engine.
    pub fn new(
        includes_bond: bool,
        includes_forward: bool,
        strikes: StrikeSpec,
        s0: f64,
    ) -> Result<Self> {
        match &strikes {
            StrikeSpec::ContinuousBand { l, r, grid_size } => {
                if !(0.0 <= *l && *l <= s0 && s0 <= *r) {
                    return Err(HedgeError::InvalidArgument(format!(
                        "band must satisfy 0 <= L <= S0 <= R (got L={l}, R={r}, S0={s0})"
                    )));
                }
                if *grid_size < 5 {
                    return Err(HedgeError::GridError(format!(
                        "band grid of {grid_size} points is too coarse"
                    )));
                }
            }
            StrikeSpec::DiscreteStrikes(ks) => {
                if ks.iter().any(|k| *k < 0.0 || !k.is_finite()) {
                    return Err(HedgeError::InvalidArgument(
                        "strikes must be finite and nonnegative".into(),
                    ));
                }
            }
        }
        let strikes = match strikes {
            StrikeSpec::DiscreteStrikes(mut ks) => {
                ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
                StrikeSpec::DiscreteStrikes(ks)
            }
            band => band,
        };
        Ok(InstrumentSet {
            includes_bond,
            includes_forward,
            strikes,
            s0,
        })
    }

    pub fn discrete(strikes: Vec<f64>, s0: f64) -> Result<Self> {
        Self::new(true, false, StrikeSpec::DiscreteStrikes(strikes), s0)
    }

    pub fn band(l: f64, r: f64, grid_size: usize, s0: f64) -> Result<Self> {
        Self::new(true, true, StrikeSpec::ContinuousBand { l, r, grid_size }, s0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn vanilla_side_selection() {
        assert_relative_eq!(vanilla_payoff(0.8, 0.7, 1.0), 0.1); // put side
        assert_relative_eq!(vanilla_payoff(1.2, 1.5, 1.0), 0.3); // call side
        assert_relative_eq!(vanilla_payoff(1.0, 0.9, 1.0), 0.0); // ATM is a call
    }

    #[test]
    fn letf_terminal_examples() {
        // l = 1 is the reference itself regardless of quadratic variation.
        assert_relative_eq!(letf_terminal(1.0, 1.0, 0.3, 0.0, 0.123), (0.3f64).exp());
        // l = 3 with a 0.1 log move and 0.04 quadratic variation.
        assert_relative_eq!(
            letf_terminal(3.0, 1.0, 0.1, 0.0, 0.04),
            (0.3 - 3.0 * 0.04f64).exp()
        );
    }

    #[test]
    fn claim_payoffs() {
        let corr = ClaimSpec::CorrelatedCall { k_prime: 1.0 };
        let st = TerminalState {
            x1: 0.0,
            x1_0: 0.0,
            x2: Some(1.2f64.ln()),
            quad_var: None,
        };
        assert_relative_eq!(corr.payoff(&st).unwrap(), 0.2, max_relative = 1e-14);

        let asian = ClaimSpec::GeometricAsianCall { k_prime: 1.0 };
        let st0 = TerminalState {
            x2: Some(0.0),
            ..Default::default()
        };
        assert_relative_eq!(asian.payoff(&st0).unwrap(), 0.0);

        // Triple-short LETF up-move lands out of the money.
        let letf = ClaimSpec::LetfCall {
            k_prime: 1.0,
            ell: -3.0,
            l0: 1.0,
        };
        let stl = TerminalState {
            x1: 0.1,
            x1_0: 0.0,
            x2: None,
            quad_var: Some(0.04),
        };
        assert!((-0.3 - 6.0 * 0.04f64).exp() < 1.0);
        assert_relative_eq!(letf.payoff(&stl).unwrap(), 0.0);
    }

    #[test]
    fn missing_coordinates_are_reported() {
        let letf = ClaimSpec::LetfCall {
            k_prime: 1.0,
            ell: 3.0,
            l0: 1.0,
        };
        let st = TerminalState::default();
        assert!(matches!(
            letf.payoff(&st),
            Err(HedgeError::StateMismatch(_))
        ));
    }

    proptest! {
        #[test]
        fn letf_monotone_in_terminal_log_price(
            ell in prop::sample::select(vec![-3.0, -2.0, 2.0, 3.0]),
            x in -0.5f64..0.5,
            dx in 1e-4f64..0.3,
            qv in 0.0f64..0.2,
        ) {
            let lo = letf_terminal(ell, 1.0, x, 0.0, qv);
            let hi = letf_terminal(ell, 1.0, x + dx, 0.0, qv);
            if ell > 0.0 {
                prop_assert!(hi > lo);
            } else {
                prop_assert!(hi < lo);
            }
        }

        #[test]
        fn vanilla_nonnegative_and_zero_at_strike(k in 0.1f64..3.0, s in 0.0f64..4.0) {
            prop_assert!(vanilla_payoff(k, s, 1.0) >= 0.0);
            prop_assert_eq!(vanilla_payoff(k, k, 1.0), 0.0);
        }
    }
}
