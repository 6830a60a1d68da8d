//! Static hedging of European-style (possibly path-dependent) claims with
//! fixed positions in bonds, forwards and vanilla calls/puts.
//!
//! The library solves the constrained quadratic program
//!
//! ```text
//!     minimize    E[ (V_T - Xi_T)^2 ]
//!     subject to  cost(portfolio) <= C
//! ```
//!
//! in two settings: a finite set of hedging instruments (closed-form KKT
//! solution) and a continuum of strikes on an interval `[L, R]` (closed-form
//! solution built from strike derivatives of moment functions). The
//! expectations that enter the objective are computed under pluggable Markov
//! diffusion models by closed forms, transition-density expansions or
//! Fourier-Laplace inversion, and every number can be cross-checked against
//! an independent Monte Carlo engine.

pub mod density;
pub mod error;
pub mod heston;
pub mod market_models;
pub mod mc;
pub mod moments;
pub mod numerics;
pub mod optimizer;
pub mod payoffs;

pub use error::{HedgeError, Result};
pub use market_models::{Measure, ModelSpec, NamedModel};
pub use payoffs::{ClaimSpec, InstrumentSet, StrikeSpec};
