//! Bayesian sample-size assessment for two-arm superiority trials with a
//! normally distributed endpoint.
//!
//! The central quantity is the probability of a successful trial: the chance,
//! computed before any data exist, that the completed trial's posterior
//! probability of a positive treatment effect clears a success threshold eta.
//! Averaging over the prior instead of fixing one alternative makes this an
//! absolute measure of a design, and it has a finite ceiling: as n grows it
//! converges to the prior probability that the effect is positive at all, not
//! to 1. The rescaled variant (probability of success divided by that
//! ceiling) is reported alongside it everywhere.
//!
//! Three observation models are covered:
//! * [`known_precision`]: both arms share a known sampling precision and the
//!   arm means carry conjugate normal priors; everything is closed form.
//! * [`mixture`]: the treatment effect itself carries a two-component normal
//!   mixture prior (a skeptical spike and an effect component); evaluated by
//!   Monte Carlo.
//! * [`unknown_precision`]: the shared precision gets a gamma prior and
//!   success is judged against a Student t threshold; evaluated by Monte
//!   Carlo over the full prior hierarchy.
//!
//! [`design_tools`] layers sample-size searches and parameter sweeps on top,
//! and [`numerics`] holds the special functions and the reproducible
//! sampling infrastructure they all share.

pub mod design_tools;
pub mod error;
pub mod known_precision;
pub mod mixture;
pub mod numerics;
pub mod trial;
pub mod unknown_precision;

pub use error::{Error, Result};
pub use numerics::{McEstimate, RandomStream};
pub use trial::{ArmPrior, Method, PstResult, TwoArmLayout};
