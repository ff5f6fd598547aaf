//! Shared trial-design vocabulary: arm layouts, conjugate prior weights, and
//! the result record every evaluator returns.

use crate::error::{Error, Result};
use crate::numerics::McEstimate;

/// Integer split of a total sample size between the experimental arm (E) and
/// the control arm (C).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoArmLayout {
    n_total: u32,
    allocation_ratio: f64,
    n_e: u32,
    n_c: u32,
}

impl TwoArmLayout {
    /// Splits `n_total` so that n_E/n_C approximates `allocation_ratio`
    /// (n_E is the nearest integer to the ideal share, n_C the remainder).
    /// Both arms must end up non-empty.
    pub fn allocate(n_total: u32, allocation_ratio: f64) -> Result<Self> {
        if !(allocation_ratio > 0.0 && allocation_ratio.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "allocation_ratio",
                reason: format!("{allocation_ratio} is not a positive real"),
            });
        }
        if n_total < 2 {
            return Err(Error::InvalidParameter {
                name: "n_total",
                reason: format!("{n_total} cannot fill two arms"),
            });
        }
        let ideal_e = n_total as f64 * allocation_ratio / (1.0 + allocation_ratio);
        let n_e = ideal_e.round();
        if n_e < 1.0 || n_e > (n_total - 1) as f64 {
            return Err(Error::InfeasibleLayout {
                n_total,
                allocation_ratio,
            });
        }
        let n_e = n_e as u32;
        Ok(Self {
            n_total,
            allocation_ratio,
            n_e,
            n_c: n_total - n_e,
        })
    }

    pub fn n_total(&self) -> u32 {
        self.n_total
    }

    pub fn allocation_ratio(&self) -> f64 {
        self.allocation_ratio
    }

    pub fn n_e(&self) -> u32 {
        self.n_e
    }

    pub fn n_c(&self) -> u32 {
        self.n_c
    }
}

/// Conjugate normal prior for one arm's mean: centered at `mean`, with a
/// precision of `weight` notional observations. The posterior weight after
/// n observations is simply weight + n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmPrior {
    mean: f64,
    weight: f64,
}

impl ArmPrior {
    pub fn new(mean: f64, weight: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mean",
                reason: format!("{mean} is not finite"),
            });
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "weight",
                reason: format!("{weight} is not a positive real"),
            });
        }
        Ok(Self { mean, weight })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

/// How a probability-of-success figure was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// Probability of a successful trial at one design point.
///
/// `psi` is the unconditional probability that the trial ends in success;
/// `prior_prob` is the prior probability that the treatment effect is
/// positive at all, which is also the large-n limit of `psi`; and `psi_star`
/// is their ratio, the success probability rescaled to its own ceiling.
///
/// For a design whose prior puts essentially no mass on a positive effect,
/// `prior_prob` underflows to 0 and the ratio is the IEEE 0/0, a NaN; the
/// rescaled curve has no meaning for such a design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PstResult {
    pub psi: f64,
    pub psi_star: f64,
    pub prior_prob: f64,
    /// Present when `psi` is a Monte Carlo estimate.
    pub mc: Option<McEstimate>,
    pub method: Method,
}

impl PstResult {
    pub(crate) fn closed_form(psi: f64, prior_prob: f64) -> Self {
        Self {
            psi,
            psi_star: psi / prior_prob,
            prior_prob,
            mc: None,
            method: Method::ClosedForm,
        }
    }

    pub(crate) fn monte_carlo(mc: McEstimate, prior_prob: f64) -> Self {
        Self {
            psi: mc.estimate,
            psi_star: mc.estimate / prior_prob,
            prior_prob,
            mc: Some(mc),
            method: Method::MonteCarlo,
        }
    }
}
