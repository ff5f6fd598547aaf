//! Conjugate model with a known, shared sampling precision.
//!
//! Observations in each arm are normal with precision tau; each arm mean
//! carries a conjugate normal prior expressed as a prior mean plus a weight
//! (notional observations at precision tau). Every quantity of interest,
//! including the probability of a successful trial, is then available in
//! closed form, which makes this model both the workhorse for equal-minded
//! designs and the reference oracle for the Monte Carlo paths of the other
//! models.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numerics::{mc_success_proportion, phi, phi_inv, RandomStream, MC_MIN_REPS};
use crate::trial::{ArmPrior, PstResult, TwoArmLayout};

/// A fully specified two-arm design under the known-precision model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownPrecisionDesign {
    precision: f64,
    prior_e: ArmPrior,
    prior_c: ArmPrior,
    eta: f64,
    layout: TwoArmLayout,
}

impl KnownPrecisionDesign {
    /// `precision` is the sampling precision (reciprocal variance) of a
    /// single observation; `eta` is the posterior probability of a positive
    /// effect the trial must reach to be declared a success.
    pub fn new(
        precision: f64,
        prior_e: ArmPrior,
        prior_c: ArmPrior,
        eta: f64,
        layout: TwoArmLayout,
    ) -> Result<Self> {
        check_precision(precision)?;
        check_eta(eta)?;
        Ok(Self {
            precision,
            prior_e,
            prior_c,
            eta,
            layout,
        })
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }

    pub fn prior_e(&self) -> &ArmPrior {
        &self.prior_e
    }

    pub fn prior_c(&self) -> &ArmPrior {
        &self.prior_c
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn layout(&self) -> &TwoArmLayout {
        &self.layout
    }

    /// Prior mean of the treatment effect, mean_E - mean_C.
    pub fn prior_delta(&self) -> f64 {
        self.prior_e.mean() - self.prior_c.mean()
    }

    /// Harmonic combination of the prior weights: the prior precision of the
    /// effect is this weight times tau.
    pub fn prior_effective_weight(&self) -> f64 {
        harmonic(self.prior_e.weight(), self.prior_c.weight())
    }

    /// Standard deviation of the effect's prior predictive posterior mean:
    /// before data arrive, the posterior mean of the effect is normal around
    /// the prior mean with this spread.
    fn marginal_sd(&self) -> f64 {
        let ne = self.layout.n_e() as f64;
        let nc = self.layout.n_c() as f64;
        let we = self.prior_e.weight();
        let wc = self.prior_c.weight();
        let var = ne / (self.precision * we * (we + ne)) + nc / (self.precision * wc * (wc + nc));
        var.sqrt()
    }
}

pub(crate) fn check_precision(precision: f64) -> Result<()> {
    if !(precision > 0.0 && precision.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "precision",
            reason: format!("{precision} is not a positive real"),
        });
    }
    Ok(())
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: format!("{eta} is outside the open interval (0, 1)"),
        });
    }
    Ok(())
}

fn harmonic(a: f64, b: f64) -> f64 {
    a * b / (a + b)
}

/// Posterior state of the treatment effect after observing the arm means.
///
/// The effect's posterior is normal with mean `mean` and precision
/// `effective_weight * tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorDelta {
    /// Posterior mean of the effect.
    pub mean: f64,
    /// Harmonic combination of the two posterior weights.
    pub effective_weight: f64,
    pub mean_e: f64,
    pub mean_c: f64,
    pub weight_e: f64,
    pub weight_c: f64,
}

/// Conjugate update shared with the unknown-precision model: each arm's
/// posterior mean is the weight-proportional blend of prior mean and sample
/// mean, and each weight grows by the arm's sample size.
pub(crate) fn posterior_update(
    prior_e: &ArmPrior,
    prior_c: &ArmPrior,
    layout: &TwoArmLayout,
    xbar_e: f64,
    ybar_c: f64,
) -> PosteriorDelta {
    let ne = layout.n_e() as f64;
    let nc = layout.n_c() as f64;
    let weight_e = prior_e.weight() + ne;
    let weight_c = prior_c.weight() + nc;
    let mean_e = (prior_e.weight() * prior_e.mean() + ne * xbar_e) / weight_e;
    let mean_c = (prior_c.weight() * prior_c.mean() + nc * ybar_c) / weight_c;
    PosteriorDelta {
        mean: mean_e - mean_c,
        effective_weight: harmonic(weight_e, weight_c),
        mean_e,
        mean_c,
        weight_e,
        weight_c,
    }
}

/// Posterior of the treatment effect given the observed arm means.
pub fn posterior_delta(
    design: &KnownPrecisionDesign,
    xbar_e: f64,
    ybar_c: f64,
) -> PosteriorDelta {
    posterior_update(
        &design.prior_e,
        &design.prior_c,
        &design.layout,
        xbar_e,
        ybar_c,
    )
}

/// Signed distance between the posterior z-score of the effect and the
/// success threshold. Non-negative exactly when the trial is a success,
/// i.e. when the posterior P(effect > 0) >= eta.
pub fn success_margin(design: &KnownPrecisionDesign, posterior: &PosteriorDelta) -> f64 {
    posterior.mean * (posterior.effective_weight * design.precision).sqrt()
        - phi_inv(design.eta)
}

/// Success indicator for one realized pair of arm means.
pub fn success_indicator(design: &KnownPrecisionDesign, posterior: &PosteriorDelta) -> bool {
    success_margin(design, posterior) >= 0.0
}

/// Prior probability that the treatment effect is positive.
///
/// This is also the n -> infinity limit of the probability of a successful
/// trial: with unbounded data the trial succeeds exactly when the effect
/// really is positive, no matter how demanding eta is.
pub fn prior_prob_superiority(design: &KnownPrecisionDesign) -> f64 {
    phi(design.prior_delta() * (design.prior_effective_weight() * design.precision).sqrt())
}

/// Probability of a successful trial, exactly.
///
/// Success requires the posterior mean to exceed z_eta / sqrt(D1 tau) where
/// D1 is the posterior effective weight; under the prior predictive the
/// posterior mean is normal around the prior effect, so the probability is a
/// single normal tail.
pub fn pst_closed_form(design: &KnownPrecisionDesign) -> PstResult {
    let d1 = {
        let we1 = design.prior_e.weight() + design.layout.n_e() as f64;
        let wc1 = design.prior_c.weight() + design.layout.n_c() as f64;
        harmonic(we1, wc1)
    };
    let threshold = phi_inv(design.eta) / (d1 * design.precision).sqrt();
    let psi = phi((design.prior_delta() - threshold) / design.marginal_sd());
    PstResult::closed_form(psi, prior_prob_superiority(design))
}

/// Monte Carlo estimate of the probability of a successful trial.
///
/// Draws the posterior mean of the effect from its prior predictive law and
/// applies the success rule; exists to cross-check the closed form and to
/// exercise the shared Monte Carlo machinery against a known answer.
pub fn pst_monte_carlo(
    design: &KnownPrecisionDesign,
    stream: RandomStream,
    reps: u64,
) -> Result<PstResult> {
    if reps < MC_MIN_REPS {
        return Err(Error::TooFewReps {
            reps,
            min: MC_MIN_REPS,
        });
    }
    let d1 = {
        let we1 = design.prior_e.weight() + design.layout.n_e() as f64;
        let wc1 = design.prior_c.weight() + design.layout.n_c() as f64;
        harmonic(we1, wc1)
    };
    let threshold = phi_inv(design.eta) / (d1 * design.precision).sqrt();
    let delta = design.prior_delta();
    let sigma = design.marginal_sd();
    let mc = mc_success_proportion(stream, reps, move |rng| {
        let z: f64 = StandardNormal.sample(rng);
        delta + sigma * z >= threshold
    });
    Ok(PstResult::monte_carlo(mc, prior_prob_superiority(design)))
}
