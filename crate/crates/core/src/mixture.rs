//! Mixture prior on the treatment effect itself.
//!
//! Instead of separate arm-mean priors, the effect delta carries a
//! two-component normal prior: a skeptical spike concentrated at zero and an
//! effect component centered on a plausible benefit. The data enter through
//! the difference of sample means, whose sampling precision at a given layout
//! is large enough that the posterior probability of a positive effect is a
//! weighted blend of two normal tails, with data-dependent weights. The
//! probability of a successful trial is estimated by Monte Carlo over the
//! prior predictive of that difference.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::known_precision::{check_eta, check_precision};
use crate::numerics::{
    bernoulli, ln_normal_pdf, mc_success_proportion, phi, RandomStream, MC_MIN_REPS,
};
use crate::trial::{PstResult, TwoArmLayout};

/// Two-component normal prior for the treatment effect.
///
/// With probability `skeptical_weight` the effect is drawn from the
/// skeptical component N(0, 1/skeptical_precision); otherwise from the
/// effect component N(effect_mean, 1/effect_precision).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalMixturePrior {
    skeptical_weight: f64,
    skeptical_precision: f64,
    effect_mean: f64,
    effect_precision: f64,
}

impl NormalMixturePrior {
    pub fn new(
        skeptical_weight: f64,
        skeptical_precision: f64,
        effect_mean: f64,
        effect_precision: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&skeptical_weight) {
            return Err(Error::InvalidParameter {
                name: "skeptical_weight",
                reason: format!("{skeptical_weight} is outside [0, 1]"),
            });
        }
        for (name, v) in [
            ("skeptical_precision", skeptical_precision),
            ("effect_precision", effect_precision),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("{v} is not a positive real"),
                });
            }
        }
        if !effect_mean.is_finite() {
            return Err(Error::InvalidParameter {
                name: "effect_mean",
                reason: format!("{effect_mean} is not finite"),
            });
        }
        Ok(Self {
            skeptical_weight,
            skeptical_precision,
            effect_mean,
            effect_precision,
        })
    }

    pub fn skeptical_weight(&self) -> f64 {
        self.skeptical_weight
    }

    pub fn skeptical_precision(&self) -> f64 {
        self.skeptical_precision
    }

    pub fn effect_mean(&self) -> f64 {
        self.effect_mean
    }

    pub fn effect_precision(&self) -> f64 {
        self.effect_precision
    }
}

/// Mean and variance of the mixture prior.
pub fn prior_moments(prior: &NormalMixturePrior) -> (f64, f64) {
    let rho = prior.skeptical_weight;
    let d1 = prior.effect_mean;
    let mean = (1.0 - rho) * d1;
    let var = rho / prior.skeptical_precision
        + (1.0 - rho) / prior.effect_precision
        + rho * (1.0 - rho) * d1 * d1;
    (mean, var)
}

/// Solves for the effect component so the whole mixture attains the given
/// mean and variance, holding the skeptical component fixed.
///
/// Inverting the moment identities gives
/// effect_mean = mean / (1 - rho) and
/// 1/effect_precision = (var - rho(1-rho) effect_mean^2 - rho/tau0) / (1-rho),
/// which must come out positive; otherwise no mixture with this skeptical
/// component can be that concentrated. With rho = 0 this passes the moments
/// straight through.
pub fn solve_mixture_hyperparams(
    skeptical_weight: f64,
    skeptical_precision: f64,
    target_mean: f64,
    target_var: f64,
) -> Result<NormalMixturePrior> {
    if !(0.0..1.0).contains(&skeptical_weight) {
        return Err(Error::InvalidParameter {
            name: "skeptical_weight",
            reason: format!("{skeptical_weight} is outside [0, 1)"),
        });
    }
    if !(skeptical_precision > 0.0 && skeptical_precision.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "skeptical_precision",
            reason: format!("{skeptical_precision} is not a positive real"),
        });
    }
    if !target_mean.is_finite() {
        return Err(Error::InvalidParameter {
            name: "target_mean",
            reason: format!("{target_mean} is not finite"),
        });
    }
    if !(target_var > 0.0 && target_var.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "target_var",
            reason: format!("{target_var} is not a positive variance"),
        });
    }
    let rho = skeptical_weight;
    let effect_mean = target_mean / (1.0 - rho);
    let effect_var = (target_var
        - rho * (1.0 - rho) * effect_mean * effect_mean
        - rho / skeptical_precision)
        / (1.0 - rho);
    if !(effect_var > 0.0) {
        return Err(Error::InfeasibleMoments {
            reason: format!(
                "variance {target_var} with skeptical weight {rho} implies a non-positive \
                 effect-component variance ({effect_var:.6})"
            ),
        });
    }
    NormalMixturePrior::new(rho, skeptical_precision, effect_mean, 1.0 / effect_var)
}

/// Prior probability that the effect is positive: half the skeptical weight
/// (that component is symmetric about zero) plus the effect component's tail.
pub fn prior_prob_positive_mixture(prior: &NormalMixturePrior) -> f64 {
    let rho = prior.skeptical_weight;
    rho * 0.5 + (1.0 - rho) * phi(prior.effect_mean * prior.effect_precision.sqrt())
}

/// A two-arm design under the mixture-prior model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureDesign {
    prior: NormalMixturePrior,
    precision: f64,
    eta: f64,
    layout: TwoArmLayout,
}

impl MixtureDesign {
    pub fn new(
        prior: NormalMixturePrior,
        precision: f64,
        eta: f64,
        layout: TwoArmLayout,
    ) -> Result<Self> {
        check_precision(precision)?;
        check_eta(eta)?;
        Ok(Self {
            prior,
            precision,
            eta,
            layout,
        })
    }

    pub fn prior(&self) -> &NormalMixturePrior {
        &self.prior
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn layout(&self) -> &TwoArmLayout {
        &self.layout
    }

    /// Sampling precision of the difference of sample means at this layout:
    /// n_E n_C tau / n.
    pub fn difference_precision(&self) -> f64 {
        let ne = self.layout.n_e() as f64;
        let nc = self.layout.n_c() as f64;
        ne * nc * self.precision / (ne + nc)
    }

    fn evaluator(&self) -> PosteriorEvaluator {
        PosteriorEvaluator::new(self)
    }
}

/// Per-design constants for evaluating the posterior probability of a
/// positive effect at an observed mean difference.
struct PosteriorEvaluator {
    /// log prior weight + log normalizing constant of each component's prior
    /// predictive density; the quadratic terms are applied per observation.
    ln_w_skeptical: f64,
    ln_w_effect: f64,
    marg_var_skeptical: f64,
    marg_var_effect: f64,
    effect_mean: f64,
    /// Coefficients of the two posterior tails: P(delta > 0 | u, component)
    /// is Phi(scale * u + offset).
    scale_skeptical: f64,
    scale_effect: f64,
    offset_effect: f64,
}

impl PosteriorEvaluator {
    fn new(design: &MixtureDesign) -> Self {
        let p = &design.prior;
        let tn = design.difference_precision();
        let rho = p.skeptical_weight;
        let t0 = p.skeptical_precision;
        let t1 = p.effect_precision;
        // Prior predictive of the observed difference u, per component:
        // N(0, 1/tn + 1/t0) and N(effect_mean, 1/tn + 1/t1).
        let marg_var_skeptical = 1.0 / tn + 1.0 / t0;
        let marg_var_effect = 1.0 / tn + 1.0 / t1;
        Self {
            ln_w_skeptical: if rho > 0.0 { rho.ln() } else { f64::NEG_INFINITY },
            ln_w_effect: if rho < 1.0 {
                (1.0 - rho).ln()
            } else {
                f64::NEG_INFINITY
            },
            marg_var_skeptical,
            marg_var_effect,
            effect_mean: p.effect_mean,
            scale_skeptical: tn / (tn + t0).sqrt(),
            scale_effect: tn / (tn + t1).sqrt(),
            offset_effect: t1 * p.effect_mean / (tn + t1).sqrt(),
        }
    }

    /// P(delta > 0 | u). The posterior mixes the two components' conditional
    /// tails with weights proportional to prior weight times prior predictive
    /// density at u; the weights are combined in log space so one component
    /// underflowing cannot poison the other.
    fn prob_positive(&self, u: f64) -> f64 {
        let lw0 = self.ln_w_skeptical + ln_normal_pdf(u, 0.0, self.marg_var_skeptical);
        let lw1 = self.ln_w_effect + ln_normal_pdf(u, self.effect_mean, self.marg_var_effect);
        let m = lw0.max(lw1);
        let w0 = (lw0 - m).exp();
        let w1 = (lw1 - m).exp();
        let r = w0 / (w0 + w1);
        let tail_skeptical = phi(self.scale_skeptical * u);
        let tail_effect = phi(self.scale_effect * u + self.offset_effect);
        r * tail_skeptical + (1.0 - r) * tail_effect
    }
}

/// Posterior probability of a positive effect after observing the mean
/// difference `u`.
pub fn posterior_prob_positive(design: &MixtureDesign, u: f64) -> Result<f64> {
    if !u.is_finite() {
        return Err(Error::InvalidParameter {
            name: "u",
            reason: format!("{u} is not finite"),
        });
    }
    let p = design.evaluator().prob_positive(u);
    if !p.is_finite() {
        return Err(Error::NumericDegeneracy(format!(
            "posterior probability at u = {u} is not finite"
        )));
    }
    Ok(p)
}

/// Prior predictive density of the observed mean difference.
pub fn marginal_density(design: &MixtureDesign, u: f64) -> f64 {
    let p = &design.prior;
    let tn = design.difference_precision();
    let rho = p.skeptical_weight;
    let v0 = 1.0 / tn + 1.0 / p.skeptical_precision;
    let v1 = 1.0 / tn + 1.0 / p.effect_precision;
    rho * ln_normal_pdf(u, 0.0, v0).exp()
        + (1.0 - rho) * ln_normal_pdf(u, p.effect_mean, v1).exp()
}

/// Monte Carlo estimate of the probability of a successful trial: draw the
/// mean difference from its prior predictive, apply the posterior success
/// rule, count.
pub fn pst_monte_carlo_mixture(
    design: &MixtureDesign,
    stream: RandomStream,
    reps: u64,
) -> Result<PstResult> {
    if reps < MC_MIN_REPS {
        return Err(Error::TooFewReps {
            reps,
            min: MC_MIN_REPS,
        });
    }
    let eval = design.evaluator();
    let rho = design.prior.skeptical_weight;
    let sd_skeptical = eval.marg_var_skeptical.sqrt();
    let sd_effect = eval.marg_var_effect.sqrt();
    let effect_mean = design.prior.effect_mean;
    let eta = design.eta;
    let mc = mc_success_proportion(stream, reps, move |rng| {
        let skeptical = bernoulli(rng, rho);
        let z: f64 = StandardNormal.sample(rng);
        let u = if skeptical {
            sd_skeptical * z
        } else {
            effect_mean + sd_effect * z
        };
        eval.prob_positive(u) >= eta
    });
    Ok(PstResult::monte_carlo(
        mc,
        prior_prob_positive_mixture(&design.prior),
    ))
}
