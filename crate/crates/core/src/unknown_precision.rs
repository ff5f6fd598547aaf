//! Conjugate model with an unknown, shared sampling precision.
//!
//! The precision tau gets a gamma prior and each arm mean keeps its
//! conditional normal prior (weights in notional observations, now at the
//! random precision). Marginally the effect follows a Student t law, so the
//! trial's success rule compares the posterior effect's t score with a t
//! quantile whose degrees of freedom grow with both the prior shape and the
//! sample. No closed form survives the extra layer; the probability of a
//! successful trial is simulated from the full prior hierarchy.

use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::known_precision::{check_eta, PosteriorDelta};
use crate::numerics::{
    mc_success_proportion, student_t_cdf, student_t_quantile, RandomStream, MC_MIN_REPS,
};
use crate::trial::{ArmPrior, PstResult, TwoArmLayout};

/// Gamma prior (shape, rate) for the sampling precision; mean shape/rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPrior {
    shape: f64,
    rate: f64,
}

impl GammaPrior {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        for (name, v) in [("shape", shape), ("rate", rate)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("{v} is not a positive real"),
                });
            }
        }
        Ok(Self { shape, rate })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn sd(&self) -> f64 {
        self.shape.sqrt() / self.rate
    }

    /// sd/mean = 1/sqrt(shape); small values mean the precision is nearly
    /// known and the model collapses to the known-precision one.
    pub fn coefficient_of_variation(&self) -> f64 {
        1.0 / self.shape.sqrt()
    }
}

/// Gamma prior matching a given precision mean and standard deviation:
/// shape = (mean/sd)^2, rate = mean/sd^2.
pub fn fit_gamma_moments(mean: f64, sd: f64) -> Result<GammaPrior> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "mean",
            reason: format!("{mean} is not a positive real"),
        });
    }
    if !(sd > 0.0 && sd.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sd",
            reason: format!("{sd} is not a positive real"),
        });
    }
    let ratio = mean / sd;
    GammaPrior::new(ratio * ratio, mean / (sd * sd))
}

/// A two-arm design under the unknown-precision model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnknownPrecisionDesign {
    tau_prior: GammaPrior,
    prior_e: ArmPrior,
    prior_c: ArmPrior,
    eta: f64,
    layout: TwoArmLayout,
}

impl UnknownPrecisionDesign {
    pub fn new(
        tau_prior: GammaPrior,
        prior_e: ArmPrior,
        prior_c: ArmPrior,
        eta: f64,
        layout: TwoArmLayout,
    ) -> Result<Self> {
        check_eta(eta)?;
        if layout.n_total() < 3 {
            return Err(Error::InvalidParameter {
                name: "n_total",
                reason: format!(
                    "{} leaves no degrees of freedom for the pooled variance",
                    layout.n_total()
                ),
            });
        }
        Ok(Self {
            tau_prior,
            prior_e,
            prior_c,
            eta,
            layout,
        })
    }

    pub fn tau_prior(&self) -> &GammaPrior {
        &self.tau_prior
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

    pub fn prior_delta(&self) -> f64 {
        self.prior_e.mean() - self.prior_c.mean()
    }

    fn posterior_shape(&self) -> f64 {
        self.tau_prior.shape + self.layout.n_total() as f64 / 2.0
    }
}

/// The quadratic form the data contribute to the precision update: pooled
/// sum of squares plus each arm's shrinkage-weighted squared distance between
/// sample mean and prior mean.
pub fn h_statistic(design: &UnknownPrecisionDesign, xbar_e: f64, ybar_c: f64, s2: f64) -> f64 {
    let ne = design.layout.n_e() as f64;
    let nc = design.layout.n_c() as f64;
    let we = design.prior_e.weight();
    let wc = design.prior_c.weight();
    let de = xbar_e - design.prior_e.mean();
    let dc = ybar_c - design.prior_c.mean();
    let df = (design.layout.n_total() - 2) as f64;
    df * s2 + (ne * we / (we + ne)) * de * de + (nc * wc / (wc + nc)) * dc * dc
}

/// Posterior gamma law of the precision: shape grows by n/2, rate by half
/// the observed quadratic form.
pub fn posterior_gamma(design: &UnknownPrecisionDesign, h: f64) -> GammaPrior {
    GammaPrior {
        shape: design.posterior_shape(),
        rate: design.tau_prior.rate + 0.5 * h,
    }
}

/// Success rule: the posterior effect's t score (at the posterior-mean
/// precision scale, with 2 * posterior shape degrees of freedom) must reach
/// the eta quantile of that t law.
pub fn success_indicator_t(
    design: &UnknownPrecisionDesign,
    posterior: &PosteriorDelta,
    precision_posterior: &GammaPrior,
) -> Result<bool> {
    let df = 2.0 * precision_posterior.shape;
    let threshold = student_t_quantile(df, design.eta)?;
    let scale = posterior.effective_weight * precision_posterior.mean();
    Ok(posterior.mean * scale.sqrt() >= threshold)
}

/// Prior probability that the effect is positive: marginalizing the gamma
/// prior out of the conditional normal makes the effect's prior a scaled
/// Student t with 2 * shape degrees of freedom.
pub fn prior_prob_superiority(design: &UnknownPrecisionDesign) -> f64 {
    let d0 = {
        let we = design.prior_e.weight();
        let wc = design.prior_c.weight();
        we * wc / (we + wc)
    };
    let scale = d0 * design.tau_prior.mean();
    student_t_cdf(
        design.prior_delta() * scale.sqrt(),
        2.0 * design.tau_prior.shape,
    )
}

/// Monte Carlo estimate of the probability of a successful trial, simulating
/// the full hierarchy: precision, then arm means, then data summaries, then
/// the posterior success rule.
///
/// The simulation works in deviations from the prior means, so designs that
/// differ only by a common shift of both prior means make identical draws
/// and identical success decisions, replication by replication.
pub fn pst_simulation(
    design: &UnknownPrecisionDesign,
    stream: RandomStream,
    reps: u64,
) -> Result<PstResult> {
    if reps < MC_MIN_REPS {
        return Err(Error::TooFewReps {
            reps,
            min: MC_MIN_REPS,
        });
    }
    let ne = design.layout.n_e() as f64;
    let nc = design.layout.n_c() as f64;
    let we = design.prior_e.weight();
    let wc = design.prior_c.weight();
    let we1 = we + ne;
    let wc1 = wc + nc;
    let d1 = we1 * wc1 / (we1 + wc1);
    let df = (design.layout.n_total() - 2) as f64;
    let shape1 = design.posterior_shape();
    let rate0 = design.tau_prior.rate;
    let delta0 = design.prior_delta();
    // The posterior shape is data-free, so the t threshold hoists out.
    let t_threshold = student_t_quantile(2.0 * shape1, design.eta)?;
    // H coefficients for the squared mean deviations.
    let ce = ne * we / we1;
    let cc = nc * wc / wc1;

    let gamma_tau = Gamma::new(design.tau_prior.shape, 1.0 / design.tau_prior.rate).map_err(
        |e| Error::InvalidParameter {
            name: "shape",
            reason: e.to_string(),
        },
    )?;
    // (n-2) s^2 tau is chi-square with n-2 degrees of freedom.
    let gamma_ss = Gamma::new(0.5 * df, 2.0).map_err(|e| Error::InvalidParameter {
        name: "n_total",
        reason: e.to_string(),
    })?;

    let mc = mc_success_proportion(stream, reps, move |rng| {
        let tau = gamma_tau.sample(rng);
        let z_mu_e: f64 = StandardNormal.sample(rng);
        let z_mu_c: f64 = StandardNormal.sample(rng);
        let z_xbar: f64 = StandardNormal.sample(rng);
        let z_ybar: f64 = StandardNormal.sample(rng);
        // Deviations of the sample means from the prior means: prior spread
        // of the arm mean plus sampling noise of the average.
        let dev_e = z_mu_e / (we * tau).sqrt() + z_xbar / (ne * tau).sqrt();
        let dev_c = z_mu_c / (wc * tau).sqrt() + z_ybar / (nc * tau).sqrt();
        let ss = gamma_ss.sample(rng) / tau; // (n-2) s^2
        let delta1 = delta0 + (ne / we1) * dev_e - (nc / wc1) * dev_c;
        let h = ss + ce * dev_e * dev_e + cc * dev_c * dev_c;
        let rate1 = rate0 + 0.5 * h;
        delta1 * (d1 * shape1 / rate1).sqrt() >= t_threshold
    });
    Ok(PstResult::monte_carlo(mc, prior_prob_superiority(design)))
}
