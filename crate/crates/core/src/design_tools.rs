//! Design-level tooling: evaluate a family of designs across sample sizes,
//! search for the smallest n that meets a success-probability target, and
//! the frequentist power benchmark used for calibration.

use crate::error::{Error, Result};
use crate::known_precision::{self, KnownPrecisionDesign};
use crate::mixture::{
    self, prior_prob_positive_mixture, solve_mixture_hyperparams, MixtureDesign,
    NormalMixturePrior,
};
use crate::numerics::{phi, phi_inv, RandomStream, MC_MIN_REPS};
use crate::trial::{ArmPrior, PstResult, TwoArmLayout};
use crate::unknown_precision::{self, GammaPrior, UnknownPrecisionDesign};

/// A design template: everything but the total sample size.
#[derive(Debug, Clone, PartialEq)]
pub enum DesignFamily {
    KnownPrecision {
        precision: f64,
        prior_e: ArmPrior,
        prior_c: ArmPrior,
        eta: f64,
        allocation_ratio: f64,
    },
    Mixture {
        prior: NormalMixturePrior,
        /// The overall moments the prior was solved from, when it was;
        /// varying the skeptical weight re-solves against these.
        moments: Option<(f64, f64)>,
        precision: f64,
        eta: f64,
        allocation_ratio: f64,
    },
    UnknownPrecision {
        tau_prior: GammaPrior,
        prior_e: ArmPrior,
        prior_c: ArmPrior,
        eta: f64,
        allocation_ratio: f64,
    },
}

fn check_ratio(allocation_ratio: f64) -> Result<()> {
    if !(allocation_ratio > 0.0 && allocation_ratio.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "allocation_ratio",
            reason: format!("{allocation_ratio} is not a positive real"),
        });
    }
    Ok(())
}

impl DesignFamily {
    pub fn known_precision(
        precision: f64,
        prior_e: ArmPrior,
        prior_c: ArmPrior,
        eta: f64,
        allocation_ratio: f64,
    ) -> Result<Self> {
        known_precision::check_precision(precision)?;
        known_precision::check_eta(eta)?;
        check_ratio(allocation_ratio)?;
        Ok(Self::KnownPrecision {
            precision,
            prior_e,
            prior_c,
            eta,
            allocation_ratio,
        })
    }

    pub fn mixture(
        prior: NormalMixturePrior,
        precision: f64,
        eta: f64,
        allocation_ratio: f64,
    ) -> Result<Self> {
        known_precision::check_precision(precision)?;
        known_precision::check_eta(eta)?;
        check_ratio(allocation_ratio)?;
        Ok(Self::Mixture {
            prior,
            moments: None,
            precision,
            eta,
            allocation_ratio,
        })
    }

    /// Mixture family with the effect component solved from overall moments;
    /// remembers the moments so the skeptical weight can be varied later.
    pub fn mixture_from_moments(
        skeptical_weight: f64,
        skeptical_precision: f64,
        target_mean: f64,
        target_var: f64,
        precision: f64,
        eta: f64,
        allocation_ratio: f64,
    ) -> Result<Self> {
        known_precision::check_precision(precision)?;
        known_precision::check_eta(eta)?;
        check_ratio(allocation_ratio)?;
        let prior = solve_mixture_hyperparams(
            skeptical_weight,
            skeptical_precision,
            target_mean,
            target_var,
        )?;
        Ok(Self::Mixture {
            prior,
            moments: Some((target_mean, target_var)),
            precision,
            eta,
            allocation_ratio,
        })
    }

    pub fn unknown_precision(
        tau_prior: GammaPrior,
        prior_e: ArmPrior,
        prior_c: ArmPrior,
        eta: f64,
        allocation_ratio: f64,
    ) -> Result<Self> {
        known_precision::check_eta(eta)?;
        check_ratio(allocation_ratio)?;
        Ok(Self::UnknownPrecision {
            tau_prior,
            prior_e,
            prior_c,
            eta,
            allocation_ratio,
        })
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            Self::KnownPrecision { .. } => "known_precision",
            Self::Mixture { .. } => "mixture",
            Self::UnknownPrecision { .. } => "unknown_precision",
        }
    }

    /// Whether evaluation needs Monte Carlo replications.
    pub fn is_monte_carlo(&self) -> bool {
        !matches!(self, Self::KnownPrecision { .. })
    }

    /// The concrete design at a total sample size.
    pub fn design_at(&self, n_total: u32) -> Result<ModelDesign> {
        match self {
            Self::KnownPrecision {
                precision,
                prior_e,
                prior_c,
                eta,
                allocation_ratio,
            } => {
                let layout = TwoArmLayout::allocate(n_total, *allocation_ratio)?;
                Ok(ModelDesign::KnownPrecision(KnownPrecisionDesign::new(
                    *precision, *prior_e, *prior_c, *eta, layout,
                )?))
            }
            Self::Mixture {
                prior,
                precision,
                eta,
                allocation_ratio,
                ..
            } => {
                let layout = TwoArmLayout::allocate(n_total, *allocation_ratio)?;
                Ok(ModelDesign::Mixture(MixtureDesign::new(
                    *prior, *precision, *eta, layout,
                )?))
            }
            Self::UnknownPrecision {
                tau_prior,
                prior_e,
                prior_c,
                eta,
                allocation_ratio,
            } => {
                let layout = TwoArmLayout::allocate(n_total, *allocation_ratio)?;
                Ok(ModelDesign::UnknownPrecision(UnknownPrecisionDesign::new(
                    *tau_prior, *prior_e, *prior_c, *eta, layout,
                )?))
            }
        }
    }

    /// Prior probability of a positive effect, the ceiling every curve in
    /// this family approaches.
    pub fn prior_prob(&self) -> f64 {
        match self {
            Self::KnownPrecision {
                precision,
                prior_e,
                prior_c,
                ..
            } => {
                let d0 = prior_e.weight() * prior_c.weight() / (prior_e.weight() + prior_c.weight());
                phi((prior_e.mean() - prior_c.mean()) * (d0 * precision).sqrt())
            }
            Self::Mixture { prior, .. } => prior_prob_positive_mixture(prior),
            Self::UnknownPrecision {
                tau_prior,
                prior_e,
                prior_c,
                eta,
                allocation_ratio,
            } => {
                // Delegate through a throwaway design; the value does not
                // depend on the layout.
                let layout = TwoArmLayout::allocate(4, 1.0).expect("fixed layout");
                let d = UnknownPrecisionDesign::new(
                    *tau_prior, *prior_e, *prior_c, *eta, layout,
                )
                .expect("validated family");
                let _ = allocation_ratio;
                unknown_precision::prior_prob_superiority(&d)
            }
        }
    }

    /// A copy of this family with one scalar swapped out.
    pub fn with_vary(&self, param: VaryParam, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter {
                name: "vary_value",
                reason: format!("{value} is not finite"),
            });
        }
        match (param, self.clone()) {
            (
                VaryParam::Delta,
                Self::KnownPrecision {
                    precision,
                    prior_e,
                    prior_c,
                    eta,
                    allocation_ratio,
                },
            ) => Self::known_precision(
                precision,
                ArmPrior::new(prior_c.mean() + value, prior_e.weight())?,
                prior_c,
                eta,
                allocation_ratio,
            ),
            (
                VaryParam::Delta,
                Self::UnknownPrecision {
                    tau_prior,
                    prior_e,
                    prior_c,
                    eta,
                    allocation_ratio,
                },
            ) => Self::unknown_precision(
                tau_prior,
                ArmPrior::new(prior_c.mean() + value, prior_e.weight())?,
                prior_c,
                eta,
                allocation_ratio,
            ),
            (VaryParam::Delta, Self::Mixture { .. }) => Err(Error::InvalidParameter {
                name: "vary",
                reason: "delta varies the arm prior means, which the mixture model does not have"
                    .into(),
            }),
            (VaryParam::Eta, mut family) => {
                known_precision::check_eta(value)?;
                match &mut family {
                    Self::KnownPrecision { eta, .. }
                    | Self::Mixture { eta, .. }
                    | Self::UnknownPrecision { eta, .. } => *eta = value,
                }
                Ok(family)
            }
            (
                VaryParam::Rho,
                Self::Mixture {
                    prior,
                    moments,
                    precision,
                    eta,
                    allocation_ratio,
                },
            ) => {
                let Some((mean, var)) = moments else {
                    return Err(Error::InvalidParameter {
                        name: "vary",
                        reason: "varying rho needs overall prior moments to hold fixed; \
                                 this mixture prior was given explicitly"
                            .into(),
                    });
                };
                Self::mixture_from_moments(
                    value,
                    prior.skeptical_precision(),
                    mean,
                    var,
                    precision,
                    eta,
                    allocation_ratio,
                )
            }
            (VaryParam::Rho, _) => Err(Error::InvalidParameter {
                name: "vary",
                reason: "rho only applies to the mixture model".into(),
            }),
        }
    }
}

/// A concrete design under one of the three models.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelDesign {
    KnownPrecision(KnownPrecisionDesign),
    Mixture(MixtureDesign),
    UnknownPrecision(UnknownPrecisionDesign),
}

impl ModelDesign {
    /// Evaluates the probability of a successful trial: closed form where
    /// one exists (known precision), Monte Carlo otherwise.
    pub fn evaluate(&self, stream: RandomStream, reps: u64) -> Result<PstResult> {
        match self {
            Self::KnownPrecision(d) => Ok(known_precision::pst_closed_form(d)),
            Self::Mixture(d) => mixture::pst_monte_carlo_mixture(d, stream, reps),
            Self::UnknownPrecision(d) => unknown_precision::pst_simulation(d, stream, reps),
        }
    }

    pub fn layout(&self) -> &TwoArmLayout {
        match self {
            Self::KnownPrecision(d) => d.layout(),
            Self::Mixture(d) => d.layout(),
            Self::UnknownPrecision(d) => d.layout(),
        }
    }
}

/// Scalar a sweep can vary alongside the sample size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VaryParam {
    /// Prior mean difference between the arms.
    Delta,
    /// Success threshold.
    Eta,
    /// Skeptical weight of the mixture prior.
    Rho,
}

impl VaryParam {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Delta => "delta",
            Self::Eta => "eta",
            Self::Rho => "rho",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "delta" => Some(Self::Delta),
            "eta" => Some(Self::Eta),
            "rho" => Some(Self::Rho),
            _ => None,
        }
    }
}

/// A validated sweep request.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    family: DesignFamily,
    n_grid: Vec<u32>,
    vary: Option<(VaryParam, Vec<f64>)>,
    reps: u64,
    seed: u64,
}

impl SweepSpec {
    /// Vary values are put in ascending order; together with the increasing
    /// n grid this fixes the canonical output order (vary value, then n).
    pub fn new(
        family: DesignFamily,
        n_grid: Vec<u32>,
        vary: Option<(VaryParam, Vec<f64>)>,
        reps: u64,
        seed: u64,
    ) -> Result<Self> {
        if n_grid.is_empty() {
            return Err(Error::InvalidParameter {
                name: "n_grid",
                reason: "must not be empty".into(),
            });
        }
        if !n_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter {
                name: "n_grid",
                reason: "must be strictly increasing".into(),
            });
        }
        let vary = match vary {
            None => None,
            Some((param, mut values)) => {
                if values.is_empty() {
                    return Err(Error::InvalidParameter {
                        name: "vary_values",
                        reason: "must not be empty".into(),
                    });
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter {
                        name: "vary_values",
                        reason: "must all be finite".into(),
                    });
                }
                values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
                if values.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidParameter {
                        name: "vary_values",
                        reason: "must not contain duplicates".into(),
                    });
                }
                // Surface a model/parameter mismatch now, not per point.
                family.with_vary(param, values[0])?;
                Some((param, values))
            }
        };
        if family.is_monte_carlo() && reps < MC_MIN_REPS {
            return Err(Error::TooFewReps {
                reps,
                min: MC_MIN_REPS,
            });
        }
        Ok(Self {
            family,
            n_grid,
            vary,
            reps,
            seed,
        })
    }

    pub fn family(&self) -> &DesignFamily {
        &self.family
    }

    pub fn vary_name(&self) -> Option<&'static str> {
        self.vary.as_ref().map(|(p, _)| p.name())
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub n_total: u32,
    pub vary_value: Option<f64>,
    pub result: PstResult,
}

/// A grid point that could not be evaluated (for example, a total too small
/// for the model); reported rather than silently dropped.
#[derive(Debug, Clone)]
pub struct SkippedPoint {
    pub n_total: u32,
    pub vary_value: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub vary: Option<VaryParam>,
    pub points: Vec<SweepPoint>,
    pub skipped: Vec<SkippedPoint>,
}

/// Evaluates the family over the full grid.
///
/// Every grid point gets the substream equal to its ordinal in the canonical
/// enumeration (vary values ascending, n ascending within each), so any
/// single point can be reproduced in isolation by evaluating the same design
/// with that substream; skipped points still consume their ordinal.
pub fn sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    let base = RandomStream::new(spec.seed);
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let mut ordinal = 0u64;

    let vary_values: Vec<Option<f64>> = match &spec.vary {
        None => vec![None],
        Some((_, values)) => values.iter().copied().map(Some).collect(),
    };
    for value in vary_values {
        let family = match (value, &spec.vary) {
            (Some(v), Some((param, _))) => spec.family.with_vary(*param, v)?,
            _ => spec.family.clone(),
        };
        for &n in &spec.n_grid {
            let stream = base.substream(ordinal);
            ordinal += 1;
            match family
                .design_at(n)
                .and_then(|d| d.evaluate(stream, spec.reps))
            {
                Ok(result) => points.push(SweepPoint {
                    n_total: n,
                    vary_value: value,
                    result,
                }),
                Err(err) => skipped.push(SkippedPoint {
                    n_total: n,
                    vary_value: value,
                    reason: err.to_string(),
                }),
            }
        }
    }
    Ok(SweepOutcome {
        vary: spec.vary.as_ref().map(|(p, _)| *p),
        points,
        skipped,
    })
}

/// Which curve a sample-size target refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    /// Unconditional probability of a successful trial.
    Psi,
    /// The rescaled curve psi / prior probability, with ceiling 1.
    PsiStar,
}

impl TargetKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Psi => "psi",
            Self::PsiStar => "psi_star",
        }
    }
}

/// Search request for the smallest adequate sample size.
#[derive(Debug, Clone, Copy)]
pub struct SearchSpec {
    pub target: f64,
    pub kind: TargetKind,
    /// Largest total considered; default 2000.
    pub n_max: u32,
    /// Grid spacing: totals step, 2 step, ... are examined. Default 2 keeps
    /// equal arms exactly equal.
    pub step: u32,
    pub reps: u64,
    pub seed: u64,
}

pub const DEFAULT_SEARCH_N_MAX: u32 = 2000;
pub const DEFAULT_SEARCH_STEP: u32 = 2;

/// Result of a sample-size search.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    /// Smallest examined total meeting the target.
    Found {
        n_total: u32,
        n_e: u32,
        n_c: u32,
        result: PstResult,
    },
    /// The target is below the ceiling but no total up to n_max met it.
    Exhausted {
        n_max: u32,
        /// The ceiling of the targeted curve.
        limit: f64,
        /// Best value seen, for the report.
        best: Option<(u32, f64)>,
    },
}

/// Scans totals step, 2 step, ..., n_max for the first design meeting the
/// target. Infeasible totals (too small for the model) are skipped. For
/// Monte Carlo families the criterion is conservative: the estimate minus
/// two standard errors must clear the target.
///
/// Targets at or above the curve's ceiling fail immediately with the ceiling
/// in the error: psi converges to the prior probability of a positive
/// effect, psi_star to 1, so no sample size can reach such a target.
pub fn find_min_n(family: &DesignFamily, spec: &SearchSpec) -> Result<SearchOutcome> {
    if !(spec.target > 0.0 && spec.target < 1.0) {
        return Err(Error::InvalidParameter {
            name: "target",
            reason: format!("{} is outside the open interval (0, 1)", spec.target),
        });
    }
    if spec.step == 0 {
        return Err(Error::InvalidParameter {
            name: "step",
            reason: "must be at least 1".into(),
        });
    }
    if spec.n_max < spec.step {
        return Err(Error::InvalidParameter {
            name: "n_max",
            reason: format!("{} is below the first step {}", spec.n_max, spec.step),
        });
    }
    if family.is_monte_carlo() && spec.reps < MC_MIN_REPS {
        return Err(Error::TooFewReps {
            reps: spec.reps,
            min: MC_MIN_REPS,
        });
    }
    let limit = match spec.kind {
        TargetKind::Psi => family.prior_prob(),
        TargetKind::PsiStar => 1.0,
    };
    if spec.target >= limit {
        return Err(Error::InfeasibleTarget {
            target: spec.target,
            limit,
        });
    }

    let base = RandomStream::new(spec.seed);
    let mut best: Option<(u32, f64)> = None;
    let mut k = 0u64;
    loop {
        k += 1;
        let n = match u32::try_from(k).ok().and_then(|k| k.checked_mul(spec.step)) {
            Some(n) if n <= spec.n_max => n,
            _ => break,
        };
        let stream = base.substream(k - 1);
        let design = match family.design_at(n) {
            Ok(d) => d,
            Err(_) => continue, // too small for the model; later totals work
        };
        let result = design.evaluate(stream, spec.reps)?;
        let value = match spec.kind {
            TargetKind::Psi => result.psi,
            TargetKind::PsiStar => result.psi_star,
        };
        if best.map_or(true, |(_, b)| value > b) {
            best = Some((n, value));
        }
        let cleared = match result.mc {
            None => value >= spec.target,
            Some(mc) => {
                // Standard error on the rescaled curve scales the same way
                // the estimate does.
                let se = match spec.kind {
                    TargetKind::Psi => mc.std_error,
                    TargetKind::PsiStar => mc.std_error / result.prior_prob,
                };
                value - 2.0 * se >= spec.target
            }
        };
        if cleared {
            let layout = design.layout();
            return Ok(SearchOutcome::Found {
                n_total: n,
                n_e: layout.n_e(),
                n_c: layout.n_c(),
                result,
            });
        }
    }
    Ok(SearchOutcome::Exhausted {
        n_max: spec.n_max,
        limit,
        best,
    })
}

/// Frequentist per-group sizes for a one-sided z test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequentistSize {
    pub n_e: u32,
    pub n_c: u32,
    pub achieved_power: f64,
}

/// Smallest integer group sizes with power at least `power` against the
/// fixed alternative `delta_star`, for a one-sided level-`alpha` z test with
/// known standard deviation and n_E = ceil(ratio * n_C).
pub fn frequentist_n_per_group(
    sd: f64,
    delta_star: f64,
    alpha: f64,
    power: f64,
    allocation_ratio: f64,
) -> Result<FrequentistSize> {
    if !(sd > 0.0 && sd.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sd",
            reason: format!("{sd} is not a positive real"),
        });
    }
    if !(delta_star > 0.0 && delta_star.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "delta_star",
            reason: format!("{delta_star} is not a positive real"),
        });
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("{alpha} is outside (0, 0.5)"),
        });
    }
    if !(power > 0.5 && power < 1.0) {
        return Err(Error::InvalidParameter {
            name: "power",
            reason: format!("{power} is outside (0.5, 1)"),
        });
    }
    check_ratio(allocation_ratio)?;

    let z_alpha = phi_inv(1.0 - alpha);
    let z_power = phi_inv(power);
    let achieved = |n_c: u32| -> f64 {
        let n_e = (allocation_ratio * n_c as f64).ceil().max(1.0);
        let se = sd * (1.0 / n_e + 1.0 / n_c as f64).sqrt();
        phi(delta_star / se - z_alpha)
    };
    // Closed-form real solution, then nudge to the minimal integer.
    let z_sum = z_alpha + z_power;
    let real = (1.0 + 1.0 / allocation_ratio) * (z_sum * sd / delta_star).powi(2);
    let mut n_c = (real - 1e-9).ceil().max(1.0) as u32;
    while achieved(n_c) < power {
        n_c += 1;
    }
    while n_c > 1 && achieved(n_c - 1) >= power {
        n_c -= 1;
    }
    let n_e = (allocation_ratio * n_c as f64).ceil().max(1.0) as u32;
    Ok(FrequentistSize {
        n_e,
        n_c,
        achieved_power: achieved(n_c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn kp_family() -> DesignFamily {
        DesignFamily::known_precision(
            1.0 / 64.0,
            ArmPrior::new(4.0, 2.0).unwrap(),
            ArmPrior::new(0.0, 2.0).unwrap(),
            0.975,
            1.0,
        )
        .unwrap()
    }

    fn mixture_family() -> DesignFamily {
        DesignFamily::mixture_from_moments(0.1, 100.0, 4.0, 64.0, 1.0 / 64.0, 0.975, 1.0).unwrap()
    }

    fn up_family() -> DesignFamily {
        DesignFamily::unknown_precision(
            GammaPrior::new(243.0, 16200.0).unwrap(),
            ArmPrior::new(4.0, 2.0).unwrap(),
            ArmPrior::new(0.0, 2.0).unwrap(),
            0.975,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn family_prior_probs() {
        assert_abs_diff_eq!(kp_family().prior_prob(), phi(0.5), epsilon = 1e-15);
        assert_abs_diff_eq!(
            mixture_family().prior_prob(),
            0.683_160_292_813_041_6,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            up_family().prior_prob(),
            0.687_786_410_486_361_6,
            epsilon = 1e-12
        );
    }

    #[test]
    fn vary_delta_moves_the_experimental_prior_mean() {
        let varied = kp_family().with_vary(VaryParam::Delta, 6.0).unwrap();
        match varied {
            DesignFamily::KnownPrecision { prior_e, prior_c, .. } => {
                assert_eq!(prior_e.mean(), 6.0);
                assert_eq!(prior_c.mean(), 0.0);
                assert_eq!(prior_e.weight(), 2.0);
            }
            _ => unreachable!(),
        }
        assert!(kp_family().with_vary(VaryParam::Rho, 0.1).is_err());
        assert!(mixture_family().with_vary(VaryParam::Delta, 6.0).is_err());
    }

    #[test]
    fn vary_eta_applies_to_all_models() {
        for family in [kp_family(), mixture_family(), up_family()] {
            let varied = family.with_vary(VaryParam::Eta, 0.9).unwrap();
            let d = varied.design_at(40).unwrap();
            let base = family.design_at(40).unwrap();
            // Lower threshold, easier success.
            let s = RandomStream::new(4);
            let easy = d.evaluate(s, 20_000).unwrap().psi;
            let hard = base.evaluate(s, 20_000).unwrap().psi;
            assert!(easy > hard);
        }
    }

    #[test]
    fn vary_rho_resolves_against_held_moments() {
        let varied = mixture_family().with_vary(VaryParam::Rho, 0.5).unwrap();
        match varied {
            DesignFamily::Mixture { prior, moments, .. } => {
                assert_eq!(moments, Some((4.0, 64.0)));
                assert_abs_diff_eq!(prior.effect_mean(), 8.0, epsilon = 1e-12);
                let (m, v) = mixture::prior_moments(&prior);
                assert_abs_diff_eq!(m, 4.0, epsilon = 1e-10);
                assert_abs_diff_eq!(v, 64.0, epsilon = 1e-10);
            }
            _ => unreachable!(),
        }
        // Explicitly given mixture priors have no moments to hold.
        let explicit = DesignFamily::mixture(
            NormalMixturePrior::new(0.1, 100.0, 4.0, 0.015).unwrap(),
            1.0 / 64.0,
            0.975,
            1.0,
        )
        .unwrap();
        assert!(explicit.with_vary(VaryParam::Rho, 0.2).is_err());
    }

    #[test]
    fn sweep_canonical_order_and_skips() {
        // Unknown precision cannot evaluate n = 2: it must be skipped and
        // reported while the rest of the grid still evaluates.
        let spec = SweepSpec::new(
            up_family(),
            vec![2, 20, 40],
            Some((VaryParam::Delta, vec![4.0, 2.0])),
            2_000,
            7,
        )
        .unwrap();
        let out = sweep(&spec).unwrap();
        assert_eq!(out.skipped.len(), 2);
        assert_eq!(out.points.len(), 4);
        let order: Vec<(f64, u32)> = out
            .points
            .iter()
            .map(|p| (p.vary_value.unwrap(), p.n_total))
            .collect();
        assert_eq!(order, vec![(2.0, 20), (2.0, 40), (4.0, 20), (4.0, 40)]);
    }

    #[test]
    fn sweep_points_reproduce_in_isolation() {
        // Point ordinals assign substreams; evaluating the same design with
        // the same substream must reproduce the sweep's numbers exactly.
        let spec = SweepSpec::new(mixture_family(), vec![20, 40], None, 5_000, 11).unwrap();
        let out = sweep(&spec).unwrap();
        let lone = mixture_family()
            .design_at(40)
            .unwrap()
            .evaluate(RandomStream::new(11).substream(1), 5_000)
            .unwrap();
        assert_eq!(out.points[1].result.psi.to_bits(), lone.psi.to_bits());
    }

    #[test]
    fn sweep_validation() {
        assert!(SweepSpec::new(kp_family(), vec![], None, 1000, 0).is_err());
        assert!(SweepSpec::new(kp_family(), vec![10, 10], None, 1000, 0).is_err());
        assert!(SweepSpec::new(kp_family(), vec![20, 10], None, 1000, 0).is_err());
        assert!(SweepSpec::new(mixture_family(), vec![20], None, 10, 0).is_err());
        // Closed-form families ignore reps entirely.
        assert!(SweepSpec::new(kp_family(), vec![20], None, 0, 0).is_ok());
        assert!(SweepSpec::new(
            kp_family(),
            vec![20],
            Some((VaryParam::Delta, vec![])),
            1000,
            0
        )
        .is_err());
        assert!(SweepSpec::new(
            kp_family(),
            vec![20],
            Some((VaryParam::Delta, vec![2.0, 2.0])),
            1000,
            0
        )
        .is_err());
    }

    #[test]
    fn find_min_n_closed_form_is_minimal() {
        let spec = SearchSpec {
            target: 0.79,
            kind: TargetKind::PsiStar,
            n_max: 2000,
            step: 2,
            reps: 0,
            seed: 0,
        };
        let out = find_min_n(&kp_family(), &spec).unwrap();
        match out {
            SearchOutcome::Found { n_total, n_e, n_c, result } => {
                // psi_star(98) = 0.7893, psi_star(100) = 0.7910.
                assert_eq!(n_total, 100);
                assert_eq!((n_e, n_c), (50, 50));
                assert!(result.psi_star >= 0.79);
                // The previous even total misses the target.
                let prev = kp_family()
                    .design_at(98)
                    .unwrap()
                    .evaluate(RandomStream::new(0), 0)
                    .unwrap();
                assert!(prev.psi_star < 0.79);
            }
            _ => panic!("expected a found outcome"),
        }
    }

    #[test]
    fn find_min_n_infeasible_target() {
        let spec = SearchSpec {
            target: 0.75,
            kind: TargetKind::Psi,
            n_max: 2000,
            step: 2,
            reps: 0,
            seed: 0,
        };
        // The psi ceiling for this family is Phi(0.5) = 0.6915.
        let err = find_min_n(&kp_family(), &spec).unwrap_err();
        match err {
            Error::InfeasibleTarget { target, limit } => {
                assert_eq!(target, 0.75);
                assert_abs_diff_eq!(limit, phi(0.5), epsilon = 1e-15);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn find_min_n_exhausts_reachable_but_distant_targets() {
        // 0.69 is under the 0.6915 ceiling but needs n in the hundreds of
        // thousands; a small n_max must exhaust, not error.
        let spec = SearchSpec {
            target: 0.69,
            kind: TargetKind::Psi,
            n_max: 200,
            step: 2,
            reps: 0,
            seed: 0,
        };
        match find_min_n(&kp_family(), &spec).unwrap() {
            SearchOutcome::Exhausted { n_max, limit, best } => {
                assert_eq!(n_max, 200);
                assert_abs_diff_eq!(limit, phi(0.5), epsilon = 1e-15);
                let (n_best, v_best) = best.unwrap();
                assert_eq!(n_best, 200);
                assert!(v_best < 0.69);
            }
            _ => panic!("expected exhaustion"),
        }
    }

    #[test]
    fn find_min_n_skips_totals_too_small_for_the_model() {
        // Step 2 starts at n = 2, which the unknown-precision model rejects;
        // the search must move on rather than fail.
        let spec = SearchSpec {
            target: 0.3,
            kind: TargetKind::Psi,
            n_max: 400,
            step: 2,
            reps: 20_000,
            seed: 5,
        };
        match find_min_n(&up_family(), &spec).unwrap() {
            SearchOutcome::Found { n_total, .. } => assert!(n_total >= 4),
            _ => panic!("expected a found outcome"),
        }
    }

    #[test]
    fn find_min_n_validation() {
        let ok = SearchSpec {
            target: 0.5,
            kind: TargetKind::Psi,
            n_max: 100,
            step: 2,
            reps: 0,
            seed: 0,
        };
        assert!(find_min_n(&kp_family(), &SearchSpec { target: 0.0, ..ok }).is_err());
        assert!(find_min_n(&kp_family(), &SearchSpec { target: 1.0, ..ok }).is_err());
        assert!(find_min_n(&kp_family(), &SearchSpec { step: 0, ..ok }).is_err());
        assert!(find_min_n(&kp_family(), &SearchSpec { n_max: 1, ..ok }).is_err());
        assert!(find_min_n(&mixture_family(), &SearchSpec { reps: 10, ..ok }).is_err());
        // psi_star targets never hit the prior-probability ceiling.
        assert!(find_min_n(
            &kp_family(),
            &SearchSpec {
                target: 0.95,
                kind: TargetKind::PsiStar,
                ..ok
            }
        )
        .is_ok());
    }

    #[test]
    fn frequentist_reference_case() {
        // sd 8, alternative 4, one-sided 0.025, power 0.8, equal arms.
        let f = frequentist_n_per_group(8.0, 4.0, 0.025, 0.8, 1.0).unwrap();
        assert_eq!((f.n_e, f.n_c), (63, 63));
        assert_abs_diff_eq!(f.achieved_power, 0.8013, epsilon = 5e-4);
        // Minimality: one fewer per group falls short.
        let z = phi_inv(0.975);
        let power_62 = phi(4.0 / (8.0 * (2.0 / 62.0_f64).sqrt()) - z);
        assert!(power_62 < 0.8);
    }

    #[test]
    fn frequentist_minimality_across_settings() {
        for &(sd, d, a, p, r) in &[
            (8.0, 4.0, 0.025, 0.8, 1.0),
            (10.0, 3.0, 0.05, 0.9, 1.0),
            (8.0, 4.0, 0.025, 0.8, 2.0),
            (5.0, 2.5, 0.01, 0.85, 0.5),
        ] {
            let f = frequentist_n_per_group(sd, d, a, p, r).unwrap();
            let z = phi_inv(1.0 - a);
            let power = |ne: f64, nc: f64| phi(d / (sd * (1.0 / ne + 1.0 / nc).sqrt()) - z);
            assert!(f.achieved_power >= p);
            assert_abs_diff_eq!(
                f.achieved_power,
                power(f.n_e as f64, f.n_c as f64),
                epsilon = 1e-12
            );
            if f.n_c > 1 {
                let ne_prev = (r * (f.n_c - 1) as f64).ceil().max(1.0);
                assert!(power(ne_prev, (f.n_c - 1) as f64) < p);
            }
        }
    }

    #[test]
    fn frequentist_huge_effects_floor_at_one_per_arm() {
        let f = frequentist_n_per_group(8.0, 1e9, 0.025, 0.8, 1.0).unwrap();
        assert_eq!((f.n_e, f.n_c), (1, 1));
        assert!(f.achieved_power > 0.999);
    }

    #[test]
    fn frequentist_validation() {
        assert!(frequentist_n_per_group(0.0, 4.0, 0.025, 0.8, 1.0).is_err());
        assert!(frequentist_n_per_group(8.0, 0.0, 0.025, 0.8, 1.0).is_err());
        assert!(frequentist_n_per_group(8.0, -4.0, 0.025, 0.8, 1.0).is_err());
        assert!(frequentist_n_per_group(8.0, 4.0, 0.5, 0.8, 1.0).is_err());
        assert!(frequentist_n_per_group(8.0, 4.0, 0.025, 0.5, 1.0).is_err());
        assert!(frequentist_n_per_group(8.0, 4.0, 0.025, 1.0, 1.0).is_err());
        assert!(frequentist_n_per_group(8.0, 4.0, 0.025, 0.8, 0.0).is_err());
    }
}
