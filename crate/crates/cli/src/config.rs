//! Run configuration: one JSON document per reproducible run.
//!
//! The document carries the model choice, the full design parameterization,
//! optional per-command sections, and the seed, so re-running a saved config
//! reproduces every number bit for bit. Loading normalizes the variability
//! entry (sd, variance, or precision, exactly one) to precision, the
//! canonical stored form.

use serde::{Deserialize, Serialize};

use pst_core::design_tools::{DesignFamily, SweepSpec, TargetKind, VaryParam};
use pst_core::unknown_precision::{fit_gamma_moments, GammaPrior};
use pst_core::ArmPrior;

use crate::error::{CliError, CliResult};

fn default_ratio() -> f64 {
    1.0
}

fn default_reps() -> u64 {
    100_000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    KnownPrecision,
    Mixture,
    UnknownPrecision,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::KnownPrecision => "known_precision",
            Self::Mixture => "mixture",
            Self::UnknownPrecision => "unknown_precision",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            other => Err(format!("unsupported format {other:?}; expected \"csv\"")),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArmPriorConfig {
    pub mean: f64,
    pub weight: f64,
}

impl ArmPriorConfig {
    fn build(&self) -> CliResult<ArmPrior> {
        Ok(ArmPrior::new(self.mean, self.weight)?)
    }
}

/// Mixture effect prior, given either directly (effect_mean and
/// effect_precision) or through the overall moments to match (target_mean
/// and target_variance). The moments form stays in the config so that
/// sweeps over the skeptical weight can re-solve per value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixturePriorConfig {
    pub skeptical_weight: f64,
    pub skeptical_precision: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effect_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effect_precision: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_variance: Option<f64>,
}

/// Gamma prior for the precision, as shape and rate or as mean and sd.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaPriorConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd: Option<f64>,
}

impl GammaPriorConfig {
    pub fn build(&self) -> CliResult<GammaPrior> {
        match (self.shape, self.rate, self.mean, self.sd) {
            (Some(shape), Some(rate), None, None) => Ok(GammaPrior::new(shape, rate)?),
            (None, None, Some(mean), Some(sd)) => Ok(fit_gamma_moments(mean, sd)?),
            _ => Err(CliError::Config(
                "tau_prior needs exactly one of {shape, rate} or {mean, sd}".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_e: Option<ArmPriorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_c: Option<ArmPriorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixture_prior: Option<MixturePriorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_prior: Option<GammaPriorConfig>,
    pub eta: f64,
    #[serde(default = "default_ratio")]
    pub allocation_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VaryConfig {
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Explicit grid; alternative to the from/to/step triple.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_from: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_to: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_step: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vary: Option<VaryConfig>,
}

impl SweepConfig {
    pub fn grid(&self) -> CliResult<Vec<u32>> {
        match (&self.n_grid, self.n_from, self.n_to, self.n_step) {
            (Some(grid), None, None, None) => Ok(grid.clone()),
            (None, Some(from), Some(to), Some(step)) => {
                if step == 0 {
                    return Err(CliError::Config("sweep.n_step must be positive".into()));
                }
                Ok((from..=to).step_by(step as usize).collect())
            }
            _ => Err(CliError::Config(
                "sweep needs exactly one of n_grid or {n_from, n_to, n_step}".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeConfig {
    pub target: f64,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeptical_weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeptical_precision: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequentistConfig {
    pub sd: f64,
    pub delta_star: f64,
    pub alpha: f64,
    pub power: f64,
    #[serde(default = "default_ratio")]
    pub allocation_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    pub design: DesignConfig,
    /// Total sample size for single-point evaluation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<SizeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequentist: Option<FrequentistConfig>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_reps")]
    pub reps: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let mut cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.normalize()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("config serializes");
        text.push('\n');
        text
    }

    /// Folds the variability entry into the canonical precision field.
    fn normalize(&mut self) -> CliResult<()> {
        let d = &mut self.design;
        let given = [
            ("sd", d.sd),
            ("variance", d.variance),
            ("precision", d.precision),
        ];
        let present: Vec<&str> = given
            .iter()
            .filter_map(|(n, v)| v.is_some().then_some(*n))
            .collect();
        match self.model {
            ModelKind::UnknownPrecision => {
                if !present.is_empty() {
                    return Err(CliError::Config(format!(
                        "design.{} conflicts with model unknown_precision, where the \
                         variability comes from tau_prior",
                        present[0]
                    )));
                }
            }
            _ => {
                if present.len() != 1 {
                    return Err(CliError::Config(
                        "design needs exactly one of sd, variance, precision".into(),
                    ));
                }
                let precision = match (d.sd, d.variance, d.precision) {
                    (Some(sd), None, None) => {
                        check_positive("design.sd", sd)?;
                        1.0 / (sd * sd)
                    }
                    (None, Some(var), None) => {
                        check_positive("design.variance", var)?;
                        1.0 / var
                    }
                    (None, None, Some(p)) => {
                        check_positive("design.precision", p)?;
                        p
                    }
                    _ => unreachable!("exactly one present"),
                };
                d.sd = None;
                d.variance = None;
                d.precision = Some(precision);
            }
        }
        Ok(())
    }

    /// Assembles the design family, cross-checking that only the sections
    /// belonging to the chosen model are present.
    pub fn family(&self) -> CliResult<DesignFamily> {
        let d = &self.design;
        let reject = |field: &str, model: &str| -> CliError {
            CliError::Config(format!("design.{field} is not used by model {model}"))
        };
        match self.model {
            ModelKind::KnownPrecision => {
                if d.mixture_prior.is_some() {
                    return Err(reject("mixture_prior", "known_precision"));
                }
                if d.tau_prior.is_some() {
                    return Err(reject("tau_prior", "known_precision"));
                }
                let prior_e = require(d.prior_e.as_ref(), "design.prior_e")?.build()?;
                let prior_c = require(d.prior_c.as_ref(), "design.prior_c")?.build()?;
                let precision = d.precision.expect("normalized");
                Ok(DesignFamily::known_precision(
                    precision,
                    prior_e,
                    prior_c,
                    d.eta,
                    d.allocation_ratio,
                )?)
            }
            ModelKind::Mixture => {
                if d.prior_e.is_some() || d.prior_c.is_some() {
                    return Err(reject("prior_e/prior_c", "mixture"));
                }
                if d.tau_prior.is_some() {
                    return Err(reject("tau_prior", "mixture"));
                }
                let m = require(d.mixture_prior.as_ref(), "design.mixture_prior")?;
                let precision = d.precision.expect("normalized");
                match (
                    m.effect_mean,
                    m.effect_precision,
                    m.target_mean,
                    m.target_variance,
                ) {
                    (Some(mean), Some(prec), None, None) => {
                        let prior = pst_core::mixture::NormalMixturePrior::new(
                            m.skeptical_weight,
                            m.skeptical_precision,
                            mean,
                            prec,
                        )?;
                        Ok(DesignFamily::mixture(
                            prior,
                            precision,
                            d.eta,
                            d.allocation_ratio,
                        )?)
                    }
                    (None, None, Some(mean), Some(var)) => Ok(DesignFamily::mixture_from_moments(
                        m.skeptical_weight,
                        m.skeptical_precision,
                        mean,
                        var,
                        precision,
                        d.eta,
                        d.allocation_ratio,
                    )?),
                    _ => Err(CliError::Config(
                        "design.mixture_prior needs exactly one of {effect_mean, \
                         effect_precision} or {target_mean, target_variance}"
                            .into(),
                    )),
                }
            }
            ModelKind::UnknownPrecision => {
                if d.mixture_prior.is_some() {
                    return Err(reject("mixture_prior", "unknown_precision"));
                }
                let tau = require(d.tau_prior.as_ref(), "design.tau_prior")?.build()?;
                let prior_e = require(d.prior_e.as_ref(), "design.prior_e")?.build()?;
                let prior_c = require(d.prior_c.as_ref(), "design.prior_c")?.build()?;
                Ok(DesignFamily::unknown_precision(
                    tau,
                    prior_e,
                    prior_c,
                    d.eta,
                    d.allocation_ratio,
                )?)
            }
        }
    }

    pub fn sweep_spec(&self) -> CliResult<SweepSpec> {
        let section = require(self.sweep.as_ref(), "sweep")?;
        let grid = section.grid()?;
        let vary = match &section.vary {
            None => None,
            Some(v) => Some((parse_vary_param(&v.param)?, v.values.clone())),
        };
        Ok(SweepSpec::new(
            self.family()?,
            grid,
            vary,
            self.reps,
            self.seed,
        )?)
    }
}

pub fn parse_vary_param(name: &str) -> CliResult<VaryParam> {
    match name {
        "delta" => Ok(VaryParam::Delta),
        "eta" => Ok(VaryParam::Eta),
        "rho" => Ok(VaryParam::Rho),
        other => Err(CliError::Config(format!(
            "unknown vary parameter {other:?}; expected delta, eta, or rho"
        ))),
    }
}

pub fn parse_target_kind(name: &str) -> CliResult<TargetKind> {
    match name {
        "psi" => Ok(TargetKind::Psi),
        "psi_star" => Ok(TargetKind::PsiStar),
        other => Err(CliError::Config(format!(
            "unknown target kind {other:?}; expected psi or psi_star"
        ))),
    }
}

fn require<'a, T>(value: Option<&'a T>, field: &str) -> CliResult<&'a T> {
    value.ok_or_else(|| CliError::Config(format!("missing required section {field}")))
}

fn check_positive(field: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{field} must be a positive real, got {v}"
        )))
    }
}
