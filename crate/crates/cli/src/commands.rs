//! The five commands behind the subcommands: evaluate one design, sweep a
//! grid, size a trial (Bayesian target or frequentist power), fit
//! hyperparameters, and verify closed forms against Monte Carlo.

use std::path::Path;

use pst_core::design_tools::{
    find_min_n, frequentist_n_per_group, sweep, ModelDesign, SearchOutcome, SearchSpec,
    DEFAULT_SEARCH_N_MAX, DEFAULT_SEARCH_STEP,
};
use pst_core::known_precision::{pst_closed_form, pst_monte_carlo, KnownPrecisionDesign};
use pst_core::mixture::{
    prior_prob_positive_mixture, pst_monte_carlo_mixture, solve_mixture_hyperparams,
};
use pst_core::unknown_precision::{fit_gamma_moments, pst_simulation};
use pst_core::{ArmPrior, Error, Method, RandomStream};

use crate::config::{parse_target_kind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::{deliver, render_csv, Report};

pub fn cmd_pst(cfg: &RunConfig, n_flag: Option<u32>, out: Option<&Path>) -> CliResult<()> {
    let n = n_flag.or(cfg.n).ok_or_else(|| {
        CliError::Config("missing sample size: set top-level \"n\" or pass --n".into())
    })?;
    let family = cfg.family()?;
    let design = family.design_at(n)?;
    let layout = *design.layout();
    let result = design.evaluate(RandomStream::new(cfg.seed), cfg.reps)?;

    let mut report = Report::new();
    report.push("model", family.model_name());
    report.push("method", result.method.as_str());
    report.push_u64("n_total", layout.n_total() as u64);
    report.push_u64("n_e", layout.n_e() as u64);
    report.push_u64("n_c", layout.n_c() as u64);
    report.push_f64("psi", result.psi);
    report.push_f64("psi_star", result.psi_star);
    report.push_f64("prior_prob", result.prior_prob);
    if let Some(mc) = result.mc {
        report.push_f64("std_error", mc.std_error);
        report.push_u64("reps", cfg.reps);
        report.push_u64("seed", cfg.seed);
    }
    deliver(&report.render(), out)
}

pub fn cmd_sweep(cfg: &RunConfig, out: Option<&Path>) -> CliResult<()> {
    let spec = cfg.sweep_spec()?;
    let outcome = sweep(&spec)?;
    for skip in &outcome.skipped {
        match skip.vary_value {
            Some(v) => eprintln!(
                "warning: skipped n={} at vary value {v}: {}",
                skip.n_total, skip.reason
            ),
            None => eprintln!("warning: skipped n={}: {}", skip.n_total, skip.reason),
        }
    }
    deliver(&render_csv(&outcome), out)
}

#[derive(Debug, Default)]
pub struct SizeArgs {
    pub target: Option<f64>,
    pub kind: Option<String>,
    pub n_max: Option<u32>,
    pub step: Option<u32>,
    pub frequentist: bool,
    pub sd: Option<f64>,
    pub delta_star: Option<f64>,
    pub alpha: Option<f64>,
    pub power: Option<f64>,
    pub ratio: Option<f64>,
}

pub fn cmd_size(cfg: Option<&RunConfig>, args: &SizeArgs, out: Option<&Path>) -> CliResult<()> {
    let freq_section = cfg.and_then(|c| c.frequentist.as_ref());
    let wants_target = args.target.is_some() || cfg.is_some_and(|c| c.size.is_some());
    if args.frequentist || (!wants_target && freq_section.is_some()) {
        return cmd_size_frequentist(freq_section, args, out);
    }
    let cfg = cfg.ok_or_else(|| {
        CliError::Config("size needs --config for the design, or --frequentist".into())
    })?;
    let section = cfg.size.as_ref();
    let target = args
        .target
        .or(section.map(|s| s.target))
        .ok_or_else(|| CliError::Config("missing target: set size.target or pass --target".into()))?;
    let kind_name = args
        .kind
        .clone()
        .or_else(|| section.map(|s| s.kind.clone()))
        .unwrap_or_else(|| "psi_star".into());
    let kind = parse_target_kind(&kind_name)?;
    let spec = SearchSpec {
        target,
        kind,
        n_max: args
            .n_max
            .or(section.and_then(|s| s.n_max))
            .unwrap_or(DEFAULT_SEARCH_N_MAX),
        step: args
            .step
            .or(section.and_then(|s| s.step))
            .unwrap_or(DEFAULT_SEARCH_STEP),
        reps: cfg.reps,
        seed: cfg.seed,
    };
    let family = cfg.family()?;

    let mut report = Report::new();
    report.push("mode", "target");
    report.push("model", family.model_name());
    report.push("kind", kind.name());
    report.push_f64("target", target);
    match find_min_n(&family, &spec) {
        Ok(SearchOutcome::Found {
            n_total,
            n_e,
            n_c,
            result,
        }) => {
            report.push_u64("n_total", n_total as u64);
            report.push_u64("n_e", n_e as u64);
            report.push_u64("n_c", n_c as u64);
            report.push_f64("psi", result.psi);
            report.push_f64("psi_star", result.psi_star);
            report.push_f64("prior_prob", result.prior_prob);
            if let Some(mc) = result.mc {
                report.push_f64("std_error", mc.std_error);
            }
            if result.method == Method::MonteCarlo {
                report.push_u64("reps", spec.reps);
                report.push_u64("seed", spec.seed);
            }
            deliver(&report.render(), out)
        }
        Ok(SearchOutcome::Exhausted { n_max, limit, best }) => {
            report.push("feasible", "not reached");
            report.push_u64("n_max", n_max as u64);
            report.push_f64("limit", limit);
            report.push_f64("prior_prob", family.prior_prob());
            if let Some((n, value)) = best {
                report.push_u64("best_n", n as u64);
                report.push_f64("best_value", value);
            }
            deliver(&report.render(), out)?;
            Err(CliError::Infeasible(format!(
                "no total up to {n_max} reached {} = {target}; the limiting value is {limit:.6}",
                kind.name()
            )))
        }
        Err(Error::InfeasibleTarget { target, limit }) => {
            report.push("feasible", "never");
            report.push_f64("limit", limit);
            report.push_f64("prior_prob", family.prior_prob());
            deliver(&report.render(), out)?;
            Err(CliError::Core(Error::InfeasibleTarget { target, limit }))
        }
        Err(other) => Err(other.into()),
    }
}

fn cmd_size_frequentist(
    section: Option<&crate::config::FrequentistConfig>,
    args: &SizeArgs,
    out: Option<&Path>,
) -> CliResult<()> {
    let pick = |flag: Option<f64>, from_cfg: Option<f64>, name: &str| {
        flag.or(from_cfg).ok_or_else(|| {
            CliError::Config(format!("missing {name}: set frequentist.{name} or pass --{name}"))
        })
    };
    let sd = pick(args.sd, section.map(|s| s.sd), "sd")?;
    let delta_star = pick(args.delta_star, section.map(|s| s.delta_star), "delta-star")?;
    let alpha = pick(args.alpha, section.map(|s| s.alpha), "alpha")?;
    let power = pick(args.power, section.map(|s| s.power), "power")?;
    let ratio = args
        .ratio
        .or(section.map(|s| s.allocation_ratio))
        .unwrap_or(1.0);
    let sizes = frequentist_n_per_group(sd, delta_star, alpha, power, ratio)?;

    let mut report = Report::new();
    report.push("mode", "frequentist");
    report.push_f64("sd", sd);
    report.push_f64("delta_star", delta_star);
    report.push_f64("alpha", alpha);
    report.push_f64("power", power);
    report.push_f64("allocation_ratio", ratio);
    report.push_u64("n_e", sizes.n_e as u64);
    report.push_u64("n_c", sizes.n_c as u64);
    report.push_u64("n_total", (sizes.n_e + sizes.n_c) as u64);
    report.push_f64("achieved_power", sizes.achieved_power);
    deliver(&report.render(), out)
}

#[derive(Debug, Default)]
pub struct FitArgs {
    pub kind: Option<String>,
    pub skeptical_weight: Option<f64>,
    pub skeptical_precision: Option<f64>,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub sd: Option<f64>,
}

pub fn cmd_fit(cfg: Option<&RunConfig>, args: &FitArgs, out: Option<&Path>) -> CliResult<()> {
    let section = cfg.and_then(|c| c.fit.as_ref());
    let kind = args
        .kind
        .clone()
        .or_else(|| section.map(|s| s.kind.clone()))
        .ok_or_else(|| CliError::Config("missing fit kind: set fit.kind or pass --kind".into()))?;
    let pick = |flag: Option<f64>, from_cfg: Option<f64>, name: &str| {
        flag.or(from_cfg).ok_or_else(|| {
            CliError::Config(format!("missing {name}: set fit.{name} or pass --{name}"))
        })
    };
    match kind.as_str() {
        "mixture" => {
            let rho = pick(
                args.skeptical_weight,
                section.and_then(|s| s.skeptical_weight),
                "skeptical-weight",
            )?;
            let tau0 = pick(
                args.skeptical_precision,
                section.and_then(|s| s.skeptical_precision),
                "skeptical-precision",
            )?;
            let mean = pick(args.mean, section.and_then(|s| s.mean), "mean")?;
            let variance = pick(args.variance, section.and_then(|s| s.variance), "variance")?;
            let prior = solve_mixture_hyperparams(rho, tau0, mean, variance)?;

            let mut report = Report::new();
            report.push("kind", "mixture");
            report.push_f64("skeptical_weight", rho);
            report.push_f64("skeptical_precision", tau0);
            report.push_f64("target_mean", mean);
            report.push_f64("target_variance", variance);
            report.push_f64("effect_mean", prior.effect_mean());
            report.push_f64("effect_variance", 1.0 / prior.effect_precision());
            report.push("effect_precision", format!("{:.8}", prior.effect_precision()));
            report.push_f64("prior_prob", prior_prob_positive_mixture(&prior));
            deliver(&report.render(), out)
        }
        "gamma" => {
            let mean = pick(args.mean, section.and_then(|s| s.mean), "mean")?;
            let sd = pick(args.sd, section.and_then(|s| s.sd), "sd")?;
            let prior = fit_gamma_moments(mean, sd)?;

            let mut report = Report::new();
            report.push("kind", "gamma");
            report.push_f64("mean", mean);
            report.push("sd", format!("{sd:.6}"));
            report.push_f64("shape", prior.shape());
            report.push_f64("rate", prior.rate());
            report.push_f64("coefficient_of_variation", prior.coefficient_of_variation());
            deliver(&report.render(), out)
        }
        other => Err(CliError::Config(format!(
            "unknown fit kind {other:?}; expected mixture or gamma"
        ))),
    }
}

/// Runs the closed form and the Monte Carlo estimator side by side over a
/// grid of totals and reports the standardized discrepancies. For the
/// mixture model this requires a vanished skeptical component, and for the
/// unknown-precision model an essentially degenerate gamma prior; in both
/// cases the conjugate closed form is then exact for the same design.
///
/// `perturb_tau` multiplies the precision used by the closed-form side only;
/// anything but 1.0 should trip the tolerance, which is how the harness
/// itself is tested.
pub fn cmd_verify(cfg: &RunConfig, perturb_tau: f64, out: Option<&Path>) -> CliResult<()> {
    if !(perturb_tau > 0.0 && perturb_tau.is_finite()) {
        return Err(CliError::Config(format!(
            "perturb-tau must be a positive real, got {perturb_tau}"
        )));
    }
    let grid: Vec<u32> = match (&cfg.verify, &cfg.sweep) {
        (Some(v), _) if v.n_grid.is_some() => v.n_grid.clone().unwrap(),
        (_, Some(s)) => s.grid()?,
        _ => vec![40, 60, 80, 100, 120, 140],
    };
    if grid.is_empty() {
        return Err(CliError::Config("verify grid must not be empty".into()));
    }
    let family = cfg.family()?;
    let base = RandomStream::new(cfg.seed);

    let mut rows = Vec::new();
    for (i, &n) in grid.iter().enumerate() {
        let stream = base.substream(i as u64);
        let (cf, mc) = match family.design_at(n)? {
            ModelDesign::KnownPrecision(d) => {
                let reference = KnownPrecisionDesign::new(
                    perturb_tau * d.precision(),
                    *d.prior_e(),
                    *d.prior_c(),
                    d.eta(),
                    *d.layout(),
                )?;
                (
                    pst_closed_form(&reference).psi,
                    pst_monte_carlo(&d, stream, cfg.reps)?,
                )
            }
            ModelDesign::Mixture(d) => {
                let prior = *d.prior();
                if prior.skeptical_weight() != 0.0 {
                    return Err(CliError::Config(
                        "verify for the mixture model needs skeptical_weight 0, where the \
                         conjugate closed form is exact"
                            .into(),
                    ));
                }
                // With no skeptical mass the effect prior is N(mean, 1/t1);
                // arm priors weighted proportionally to the arm sizes induce
                // exactly that prior on the difference.
                let tau = perturb_tau * d.precision();
                let t1 = prior.effect_precision();
                let (ne, nc) = (d.layout().n_e() as f64, d.layout().n_c() as f64);
                let k = t1 * (ne + nc) / (tau * ne * nc);
                let reference = KnownPrecisionDesign::new(
                    tau,
                    ArmPrior::new(prior.effect_mean(), k * ne)?,
                    ArmPrior::new(0.0, k * nc)?,
                    d.eta(),
                    *d.layout(),
                )?;
                (
                    pst_closed_form(&reference).psi,
                    pst_monte_carlo_mixture(&d, stream, cfg.reps)?,
                )
            }
            ModelDesign::UnknownPrecision(d) => {
                let gamma = *d.tau_prior();
                if gamma.coefficient_of_variation() > 1e-3 {
                    return Err(CliError::Config(format!(
                        "verify for the unknown-precision model needs a gamma prior with \
                         coefficient of variation at most 1e-3 (got {:.3e}), where the \
                         fixed-precision closed form is exact",
                        gamma.coefficient_of_variation()
                    )));
                }
                let reference = KnownPrecisionDesign::new(
                    perturb_tau * gamma.mean(),
                    *d.prior_e(),
                    *d.prior_c(),
                    d.eta(),
                    *d.layout(),
                )?;
                (
                    pst_closed_form(&reference).psi,
                    pst_simulation(&d, stream, cfg.reps)?,
                )
            }
        };
        let se = mc.mc.expect("monte carlo result").std_error;
        let z = if se > 0.0 {
            (cf - mc.psi).abs() / se
        } else if cf == mc.psi {
            0.0
        } else {
            f64::INFINITY
        };
        rows.push((n, cf, mc.psi, se, z));
    }

    let max_z = rows.iter().map(|r| r.4).fold(0.0_f64, f64::max);
    let mut text = String::new();
    let mut head = Report::new();
    head.push("model", family.model_name());
    head.push_u64("points", rows.len() as u64);
    head.push_u64("reps", cfg.reps);
    head.push_u64("seed", cfg.seed);
    if perturb_tau != 1.0 {
        report_perturb(&mut head, perturb_tau);
    }
    text.push_str(&head.render());
    text.push_str(&format!(
        "{:>6}  {:>12}  {:>12}  {:>12}  {:>8}\n",
        "n", "psi_closed", "psi_mc", "std_error", "z"
    ));
    for (n, cf, hat, se, z) in &rows {
        text.push_str(&format!(
            "{n:>6}  {cf:>12.6}  {hat:>12.6}  {se:>12.6}  {z:>8.3}\n"
        ));
    }
    let mut tail = Report::new();
    tail.push_f64("max_abs_z", max_z);
    tail.push_f64("tolerance", 3.0);
    tail.push("verdict", if max_z <= 3.0 { "pass" } else { "fail" });
    text.push_str(&tail.render());
    deliver(&text, out)?;

    if max_z <= 3.0 {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "max standardized discrepancy {max_z:.3} exceeds 3"
        )))
    }
}

fn report_perturb(report: &mut Report, factor: f64) {
    report.push_f64("perturb_tau", factor);
}
