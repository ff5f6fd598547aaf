//! End-to-end behavior of the `pst` binary: exit codes, output formats,
//! flag/config precedence, and reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pst_cli::config::RunConfig;
use pst_cli::presets;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pst"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn pst_on_a_bundled_scenario_reports_the_closed_form() {
    let out = run(&["pst", "--config", "table1a"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("psi         0.546930"), "{text}");
    assert!(text.contains("psi_star    0.790976"), "{text}");
    assert!(text.contains("prior_prob  0.691462"), "{text}");
    assert!(text.contains("method      closed_form"), "{text}");
    assert!(!text.contains("std_error"), "closed form has no std_error");
}

#[test]
fn n_flag_overrides_the_config() {
    let out = run(&["pst", "--config", "table1a", "--n", "40"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("psi         0.462002"));
}

#[test]
fn monte_carlo_report_includes_std_error_and_seed() {
    let out = run(&["pst", "--config", "table2", "--reps", "20000"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("method      monte_carlo"), "{text}");
    assert!(text.contains("std_error"), "{text}");
    assert!(text.contains("reps        20000"), "{text}");
}

#[test]
fn unknown_config_name_exits_2_and_lists_scenarios() {
    let out = run(&["pst", "--config", "table9"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("table9"), "{err}");
    assert!(err.contains("table1a") && err.contains("fig4"), "{err}");
}

#[test]
fn missing_config_exits_2() {
    let out = run(&["sweep"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--config"));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{ not json").unwrap();
    let out = run(&["pst", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_n_grid_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    let mut cfg = RunConfig::from_json(presets::preset("table1a").unwrap()).unwrap();
    cfg.sweep.as_mut().unwrap().n_grid = Some(vec![]);
    fs::write(&path, cfg.to_json()).unwrap();
    let out = run(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("n_grid"), "{}", stderr(&out));
}

#[test]
fn unwritable_out_path_exits_3() {
    let out = run(&[
        "sweep",
        "--config",
        "table1a",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("/nonexistent-dir/x.csv"));
}

#[test]
fn unknown_format_exits_2() {
    let out = run(&["sweep", "--config", "table1a", "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sweep"));
}

#[test]
fn too_few_reps_exits_2() {
    let out = run(&["pst", "--config", "table2", "--reps", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("below the minimum"));
}

#[test]
fn infeasible_target_exits_4_with_the_limit() {
    let out = run(&[
        "size",
        "--config",
        "table1a",
        "--target",
        "0.70",
        "--kind",
        "psi",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("limit       0.691462"), "{}", stdout(&out));
    assert!(stderr(&out).contains("0.691462"), "{}", stderr(&out));
}

#[test]
fn infeasible_moments_exit_4() {
    let out = run(&[
        "fit",
        "--kind",
        "mixture",
        "--skeptical-weight",
        "0.5",
        "--skeptical-precision",
        "100",
        "--mean",
        "4",
        "--variance",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn gamma_fit_from_flags_matches_the_moment_identities() {
    let out = run(&["fit", "--kind", "gamma", "--mean", "0.015", "--sd", "0.001"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("shape                     225.000000"), "{text}");
    assert!(text.contains("rate                      15000.000000"), "{text}");
}

#[test]
fn sweep_csv_has_the_documented_header_and_canonical_order() {
    let out = run(&["sweep", "--config", "fig1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,vary_name,vary_value,psi,psi_star,std_error"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 96 * 4);
    let keys: Vec<(f64, u32)> = rows
        .iter()
        .map(|r| (r[2].parse().unwrap(), r[0].parse().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
    assert!(rows.iter().all(|r| r[1] == "delta"));
    // Closed-form sweep: std_error column stays empty.
    assert!(rows.iter().all(|r| r[5].is_empty()));
}

#[test]
fn seed_flag_changes_monte_carlo_output_and_reruns_repeat_it() {
    let a1 = run(&["pst", "--config", "table2", "--reps", "20000", "--seed", "1"]);
    let a2 = run(&["pst", "--config", "table2", "--reps", "20000", "--seed", "1"]);
    let b = run(&["pst", "--config", "table2", "--reps", "20000", "--seed", "2"]);
    assert_eq!(stdout(&a1), stdout(&a2));
    assert_ne!(stdout(&a1), stdout(&b));
}

fn parse_csv(text: &str) -> Vec<(u32, String, Option<f64>, f64, f64, Option<f64>)> {
    text.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let opt = |s: &str| (!s.is_empty()).then(|| s.parse().unwrap());
            (
                f[0].parse().unwrap(),
                f[1].to_string(),
                opt(f[2]),
                f[3].parse().unwrap(),
                f[4].parse().unwrap(),
                opt(f[5]),
            )
        })
        .collect()
}

#[test]
fn csv_parses_back_to_the_exact_sweep_points() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("out.csv");
    let out = run(&[
        "sweep",
        "--config",
        "table2",
        "--reps",
        "20000",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    // The same run through the library, for the ground-truth bits.
    let mut cfg = RunConfig::from_json(presets::preset("table2").unwrap()).unwrap();
    cfg.reps = 20_000;
    let outcome = pst_core::design_tools::sweep(&cfg.sweep_spec().unwrap()).unwrap();

    let parsed = parse_csv(&fs::read_to_string(&csv_path).unwrap());
    assert_eq!(parsed.len(), outcome.points.len());
    for (row, point) in parsed.iter().zip(&outcome.points) {
        assert_eq!(row.0, point.n_total);
        assert_eq!(row.1, "none");
        assert_eq!(row.2, None);
        assert_eq!(row.3.to_bits(), point.result.psi.to_bits());
        assert_eq!(row.4.to_bits(), point.result.psi_star.to_bits());
        assert_eq!(
            row.5.unwrap().to_bits(),
            point.result.mc.unwrap().std_error.to_bits()
        );
    }
}

#[test]
fn config_round_trip_reproduces_byte_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::from_json(presets::preset("table2").unwrap()).unwrap();
    cfg.reps = 20_000;

    let first_cfg = dir.path().join("a.json");
    fs::write(&first_cfg, cfg.to_json()).unwrap();
    let first_csv = dir.path().join("a.csv");
    let out = run(&[
        "sweep",
        "--config",
        first_cfg.to_str().unwrap(),
        "--out",
        first_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    // Serialize the loaded config again; the stored form is already
    // canonical, so the text is stable, and the rerun reproduces the bytes.
    let reloaded = RunConfig::from_json(&fs::read_to_string(&first_cfg).unwrap()).unwrap();
    let second_cfg = dir.path().join("b.json");
    fs::write(&second_cfg, reloaded.to_json()).unwrap();
    assert_eq!(
        fs::read_to_string(&first_cfg).unwrap(),
        fs::read_to_string(&second_cfg).unwrap()
    );
    let second_csv = dir.path().join("b.csv");
    let out = run(&[
        "sweep",
        "--config",
        second_cfg.to_str().unwrap(),
        "--out",
        second_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    assert_eq!(
        fs::read(&first_csv).unwrap(),
        fs::read(&second_csv).unwrap()
    );
}

#[test]
fn sweep_warns_on_skipped_points_but_still_writes_the_rest() {
    // n=2 is too small for the unknown-precision model (no degrees of
    // freedom for the pooled variance), so that point is skipped with a
    // warning while the rest of the grid is evaluated.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("skip.json");
    let mut cfg = RunConfig::from_json(presets::preset("fig4").unwrap()).unwrap();
    let sweep = cfg.sweep.as_mut().unwrap();
    sweep.n_from = None;
    sweep.n_to = None;
    sweep.n_step = None;
    sweep.n_grid = Some(vec![2, 40]);
    sweep.vary = None;
    cfg.reps = 2_000;
    fs::write(&path, cfg.to_json()).unwrap();
    let out = run(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("skipped n=2"), "{}", stderr(&out));
    let rows = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].0, 40);
}

#[test]
fn out_flag_overrides_the_config_out_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_out = dir.path().join("from_config.csv");
    let flag_out = dir.path().join("from_flag.csv");
    let path = dir.path().join("cfg.json");
    let mut cfg = RunConfig::from_json(presets::preset("table1a").unwrap()).unwrap();
    cfg.out = Some(cfg_out.to_str().unwrap().to_string());
    fs::write(&path, cfg.to_json()).unwrap();

    let out = run(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(cfg_out.exists(), "config out path used when no flag");

    let out = run(&[
        "sweep",
        "--config",
        path.to_str().unwrap(),
        "--out",
        flag_out.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(flag_out.exists(), "flag wins");
}

#[test]
fn size_prefers_the_target_section_over_frequentist() {
    // table1a has a size section; adding a frequentist section must not
    // change the default mode, but --frequentist switches it.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("both.json");
    let mut cfg = RunConfig::from_json(presets::preset("table1a").unwrap()).unwrap();
    cfg.frequentist = Some(pst_cli::config::FrequentistConfig {
        sd: 8.0,
        delta_star: 4.0,
        alpha: 0.025,
        power: 0.8,
        allocation_ratio: 1.0,
    });
    fs::write(&path, cfg.to_json()).unwrap();

    let by_default = run(&["size", "--config", path.to_str().unwrap()]);
    assert!(stdout(&by_default).contains("mode        target"));
    assert!(stdout(&by_default).contains("n_total     100"));

    let frequentist = run(&["size", "--config", path.to_str().unwrap(), "--frequentist"]);
    assert!(stdout(&frequentist).contains("mode              frequentist"));
    assert!(stdout(&frequentist).contains("n_c               63"));
}

#[test]
fn verify_exit_codes_cover_pass_perturbed_and_precondition() {
    let ok = run(&["verify", "--config", "table1a", "--reps", "20000"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("verdict"), "{}", stdout(&ok));

    let bad = run(&[
        "verify",
        "--config",
        "table1a",
        "--reps",
        "20000",
        "--perturb-tau",
        "1.2",
    ]);
    assert_eq!(bad.status.code(), Some(5), "{}", stderr(&bad));
    assert!(stderr(&bad).contains("discrepancy"), "{}", stderr(&bad));

    let precondition = run(&["verify", "--config", "fig3", "--reps", "20000"]);
    assert_eq!(precondition.status.code(), Some(2));
    assert!(stderr(&precondition).contains("skeptical_weight"));
}

#[test]
fn bundled_scenarios_match_their_files_on_disk() {
    // include_str! snapshots the configs at compile time; this guards
    // against the files drifting from the embedded copies.
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in presets::preset_names() {
        let disk = fs::read_to_string(root.join(format!("{name}.json"))).unwrap();
        assert_eq!(disk, presets::preset(name).unwrap(), "preset {name}");
    }
}
