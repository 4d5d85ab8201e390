mod common;

use common::*;
use eprwmr_cli::read_table;
use eprwmr_core::gaussian::{inference_variance_optimal, SqueezeParams};
use eprwmr_core::schrodinger::absolute_error_xi;
use eprwmr_core::wmr::upper_bound_ub;

fn ok(out: &std::path::Path, args: &[&str]) -> String {
    let o = run_in(out, args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn code(out: &std::path::Path, args: &[&str]) -> (i32, String) {
    let o = run_in(out, args);
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stderr).to_string())
}

#[test]
fn every_mode_and_figure_emits_valid_artifacts() {
    let runs: &[&[&str]] = &[
        &["analytics", "--r", "0,0.5,2"],
        &["error", "--r", "1,2,3"],
        &["criterion", "--case", "I"],
        &["criterion", "--r", "3", "--x1", "2.5"],
        &["simulate", "--setting", "XX", "--n", "12"],
        &["simulate", "--setting", "PP", "--n", "12", "--gT", "1"],
        &["simulate", "--setting", "XP", "--n", "12"],
        &["simulate", "--setting", "single_mode", "--n", "12", "--x1", "2"],
        &["reproduce", "--figure", "p-distribution"],
        &["reproduce", "--figure", "error-xi"],
        &["reproduce", "--figure", "diagram-bins"],
        &["reproduce", "--figure", "bounds"],
        &["reproduce", "--figure", "sup-dynamics", "--n", "10"],
        &["reproduce", "--figure", "epr1", "--n", "10"],
        &["reproduce", "--figure", "epr2", "--n", "10", "--print-config"],
    ];
    for args in runs {
        let dir = tempfile::tempdir().unwrap();
        let stdout = ok(dir.path(), args);
        let files = check_artifacts(dir.path());
        assert!(files >= 2, "{args:?} wrote {files} files");
        let summary_lines = stdout.lines().filter(|l| l.contains(": ") && !l.starts_with(' ') && !l.starts_with('{')).count();
        assert_eq!(summary_lines, files, "{args:?}: one summary line per artifact\n{stdout}");
    }
}

#[test]
fn analytics_table_matches_core() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["analytics", "--r", "0.5,1,2"]);
    let t = read_table(&dir.path().join("analytics.csv")).unwrap();
    for (r, inf) in t.column("r").unwrap().iter().zip(t.column("inference_variance").unwrap()) {
        let want = inference_variance_optimal(&SqueezeParams::new(*r).unwrap());
        assert!((inf - want).abs() <= 1e-8 * want);
    }
    assert!(t.column("epr_satisfied").unwrap().iter().all(|&s| s == 1.0));
}

#[test]
fn error_xi_figure_matches_core() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["reproduce", "--figure", "error-xi", "--r", "1,2,3"]);
    let t = read_table(&dir.path().join("error-xi.csv")).unwrap();
    let (rs, ps, xis) = (t.column("r").unwrap(), t.column("p_b").unwrap(), t.column("xi").unwrap());
    assert_eq!(rs.iter().filter(|&&r| r == 3.0).count(), 401);
    for i in (0..rs.len()).step_by(37) {
        let want = absolute_error_xi(&SqueezeParams::new(rs[i]).unwrap(), ps[i]);
        assert!((xis[i] - want).abs() <= 1e-8 * want.max(1e-12));
    }
    let side = load_json(&dir.path().join("error-xi.json"));
    let curves = side["reference"]["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 3);
    let limit = curves[2]["xi_large_r_limit"].as_f64().unwrap();
    assert!((curves[2]["xi_at_mean_abs_p_b"].as_f64().unwrap() - limit).abs() < 1e-12);
}

#[test]
fn bounds_figure_reference_lines() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["reproduce", "--figure", "bounds"]);
    let side = load_json(&dir.path().join("bounds.json"));
    assert!((side["reference"]["quantum_noise_x1"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    for c in side["reference"]["curves"].as_array().unwrap() {
        let r = c["r"].as_f64().unwrap();
        let p = SqueezeParams::new(r).unwrap();
        assert!((c["quadrature_variance"].as_f64().unwrap() - p.cosh2r() / 2.0).abs() < 1e-9);
        // U_B meets the reference line at the reported edge, which is well above the vacuum marker
        let edge = c["satisfied_below_x1"].as_f64().unwrap();
        assert!((upper_bound_ub(&p, edge).unwrap() / (p.cosh2r() / 2.0) - 1.0).abs() < 1e-9);
        assert!(edge > 2.0 * 0.5f64.sqrt());
    }
    let t = read_table(&dir.path().join("bounds.csv")).unwrap();
    assert_eq!(t.rows.len(), 2 * 301);
}

#[test]
fn epr1_weaker_correlation_at_small_squeezing() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["reproduce", "--figure", "epr1"]);
    let side = load_json(&dir.path().join("epr1.json"));
    let panels = side["reference"]["panels"].as_array().unwrap();
    let corr = |i: usize| panels[i]["reference"]["correlation_sample"].as_f64().unwrap();
    assert_eq!(panels[0]["parameters"]["r"].as_f64(), Some(2.0));
    assert!(corr(0) > 0.99, "{}", corr(0));
    assert!(corr(1) < 0.95, "{}", corr(1));
}

#[test]
fn criterion_case_one_is_satisfied() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["criterion", "--r", "2", "--case", "I"]);
    let report = load_json(&dir.path().join("criterion.json"));
    assert_eq!(report["satisfied"], true);
    assert_eq!(report["method_tag"], "binned_amplified");
    assert!((report["sigma_real"].as_f64().unwrap() - 0.754).abs() < 1e-12);
    let detail = load_json(&dir.path().join("criterion_detail.json"));
    assert!((detail["reference"]["feasibility"]["large_gain_rhs"].as_f64().unwrap() - 500.0 * 2f64.exp()).abs() < 1e-9);
}

#[test]
fn simulate_is_byte_identical_across_reruns_and_threads() {
    let args = ["simulate", "--setting", "XP", "--r", "2", "--gT", "2", "--n", "40", "--seed", "7"];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    ok(a.path(), &args);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    ok(b.path(), &threaded);
    assert_eq!(snapshot(a.path()), snapshot(b.path()));
    let rows = eprwmr_core::sim::read_trajectory_csv(std::fs::File::open(a.path().join("trajectories.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 40 * 201);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"mode": "analytics", "r": [0.5, 1.0], "seed": 3}"#).unwrap();
    let out = dir.path().join("a");
    ok(&out, &["--config", cfg.to_str().unwrap()]);
    assert_eq!(read_table(&out.join("analytics.csv")).unwrap().rows.len(), 2);
    let out = dir.path().join("b");
    ok(&out, &["--config", cfg.to_str().unwrap(), "--r", "2", "--print-config"]);
    let side = load_json(&out.join("analytics.json"));
    assert_eq!(side["config"]["r"], serde_json::json!([2.0]));
    assert_eq!(side["config"]["seed"], 3);
    assert!(schema_errors("config.schema.json", &load_json(&cfg)).is_empty());
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin().args(["analytics", "--r", "1"]).env("EPRWMR_OUT", dir.path()).output().unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("analytics.csv").exists());
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, "{not json").unwrap();
    let unknown_key = dir.path().join("unknown.json");
    std::fs::write(&unknown_key, r#"{"mode": "analytics", "colour": 1}"#).unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();

    let cases: Vec<(Vec<&str>, &std::path::Path, &str)> = vec![
        (vec!["bogus"], dir.path(), "invalid value"),
        (vec![], dir.path(), "no mode"),
        (vec!["--config", bad_json.to_str().unwrap()], dir.path(), "invalid JSON"),
        (vec!["--config", unknown_key.to_str().unwrap()], dir.path(), "unknown field"),
        (vec!["analytics"], blocker.as_path(), "not writable"),
        (vec!["reproduce", "--figure", "fig9"], dir.path(), "valid ids: p-distribution"),
        (vec!["reproduce"], dir.path(), "needs --figure"),
        (vec!["simulate", "--r", "1,2"], dir.path(), "single --r"),
        (vec!["simulate", "--setting", "YY"], dir.path(), "unknown setting"),
        (vec!["criterion", "--r", "2"], dir.path(), "criterion needs"),
        (vec!["analytics", "--T", "1", "--gT", "1"], dir.path(), "either T or gT"),
        (vec!["simulate", "--n", "0"], dir.path(), "--n must be"),
    ];
    let mut messages = Vec::new();
    for (args, out, needle) in cases {
        let (c, err) = code(out, &args);
        assert_eq!(c, 2, "{args:?}: {err}");
        assert!(err.contains(needle), "{args:?}: {err}");
        messages.push(err);
    }
    messages.sort();
    messages.dedup();
    assert_eq!(messages.len(), 12, "each failure has its own message");
}

#[test]
fn numeric_domain_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["criterion", "--r", "2", "--x1", "1000"],
        vec!["analytics", "--r", "13"],
        vec!["simulate", "--dt", "0.5", "--n", "2"],
        vec!["criterion", "--G", "12", "--Delta", "2", "--delta", "3"],
    ] {
        let (c, err) = code(dir.path(), &args);
        assert_eq!(c, 3, "{args:?}: {err}");
    }
}

#[test]
fn help_exits_zero() {
    let o = bin().arg("--help").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for flag in [
        "--config",
        "--mode",
        "--r",
        "--g",
        "--T",
        "--dt",
        "--n",
        "--seed",
        "--setting",
        "--delta",
        "--Delta",
        "--x1",
        "--G",
        "--Delta-p",
        "--figure",
        "--out",
        "--threads",
        "--print-config",
    ] {
        assert!(text.contains(flag), "{flag}");
    }
}
