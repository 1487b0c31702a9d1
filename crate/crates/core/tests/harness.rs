use std::path::Path;
use std::process::Command;

use perturba::harness::*;
use perturba::numkernel::{read_matrix, write_matrix};
use perturba::{CMatrix, TOL};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_perturba"));
    c.env_remove(SEED_ENV);
    c
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(Result::unwrap).collect()
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

#[test]
fn config_file_parsing_and_flag_precedence() {
    let cfg = ExperimentConfig::parse(
        "# comment\nexperiment = tower\n\npattern = upper:2\nepsilons = 0.01, 0.02\ntrials = 3\nseed = 9\ndepth = 3\n",
    )
    .unwrap();
    assert_eq!(cfg.experiment, Experiment::Tower);
    assert_eq!(cfg.epsilons, vec![0.01, 0.02]);
    assert_eq!((cfg.trials, cfg.seed, cfg.depth), (3, 9, 3));
    assert_eq!(cfg.pattern().unwrap().dim(), 2);

    assert!(ExperimentConfig::parse("trials = 3").is_err());
    assert!(ExperimentConfig::parse("experiment = stability\ncolour = blue").is_err());
    assert!(ExperimentConfig::parse("experiment = stability\ntrials = many").is_err());
    assert!(ExperimentConfig::parse("experiment = nope").is_err());
    let mut bad = ExperimentConfig::new(Experiment::Stability);
    bad.epsilons = vec![-1.0];
    assert!(run_experiment(&bad).is_err());
}

#[test]
fn pattern_descriptions() {
    assert_eq!(parse_pattern("nest:1,2").unwrap().len(), 7);
    assert_eq!(parse_pattern("upper:3").unwrap().len(), 6);
    assert_eq!(parse_pattern("full:2").unwrap().len(), 4);
    assert_eq!(parse_pattern("diagonal:4").unwrap().len(), 4);
    // 1 → 2 → 3 closes to include 1 → 3.
    let p = parse_pattern("pairs:3:1-2,2-3").unwrap();
    assert!(p.contains(0, 2));
    assert_eq!(p.len(), 6);
    assert!(parse_pattern("pairs:3:1-4").is_err());
    assert!(parse_pattern("wheel:3").is_err());
}

#[test]
fn stability_experiment_medians_decrease() {
    let mut cfg = ExperimentConfig::new(Experiment::Stability);
    cfg.trials = 50;
    cfg.seed = 42;
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 150);
    assert!(rows.iter().all(ResultRow::is_ok));
    let medians: Vec<f64> = cfg
        .epsilons
        .iter()
        .map(|&e| median(rows.iter().filter(|r| r.epsilon == e).map(|r| r.recovery_distance.unwrap()).collect()))
        .collect();
    assert!(medians.windows(2).all(|w| w[0] > w[1]), "{medians:?}");
}

#[test]
fn every_row_is_exact_or_failed() {
    for e in Experiment::ALL {
        let mut cfg = ExperimentConfig::new(e);
        cfg.trials = 3;
        cfg.depth = 3;
        cfg.pattern = Some("upper:2".into());
        cfg.composition = "1,2".into();
        cfg.epsilons = vec![1e-2, 0.2];
        for r in run_experiment(&cfg).unwrap() {
            match r.structural_residual {
                Some(res) if r.is_ok() => assert!(res <= TOL.struct_tol(64), "{r:?}"),
                _ => assert!(r.status.starts_with("FAILED:"), "{r:?}"),
            }
        }
    }
}

#[test]
fn failed_rows_name_the_stage() {
    let mut cfg = ExperimentConfig::new(Experiment::Stability);
    cfg.trials = 2;
    cfg.epsilons = vec![1.5];
    let rows = run_experiment(&cfg).unwrap();
    for r in rows {
        assert!(r.status.starts_with("FAILED:") && r.status.len() > 7, "{}", r.status);
        assert_eq!(r.recovery_distance, None);
    }
}

#[test]
fn zero_trials_give_header_only_csv() {
    let mut cfg = ExperimentConfig::new(Experiment::NormfixSweep);
    cfg.trials = 0;
    let rows = run_experiment(&cfg).unwrap();
    let mut out = Vec::new();
    write_csv(&rows, &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), CSV_COLUMNS.join(",") + "\n");
}

#[test]
fn trial_streams_are_independent_and_reproducible() {
    use rand::RngCore;
    let a = trial_rng(5, 0).next_u64();
    assert_eq!(a, trial_rng(5, 0).next_u64());
    assert_ne!(a, trial_rng(5, 1).next_u64());
    assert_ne!(a, trial_rng(6, 0).next_u64());
}

#[test]
fn manifest_round_trip() {
    let cfg = ExperimentConfig::new(Experiment::RegularStability);
    let m = Manifest::new(&cfg);
    assert_eq!(Manifest::from_json(&m.to_json()).unwrap(), m);
    let tampered = m.to_json().replace("\"structure\": 1e-9", "\"structure\": 1e-6");
    assert!(Manifest::from_json(&tampered).is_err());
}

#[test]
fn experiment_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let status = bin()
        .args(["experiment", "--experiment", "regular-stability", "--pattern", "upper:3", "--trials", "4"])
        .arg("--out-dir")
        .arg(&a)
        .status()
        .unwrap();
    assert!(status.success());
    let status = bin()
        .arg("experiment")
        .arg("--manifest")
        .arg(a.join("manifest.json"))
        .arg("--out-dir")
        .arg(&b)
        .status()
        .unwrap();
    assert!(status.success());
    for f in ["results.csv", "manifest.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn seed_precedence_config_env_flag() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "experiment = normfix-sweep\npattern = full:3\ntrials = 1\nseed = 1\n").unwrap();
    let seed_of = |env: Option<&str>, flag: Option<&str>| {
        let out = dir.path().join("out");
        let mut c = bin();
        c.arg("experiment").arg("--config").arg(&config).arg("--out-dir").arg(&out);
        if let Some(v) = env {
            c.env(SEED_ENV, v);
        }
        if let Some(v) = flag {
            c.args(["--seed", v]);
        }
        assert!(c.status().unwrap().success());
        let m = Manifest::from_json(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
        m.config.seed
    };
    assert_eq!(seed_of(None, None), 1);
    assert_eq!(seed_of(Some("7"), None), 7);
    assert_eq!(seed_of(Some("7"), Some("11")), 11);
}

#[test]
fn experiment_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["experiment", "--experiment", "wormhole"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown experiment"));

    let status = bin()
        .args(["experiment", "--experiment", "tower", "--trials", "0"])
        .arg("--out-dir")
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(csv_rows(&dir.path().join("results.csv")).is_empty());
}

#[test]
fn project_command() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("b.json");
    write_matrix(&input, &CMatrix::from_real_diag(&[0.1, 0.9])).unwrap();
    assert_eq!(bin().arg("project").arg(&input).status().unwrap().code(), Some(0));
    let p = read_matrix(dir.path().join("b.corrected.json")).unwrap();
    assert_eq!(p, CMatrix::from_real_diag(&[0.0, 1.0]));
    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.certificate.json")).unwrap()).unwrap();
    assert!((cert["correction_distance"].as_f64().unwrap() - 0.1).abs() < 1e-15);

    let half = dir.path().join("h.json");
    write_matrix(&half, &CMatrix::from_real_diag(&[0.5])).unwrap();
    let out = bin().arg("project").arg(&half).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("hypothesis not met") && msg.contains("1/4"), "{msg}");
}

#[test]
fn triangularize_command() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("v.json");
    let (c, s) = (0.1f64.cos(), 0.1f64.sin());
    write_matrix(&input, &CMatrix::from_real(2, 2, &[c, -s, s, c])).unwrap();
    let out = dir.path().join("w.json");
    let status = bin()
        .arg("triangularize")
        .arg(&input)
        .args(["--composition", "1,1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(read_matrix(&out).unwrap().dist(&CMatrix::identity(2)) <= 1e-14);
}

#[test]
fn remaining_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name);
    let run = |args: &[&Path]| bin().args(args).output().unwrap();

    write_matrix(path("v.json"), &CMatrix::from_real(2, 2, &[0.0, 1.05, 0.02, 0.0])).unwrap();
    let out = run(&[Path::new("pisofix"), &path("v.json")]);
    assert_eq!(out.status.code(), Some(0));
    let w = read_matrix(path("v.corrected.json")).unwrap();
    assert!(w.pisometry_defect() <= 1e-12);

    write_matrix(path("n.json"), &CMatrix::from_real(2, 2, &[0.0, 0.97, 0.9, 0.05])).unwrap();
    assert_eq!(run(&[Path::new("normfix"), &path("n.json")]).status.code(), Some(0));
    assert_eq!(read_matrix(path("n.corrected.json")).unwrap(), CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    let out = bin().arg("normfix").arg(path("n.json")).args(["--pattern", "upper:2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    write_matrix(path("p.json"), &CMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
    write_matrix(path("q.json"), &CMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
    assert_eq!(run(&[Path::new("conjugate"), &path("p.json"), &path("q.json")]).status.code(), Some(2));
    assert_eq!(run(&[Path::new("conjugate"), &path("p.json"), &path("p.json")]).status.code(), Some(0));
    assert_eq!(read_matrix(path("p.corrected.json")).unwrap(), CMatrix::identity(2));

    write_matrix(path("x.json"), &CMatrix::from_real(2, 2, &[1.0, 0.0, 0.3, 1.0])).unwrap();
    let out = bin().arg("distance").arg(path("x.json")).args(["--composition", "1,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path("x.distance.json")).unwrap()).unwrap();
    assert_eq!(report["kind"], "nest");
    assert!((report["distance"].as_f64().unwrap() - 0.3).abs() < 1e-12);

    assert_eq!(run(&[Path::new("project"), &path("missing.json")]).status.code(), Some(1));
    write_matrix(path("r.json"), &CMatrix::from_real(1, 2, &[1.0, 0.0])).unwrap();
    assert_eq!(run(&[Path::new("project"), &path("r.json")]).status.code(), Some(1));
}
