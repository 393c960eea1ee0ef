use std::path::Path;
use std::process::Command;

use wsqaoa_cli::report::{aggregate, aggregate_csv};
use wsqaoa_cli::{read_records, run_experiment, ExperimentConfig};
use wsqaoa_core::{ProblemKind, RotationChoice, WarmStartKind};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wsqaoa"))
}

fn tiny_cfg(dir: &Path) -> ExperimentConfig {
    ExperimentConfig {
        kinds: vec![ProblemKind::RandomDiscrete, ProblemKind::Portfolio],
        instances_per_kind: 3,
        problem_size: 5,
        max_depth: 2,
        warmstarts: vec![WarmStartKind::Gw2, WarmStartKind::Box, WarmStartKind::Uniform],
        rotations: vec![RotationChoice::Last],
        out_dir: dir.to_path_buf(),
        ..ExperimentConfig::tiny()
    }
}

#[test]
fn row_count_matches_cells_and_aggregates_reproduce() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_cfg(dir.path());
    let summary = run_experiment(&cfg).unwrap();
    assert_eq!(summary.failed, 0);
    // 2 kinds x 3 instances x 3 variants x 3 depths
    assert_eq!(summary.records.len(), 54);

    let csv = std::fs::read_to_string(dir.path().join("aggregates/aggregate.csv")).unwrap();
    // one row per (kind, variant, depth), each over 3 instances
    assert_eq!(csv.lines().count() - 1, 2 * 3 * 3);
    let from_disk = read_records(&dir.path().join("records/records.jsonl")).unwrap();
    let again = aggregate_csv(&aggregate(&from_disk));
    assert_eq!(again.lines().count(), csv.lines().count());
    for (a, b) in again.lines().zip(csv.lines()) {
        for (x, y) in a.split(',').zip(b.split(',')) {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) => assert!((x - y).abs() < 1e-12, "{a}\n{b}"),
                _ => assert_eq!(x, y),
            }
        }
    }
    for row in aggregate(&from_disk) {
        assert_eq!(row.count, 3);
    }
    for r in &from_disk {
        let (a, p) = (r.alpha.unwrap(), r.p_opt.unwrap());
        assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&p));
        assert_eq!(r.beta.len(), r.depth);
    }
    assert_eq!(std::fs::read_dir(dir.path().join("instances")).unwrap().count(), 6);
    assert_eq!(std::fs::read_dir(dir.path().join("plots")).unwrap().count(), 4);
}

#[test]
fn inherited_chains_never_lose_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_experiment(&tiny_cfg(dir.path())).unwrap();
    let mut chains: std::collections::BTreeMap<(ProblemKind, usize, String), Vec<(usize, f64)>> = Default::default();
    for r in &summary.records {
        chains
            .entry((r.kind, r.instance, r.warmstart.clone()))
            .or_default()
            .push((r.depth, r.alpha.unwrap()));
    }
    for (key, mut v) in chains {
        v.sort_by_key(|p| p.0);
        for w in v.windows(2).skip(1) {
            assert!(w[1].1 >= w[0].1 - 1e-6, "{key:?}: {v:?}");
        }
    }
}

#[test]
fn cli_run_report_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let config = dir.path().join("cfg.json");
    std::fs::write(&config, r#"{"instances_per_kind": 1, "max_depth": 1}"#).unwrap();
    let status = bin()
        .args(["run", "--tiny", "--kinds", "mis-nws", "--instances", "4", "--out"])
        .arg(&out)
        .arg("--config")
        .arg(&config)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let records = read_records(&out.join("records/records.jsonl")).unwrap();
    // config file wins over --instances; tiny has 6 variants, depths 0..=1
    assert!(records.iter().all(|r| r.instance == 0 && r.kind == ProblemKind::MisNws));
    assert_eq!(records.len(), 6 * 2);

    let report = bin()
        .args(["report", "--records"])
        .arg(out.join("records/records.jsonl"))
        .output()
        .unwrap();
    assert!(report.status.success());
    assert!(String::from_utf8_lossy(&report.stdout).contains("mis-nws"));

    let plots = dir.path().join("plots");
    let plot = bin()
        .args(["plot", "--records"])
        .arg(out.join("records/records.jsonl"))
        .arg("--out")
        .arg(&plots)
        .output()
        .unwrap();
    assert!(plot.status.success());
    assert_eq!(std::fs::read_dir(&plots).unwrap().count(), 2);
}

#[test]
fn cli_failed_cells_give_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    // 5 variables cannot encode a TSP instance, so every cell fails
    let out = bin()
        .args(["run", "--tiny", "--kinds", "tsp", "--n", "5", "--depth", "0", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let records = read_records(&dir.path().join("records/records.jsonl")).unwrap();
    assert!(!records.is_empty() && records.iter().all(|r| !r.is_ok()));
}

#[test]
fn cli_gen_relax_hist_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let gen = bin()
        .args(["gen", "--kind", "portfolio", "--count", "2", "--n", "6", "--out"])
        .arg(dir.path().join("inst"))
        .output()
        .unwrap();
    assert!(gen.status.success());
    assert_eq!(std::fs::read_dir(dir.path().join("inst")).unwrap().count(), 2);

    let relax = bin()
        .args(["relax", "--kind", "mis-gnp", "--n", "6", "--bm-restarts", "3", "--gw-bases", "5", "--box-restarts", "4"])
        .output()
        .unwrap();
    assert!(relax.status.success(), "{}", String::from_utf8_lossy(&relax.stderr));
    let v: serde_json::Value = serde_json::from_slice(&relax.stdout).unwrap();
    for key in ["bm2", "bm3", "gw2", "gw3", "box4"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let hist = bin()
        .args(["hist", "--kinds", "random-discrete", "--instances", "2", "--n", "6", "--out"])
        .arg(dir.path().join("hist"))
        .output()
        .unwrap();
    assert!(hist.status.success());
    let csv = std::fs::read_to_string(dir.path().join("hist/random-discrete_alpha_hist.csv")).unwrap();
    assert_eq!(csv.lines().count(), 102);

    let sweep = bin()
        .args(["sweep0", "--tiny", "--kinds", "random-continuous", "--instances", "3", "--n", "4", "--out"])
        .arg(dir.path().join("sweep"))
        .output()
        .unwrap();
    assert!(sweep.status.success());
    let text = std::fs::read_to_string(dir.path().join("sweep/aggregates/vertex_sweep.csv")).unwrap();
    assert!(text.starts_with("kind,warmstart,metric,0,1,2,3,4,none"));
}

#[test]
fn bad_arguments_are_rejected() {
    let out = bin().args(["run", "--kinds", "knapsack"]).output().unwrap();
    assert!(!out.status.success());
    let out = bin().args(["run", "--tiny", "--rotate", "sideways"]).output().unwrap();
    assert!(!out.status.success());
}
