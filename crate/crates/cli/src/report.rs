//! Per-cell aggregates of run records.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use wsqaoa_core::ProblemKind;

use crate::pipeline::RunRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub kind: ProblemKind,
    pub warmstart: String,
    pub rotation: String,
    pub depth: usize,
    pub count: usize,
    pub failed: usize,
    pub alpha_mean: f64,
    pub alpha_std: f64,
    pub p_opt_mean: f64,
    pub p_opt_std: f64,
}

/// Mean and sample standard deviation; zero spread for fewer than two values.
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// One row per (kind, warm-start, rotation, depth), in sorted key order.
pub fn aggregate(records: &[RunRecord]) -> Vec<AggregateRow> {
    type Key = (ProblemKind, String, String, usize);
    let mut groups: BTreeMap<Key, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.kind, r.warmstart.clone(), r.rotation.clone(), r.depth))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((kind, warmstart, rotation, depth), rs)| {
            let ok: Vec<&&RunRecord> = rs.iter().filter(|r| r.is_ok()).collect();
            let alphas: Vec<f64> = ok.iter().filter_map(|r| r.alpha).collect();
            let probs: Vec<f64> = ok.iter().filter_map(|r| r.p_opt).collect();
            let (alpha_mean, alpha_std) = mean_std(&alphas);
            let (p_opt_mean, p_opt_std) = mean_std(&probs);
            AggregateRow {
                kind,
                warmstart,
                rotation,
                depth,
                count: ok.len(),
                failed: rs.len() - ok.len(),
                alpha_mean,
                alpha_std,
                p_opt_mean,
                p_opt_std,
            }
        })
        .collect()
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut out =
        String::from("kind,warmstart,rotation,depth,count,failed,alpha_mean,alpha_std,p_opt_mean,p_opt_std\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.kind, r.warmstart, r.rotation, r.depth, r.count, r.failed, r.alpha_mean, r.alpha_std,
            r.p_opt_mean, r.p_opt_std
        );
    }
    out
}

pub fn write_aggregate_csv(rows: &[AggregateRow], path: &Path) -> anyhow::Result<()> {
    std::fs::write(path, aggregate_csv(rows))?;
    Ok(())
}

/// Fixed-width text table for terminal output.
pub fn aggregate_text(rows: &[AggregateRow]) -> String {
    let mut out = format!(
        "{:<18} {:<9} {:<5} {:>5} {:>5} {:>16} {:>16}\n",
        "kind", "warmstart", "rot", "depth", "n", "alpha", "p_opt"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<18} {:<9} {:<5} {:>5} {:>5} {:>8.4}±{:<7.4} {:>8.4}±{:<7.4}",
            r.kind.name(),
            r.warmstart,
            r.rotation,
            r.depth,
            r.count,
            r.alpha_mean,
            r.alpha_std,
            r.p_opt_mean,
            r.p_opt_std
        );
    }
    out
}
