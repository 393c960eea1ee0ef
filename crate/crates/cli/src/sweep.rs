//! Depth-0 comparison of every vertex-at-top choice.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wsqaoa_core::engine::StateVector;
use wsqaoa_core::{MetricPair, ProblemKind, RotationChoice, WarmStartKind};

use crate::config::ExperimentConfig;
use crate::pipeline::Prepared;

/// Depth-0 metrics of one instance for rotations onto qubits `0..=n`, then no
/// rotation (last entry).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepInstance {
    pub kind: ProblemKind,
    pub instance: usize,
    pub warmstart: WarmStartKind,
    pub alpha: Vec<f64>,
    pub p_opt: Vec<f64>,
}

/// Argmax counts per rotation column for one (kind, warm-start, metric).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kind: ProblemKind,
    pub warmstart: WarmStartKind,
    pub metric: String,
    pub counts: Vec<usize>,
}

impl SweepRow {
    pub fn modal_column(&self) -> usize {
        argmax(&self.counts.iter().map(|&c| c as f64).collect::<Vec<_>>())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub instances: Vec<SweepInstance>,
}

/// Index of the largest value; the lowest index wins ties.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn rotation_columns(m: usize) -> Vec<RotationChoice> {
    (0..m)
        .map(RotationChoice::Qubit)
        .chain(std::iter::once(RotationChoice::None))
        .collect()
}

/// Uses the configured kinds, instance count, size and embedding
/// warm-starts; depths and rotations are ignored.
pub fn vertex_sweep(cfg: &ExperimentConfig) -> anyhow::Result<SweepResult> {
    let cfg = ExperimentConfig {
        warmstarts: cfg.warmstarts.iter().copied().filter(|w| w.uses_maxcut()).collect(),
        rotations: vec![RotationChoice::None],
        max_depth: 0,
        ..cfg.clone()
    };
    cfg.validate()?;
    let m = cfg.problem_size + 1;
    let columns = rotation_columns(m);

    let cells: Vec<(ProblemKind, usize)> = cfg
        .kinds
        .iter()
        .flat_map(|&k| (0..cfg.instances_per_kind).map(move |i| (k, i)))
        .collect();
    let per_instance: Vec<Vec<SweepInstance>> = cells
        .par_iter()
        .map(|&(k, i)| -> anyhow::Result<Vec<SweepInstance>> {
            let prep = Prepared::build(&cfg, k, i)?;
            cfg.warmstarts
                .iter()
                .map(|&w| {
                    let mut alpha = Vec::with_capacity(columns.len());
                    let mut p_opt = Vec::with_capacity(columns.len());
                    for &rot in &columns {
                        let init = prep.rotated(cfg.master_seed, w, w.name(), rot)?;
                        let state = StateVector::from_product(&init)?;
                        let pair = MetricPair::of(&state, &prep.maxcut_cost)?;
                        alpha.push(pair.alpha);
                        p_opt.push(pair.p_opt);
                    }
                    Ok(SweepInstance {
                        kind: k,
                        instance: i,
                        warmstart: w,
                        alpha,
                        p_opt,
                    })
                })
                .collect()
        })
        .collect::<anyhow::Result<_>>()?;
    let instances: Vec<SweepInstance> = per_instance.into_iter().flatten().collect();

    let mut rows = Vec::new();
    for &k in &cfg.kinds {
        for &w in &cfg.warmstarts {
            for metric in ["alpha", "p_opt"] {
                let mut counts = vec![0; columns.len()];
                for s in instances.iter().filter(|s| s.kind == k && s.warmstart == w) {
                    let values = if metric == "alpha" { &s.alpha } else { &s.p_opt };
                    counts[argmax(values)] += 1;
                }
                rows.push(SweepRow {
                    kind: k,
                    warmstart: w,
                    metric: metric.to_string(),
                    counts,
                });
            }
        }
    }
    Ok(SweepResult {
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
        instances,
    })
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = format!("kind,warmstart,metric,{}\n", self.columns.join(","));
        for r in &self.rows {
            let counts: Vec<String> = r.counts.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("{},{},{},{}\n", r.kind, r.warmstart, r.metric, counts.join(",")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_lowest_index() {
        assert_eq!(argmax(&[0.5, 0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.1, 0.7, 0.7]), 1);
        assert_eq!(argmax(&[0.1, 0.2, 0.9]), 2);
    }

    #[test]
    fn counts_sum_to_instances() {
        let cfg = ExperimentConfig {
            kinds: vec![ProblemKind::RandomContinuous],
            instances_per_kind: 3,
            problem_size: 4,
            warmstarts: vec![WarmStartKind::Gw2, WarmStartKind::Uniform],
            ..ExperimentConfig::tiny()
        };
        let res = vertex_sweep(&cfg).unwrap();
        assert_eq!(res.columns.len(), 6);
        assert_eq!(res.columns.last().unwrap(), "none");
        assert_eq!(res.rows.len(), 2);
        for r in &res.rows {
            assert_eq!(r.counts.iter().sum::<usize>(), 3);
        }
        assert_eq!(res.to_csv().lines().count(), 3);
    }
}
