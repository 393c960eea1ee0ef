//! Batch harness: instances, relaxations, warm-started QAOA runs, aggregates
//! and plots.

pub mod config;
pub mod pipeline;
pub mod report;
pub mod svg;
pub mod sweep;

pub use config::{ExperimentConfig, Variant};
pub use pipeline::{collect_records, read_records, run_experiment, write_records, RunRecord, RunSummary, Status};
pub use report::{aggregate, AggregateRow};
pub use svg::emit_plots;
pub use sweep::{vertex_sweep, SweepResult};

/// Merges the keys of a JSON object over `cfg`.
pub fn merge_config(cfg: &ExperimentConfig, overrides: &serde_json::Value) -> anyhow::Result<ExperimentConfig> {
    let mut base = serde_json::to_value(cfg)?;
    merge(&mut base, overrides);
    Ok(serde_json::from_value(base)?)
}

fn merge(base: &mut serde_json::Value, over: &serde_json::Value) {
    match (base, over) {
        (serde_json::Value::Object(b), serde_json::Value::Object(o)) => {
            for (k, v) in o {
                merge(b.entry(k.clone()).or_insert(serde_json::Value::Null), v);
            }
        }
        (b, o) => *b = o.clone(),
    }
}
