//! generate -> relax -> encode -> evolve/optimize -> metrics, per cell.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wsqaoa_core::engine::{build_cost_maxcut, build_cost_qubo, evolve, expectation, optimize};
use wsqaoa_core::relax::{project_gw, solve_bm, solve_box_relaxed, solve_gw};
use wsqaoa_core::rng::derive_seed;
use wsqaoa_core::warmstart::{encode_box, encode_embedding, uniform_state, vertex_at_top};
use wsqaoa_core::{
    generate, qubo_to_maxcut, DiagonalCost, Instance, InstanceSpec, MaxCutInstance, MetricPair,
    ProblemKind, ProductState, QaoaParams, RelaxedEmbedding, RotationChoice, WarmStartKind,
};

use crate::config::{ExperimentConfig, Variant};
use crate::report::{aggregate, write_aggregate_csv};
use crate::svg::emit_plots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub kind: ProblemKind,
    pub instance: usize,
    pub instance_seed: u64,
    pub warmstart: String,
    pub rotation: String,
    pub depth: usize,
    /// `maxcut` for embedding warm-starts, `qubo` otherwise.
    pub space: String,
    pub status: Status,
    pub error: Option<String>,
    pub alpha: Option<f64>,
    pub p_opt: Option<f64>,
    pub expectation: Option<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub pole_qubits: Vec<usize>,
    pub cell_seed: u64,
    pub wall_time_s: f64,
}

impl RunRecord {
    /// Copy with timing removed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_time_s: 0.0,
            ..self.clone()
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

pub fn instance_seed(master: u64, kind: ProblemKind, index: usize) -> u64 {
    derive_seed(master, &[kind.name(), &index.to_string()])
}

pub fn cell_seed(master: u64, kind: ProblemKind, index: usize, v: &Variant, depth: usize) -> u64 {
    derive_seed(
        master,
        &[kind.name(), &index.to_string(), &v.label, &v.rotation_label(), &depth.to_string()],
    )
}

/// Generated instance with its costs and every relaxation the run needs.
pub struct Prepared {
    pub instance: Instance,
    pub index: usize,
    pub maxcut: MaxCutInstance,
    pub maxcut_cost: DiagonalCost,
    pub qubo_cost: DiagonalCost,
    embeddings: BTreeMap<WarmStartKind, RelaxedEmbedding>,
    boxes: BTreeMap<usize, ProductState>,
}

impl Prepared {
    pub fn build(
        cfg: &ExperimentConfig,
        kind: ProblemKind,
        index: usize,
    ) -> wsqaoa_core::Result<Self> {
        let seed = instance_seed(cfg.master_seed, kind, index);
        let instance = generate(&InstanceSpec {
            kind,
            n: cfg.problem_size,
            seed,
        })?;
        let maxcut = qubo_to_maxcut(&instance.qubo);
        let maxcut_cost = build_cost_maxcut(&maxcut)?;
        let qubo_cost = build_cost_qubo(&instance.qubo)?;

        let relax_seed = |family: &str| derive_seed(cfg.master_seed, &[kind.name(), &index.to_string(), family]);
        let mut embeddings = BTreeMap::new();
        let needs_gw = cfg
            .warmstarts
            .iter()
            .any(|w| matches!(w, WarmStartKind::Gw2 | WarmStartKind::Gw3));
        let gw = if needs_gw {
            Some(solve_gw(&maxcut, &cfg.relax.with_seed(relax_seed("gw")))?)
        } else {
            None
        };
        for &w in &cfg.warmstarts {
            let e = match w {
                WarmStartKind::Bm2 => solve_bm(&maxcut, 2, &cfg.relax.with_seed(relax_seed("bm2")))?,
                WarmStartKind::Bm3 => solve_bm(&maxcut, 3, &cfg.relax.with_seed(relax_seed("bm3")))?,
                WarmStartKind::Gw2 | WarmStartKind::Gw3 => {
                    let k = w.embedding_dim().expect("embedding family");
                    let factor = gw.as_ref().expect("solved above");
                    project_gw(factor, &maxcut, k, &cfg.relax.with_seed(relax_seed(w.name())))?
                }
                WarmStartKind::Box | WarmStartKind::Uniform => continue,
            };
            embeddings.insert(w, e);
        }
        let mut boxes = BTreeMap::new();
        if cfg.warmstarts.contains(&WarmStartKind::Box) {
            for &r in &cfg.box_restarts_variants {
                let point = solve_box_relaxed(&instance.qubo, r, relax_seed(&format!("box{r}")))?;
                boxes.insert(r, encode_box(&point, cfg.box_eps)?);
            }
        }
        Ok(Self {
            instance,
            index,
            maxcut,
            maxcut_cost,
            qubo_cost,
            embeddings,
            boxes,
        })
    }

    pub fn kind(&self) -> ProblemKind {
        self.instance.spec.kind
    }

    pub fn embedding(&self, w: WarmStartKind) -> Option<&RelaxedEmbedding> {
        self.embeddings.get(&w)
    }

    /// Initial product state and the cost it runs against.
    pub fn warm_start(
        &self,
        master: u64,
        v: &Variant,
    ) -> wsqaoa_core::Result<(ProductState, &DiagonalCost)> {
        match v.warmstart {
            WarmStartKind::Uniform => Ok((uniform_state(self.instance.qubo.n())?, &self.qubo_cost)),
            WarmStartKind::Box => {
                let r = v.box_restarts.expect("box variant has restarts");
                Ok((self.boxes[&r].clone(), &self.qubo_cost))
            }
            w => {
                let rotation = v.rotation.unwrap_or(RotationChoice::None);
                let state = self.rotated(master, w, &v.label, rotation)?;
                Ok((state, &self.maxcut_cost))
            }
        }
    }

    pub fn rotated(
        &self,
        master: u64,
        w: WarmStartKind,
        label: &str,
        rotation: RotationChoice,
    ) -> wsqaoa_core::Result<ProductState> {
        let e = self.embeddings.get(&w).ok_or_else(|| {
            wsqaoa_core::Error::InvalidInput(format!("no relaxation prepared for {w}"))
        })?;
        let seed = derive_seed(
            master,
            &[self.kind().name(), &self.index.to_string(), label, &rotation.to_string()],
        );
        Ok(encode_embedding(&vertex_at_top(e, rotation, seed)?))
    }
}

fn space_of(v: &Variant) -> &'static str {
    if v.warmstart.uses_maxcut() {
        "maxcut"
    } else {
        "qubo"
    }
}

fn error_record(cfg: &ExperimentConfig, kind: ProblemKind, index: usize, v: &Variant, depth: usize, msg: &str) -> RunRecord {
    RunRecord {
        kind,
        instance: index,
        instance_seed: instance_seed(cfg.master_seed, kind, index),
        warmstart: v.label.clone(),
        rotation: v.rotation_label(),
        depth,
        space: space_of(v).to_string(),
        status: Status::Error,
        error: Some(msg.to_string()),
        alpha: None,
        p_opt: None,
        expectation: None,
        beta: Vec::new(),
        gamma: Vec::new(),
        pole_qubits: Vec::new(),
        cell_seed: cell_seed(cfg.master_seed, kind, index, v, depth),
        wall_time_s: 0.0,
    }
}

/// All depths for one (instance, variant) chain. A failure marks the failing
/// depth and every deeper one.
pub fn run_chain(cfg: &ExperimentConfig, prep: &Prepared, v: &Variant) -> Vec<RunRecord> {
    let kind = prep.kind();
    let mut out = Vec::with_capacity(cfg.max_depth + 1);
    let fail_rest = |out: &mut Vec<RunRecord>, from: usize, msg: &str| {
        for d in from..=cfg.max_depth {
            out.push(error_record(cfg, kind, prep.index, v, d, msg));
        }
    };
    let (init, cost) = match prep.warm_start(cfg.master_seed, v) {
        Ok(x) => x,
        Err(e) => {
            fail_rest(&mut out, 0, &e.to_string());
            return out;
        }
    };
    let poles = init.pole_qubits();
    let mut prev: Option<QaoaParams> = None;
    for depth in 0..=cfg.max_depth {
        let started = Instant::now();
        let seed = cell_seed(cfg.master_seed, kind, prep.index, v, depth);
        let step = || -> wsqaoa_core::Result<(QaoaParams, f64, MetricPair)> {
            let params = if depth == 0 {
                QaoaParams::default()
            } else {
                let inherited = if cfg.opt.inherit_best { prev.as_ref() } else { None };
                optimize(&init, cost, depth, &cfg.opt, seed, inherited)?.0
            };
            let state = evolve(&init, cost, &params)?;
            let e = expectation(&state, cost)?;
            Ok((params, e, MetricPair::of(&state, cost)?))
        };
        match step() {
            Ok((params, e, m)) => {
                out.push(RunRecord {
                    kind,
                    instance: prep.index,
                    instance_seed: prep.instance.spec.seed,
                    warmstart: v.label.clone(),
                    rotation: v.rotation_label(),
                    depth,
                    space: space_of(v).to_string(),
                    status: Status::Ok,
                    error: None,
                    alpha: Some(m.alpha),
                    p_opt: Some(m.p_opt),
                    expectation: Some(e),
                    beta: params.beta.clone(),
                    gamma: params.gamma.clone(),
                    pole_qubits: poles.clone(),
                    cell_seed: seed,
                    wall_time_s: started.elapsed().as_secs_f64(),
                });
                prev = Some(params);
            }
            Err(e) => {
                fail_rest(&mut out, depth, &e.to_string());
                break;
            }
        }
    }
    out
}

/// Records in deterministic order: kind, instance, variant, depth.
pub fn collect_records(cfg: &ExperimentConfig) -> anyhow::Result<Vec<RunRecord>> {
    cfg.validate()?;
    let variants = cfg.variants();
    let cells: Vec<(ProblemKind, usize)> = cfg
        .kinds
        .iter()
        .flat_map(|&k| (0..cfg.instances_per_kind).map(move |i| (k, i)))
        .collect();
    let prepared: Vec<(ProblemKind, usize, wsqaoa_core::Result<Prepared>)> = cells
        .par_iter()
        .map(|&(k, i)| {
            log::info!("preparing {k} #{i}");
            (k, i, Prepared::build(cfg, k, i))
        })
        .collect();
    let chains: Vec<Vec<RunRecord>> = prepared
        .par_iter()
        .flat_map_iter(|(k, i, prep)| variants.iter().map(move |v| (k, i, prep, v)))
        .map(|(&k, &i, prep, v)| match prep {
            Ok(p) => run_chain(cfg, p, v),
            Err(e) => (0..=cfg.max_depth)
                .map(|d| error_record(cfg, k, i, v, d, &e.to_string()))
                .collect(),
        })
        .collect();
    Ok(chains.into_iter().flatten().collect())
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub records: Vec<RunRecord>,
    pub failed: usize,
}

/// Runs every cell and writes instances, records, aggregates and plots under
/// `cfg.out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> anyhow::Result<RunSummary> {
    let records = collect_records(cfg)?;
    let out = &cfg.out_dir;
    for sub in ["instances", "records", "aggregates", "plots"] {
        fs::create_dir_all(out.join(sub)).with_context(|| format!("creating {}", out.join(sub).display()))?;
    }
    fs::write(out.join("config.json"), serde_json::to_string_pretty(cfg)?)?;
    write_instances(cfg, &out.join("instances"))?;
    write_records(&records, &out.join("records").join("records.jsonl"))?;
    let table = aggregate(&records);
    write_aggregate_csv(&table, &out.join("aggregates").join("aggregate.csv"))?;
    emit_plots(&records, &out.join("plots"))?;
    let failed = records.iter().filter(|r| !r.is_ok()).count();
    Ok(RunSummary { records, failed })
}

pub fn write_instances(cfg: &ExperimentConfig, dir: &Path) -> anyhow::Result<()> {
    for &k in &cfg.kinds {
        for i in 0..cfg.instances_per_kind {
            let seed = instance_seed(cfg.master_seed, k, i);
            let spec = InstanceSpec {
                kind: k,
                n: cfg.problem_size,
                seed,
            };
            match generate(&spec) {
                Ok(inst) => fs::write(
                    dir.join(format!("{}-{seed:016x}.json", k.name())),
                    serde_json::to_string(&inst)?,
                )?,
                Err(e) => log::warn!("instance {k} #{i} not written: {e}"),
            }
        }
    }
    Ok(())
}

pub fn write_records(records: &[RunRecord], path: &Path) -> anyhow::Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut f, r)?;
        f.write_all(b"\n")?;
    }
    f.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> anyhow::Result<Vec<RunRecord>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(n, l)| serde_json::from_str(l).with_context(|| format!("line {}", n + 1)))
        .collect()
}
