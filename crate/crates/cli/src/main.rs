use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use wsqaoa_core::metrics::alpha_histogram_sized;
use wsqaoa_core::rng::derive_seed;
use wsqaoa_core::{generate, InstanceSpec, ProblemKind, RotationChoice, WarmStartKind};
use wsqaoa_cli::pipeline::{instance_seed, Prepared};
use wsqaoa_cli::report::{aggregate, aggregate_text, write_aggregate_csv};
use wsqaoa_cli::svg::histogram_chart;
use wsqaoa_cli::{emit_plots, merge_config, read_records, run_experiment, vertex_sweep, ExperimentConfig};

#[derive(Parser)]
#[command(name = "wsqaoa", version, about = "Warm-started QAOA experiments on benchmark QUBOs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instances as JSON.
    Gen(GenArgs),
    /// Solve the relaxations of one instance and print the warm-start angles.
    Relax(RelaxArgs),
    /// Run the full pipeline over depths.
    Run(RunArgs),
    /// Depth-0 vertex-at-top sweep over every rotation choice.
    Sweep0(RunArgs),
    /// Distribution of alpha over all basis states.
    Hist(HistArgs),
    /// Plot metric-vs-depth curves from a records file.
    Plot(PlotArgs),
    /// Print and write aggregates from a records file.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "random-continuous")]
    kind: ProblemKind,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "instances")]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct RelaxFlags {
    /// Perturbation sweeps per BM run.
    #[arg(long)]
    bm_iters: Option<usize>,
    #[arg(long)]
    bm_restarts: Option<usize>,
    /// BM perturbation scale.
    #[arg(long)]
    eta: Option<f64>,
    /// Random frames for GW projection.
    #[arg(long)]
    gw_bases: Option<usize>,
    /// Restart counts for the box warm-start, comma separated.
    #[arg(long, value_delimiter = ',')]
    box_restarts: Option<Vec<usize>>,
}

#[derive(Args)]
struct RelaxArgs {
    #[arg(long, default_value = "random-continuous")]
    kind: ProblemKind,
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long, default_value_t = 16)]
    n: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    relax: RelaxFlags,
}

#[derive(Args)]
struct RunArgs {
    /// JSON file whose keys override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from the small built-in configuration.
    #[arg(long)]
    tiny: bool,
    #[arg(long, value_delimiter = ',')]
    kinds: Option<Vec<ProblemKind>>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Largest depth; depths 0..=DEPTH are run.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    warmstarts: Option<Vec<WarmStartKind>>,
    /// Rotation choices: first, last, none or a qubit index.
    #[arg(long, value_delimiter = ',')]
    rotate: Option<Vec<RotationChoice>>,
    /// Optimizer starts per depth.
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    inherit_best: Option<bool>,
    /// Objective evaluations per start (default 200 per layer).
    #[arg(long)]
    max_evals: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    relax: RelaxFlags,
}

#[derive(Args)]
struct HistArgs {
    #[arg(long, value_delimiter = ',', default_value = "random-continuous")]
    kinds: Vec<ProblemKind>,
    #[arg(long, default_value_t = 50)]
    instances: usize,
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "runs/hist")]
    out: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    records: PathBuf,
    #[arg(long, default_value = "plots")]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    records: PathBuf,
    /// Also write the aggregate CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn apply_relax(cfg: &mut ExperimentConfig, f: &RelaxFlags) {
    if let Some(v) = f.bm_iters {
        cfg.relax.iterations = v;
    }
    if let Some(v) = f.bm_restarts {
        cfg.relax.restarts = v;
    }
    if let Some(v) = f.eta {
        cfg.relax.eta = v;
    }
    if let Some(v) = f.gw_bases {
        cfg.relax.bases_sampled = v;
    }
    if let Some(v) = &f.box_restarts {
        cfg.box_restarts_variants = v.clone();
    }
}

fn build_config(a: &RunArgs) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = if a.tiny {
        ExperimentConfig::tiny()
    } else {
        ExperimentConfig::default()
    };
    if let Some(v) = &a.kinds {
        cfg.kinds = v.clone();
    }
    if let Some(v) = a.instances {
        cfg.instances_per_kind = v;
    }
    if let Some(v) = a.n {
        cfg.problem_size = v;
    }
    if let Some(v) = a.depth {
        cfg.max_depth = v;
    }
    if let Some(v) = &a.warmstarts {
        cfg.warmstarts = v.clone();
    }
    if let Some(v) = &a.rotate {
        cfg.rotations = v.clone();
    }
    if let Some(v) = a.starts {
        cfg.opt.starts = v;
    }
    if let Some(v) = a.inherit_best {
        cfg.opt.inherit_best = v;
    }
    if a.max_evals.is_some() {
        cfg.opt.max_evals = a.max_evals;
    }
    if let Some(v) = a.seed {
        cfg.master_seed = v;
    }
    if let Some(v) = &a.out {
        cfg.out_dir = v.clone();
    }
    apply_relax(&mut cfg, &a.relax);
    if let Some(path) = &a.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let overrides: serde_json::Value = serde_json::from_str(&text)?;
        cfg = merge_config(&cfg, &overrides)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn gen(a: &GenArgs) -> anyhow::Result<bool> {
    std::fs::create_dir_all(&a.out)?;
    for i in 0..a.count {
        let seed = derive_seed(a.seed, &[a.kind.name(), &i.to_string()]);
        let inst = generate(&InstanceSpec {
            kind: a.kind,
            n: a.n,
            seed,
        })?;
        let path = a.out.join(format!("{}-{seed:016x}.json", a.kind.name()));
        std::fs::write(&path, serde_json::to_string_pretty(&inst)?)?;
        println!("{}", path.display());
    }
    Ok(true)
}

fn relax(a: &RelaxArgs) -> anyhow::Result<bool> {
    let mut cfg = ExperimentConfig {
        kinds: vec![a.kind],
        problem_size: a.n,
        master_seed: a.seed,
        ..ExperimentConfig::default()
    };
    apply_relax(&mut cfg, &a.relax);
    cfg.validate()?;
    let prep = Prepared::build(&cfg, a.kind, a.index)?;
    let mut out = serde_json::Map::new();
    out.insert("instance_seed".into(), instance_seed(a.seed, a.kind, a.index).into());
    for w in WarmStartKind::ALL {
        if let Some(e) = prep.embedding(w) {
            let entry = serde_json::json!({
                "objective": e.objective(&prep.maxcut)?,
                "embedding": e,
            });
            out.insert(w.name().into(), entry);
        }
    }
    for v in cfg.variants().iter().filter(|v| v.warmstart == WarmStartKind::Box) {
        let (state, _) = prep.warm_start(cfg.master_seed, v)?;
        out.insert(v.label.clone(), serde_json::to_value(state)?);
    }
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(true)
}

fn run(a: &RunArgs) -> anyhow::Result<bool> {
    let cfg = build_config(a)?;
    log::info!("running {} variants x {} instances", cfg.variants().len(), cfg.kinds.len() * cfg.instances_per_kind);
    let summary = run_experiment(&cfg)?;
    print!("{}", aggregate_text(&aggregate(&summary.records)));
    println!("{} records, {} failed, written to {}", summary.records.len(), summary.failed, cfg.out_dir.display());
    Ok(summary.failed == 0)
}

fn sweep0(a: &RunArgs) -> anyhow::Result<bool> {
    let cfg = build_config(a)?;
    let res = vertex_sweep(&cfg)?;
    let dir = cfg.out_dir.join("aggregates");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("vertex_sweep.csv"), res.to_csv())?;
    std::fs::write(dir.join("vertex_sweep.json"), serde_json::to_string(&res)?)?;
    print!("{}", res.to_csv());
    Ok(true)
}

fn hist(a: &HistArgs) -> anyhow::Result<bool> {
    std::fs::create_dir_all(&a.out)?;
    for &kind in &a.kinds {
        let h = alpha_histogram_sized(kind, a.n, a.instances, a.seed)?;
        std::fs::write(a.out.join(format!("{}_alpha_hist.csv", kind.name())), h.to_csv())?;
        std::fs::write(
            a.out.join(format!("{}_alpha_hist.svg", kind.name())),
            histogram_chart(&format!("{kind}: density of alpha"), &h),
        )?;
        println!(
            "{kind}: samples {} mean {:.4} median {:.4} p_max {:.4}",
            h.samples, h.mean, h.median, h.p_max
        );
    }
    Ok(true)
}

fn plot(a: &PlotArgs) -> anyhow::Result<bool> {
    let records = read_records(&a.records)?;
    for p in emit_plots(&records, &a.out)? {
        println!("{}", p.display());
    }
    Ok(true)
}

fn report(a: &ReportArgs) -> anyhow::Result<bool> {
    let records = read_records(&a.records)?;
    let rows = aggregate(&records);
    print!("{}", aggregate_text(&rows));
    if let Some(out) = &a.out {
        write_aggregate_csv(&rows, out)?;
    }
    Ok(records.iter().all(|r| r.is_ok()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Relax(a) => relax(a),
        Command::Run(a) => run(a),
        Command::Sweep0(a) => sweep0(a),
        Command::Hist(a) => hist(a),
        Command::Plot(a) => plot(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
