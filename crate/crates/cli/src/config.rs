use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use wsqaoa_core::engine::MAX_QUBITS;
use wsqaoa_core::{OptProtocol, ProblemKind, RelaxConfig, RotationChoice, WarmStartKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub kinds: Vec<ProblemKind>,
    pub instances_per_kind: usize,
    /// QUBO variables per instance.
    pub problem_size: usize,
    /// Depths `0..=max_depth` are run for every warm-start.
    pub max_depth: usize,
    pub warmstarts: Vec<WarmStartKind>,
    /// Applied to the Max-Cut embedding warm-starts only.
    pub rotations: Vec<RotationChoice>,
    pub relax: RelaxConfig,
    pub opt: OptProtocol,
    pub box_restarts_variants: Vec<usize>,
    /// Clamp for box values before the angle map.
    pub box_eps: f64,
    pub master_seed: u64,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kinds: ProblemKind::ALL.to_vec(),
            instances_per_kind: 5,
            problem_size: 16,
            max_depth: 5,
            warmstarts: WarmStartKind::ALL.to_vec(),
            rotations: vec![RotationChoice::First, RotationChoice::Last, RotationChoice::None],
            relax: RelaxConfig::default(),
            opt: OptProtocol::default(),
            box_restarts_variants: vec![10, 50],
            box_eps: 0.1,
            master_seed: 0,
            out_dir: PathBuf::from("runs/default"),
        }
    }
}

impl ExperimentConfig {
    /// Small configuration that finishes in seconds.
    pub fn tiny() -> Self {
        Self {
            kinds: vec![ProblemKind::RandomContinuous, ProblemKind::MisGnp],
            instances_per_kind: 2,
            problem_size: 6,
            max_depth: 2,
            warmstarts: vec![WarmStartKind::Gw2, WarmStartKind::Bm3, WarmStartKind::Box, WarmStartKind::Uniform],
            rotations: vec![RotationChoice::Last, RotationChoice::None],
            relax: RelaxConfig {
                restarts: 5,
                bases_sampled: 10,
                ..RelaxConfig::default()
            },
            opt: OptProtocol {
                starts: 3,
                ..OptProtocol::default()
            },
            box_restarts_variants: vec![10],
            out_dir: PathBuf::from("runs/tiny"),
            ..Self::default()
        }
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.kinds.is_empty() || self.warmstarts.is_empty() {
            bail!("kinds and warmstarts must be non-empty");
        }
        if self.instances_per_kind == 0 {
            bail!("instances_per_kind must be positive");
        }
        if self.problem_size == 0 || self.problem_size + 1 > MAX_QUBITS {
            bail!("problem_size must be in 1..={}", MAX_QUBITS - 1);
        }
        if self.warmstarts.iter().any(|w| w.uses_maxcut()) && self.rotations.is_empty() {
            bail!("embedding warm-starts need at least one rotation");
        }
        if self.warmstarts.contains(&WarmStartKind::Box) {
            if self.box_restarts_variants.is_empty() || self.box_restarts_variants.contains(&0) {
                bail!("box warm-start needs positive restart counts");
            }
            if !(self.box_eps > 0.0 && self.box_eps < 0.5) {
                bail!("box_eps must lie in (0, 0.5)");
            }
        }
        if self.opt.starts == 0 {
            bail!("opt.starts must be positive");
        }
        self.relax.validate()?;
        Ok(())
    }

    /// Every warm-start variant run per instance, in output order.
    pub fn variants(&self) -> Vec<Variant> {
        let mut out = Vec::new();
        for &w in &self.warmstarts {
            match w {
                WarmStartKind::Box => {
                    for &r in &self.box_restarts_variants {
                        out.push(Variant {
                            warmstart: w,
                            label: format!("box{r}"),
                            rotation: None,
                            box_restarts: Some(r),
                        });
                    }
                }
                WarmStartKind::Uniform => out.push(Variant {
                    warmstart: w,
                    label: w.name().to_string(),
                    rotation: None,
                    box_restarts: None,
                }),
                _ => {
                    for &rot in &self.rotations {
                        out.push(Variant {
                            warmstart: w,
                            label: w.name().to_string(),
                            rotation: Some(rot),
                            box_restarts: None,
                        });
                    }
                }
            }
        }
        out
    }
}

/// One warm-start recipe: family, restart variant and rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variant {
    pub warmstart: WarmStartKind,
    pub label: String,
    pub rotation: Option<RotationChoice>,
    pub box_restarts: Option<usize>,
}

impl Variant {
    pub fn rotation_label(&self) -> String {
        self.rotation.map_or_else(|| "-".to_string(), |r| r.to_string())
    }
}
