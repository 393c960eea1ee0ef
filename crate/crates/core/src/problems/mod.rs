//! Seeded benchmark QUBO generators.
//!
//! Every generator is a pure function of `(kind, n, seed)`.

mod mis;
mod portfolio;
mod random;
mod tsp;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::Qubo;

pub use mis::{gen_mis, gnp_graph, is_independent, mis_qubo, nws_graph, Graph, GraphModel, MisInstance, MIS_PENALTY};
pub use portfolio::{gen_portfolio, PortfolioInstance, PORTFOLIO_RISK, PORTFOLIO_STEPS};
pub use random::{gen_random, RandomKind};
pub use tsp::{gen_tsp, tour_length, TspInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    RandomContinuous,
    RandomDiscrete,
    Tsp,
    Portfolio,
    MisGnp,
    MisNws,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 6] = [
        ProblemKind::RandomContinuous,
        ProblemKind::RandomDiscrete,
        ProblemKind::Tsp,
        ProblemKind::Portfolio,
        ProblemKind::MisGnp,
        ProblemKind::MisNws,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::RandomContinuous => "random-continuous",
            ProblemKind::RandomDiscrete => "random-discrete",
            ProblemKind::Tsp => "tsp",
            ProblemKind::Portfolio => "portfolio",
            ProblemKind::MisGnp => "mis-gnp",
            ProblemKind::MisNws => "mis-nws",
        }
    }

    pub fn default_n(self) -> usize {
        16
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown problem kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub kind: ProblemKind,
    pub n: usize,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(kind: ProblemKind, seed: u64) -> Self {
        Self {
            kind,
            n: kind.default_n(),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum InstanceMeta {
    Random,
    Tsp(TspInstance),
    Portfolio(PortfolioInstance),
    Mis(MisInstance),
}

/// A generated problem. The original objective (to be maximized) equals
/// `x^T Q x + constant`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub qubo: Qubo,
    pub constant: f64,
    pub meta: InstanceMeta,
}

pub fn generate(spec: &InstanceSpec) -> Result<Instance> {
    if spec.n == 0 {
        return Err(Error::InvalidInput("instance needs n >= 1".into()));
    }
    let (qubo, constant, meta) = match spec.kind {
        ProblemKind::RandomContinuous => (
            gen_random(RandomKind::Continuous, spec.n, spec.seed),
            0.0,
            InstanceMeta::Random,
        ),
        ProblemKind::RandomDiscrete => (
            gen_random(RandomKind::Discrete, spec.n, spec.seed),
            0.0,
            InstanceMeta::Random,
        ),
        ProblemKind::Tsp => {
            let cities = tsp_cities(spec.n)?;
            let (inst, q, c) = gen_tsp(cities, spec.seed)?;
            (q, c, InstanceMeta::Tsp(inst))
        }
        ProblemKind::Portfolio => {
            let (inst, q, c) = gen_portfolio(spec.n, spec.seed)?;
            (q, c, InstanceMeta::Portfolio(inst))
        }
        ProblemKind::MisGnp => {
            let (inst, q) = gen_mis(GraphModel::Gnp, spec.n, spec.seed)?;
            (q, 0.0, InstanceMeta::Mis(inst))
        }
        ProblemKind::MisNws => {
            let (inst, q) = gen_mis(GraphModel::Nws, spec.n, spec.seed)?;
            (q, 0.0, InstanceMeta::Mis(inst))
        }
    };
    Ok(Instance {
        spec: *spec,
        qubo,
        constant,
        meta,
    })
}

/// City count whose reduced encoding has `n = (cities - 1)^2` variables.
fn tsp_cities(n: usize) -> Result<usize> {
    let r = (n as f64).sqrt().round() as usize;
    if r * r != n || r < 2 {
        return Err(Error::InvalidInput(format!(
            "tsp needs a square variable count of at least 4, got {n}"
        )));
    }
    Ok(r + 1)
}

/// Accumulates a quadratic polynomial `const + Σ c_ab x_a x_b` over binary
/// variables as a symmetric matrix, using `x_a^2 = x_a` for linear terms.
#[derive(Debug, Clone)]
pub(crate) struct Quadratic {
    n: usize,
    m: Vec<f64>,
    constant: f64,
}

impl Quadratic {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            n,
            m: vec![0.0; n * n],
            constant: 0.0,
        }
    }

    pub(crate) fn constant(&mut self, c: f64) {
        self.constant += c;
    }

    pub(crate) fn linear(&mut self, a: usize, c: f64) {
        self.m[a * self.n + a] += c;
    }

    pub(crate) fn bilinear(&mut self, a: usize, b: usize, c: f64) {
        if a == b {
            self.linear(a, c);
        } else {
            self.m[a * self.n + b] += 0.5 * c;
            self.m[b * self.n + a] += 0.5 * c;
        }
    }

    /// `c (1 - Σ_{a∈vars} x_a)^2`.
    pub(crate) fn one_hot_penalty(&mut self, vars: &[usize], c: f64) {
        self.constant(c);
        for (k, &a) in vars.iter().enumerate() {
            self.linear(a, -c);
            for &b in &vars[k + 1..] {
                self.bilinear(a, b, 2.0 * c);
            }
        }
    }

    /// `(Q, constant)` with `x^T Q x + constant` equal to the polynomial.
    pub(crate) fn into_qubo(self) -> Result<(Qubo, f64)> {
        Ok((Qubo::from_row_major(self.n, self.m)?, self.constant))
    }

    /// Same, for the negated polynomial.
    pub(crate) fn into_negated_qubo(self) -> Result<(Qubo, f64)> {
        let m = self.m.into_iter().map(|v| -v).collect();
        Ok((Qubo::from_row_major(self.n, m)?, -self.constant))
    }
}
