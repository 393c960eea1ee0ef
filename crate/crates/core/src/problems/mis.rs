//! Maximum independent set on random connected graphs.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::IndexedRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::Quadratic;
use crate::error::{Error, Result};
use crate::qubo::Qubo;
use crate::rng::{stream, Rng};

pub const MIS_PENALTY: f64 = 1.1;
const GNP_P: f64 = 0.25;
const NWS_K: usize = 3;
const NWS_P: f64 = 0.5;
const RESAMPLE_CAP: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphModel {
    Gnp,
    Nws,
}

/// Simple undirected graph; edges stored with `u < v`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidInput(format!("bad edge ({u}, {v}) for {n} vertices")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisInstance {
    pub model: GraphModel,
    pub graph: Graph,
    pub penalty: f64,
    /// Draws needed to obtain a connected graph.
    pub draws: u64,
}

pub fn is_independent(g: &Graph, x: &[u8]) -> bool {
    g.edges.iter().all(|&(u, v)| x[u] == 0 || x[v] == 0)
}

/// `x^T Q x = Σ x_i - c Σ_{edges} x_u x_v`.
pub fn mis_qubo(g: &Graph, c: f64) -> Result<Qubo> {
    let mut p = Quadratic::new(g.n);
    for i in 0..g.n {
        p.linear(i, 1.0);
    }
    for &(u, v) in &g.edges {
        p.bilinear(u, v, -c);
    }
    Ok(p.into_qubo()?.0)
}

pub fn gnp_graph(n: usize, p: f64, rng: &mut Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("valid edges")
}

/// Ring where each vertex links to `k / 2` neighbours per side, plus one
/// shortcut attempt with probability `p` for every ring edge. Shortcuts never
/// duplicate edges or form loops, so the ring is always kept.
pub fn nws_graph(n: usize, k: usize, p: f64, rng: &mut Rng) -> Graph {
    let mut set = BTreeSet::new();
    let mut ring = Vec::new();
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if u != v && set.insert((u.min(v), u.max(v))) {
                ring.push((u, v));
            }
        }
    }
    let nodes: Vec<usize> = (0..n).collect();
    let mut degree = vec![0usize; n];
    for &(u, v) in &set {
        degree[u] += 1;
        degree[v] += 1;
    }
    for (u, _) in ring {
        if rng.random::<f64>() < p {
            let mut w = *nodes.choose(rng).expect("non-empty");
            let mut saturated = false;
            while w == u || set.contains(&(u.min(w), u.max(w))) {
                if degree[u] >= n - 1 {
                    saturated = true;
                    break;
                }
                w = *nodes.choose(rng).expect("non-empty");
            }
            if !saturated {
                set.insert((u.min(w), u.max(w)));
                degree[u] += 1;
                degree[w] += 1;
            }
        }
    }
    Graph::new(n, set).expect("valid edges")
}

/// Samples until the graph is connected.
pub fn gen_mis(model: GraphModel, n: usize, seed: u64) -> Result<(MisInstance, Qubo)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("mis needs at least 2 vertices, got {n}")));
    }
    let mut rng = stream(seed, 0);
    for draw in 1..=RESAMPLE_CAP {
        let graph = match model {
            GraphModel::Gnp => gnp_graph(n, GNP_P, &mut rng),
            GraphModel::Nws => nws_graph(n, NWS_K, NWS_P, &mut rng),
        };
        if graph.is_connected() {
            let q = mis_qubo(&graph, MIS_PENALTY)?;
            let inst = MisInstance {
                model,
                graph,
                penalty: MIS_PENALTY,
                draws: draw,
            };
            return Ok((inst, q));
        }
    }
    Err(Error::Generation(format!(
        "no connected {model:?} graph on {n} vertices after {RESAMPLE_CAP} draws"
    )))
}
