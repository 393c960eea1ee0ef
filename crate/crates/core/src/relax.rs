//! Continuous relaxations that seed warm-starts.
//!
//! * `BM_k` (k = 2, 3): unit vectors parameterized by angles, improved by
//!   greedy randomized perturbation.
//! * GW: the full-rank vector relaxation, solved as a rank-`m` factorization.
//!   The factor is later squeezed to `k` dimensions by [`project_gw`].
//! * Box: `max y^T Q y` over `[0,1]^n`, by projected gradient ascent.
//!
//! All three objectives are "higher is better", matching the maximization
//! convention of the discrete problems.

use std::borrow::Cow;
use std::f64::consts::{PI, TAU};

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::qubo::{MaxCutInstance, Qubo};
use crate::rng::{stream, Rng};

const UNIT_TOL: f64 = 1e-9;
const DEGENERATE_NORM: f64 = 1e-12;

/// Number of independent starts used for the full-rank relaxation. The
/// problem is convex, so restarts only guard against slow convergence.
pub const GW_RESTARTS: u64 = 3;

/// Stream offset separating frame sampling from solver restarts.
const FRAME_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RelaxConfig {
    /// Perturbation sweeps per BM run.
    pub iterations: usize,
    /// Independent BM runs.
    pub restarts: usize,
    /// Standard deviation of each angle perturbation.
    pub eta: f64,
    /// Random frames tried when projecting the GW factor.
    pub bases_sampled: usize,
    pub rng_seed: u64,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        Self {
            iterations: 100,
            restarts: 50,
            eta: 0.05,
            bases_sampled: 50,
            rng_seed: 0,
        }
    }
}

impl RelaxConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 || self.restarts == 0 || self.bases_sampled == 0 {
            return Err(Error::InvalidInput(
                "iterations, restarts and bases_sampled must be positive".into(),
            ));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidInput("eta must be positive".into()));
        }
        Ok(())
    }

    pub fn with_seed(&self, rng_seed: u64) -> Self {
        Self {
            rng_seed,
            ..self.clone()
        }
    }
}

/// `k × n` matrix of unit columns, stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct GramFactor {
    k: usize,
    n: usize,
    data: Vec<f64>,
}

impl GramFactor {
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let n = columns.len();
        let k = columns.first().map_or(0, Vec::len);
        if n == 0 || k == 0 {
            return Err(Error::InvalidInput("factor needs at least one column".into()));
        }
        let mut data = Vec::with_capacity(n * k);
        for c in columns {
            check_dim(k, c.len())?;
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidInput(format!("column norm {norm} is not 1")));
            }
            data.extend_from_slice(c);
        }
        Ok(Self { k, n, data })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    /// `(Y^T Y)_{ij}`.
    pub fn inner(&self, i: usize, j: usize) -> f64 {
        dot(self.column(i), self.column(j))
    }

    pub fn gram(&self) -> Vec<f64> {
        let n = self.n;
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = self.inner(i, j);
            }
        }
        g
    }
}

/// Anything that can be viewed as a set of unit vectors.
pub trait Embedding {
    fn factor(&self) -> Cow<'_, GramFactor>;
}

impl Embedding for GramFactor {
    fn factor(&self) -> Cow<'_, GramFactor> {
        Cow::Borrowed(self)
    }
}

/// Unit vectors in 2 or 3 dimensions, stored as polar / spherical angles.
///
/// `k = 2`: `Y_i = (cos θ_i, sin θ_i)`, `θ ∈ [0, 2π)`.
/// `k = 3`: `Y_i = (sin θ_i cos φ_i, sin θ_i sin φ_i, cos θ_i)`, `θ ∈ [0, π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxedEmbedding {
    k: usize,
    theta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<Vec<f64>>,
}

impl RelaxedEmbedding {
    pub fn planar(theta: Vec<f64>) -> Self {
        Self {
            k: 2,
            theta: theta.into_iter().map(wrap_angle).collect(),
            phi: None,
        }
    }

    pub fn spherical(theta: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        check_dim(theta.len(), phi.len())?;
        let (theta, phi) = theta
            .into_iter()
            .zip(phi)
            .map(|(t, p)| normalize_spherical(t, p))
            .unzip();
        Ok(Self {
            k: 3,
            theta,
            phi: Some(phi),
        })
    }

    /// Angles of the given 2- or 3-vectors (which need not be normalized).
    /// Zero vectors get all angles set to 0.
    pub fn from_vectors(k: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        match k {
            2 => Ok(Self::planar(
                vectors
                    .iter()
                    .map(|v| {
                        if norm(v) < DEGENERATE_NORM {
                            0.0
                        } else {
                            v[1].atan2(v[0])
                        }
                    })
                    .collect(),
            )),
            3 => {
                let (theta, phi) = vectors
                    .iter()
                    .map(|v| {
                        let r = norm(v);
                        if r < DEGENERATE_NORM {
                            (0.0, 0.0)
                        } else {
                            (v[0].hypot(v[1]).atan2(v[2]), v[1].atan2(v[0]))
                        }
                    })
                    .unzip();
                Self::spherical(theta, phi)
            }
            _ => Err(Error::InvalidInput(format!("embedding dimension {k} not in {{2,3}}"))),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi(&self) -> Option<&[f64]> {
        self.phi.as_deref()
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        let t = self.theta[i];
        match &self.phi {
            None => vec![t.cos(), t.sin()],
            Some(phi) => {
                let p = phi[i];
                vec![t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
            }
        }
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.vector(i)).collect()
    }

    pub fn objective(&self, g: &MaxCutInstance) -> Result<f64> {
        relaxation_objective(g, self)
    }
}

impl Embedding for RelaxedEmbedding {
    fn factor(&self) -> Cow<'_, GramFactor> {
        let k = self.k;
        let mut data = Vec::with_capacity(k * self.len());
        for i in 0..self.len() {
            data.extend(self.vector(i));
        }
        Cow::Owned(GramFactor {
            k,
            n: self.len(),
            data,
        })
    }
}

/// `-1/4 Σ_{i,j} A_ij (Y^T Y)_ij`.
pub fn relaxation_objective<E: Embedding + ?Sized>(g: &MaxCutInstance, y: &E) -> Result<f64> {
    let f = y.factor();
    check_dim(g.m(), f.len())?;
    let m = g.m();
    let mut total = 0.0;
    for i in 0..m {
        for j in 0..m {
            let a = g.get(i, j);
            if a != 0.0 {
                total += a * f.inner(i, j);
            }
        }
    }
    Ok(-0.25 * total)
}

/// Rank-`k` relaxation by greedy stochastic ascent over angles.
///
/// Each run draws uniform angles and then, for `cfg.iterations` sweeps, nudges
/// every angle by `eta · N(0,1)` in turn, keeping the move when the objective
/// does not drop. The best of `cfg.restarts` runs is returned.
pub fn solve_bm(g: &MaxCutInstance, k: usize, cfg: &RelaxConfig) -> Result<RelaxedEmbedding> {
    cfg.validate()?;
    if k != 2 && k != 3 {
        return Err(Error::InvalidInput(format!("BM rank {k} not in {{2,3}}")));
    }
    let runs: Vec<(f64, RelaxedEmbedding)> = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(cfg.rng_seed, r);
            let e = bm_run(g, k, cfg, &mut rng);
            let obj = relaxation_objective(g, &e).expect("dimensions checked");
            (obj, e)
        })
        .collect();
    Ok(best_of(runs).1)
}

fn bm_run(g: &MaxCutInstance, k: usize, cfg: &RelaxConfig, rng: &mut Rng) -> RelaxedEmbedding {
    let m = g.m();
    let mut theta: Vec<f64> = (0..m)
        .map(|_| rng.random::<f64>() * if k == 2 { TAU } else { PI })
        .collect();
    let mut phi: Vec<f64> = if k == 3 {
        (0..m).map(|_| rng.random::<f64>() * TAU).collect()
    } else {
        Vec::new()
    };
    let vec_of = |t: f64, p: f64| -> [f64; 3] {
        if k == 2 {
            [t.cos(), t.sin(), 0.0]
        } else {
            [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
        }
    };
    let mut vecs: Vec<[f64; 3]> = (0..m)
        .map(|i| vec_of(theta[i], phi.get(i).copied().unwrap_or(0.0)))
        .collect();

    // Objective change when Y_i moves to `cand`: -1/2 Σ_{j≠i} A_ij (cand - Y_i)·Y_j.
    let gain = |vecs: &[[f64; 3]], i: usize, cand: &[f64; 3]| -> f64 {
        let mut field = [0.0; 3];
        for (j, v) in vecs.iter().enumerate() {
            let a = g.get(i, j);
            if j != i && a != 0.0 {
                for d in 0..3 {
                    field[d] += a * v[d];
                }
            }
        }
        let old = &vecs[i];
        -0.5 * (0..3).map(|d| (cand[d] - old[d]) * field[d]).sum::<f64>()
    };

    for _ in 0..cfg.iterations {
        for i in 0..m {
            let z: f64 = StandardNormal.sample(rng);
            let t = theta[i] + cfg.eta * z;
            let p = phi.get(i).copied().unwrap_or(0.0);
            let cand = vec_of(t, p);
            if gain(&vecs, i, &cand) >= 0.0 {
                theta[i] = t;
                vecs[i] = cand;
            }
            if k == 3 {
                let z: f64 = StandardNormal.sample(rng);
                let p = phi[i] + cfg.eta * z;
                let cand = vec_of(theta[i], p);
                if gain(&vecs, i, &cand) >= 0.0 {
                    phi[i] = p;
                    vecs[i] = cand;
                }
            }
        }
    }
    if k == 2 {
        RelaxedEmbedding::planar(theta)
    } else {
        RelaxedEmbedding::spherical(theta, phi).expect("equal lengths")
    }
}

/// Full-rank vector relaxation `max -1/4 tr(A M)` over unit-diagonal PSD `M`,
/// returned as a factor `Y` with `M = Y^T Y`.
///
/// Solved by exact block-coordinate ascent on a rank-`m` factorization: each
/// column is replaced in turn by the normalized direction of its local field
/// `-Σ_{j≠i} A_ij Y_j`, which is the exact maximizer of the objective in that
/// column. At full rank every local maximum of the factorized problem is a
/// global optimum of the semidefinite program.
pub fn solve_gw(g: &MaxCutInstance, cfg: &RelaxConfig) -> Result<GramFactor> {
    cfg.validate()?;
    let m = g.m();
    let max_sweeps = cfg.iterations.saturating_mul(100).max(1000);
    let runs: Vec<(f64, GramFactor)> = (0..GW_RESTARTS)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(cfg.rng_seed, r);
            let f = mixing_run(g, m, max_sweeps, &mut rng);
            let obj = relaxation_objective(g, &f).expect("dimensions checked");
            (obj, f)
        })
        .collect();
    Ok(best_of(runs).1)
}

fn mixing_run(g: &MaxCutInstance, m: usize, max_sweeps: usize, rng: &mut Rng) -> GramFactor {
    let mut cols: Vec<Vec<f64>> = (0..m).map(|_| random_unit(m, rng)).collect();
    let objective = |cols: &[Vec<f64>]| -> f64 {
        let mut t = 0.0;
        for i in 0..m {
            for j in 0..m {
                t += g.get(i, j) * dot(&cols[i], &cols[j]);
            }
        }
        -0.25 * t
    };
    let mut last = objective(&cols);
    for _ in 0..max_sweeps {
        for i in 0..m {
            let mut field = vec![0.0; m];
            for (j, c) in cols.iter().enumerate() {
                let a = g.get(i, j);
                if j != i && a != 0.0 {
                    for (f, v) in field.iter_mut().zip(c) {
                        *f -= a * v;
                    }
                }
            }
            let r = norm(&field);
            if r > DEGENERATE_NORM {
                cols[i] = field.into_iter().map(|v| v / r).collect();
            }
        }
        let now = objective(&cols);
        if now - last <= 1e-13 * (1.0 + now.abs()) {
            break;
        }
        last = now;
    }
    GramFactor::from_columns(&cols).expect("columns are normalized")
}

/// Projects each column of `y` onto an orthonormal `k`-frame and rescales it
/// to unit length. A column orthogonal to the frame is assigned angle 0.
pub fn project_with_frame(y: &GramFactor, frame: &[Vec<f64>]) -> Result<RelaxedEmbedding> {
    let k = frame.len();
    let projected: Vec<Vec<f64>> = (0..y.len())
        .map(|i| {
            let col = y.column(i);
            frame
                .iter()
                .map(|x| {
                    col.iter()
                        .zip(x)
                        .map(|(a, b)| a * b)
                        .sum::<f64>()
                })
                .collect()
        })
        .collect();
    RelaxedEmbedding::from_vectors(k, &projected)
}

/// Every candidate from projecting `y` onto `cfg.bases_sampled` random frames,
/// with its relaxation objective.
pub fn project_gw_candidates(
    y: &GramFactor,
    g: &MaxCutInstance,
    k: usize,
    cfg: &RelaxConfig,
) -> Result<Vec<(f64, RelaxedEmbedding)>> {
    cfg.validate()?;
    if k != 2 && k != 3 {
        return Err(Error::InvalidInput(format!("projection rank {k} not in {{2,3}}")));
    }
    check_dim(g.m(), y.len())?;
    let dim = y.dim().max(k);
    (0..cfg.bases_sampled as u64)
        .map(|b| {
            let mut rng = stream(cfg.rng_seed, FRAME_STREAM_BASE + b);
            let frame = sample_frame(dim, k, &mut rng);
            // a factor narrower than the frame is zero-padded; the Gram matrix is unchanged
            let frame: Vec<Vec<f64>> = frame.into_iter().map(|x| x[..y.dim()].to_vec()).collect();
            let e = project_with_frame(y, &frame)?;
            Ok((relaxation_objective(g, &e)?, e))
        })
        .collect()
}

/// Best `k`-dimensional projection of the GW factor over random frames.
pub fn project_gw(
    y: &GramFactor,
    g: &MaxCutInstance,
    k: usize,
    cfg: &RelaxConfig,
) -> Result<RelaxedEmbedding> {
    Ok(best_of(project_gw_candidates(y, g, k, cfg)?).1)
}

/// `k` orthonormal vectors in `R^dim` by Gram-Schmidt on Gaussian draws.
/// A numerically dependent draw restarts the whole frame.
fn sample_frame(dim: usize, k: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    'retry: loop {
        let mut frame: Vec<Vec<f64>> = Vec::with_capacity(k);
        for _ in 0..k {
            let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
            for u in &frame {
                let p = dot(&v, u);
                for (a, b) in v.iter_mut().zip(u) {
                    *a -= p * b;
                }
            }
            let r = norm(&v);
            if r < DEGENERATE_NORM {
                continue 'retry;
            }
            v.iter_mut().for_each(|a| *a /= r);
            frame.push(v);
        }
        return frame;
    }
}

/// Point of the box `[0,1]^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxPoint {
    pub y_c: Vec<f64>,
}

impl BoxPoint {
    pub fn new(y_c: Vec<f64>) -> Result<Self> {
        if y_c.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidInput("box point outside [0,1]^n".into()));
        }
        Ok(Self { y_c })
    }

    pub fn value(&self, q: &Qubo) -> f64 {
        box_objective(q, &self.y_c)
    }
}

pub fn box_objective(q: &Qubo, y: &[f64]) -> f64 {
    let n = q.n();
    let mut t = 0.0;
    for i in 0..n {
        let row = &q.as_row_major()[i * n..(i + 1) * n];
        t += y[i] * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    }
    t
}

fn box_gradient(q: &Qubo, y: &[f64]) -> Vec<f64> {
    let n = q.n();
    (0..n)
        .map(|i| {
            let row = &q.as_row_major()[i * n..(i + 1) * n];
            2.0 * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>()
        })
        .collect()
}

/// Local ascent of `y^T Q y` on `[0,1]^n` from `start`, using projected
/// gradient steps with Armijo backtracking.
pub fn box_ascent(q: &Qubo, start: &[f64]) -> Vec<f64> {
    const MAX_ITERS: usize = 5000;
    const ARMIJO: f64 = 1e-4;
    let project = |v: f64| v.clamp(0.0, 1.0);
    let mut y: Vec<f64> = start.iter().map(|&v| project(v)).collect();
    let mut f = box_objective(q, &y);
    let mut step = 1.0;
    for _ in 0..MAX_ITERS {
        let grad = box_gradient(q, &y);
        let mut accepted = None;
        let mut t = step;
        while t > 1e-14 {
            let cand: Vec<f64> = y.iter().zip(&grad).map(|(a, g)| project(a + t * g)).collect();
            let fc = box_objective(q, &cand);
            let decrease: f64 = grad.iter().zip(cand.iter().zip(&y)).map(|(g, (c, a))| g * (c - a)).sum();
            if fc >= f + ARMIJO * decrease {
                accepted = Some((cand, fc, t));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, fc, t)) = accepted else { break };
        let moved = cand.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        y = cand;
        f = fc;
        step = (t * 2.0).min(1.0);
        if moved < 1e-12 {
            break;
        }
    }
    y
}

/// Best local optimum of the box relaxation over `restarts` uniform starts.
/// When `Q` is negative semidefinite the problem is concave and a single start
/// is used.
pub fn solve_box_relaxed(q: &Qubo, restarts: usize, rng_seed: u64) -> Result<BoxPoint> {
    if restarts == 0 {
        return Err(Error::InvalidInput("restarts must be at least 1".into()));
    }
    let starts = if q.max_eigenvalue() <= 1e-9 { 1 } else { restarts };
    let runs: Vec<(f64, Vec<f64>)> = (0..starts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(rng_seed, r);
            let start: Vec<f64> = (0..q.n()).map(|_| rng.random::<f64>()).collect();
            let y = box_ascent(q, &start);
            (box_objective(q, &y), y)
        })
        .collect();
    BoxPoint::new(best_of(runs).1)
}

/// First entry with the largest score.
fn best_of<T>(runs: Vec<(f64, T)>) -> (f64, T) {
    runs.into_iter()
        .reduce(|best, cur| if cur.0 > best.0 { cur } else { best })
        .expect("at least one run")
}

fn random_unit(dim: usize, rng: &mut Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let r = norm(&v);
        if r > DEGENERATE_NORM {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Maps arbitrary `(θ, φ)` to `θ ∈ [0, π]`, `φ ∈ [0, 2π)` describing the same point.
fn normalize_spherical(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(TAU);
    let mut p = phi;
    if t > PI {
        t = TAU - t;
        p += PI;
    }
    (t, wrap_angle(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{brute_force_maxcut, cut_value, qubo_to_maxcut, SpinAssignment};
    use rand::SeedableRng;

    fn random_graph(m: usize, seed: u64) -> MaxCutInstance {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut a = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let v = rng.random::<f64>() * 2.0 - 1.0;
                a[i * m + j] = v;
                a[j * m + i] = v;
            }
        }
        MaxCutInstance::from_row_major(m, a, 0.0).unwrap()
    }

    fn cycle(m: usize) -> MaxCutInstance {
        let edges: Vec<_> = (0..m).map(|i| (i, (i + 1) % m, 1.0)).collect();
        MaxCutInstance::from_edges(m, &edges).unwrap()
    }

    fn cfg(seed: u64) -> RelaxConfig {
        RelaxConfig {
            rng_seed: seed,
            ..RelaxConfig::default()
        }
    }

    fn assert_unit(e: &RelaxedEmbedding) {
        for v in e.vectors() {
            assert!((norm(&v) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn objective_trivial_cases() {
        let zero = MaxCutInstance::from_row_major(3, vec![0.0; 9], 0.0).unwrap();
        let e = RelaxedEmbedding::planar(vec![0.3, 1.0, 2.0]);
        assert_eq!(relaxation_objective(&zero, &e).unwrap(), 0.0);

        let g = random_graph(4, 1);
        let same = RelaxedEmbedding::planar(vec![0.7; 4]);
        assert!((relaxation_objective(&g, &same).unwrap() + g.total() / 4.0).abs() < 1e-12);

        assert!(relaxation_objective(&g, &RelaxedEmbedding::planar(vec![0.0; 3])).is_err());
    }

    #[test]
    fn objective_matches_cut_value_on_spin_embeddings() {
        for seed in 0..10 {
            let g = random_graph(5, seed);
            for b in 0..32u64 {
                let y = SpinAssignment::from_index(b, 5);
                let cols: Vec<Vec<f64>> = y.spins().iter().map(|&s| vec![s as f64, 0.0]).collect();
                let f = GramFactor::from_columns(&cols).unwrap();
                let lhs = relaxation_objective(&g, &f).unwrap();
                assert!((lhs - cut_value(&g, &y, false).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bm_single_vertex() {
        let g = MaxCutInstance::from_row_major(1, vec![0.0], 0.0).unwrap();
        let e = solve_bm(&g, 2, &cfg(3)).unwrap();
        assert_eq!(e.objective(&g).unwrap(), 0.0);
    }

    #[test]
    fn bm_single_edge_goes_antipodal() {
        let g = MaxCutInstance::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let e = solve_bm(&g, 2, &cfg(4)).unwrap();
        let obj = e.objective(&g).unwrap();
        // closed form: -1/2 cos(θ0 - θ1), maximal at separation π
        assert!((obj - 0.5).abs() < 1e-3, "objective {obj}");
        let sep = (e.theta()[0] - e.theta()[1]).rem_euclid(TAU);
        assert!((sep - PI).abs() < 0.1);
    }

    #[test]
    fn bm_triangle_upper_bounds_discrete_optimum() {
        let g = cycle(3);
        let discrete = brute_force_maxcut(&g).unwrap().e_max;
        for k in [2, 3] {
            let e = solve_bm(&g, k, &cfg(5)).unwrap();
            assert_unit(&e);
            let obj = e.objective(&g).unwrap();
            // the cut value (objective + sum(A)/4) must reach at least the best cut of 2
            assert!(obj + g.total() / 4.0 >= 2.0 - 1e-9);
            assert!(obj >= discrete - 1e-9);
            // BM_2 optimum on K3 is the 120° star: -1/4 * 6 * cos(2π/3) = 0.75
            assert!(obj <= 0.75 + 1e-9);
        }
    }

    #[test]
    fn bm_is_deterministic_per_seed() {
        let g = random_graph(6, 9);
        assert_eq!(solve_bm(&g, 3, &cfg(11)).unwrap(), solve_bm(&g, 3, &cfg(11)).unwrap());
        assert_ne!(solve_bm(&g, 3, &cfg(11)).unwrap(), solve_bm(&g, 3, &cfg(12)).unwrap());
    }

    #[test]
    fn bm_rejects_bad_rank() {
        assert!(solve_bm(&cycle(3), 4, &cfg(0)).is_err());
    }

    #[test]
    fn gw_closed_forms() {
        let zero = MaxCutInstance::from_row_major(3, vec![0.0; 9], 0.0).unwrap();
        assert_eq!(relaxation_objective(&zero, &solve_gw(&zero, &cfg(0)).unwrap()).unwrap(), 0.0);

        let edge = MaxCutInstance::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let f = solve_gw(&edge, &cfg(1)).unwrap();
        assert!((relaxation_objective(&edge, &f).unwrap() - 0.5).abs() < 1e-9);

        // 5-cycle: SDP optimum is 5/2 (1 - cos(4π/5)) as a cut, i.e. -5/2 cos(4π/5) in Ising form.
        let c5 = cycle(5);
        let f = solve_gw(&c5, &cfg(2)).unwrap();
        let sdp = relaxation_objective(&c5, &f).unwrap();
        let closed = -2.5 * (4.0 * PI / 5.0).cos();
        assert!((sdp - closed).abs() < 1e-6, "{sdp} vs {closed}");
        let discrete = brute_force_maxcut(&c5).unwrap().e_max;
        assert!(sdp > discrete + 0.5);
    }

    #[test]
    fn gw_dominates_bm_and_discrete() {
        for seed in 0..5 {
            let g = qubo_to_maxcut(&crate::problems::gen_random(
                crate::problems::RandomKind::Continuous,
                6,
                seed,
            ));
            let f = solve_gw(&g, &cfg(seed)).unwrap();
            for i in 0..f.len() {
                assert!((f.inner(i, i) - 1.0).abs() < 1e-9);
            }
            let sdp = relaxation_objective(&g, &f).unwrap();
            let bm = solve_bm(&g, 3, &cfg(seed)).unwrap().objective(&g).unwrap();
            let discrete = brute_force_maxcut(&g).unwrap().e_max;
            assert!(sdp >= bm - 1e-6);
            // fixed-step ascent stops short of tight optima by ~1e-5
            assert!(bm >= discrete - 1e-3);
        }
    }

    #[test]
    fn projection_onto_own_span_is_identity() {
        let e = RelaxedEmbedding::planar(vec![0.1, 2.0, 4.0]);
        let f = e.factor().into_owned();
        let frame = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let p = project_with_frame(&f, &frame).unwrap();
        for (a, b) in p.theta().iter().zip(e.theta()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_of_identical_columns() {
        let g = random_graph(4, 2);
        let col = vec![0.5, 0.5, 0.5, 0.5];
        let f = GramFactor::from_columns(&vec![col; 4]).unwrap();
        for (obj, e) in project_gw_candidates(&f, &g, 3, &cfg(1)).unwrap() {
            assert!((obj + g.total() / 4.0).abs() < 1e-9);
            let v0 = e.vector(0);
            for i in 1..4 {
                assert!(e.vector(i).iter().zip(&v0).all(|(a, b)| (a - b).abs() < 1e-9));
            }
        }
    }

    #[test]
    fn projection_returns_argmax_candidate() {
        let g = random_graph(6, 8);
        let f = solve_gw(&g, &cfg(8)).unwrap();
        for k in [2, 3] {
            let all = project_gw_candidates(&f, &g, k, &cfg(8)).unwrap();
            assert_eq!(all.len(), 50);
            let best = project_gw(&f, &g, k, &cfg(8)).unwrap();
            assert_unit(&best);
            let obj = best.objective(&g).unwrap();
            assert!(all.iter().all(|(o, _)| obj >= *o));
            let discrete = brute_force_maxcut(&g).unwrap().e_max;
            assert!(obj >= discrete - 1e-9, "k={k}: {obj} < {discrete}");
            assert!(obj <= relaxation_objective(&g, &f).unwrap() + 1e-9);
        }
    }

    #[test]
    fn orthogonal_column_gets_zero_angle() {
        let f = GramFactor::from_columns(&[vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]).unwrap();
        let frame = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let p = project_with_frame(&f, &frame).unwrap();
        assert_eq!(p.theta(), &[0.0, 0.0]);
    }

    #[test]
    fn spherical_angles_normalize() {
        let e = RelaxedEmbedding::spherical(vec![-0.5, 4.0], vec![0.2, -1.0]).unwrap();
        let raw = |t: f64, p: f64| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
        for (i, (t, p)) in [(-0.5, 0.2), (4.0, -1.0)].into_iter().enumerate() {
            let want = raw(t, p);
            let got = e.vector(i);
            assert!((0.0..=PI).contains(&e.theta()[i]));
            for d in 0..3 {
                assert!((got[d] - want[d]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn box_relaxation_cases() {
        let neg = Qubo::new(vec![vec![-1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let p = solve_box_relaxed(&neg, 5, 1).unwrap();
        assert!(p.y_c.iter().all(|v| v.abs() < 1e-9));
        assert!(p.value(&neg).abs() < 1e-12);

        let id = Qubo::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(solve_box_relaxed(&id, 5, 1).unwrap().y_c, vec![1.0, 1.0]);

        let off = Qubo::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let p = solve_box_relaxed(&off, 5, 1).unwrap();
        assert_eq!(p.y_c, vec![1.0, 1.0]);
        assert_eq!(p.value(&off), 2.0);

        assert!(solve_box_relaxed(&off, 0, 1).is_err());
    }

    #[test]
    fn box_relaxation_never_beats_grid_optimum() {
        for seed in 0..8 {
            let n = 1 + (seed as usize % 3);
            let q = crate::problems::gen_random(crate::problems::RandomKind::Continuous, n, seed);
            let p = solve_box_relaxed(&q, 10, seed).unwrap();
            let v = p.value(&q);
            let steps = match n {
                1 => 1000,
                2 => 200,
                _ => 40,
            };
            let mut best = f64::NEG_INFINITY;
            let mut idx = vec![0usize; n];
            loop {
                let y: Vec<f64> = idx.iter().map(|&i| i as f64 / steps as f64).collect();
                best = best.max(box_objective(&q, &y));
                let mut d = 0;
                while d < n && idx[d] == steps {
                    idx[d] = 0;
                    d += 1;
                }
                if d == n {
                    break;
                }
                idx[d] += 1;
            }
            // grid misses the true max by at most a grid-spacing term
            assert!(v <= best + 4.0 * n as f64 / steps as f64, "{v} > {best}");
            assert!(v >= best - 1e-6 || n > 1);
        }
    }

    #[test]
    fn box_ascent_never_decreases() {
        let q = crate::problems::gen_random(crate::problems::RandomKind::Discrete, 8, 3);
        let mut rng = stream(5, 0);
        for _ in 0..20 {
            let start: Vec<f64> = (0..8).map(|_| rng.random::<f64>()).collect();
            let end = box_ascent(&q, &start);
            assert!(box_objective(&q, &end) >= box_objective(&q, &start) - 1e-12);
            assert!(end.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
