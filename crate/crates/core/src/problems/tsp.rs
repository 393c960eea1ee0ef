//! Symmetric TSP with city 0 pinned to time 0.
//!
//! Variable `4t + i` (for five cities) is 1 when city `i + 1` is visited at
//! time `t + 1`. The tour starts and ends at city 0, so the distance adds the
//! legs from and to city 0 as linear terms.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::Quadratic;
use crate::error::{Error, Result};
use crate::qubo::Qubo;
use crate::rng::stream;

/// Penalty weight relative to the longest distance.
const PENALTY_FACTOR: f64 = 1.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspInstance {
    pub points: Vec<[f64; 2]>,
    pub distances: Vec<Vec<f64>>,
    pub lambda: f64,
}

impl TspInstance {
    pub fn cities(&self) -> usize {
        self.points.len()
    }
}

/// Length of the closed tour visiting `order` (city indices) in sequence.
pub fn tour_length(distances: &[Vec<f64>], order: &[usize]) -> f64 {
    (0..order.len())
        .map(|t| distances[order[t]][order[(t + 1) % order.len()]])
        .sum()
}

/// Returns the instance, its QUBO and the constant with
/// `x^T Q x + constant = -(distance + λ·penalty)`.
pub fn gen_tsp(cities: usize, seed: u64) -> Result<(TspInstance, Qubo, f64)> {
    if cities < 3 {
        return Err(Error::InvalidInput(format!("tsp needs at least 3 cities, got {cities}")));
    }
    let mut rng = stream(seed, 0);
    let points: Vec<[f64; 2]> = (0..cities)
        .map(|_| [rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)])
        .collect();
    let distances: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|r| (p[0] - r[0]).hypot(p[1] - r[1]))
                .collect()
        })
        .collect();
    let max_d = distances.iter().flatten().copied().fold(0.0, f64::max);
    let inst = TspInstance {
        points,
        distances,
        lambda: PENALTY_FACTOR * max_d,
    };
    let (q, c) = tsp_qubo(&inst)?;
    Ok((inst, q, c))
}

fn tsp_qubo(inst: &TspInstance) -> Result<(Qubo, f64)> {
    let r = inst.cities() - 1;
    let a = &inst.distances;
    let var = |t: usize, i: usize| r * t + i;
    let mut cost = Quadratic::new(r * r);

    for i in 0..r {
        cost.linear(var(0, i), a[0][i + 1]);
        cost.linear(var(r - 1, i), a[i + 1][0]);
    }
    for t in 0..r - 1 {
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    cost.bilinear(var(t, i), var(t + 1, j), a[i + 1][j + 1]);
                }
            }
        }
    }
    for t in 0..r {
        let row: Vec<usize> = (0..r).map(|i| var(t, i)).collect();
        cost.one_hot_penalty(&row, inst.lambda);
    }
    for i in 0..r {
        let col: Vec<usize> = (0..r).map(|t| var(t, i)).collect();
        cost.one_hot_penalty(&col, inst.lambda);
    }
    cost.into_negated_qubo()
}
