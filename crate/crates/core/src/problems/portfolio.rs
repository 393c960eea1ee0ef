//! Mean-variance portfolio selection with a budget penalty, on simulated
//! geometric Brownian motion prices.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::Quadratic;
use crate::error::{Error, Result};
use crate::qubo::Qubo;
use crate::rng::stream;

pub const PORTFOLIO_STEPS: usize = 250;
pub const PORTFOLIO_RISK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioInstance {
    /// `n` paths of `PORTFOLIO_STEPS + 1` prices, each starting at 1.
    pub prices: Vec<Vec<f64>>,
    pub drifts: Vec<f64>,
    pub volatilities: Vec<f64>,
    pub sigma: Vec<Vec<f64>>,
    pub mu: Vec<f64>,
    pub budget: usize,
    pub risk: f64,
    pub lambda: f64,
    /// Largest eigenvalue of the generated `Q`.
    pub max_eigenvalue: f64,
}

/// Returns the instance, its QUBO and the constant with
/// `x^T Q x + constant = μ^T x - q x^T Σ x - λ (1^T x - B)^2`.
pub fn gen_portfolio(n: usize, seed: u64) -> Result<(PortfolioInstance, Qubo, f64)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("portfolio needs at least 2 assets, got {n}")));
    }
    let steps = PORTFOLIO_STEPS;
    let mut rng = stream(seed, 0);
    let drifts: Vec<f64> = (0..n).map(|_| rng.random_range(-0.05..=0.05)).collect();
    let volatilities: Vec<f64> = (0..n).map(|_| rng.random_range(-0.20..=0.20)).collect();

    let scale = (steps as f64).sqrt();
    let prices: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let (m, s) = (drifts[i], volatilities[i]);
            let mut w = 0.0;
            let mut path = Vec::with_capacity(steps + 1);
            path.push(1.0);
            for k in 1..=steps {
                let z: f64 = rng.sample(StandardNormal);
                w += z / scale;
                path.push(((m - 0.5 * s * s) * k as f64 / steps as f64 + s * w).exp());
            }
            path
        })
        .collect();

    let returns: Vec<Vec<f64>> = prices
        .iter()
        .map(|p| p.windows(2).map(|w| w[1] / w[0] - 1.0).collect())
        .collect();
    let mu: Vec<f64> = returns
        .iter()
        .map(|r| r.iter().sum::<f64>() / r.len() as f64)
        .collect();
    let sigma: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s: f64 = returns[i]
                        .iter()
                        .zip(&returns[j])
                        .map(|(a, b)| (a - mu[i]) * (b - mu[j]))
                        .sum();
                    s / (steps - 1) as f64
                })
                .collect()
        })
        .collect();

    let budget = n / 2;
    let lambda = sigma.iter().flatten().map(|v| v.abs()).sum::<f64>()
        + mu.iter().map(|v| v.abs()).sum::<f64>();

    let mut obj = Quadratic::new(n);
    for i in 0..n {
        obj.linear(i, mu[i]);
        for j in 0..n {
            obj.bilinear(i, j, -PORTFOLIO_RISK * sigma[i][j]);
        }
    }
    // -λ (Σx - B)^2 = -λ Σ_ij x_i x_j + 2λB Σ x_i - λB^2
    let b = budget as f64;
    obj.constant(-lambda * b * b);
    for i in 0..n {
        obj.linear(i, 2.0 * lambda * b - lambda);
        for j in i + 1..n {
            obj.bilinear(i, j, -2.0 * lambda);
        }
    }
    let (q, c) = obj.into_qubo()?;
    let inst = PortfolioInstance {
        prices,
        drifts,
        volatilities,
        sigma,
        mu,
        budget,
        risk: PORTFOLIO_RISK,
        lambda,
        max_eigenvalue: q.max_eigenvalue(),
    };
    Ok((inst, q, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{brute_force_qubo, BinaryAssignment};

    #[test]
    fn prices_and_statistics() {
        let (inst, _, _) = gen_portfolio(16, 3).unwrap();
        assert_eq!(inst.prices.len(), 16);
        assert!(inst.prices.iter().all(|p| p.len() == 251 && p[0] == 1.0));
        assert!(inst.drifts.iter().all(|m| m.abs() <= 0.05));
        assert!(inst.volatilities.iter().all(|s| s.abs() <= 0.20));
        assert_eq!(inst.budget, 8);
        for i in 0..16 {
            for j in 0..16 {
                assert_eq!(inst.sigma[i][j], inst.sigma[j][i]);
            }
        }
        let sigma = nalgebra::DMatrix::from_fn(16, 16, |i, j| inst.sigma[i][j]);
        let lo = sigma.symmetric_eigenvalues().min();
        assert!(lo >= -1e-9, "covariance eigenvalue {lo}");
        let expected = inst.sigma.iter().flatten().map(|v| v.abs()).sum::<f64>()
            + inst.mu.iter().map(|v| v.abs()).sum::<f64>();
        assert!((inst.lambda - expected).abs() < 1e-12);
    }

    #[test]
    fn qubo_matches_objective() {
        let (inst, q, c) = gen_portfolio(6, 11).unwrap();
        for b in 0..1u64 << 6 {
            let x: Vec<f64> = BinaryAssignment::from_index(b, 6)
                .bits()
                .iter()
                .map(|&v| v as f64)
                .collect();
            let ret: f64 = inst.mu.iter().zip(&x).map(|(m, v)| m * v).sum();
            let mut risk = 0.0;
            for i in 0..6 {
                for j in 0..6 {
                    risk += x[i] * inst.sigma[i][j] * x[j];
                }
            }
            let count: f64 = x.iter().sum();
            let obj = ret - 0.5 * risk - inst.lambda * (count - 3.0).powi(2);
            assert!((q.value_at_index(b) + c - obj).abs() < 1e-9);
        }
    }

    #[test]
    fn budget_feasible_states_and_optimum() {
        let count = (0..1u32 << 16).filter(|b| b.count_ones() == 8).count();
        assert_eq!(count, 12870);
        for seed in 0..3 {
            let (inst, q, _) = gen_portfolio(10, seed).unwrap();
            let bf = brute_force_qubo(&q).unwrap();
            for x in &bf.optima {
                assert_eq!(x.bits().iter().map(|&v| v as usize).sum::<usize>(), inst.budget);
            }
        }
    }
}
