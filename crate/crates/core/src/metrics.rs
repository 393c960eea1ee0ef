//! Approximation ratio `α`, optimal sampling probability `𝒫`, and the
//! distribution of `α` over all basis states.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{build_cost_maxcut, build_cost_qubo, expectation, DiagonalCost, StateVector};
use crate::error::{check_dim, Error, Result};
use crate::problems::{generate, InstanceSpec, ProblemKind};
use crate::qubo::{qubo_to_maxcut, spin_index_to_binary_index, Qubo, TOL};
use crate::rng::derive_seed;

pub const HISTOGRAM_BINS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricPair {
    pub alpha: f64,
    pub p_opt: f64,
}

impl MetricPair {
    pub fn of(state: &StateVector, cost: &DiagonalCost) -> Result<Self> {
        Ok(Self {
            alpha: approx_ratio(state, cost)?,
            p_opt: opt_prob(state, cost)?,
        })
    }
}

/// Normalized expected energy, exactly 1 on a flat spectrum.
pub fn ratio_from_expectation(e: f64, cost: &DiagonalCost) -> f64 {
    let span = cost.e_max() - cost.e_min();
    if span <= 0.0 {
        return 1.0;
    }
    ((e - cost.e_min()) / span).clamp(0.0, 1.0)
}

pub fn approx_ratio(state: &StateVector, cost: &DiagonalCost) -> Result<f64> {
    Ok(ratio_from_expectation(expectation(state, cost)?, cost))
}

pub fn opt_prob(state: &StateVector, cost: &DiagonalCost) -> Result<f64> {
    check_dim(cost.n(), state.n())?;
    let cut = cost.e_max() - TOL;
    let p: f64 = state
        .amplitudes()
        .iter()
        .zip(cost.energies())
        .filter(|(_, &e)| e >= cut)
        .map(|(a, _)| a.norm_sqr())
        .sum();
    Ok(p.clamp(0.0, 1.0))
}

/// Metrics of a state on the reduced Max-Cut register, computed directly and
/// again from the induced QUBO distribution. Returns `(maxcut, qubo)`.
pub fn cross_space_check(q: &Qubo, state: &StateVector) -> Result<(MetricPair, MetricPair)> {
    let n = q.n();
    check_dim(n + 1, state.n())?;
    let g = qubo_to_maxcut(q);
    let mc_cost = build_cost_maxcut(&g)?;
    let direct = MetricPair::of(state, &mc_cost)?;

    let q_cost = build_cost_qubo(q)?;
    let mut marginal = vec![0.0; 1 << n];
    for (b, a) in state.amplitudes().iter().enumerate() {
        marginal[spin_index_to_binary_index(b as u64, n) as usize] += a.norm_sqr();
    }
    let e: f64 = marginal.iter().zip(q_cost.energies()).map(|(p, e)| p * e).sum();
    let cut = q_cost.e_max() - TOL;
    let p_opt: f64 = marginal
        .iter()
        .zip(q_cost.energies())
        .filter(|(_, &e)| e >= cut)
        .map(|(p, _)| p)
        .sum();
    let projected = MetricPair {
        alpha: ratio_from_expectation(e, &q_cost),
        p_opt: p_opt.clamp(0.0, 1.0),
    };

    let da = (direct.alpha - projected.alpha).abs();
    let dp = (direct.p_opt - projected.p_opt).abs();
    if da > TOL || dp > TOL {
        return Err(Error::Consistency(format!(
            "metrics differ across spaces: alpha {} vs {}, p_opt {} vs {}",
            direct.alpha, projected.alpha, direct.p_opt, projected.p_opt
        )));
    }
    Ok((direct, projected))
}

/// Piecewise-constant density of `α` over `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaHistogram {
    pub bins: Vec<f64>,
    pub p_max: f64,
    pub mean: f64,
    pub median: f64,
    pub samples: usize,
}

impl AlphaHistogram {
    pub fn bin_width() -> f64 {
        1.0 / HISTOGRAM_BINS as f64
    }

    pub fn bin_left(i: usize) -> f64 {
        i as f64 * Self::bin_width()
    }

    /// Builds the histogram from pooled samples in `[0, 1]`.
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("histogram needs samples".into()));
        }
        let total = samples.len();
        let mut counts = vec![0usize; HISTOGRAM_BINS];
        for &a in &samples {
            counts[bin_of(a)] += 1;
        }
        let width = Self::bin_width();
        let bins: Vec<f64> = counts
            .iter()
            .map(|&c| c as f64 / (width * total as f64))
            .collect();
        let p_max = bins.iter().copied().fold(0.0, f64::max);
        let mean = samples.iter().sum::<f64>() / total as f64;
        samples.par_sort_unstable_by(f64::total_cmp);
        let median = if total % 2 == 1 {
            samples[total / 2]
        } else {
            0.5 * (samples[total / 2 - 1] + samples[total / 2])
        };
        Ok(Self {
            bins,
            p_max,
            mean,
            median,
            samples: total,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,density\n");
        for (i, d) in self.bins.iter().enumerate() {
            out.push_str(&format!("{},{}\n", Self::bin_left(i), d));
        }
        out
    }
}

/// Bin `[i/101, (i+1)/101)`, with 1.0 in the last bin.
fn bin_of(a: f64) -> usize {
    ((a * HISTOGRAM_BINS as f64).floor() as usize).min(HISTOGRAM_BINS - 1)
}

/// `α` of every basis state of a cost.
pub fn basis_alphas(cost: &DiagonalCost) -> Vec<f64> {
    cost.energies()
        .iter()
        .map(|&e| ratio_from_expectation(e, cost))
        .collect()
}

/// Pools `α` over every basis state of the reduced Max-Cut instance for
/// `instances` generated problems of one kind.
pub fn alpha_histogram(kind: ProblemKind, instances: usize, rng_seed: u64) -> Result<AlphaHistogram> {
    alpha_histogram_sized(kind, kind.default_n(), instances, rng_seed)
}

pub fn alpha_histogram_sized(
    kind: ProblemKind,
    n: usize,
    instances: usize,
    rng_seed: u64,
) -> Result<AlphaHistogram> {
    if instances == 0 {
        return Err(Error::InvalidInput("histogram needs at least one instance".into()));
    }
    let per_instance: Vec<Vec<f64>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(rng_seed, &[kind.name(), &i.to_string()]);
            let inst = generate(&InstanceSpec { kind, n, seed })?;
            let cost = build_cost_maxcut(&qubo_to_maxcut(&inst.qubo))?;
            Ok(basis_alphas(&cost))
        })
        .collect::<Result<_>>()?;
    AlphaHistogram::from_samples(per_instance.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::MaxCutInstance;
    use crate::warmstart::uniform_state;
    use num_complex::Complex64;

    fn q(rows: &[&[f64]]) -> Qubo {
        Qubo::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn uniform(n: usize) -> StateVector {
        StateVector::from_product(&uniform_state(n).unwrap()).unwrap()
    }

    #[test]
    fn extreme_basis_states() {
        let cost = build_cost_qubo(&q(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        let best = StateVector::basis(2, 3).unwrap();
        let worst = StateVector::basis(2, 0).unwrap();
        assert_eq!(approx_ratio(&best, &cost).unwrap(), 1.0);
        assert_eq!(opt_prob(&best, &cost).unwrap(), 1.0);
        assert_eq!(approx_ratio(&worst, &cost).unwrap(), 0.0);
        assert_eq!(opt_prob(&worst, &cost).unwrap(), 0.0);
    }

    #[test]
    fn uniform_state_values() {
        let cost = build_cost_qubo(&q(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((approx_ratio(&uniform(2), &cost).unwrap() - 0.25).abs() < 1e-12);
        assert!((opt_prob(&uniform(2), &cost).unwrap() - 0.25).abs() < 1e-12);

        let edge = build_cost_maxcut(&MaxCutInstance::from_edges(2, &[(0, 1, 1.0)]).unwrap()).unwrap();
        assert!((opt_prob(&uniform(2), &edge).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn flat_spectrum_is_one() {
        let cost = DiagonalCost::from_energies(1, vec![3.0, 3.0]).unwrap();
        assert_eq!(approx_ratio(&uniform(1), &cost).unwrap(), 1.0);
        assert!((opt_prob(&uniform(1), &cost).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invariant_under_shift_and_scale() {
        let base = DiagonalCost::from_energies(2, vec![0.3, -1.0, 2.0, 0.7]).unwrap();
        let moved =
            DiagonalCost::from_energies(2, base.energies().iter().map(|e| 2.5 * e - 4.0).collect())
                .unwrap();
        let s = uniform(2);
        let a = MetricPair::of(&s, &base).unwrap();
        let b = MetricPair::of(&s, &moved).unwrap();
        assert!((a.alpha - b.alpha).abs() < 1e-12);
        assert!((a.p_opt - b.p_opt).abs() < 1e-12);
    }

    #[test]
    fn cross_space_small_cases() {
        let one = q(&[&[1.0]]);
        let (a, b) = cross_space_check(&one, &uniform(2)).unwrap();
        assert!((a.alpha - 0.5).abs() < 1e-12 && (a.p_opt - 0.5).abs() < 1e-12);
        assert!((a.alpha - b.alpha).abs() < 1e-12);

        let qq = crate::problems::gen_random(crate::problems::RandomKind::Continuous, 4, 3);
        for b in 0..32 {
            let s = StateVector::basis(5, b).unwrap();
            let (x, y) = cross_space_check(&qq, &s).unwrap();
            assert!((x.alpha - y.alpha).abs() < 1e-9);
            assert!(x.p_opt == 0.0 || x.p_opt == 1.0);
        }
    }

    #[test]
    fn optimum_and_its_flip_share_metrics() {
        let qq = crate::problems::gen_random(crate::problems::RandomKind::Continuous, 3, 8);
        let g = qubo_to_maxcut(&qq);
        let bf = crate::qubo::brute_force_maxcut(&g).unwrap();
        let y = &bf.optima[0];
        let i = y.to_index() as usize;
        let j = y.flipped().to_index() as usize;
        let mut amps = vec![Complex64::new(0.0, 0.0); 16];
        amps[i] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[j] = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
        let s = StateVector::from_amplitudes(4, amps).unwrap();
        let (a, b) = cross_space_check(&qq, &s).unwrap();
        assert!((a.p_opt - 1.0).abs() < 1e-12 && (b.p_opt - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cross_space_rejects_wrong_width() {
        assert!(cross_space_check(&q(&[&[1.0]]), &uniform(3)).is_err());
    }

    #[test]
    fn histogram_two_point_spectrum() {
        let h = AlphaHistogram::from_samples(vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(h.bins[0] > 0.0 && h.bins[100] > 0.0);
        assert!(h.bins[1..100].iter().all(|&d| d == 0.0));
        let integral: f64 = h.bins.iter().sum::<f64>() * AlphaHistogram::bin_width();
        assert!((integral - 1.0).abs() < 1e-12);
        assert_eq!((h.mean, h.median), (0.5, 0.5));
        assert!((h.p_max - 0.5 * HISTOGRAM_BINS as f64).abs() < 1e-9);
    }

    #[test]
    fn histogram_bin_edges() {
        assert_eq!(bin_of(0.0), 0);
        assert_eq!(bin_of(1.0), 100);
        assert_eq!(bin_of(0.999), 100);
        assert_eq!(bin_of(1.0 / 101.0 + 1e-12), 1);
        assert_eq!(AlphaHistogram::from_samples(vec![0.2]).unwrap().to_csv().lines().count(), 102);
    }

    #[test]
    fn generated_histogram_integrates_to_one() {
        let h = alpha_histogram_sized(ProblemKind::RandomContinuous, 6, 3, 1).unwrap();
        assert_eq!(h.samples, 3 * (1 << 7));
        let integral: f64 = h.bins.iter().sum::<f64>() * AlphaHistogram::bin_width();
        assert!((integral - 1.0).abs() < 1e-6);
        assert!(h.bins.iter().all(|&d| d >= 0.0));
        assert!(alpha_histogram_sized(ProblemKind::RandomContinuous, 6, 0, 1).is_err());
    }
}
