//! Dense statevector simulation of warm-started QAOA.
//!
//! Basis index convention: bit `i` of an index is the state of qubit `i`.
//! For QUBO costs that bit is `x_i`; for Max-Cut costs bit 0 means spin +1.
//!
//! One layer applies `e^{-iγ H_C}` and then `e^{-iβ H_B}`, where `H_B` is the
//! sum of single-qubit terms `x_j X + y_j Y + z_j Z` built from the warm-start
//! Bloch vectors.

use std::cell::RefCell;

use num_complex::Complex64;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::qubo::{MaxCutInstance, Qubo};
use crate::rng::stream;
use crate::warmstart::{BlochVector, ProductState};

/// Largest simulated register (2^24 amplitudes, ~256 MB).
pub const MAX_QUBITS: usize = 24;

/// Registers at least this wide are updated in parallel.
const PARALLEL_QUBITS: usize = 14;

fn check_cap(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        Err(Error::CapExceeded { n, cap: MAX_QUBITS })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Normalized state from raw amplitudes.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_cap(n)?;
        check_dim(1 << n, amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("state norm {norm} is not 1")));
        }
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, index: u64) -> Result<Self> {
        check_cap(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Tensor product of single-qubit states `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_product(state: &ProductState) -> Result<Self> {
        let n = state.len();
        check_cap(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        amps.push(Complex64::new(1.0, 0.0));
        for b in &state.qubits {
            let [a0, a1] = qubit_amplitudes(b);
            let lower: Vec<Complex64> = amps.iter().map(|a| a * a0).collect();
            let upper: Vec<Complex64> = amps.iter().map(|a| a * a1).collect();
            amps = lower;
            amps.extend(upper);
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

fn qubit_amplitudes(b: &BlochVector) -> [Complex64; 2] {
    let (theta, phi) = b.angles();
    let half = 0.5 * theta;
    [
        Complex64::new(half.cos(), 0.0),
        Complex64::from_polar(half.sin(), phi),
    ]
}

/// Diagonal cost Hamiltonian, one energy per basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalCost {
    n: usize,
    energies: Vec<f64>,
    e_min: f64,
    e_max: f64,
    offset: f64,
}

impl DiagonalCost {
    pub fn from_energies(n: usize, energies: Vec<f64>) -> Result<Self> {
        Self::with_offset(n, energies, 0.0)
    }

    fn with_offset(n: usize, energies: Vec<f64>, offset: f64) -> Result<Self> {
        check_cap(n)?;
        check_dim(1 << n, energies.len())?;
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidInput("non-finite energy".into()));
        }
        let (e_min, e_max) = energies
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
                (lo.min(e), hi.max(e))
            });
        Ok(Self {
            n,
            energies,
            e_min,
            e_max,
            offset,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn e_min(&self) -> f64 {
        self.e_min
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    /// Constant that maps these energies onto the original QUBO values
    /// (zero for QUBO costs, `sum(Q)/4` for reduced Max-Cut costs).
    pub fn offset(&self) -> f64 {
        self.offset
    }
}

/// Energies `x^T Q x` for every basis state.
///
/// Each energy is derived from the state with its highest set bit cleared,
/// so every value is a chain of at most `n` short sums.
pub fn build_cost_qubo(q: &Qubo) -> Result<DiagonalCost> {
    let n = q.n();
    check_cap(n)?;
    let mut e = vec![0.0; 1 << n];
    for b in 1usize..1 << n {
        let h = usize::BITS as usize - 1 - b.leading_zeros() as usize;
        let low = b ^ (1 << h);
        let mut delta = q.get(h, h);
        let mut rest = low;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            delta += 2.0 * q.get(h, j);
            rest &= rest - 1;
        }
        e[b] = e[low] + delta;
    }
    DiagonalCost::with_offset(n, e, 0.0)
}

/// Energies `y^T(-A/4)y` for every basis state (bit 0 = spin +1). The
/// instance offset is kept alongside, not added.
pub fn build_cost_maxcut(g: &MaxCutInstance) -> Result<DiagonalCost> {
    let m = g.m();
    check_cap(m)?;
    let mut e = vec![0.0; 1 << m];
    e[0] = -0.25 * g.total();
    for b in 1usize..1 << m {
        let h = usize::BITS as usize - 1 - b.leading_zeros() as usize;
        let low = b ^ (1 << h);
        // flipping spin h from +1 to -1 changes the energy by Σ_{j≠h} a_hj y_j
        let mut delta = 0.0;
        for j in 0..m {
            if j != h {
                let yj = if low >> j & 1 == 1 { -1.0 } else { 1.0 };
                delta += g.get(h, j) * yj;
            }
        }
        e[b] = e[low] + delta;
    }
    DiagonalCost::with_offset(m, e, g.offset())
}

/// `amp[b] *= exp(-iγ E_b)`.
pub fn apply_phase(state: &mut StateVector, cost: &DiagonalCost, gamma: f64) -> Result<()> {
    check_dim(cost.n, state.n)?;
    let kernel = |(a, &e): (&mut Complex64, &f64)| {
        *a *= Complex64::from_polar(1.0, -gamma * e);
    };
    if state.n >= PARALLEL_QUBITS {
        state.amps.par_iter_mut().zip(&cost.energies).for_each(kernel);
    } else {
        state.amps.iter_mut().zip(&cost.energies).for_each(kernel);
    }
    Ok(())
}

/// `exp(-iβ n·σ) = cos β I - i sin β (n·σ)` as a row-major 2×2 matrix.
fn mixer_unitary(b: &BlochVector, beta: f64) -> [Complex64; 4] {
    let (s, c) = beta.sin_cos();
    [
        Complex64::new(c, -s * b.z),
        Complex64::new(-s * b.y, -s * b.x),
        Complex64::new(s * b.y, -s * b.x),
        Complex64::new(c, s * b.z),
    ]
}

/// Applies `e^{-iβ H_B}` qubit by qubit.
pub fn apply_mixer(state: &mut StateVector, mixer: &ProductState, beta: f64) -> Result<()> {
    check_dim(state.n, mixer.len())?;
    let parallel = state.n >= PARALLEL_QUBITS;
    for (q, b) in mixer.qubits.iter().enumerate() {
        let u = mixer_unitary(b, beta);
        let stride = 1 << q;
        let kernel = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi) {
                let (x, y) = (*a0, *a1);
                *a0 = u[0] * x + u[1] * y;
                *a1 = u[2] * x + u[3] * y;
            }
        };
        if parallel {
            state.amps.par_chunks_mut(2 * stride).for_each(kernel);
        } else {
            state.amps.chunks_mut(2 * stride).for_each(kernel);
        }
    }
    Ok(())
}

/// Variational angles, one `(β, γ)` pair per layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct QaoaParams {
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl QaoaParams {
    pub fn new(beta: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        check_dim(beta.len(), gamma.len())?;
        Ok(Self { beta, gamma })
    }

    pub fn zeros(p: usize) -> Self {
        Self {
            beta: vec![0.0; p],
            gamma: vec![0.0; p],
        }
    }

    pub fn depth(&self) -> usize {
        self.beta.len()
    }

    /// Same circuit with one extra identity layer appended.
    pub fn padded(&self) -> Self {
        let mut next = self.clone();
        next.beta.push(0.0);
        next.gamma.push(0.0);
        next
    }

    fn to_flat(&self) -> Vec<f64> {
        self.beta.iter().chain(&self.gamma).copied().collect()
    }

    fn from_flat(x: &[f64]) -> Self {
        let p = x.len() / 2;
        Self {
            beta: x[..p].to_vec(),
            gamma: x[p..].to_vec(),
        }
    }
}

/// Runs the ansatz from the warm-start product state. The product state also
/// defines the mixer.
pub fn evolve(init: &ProductState, cost: &DiagonalCost, params: &QaoaParams) -> Result<StateVector> {
    let start = StateVector::from_product(init)?;
    evolve_from(start, init, cost, params)
}

fn evolve_from(
    mut state: StateVector,
    mixer: &ProductState,
    cost: &DiagonalCost,
    params: &QaoaParams,
) -> Result<StateVector> {
    check_dim(params.beta.len(), params.gamma.len())?;
    check_dim(cost.n, state.n)?;
    for (&beta, &gamma) in params.beta.iter().zip(&params.gamma) {
        apply_phase(&mut state, cost, gamma)?;
        apply_mixer(&mut state, mixer, beta)?;
    }
    Ok(state)
}

/// `⟨ψ|H_C|ψ⟩`.
pub fn expectation(state: &StateVector, cost: &DiagonalCost) -> Result<f64> {
    check_dim(cost.n, state.n)?;
    Ok(state
        .amps
        .iter()
        .zip(&cost.energies)
        .map(|(a, e)| a.norm_sqr() * e)
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptProtocol {
    /// Independent local optimizations per depth.
    pub starts: usize,
    /// Seed one start with the previous depth's best angles plus an identity layer.
    pub inherit_best: bool,
    /// Objective evaluations per start; `None` means `200 · p`.
    pub max_evals: Option<usize>,
}

impl Default for OptProtocol {
    fn default() -> Self {
        Self {
            starts: 10,
            inherit_best: true,
            max_evals: None,
        }
    }
}

impl OptProtocol {
    pub fn budget(&self, p: usize) -> usize {
        self.max_evals.unwrap_or(200 * p)
    }
}

const BETA_RANGE: (f64, f64) = (0.0, std::f64::consts::PI);
const GAMMA_RANGE: (f64, f64) = (0.0, std::f64::consts::TAU);
const BETA_BOUNDS: (f64, f64) = (-std::f64::consts::PI, std::f64::consts::TAU);
const GAMMA_BOUNDS: (f64, f64) = (-std::f64::consts::TAU, 2.0 * std::f64::consts::TAU);

/// Multi-start derivative-free maximization of `⟨H_C⟩` at depth `p`.
///
/// Each start runs COBYLA on the negated expectation. When `inherit_best` is
/// set and `prev_best` is given (depth `p - 1`), start 0 is `prev_best` with a
/// zero layer appended, which reproduces the shallower circuit exactly; the
/// remaining starts draw `β ∈ [0, π)`, `γ ∈ [0, 2π)` uniformly. The best value
/// seen by any start is returned, so the result never falls below any
/// starting point.
pub fn optimize(
    init: &ProductState,
    cost: &DiagonalCost,
    p: usize,
    proto: &OptProtocol,
    rng_seed: u64,
    prev_best: Option<&QaoaParams>,
) -> Result<(QaoaParams, f64)> {
    if p == 0 {
        return Err(Error::InvalidInput("optimization needs depth p >= 1".into()));
    }
    if proto.starts == 0 {
        return Err(Error::InvalidInput("at least one start is required".into()));
    }
    let inherited = match prev_best {
        Some(prev) if proto.inherit_best => {
            check_dim(p - 1, prev.depth())?;
            Some(prev.padded())
        }
        _ => None,
    };
    let start_state = StateVector::from_product(init)?;
    check_dim(cost.n, start_state.n)?;

    let objective = |x: &[f64]| -> f64 {
        let params = QaoaParams::from_flat(x);
        let s = evolve_from(start_state.clone(), init, cost, &params).expect("dimensions checked");
        expectation(&s, cost).expect("dimensions checked")
    };

    let mut bounds = vec![BETA_BOUNDS; p];
    bounds.extend(vec![GAMMA_BOUNDS; p]);
    let budget = proto.budget(p).max(1);

    let results: Vec<(f64, Vec<f64>)> = (0..proto.starts as u64)
        .into_par_iter()
        .map(|s| {
            let x0 = match (&inherited, s) {
                (Some(params), 0) => params.to_flat(),
                _ => {
                    let mut rng = stream(rng_seed, s);
                    let mut x: Vec<f64> = (0..p)
                        .map(|_| rng.random_range(BETA_RANGE.0..BETA_RANGE.1))
                        .collect();
                    x.extend((0..p).map(|_| rng.random_range(GAMMA_RANGE.0..GAMMA_RANGE.1)));
                    x
                }
            };
            local_maximize(&objective, x0, &bounds, budget)
        })
        .collect();

    let (value, x) = results
        .into_iter()
        .reduce(|best, cur| if cur.0 > best.0 { cur } else { best })
        .expect("at least one start");
    Ok((QaoaParams::from_flat(&x), value))
}

/// COBYLA from `x0`, returning the best point evaluated (including `x0`).
fn local_maximize<F>(f: &F, x0: Vec<f64>, bounds: &[(f64, f64)], budget: usize) -> (f64, Vec<f64>)
where
    F: Fn(&[f64]) -> f64,
{
    let first = f(&x0);
    let best = RefCell::new((first, x0.clone()));
    if budget <= 1 {
        return best.into_inner();
    }
    let negated = |x: &[f64], _: &mut ()| -> f64 {
        let v = f(x);
        let mut b = best.borrow_mut();
        if v > b.0 {
            *b = (v, x.to_vec());
        }
        -v
    };
    let cons: Vec<&dyn cobyla::Func<()>> = Vec::new();
    let tols = cobyla::StopTols {
        ftol_abs: 1e-12,
        xtol_abs: vec![1e-7; x0.len()],
        ..cobyla::StopTols::default()
    };
    // Failures (e.g. round-off limits) still leave the tracked best intact.
    let _ = cobyla::minimize(
        negated,
        &x0,
        bounds,
        &cons,
        (),
        budget - 1,
        cobyla::RhoBeg::All(0.5),
        Some(tols),
    );
    best.into_inner()
}
