//! Slow, independent reference implementations for tests.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::problems::Graph;
use crate::warmstart::ProductState;

type CMat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli(b: &crate::warmstart::BlochVector) -> CMat {
    // x X + y Y + z Z
    DMatrix::from_row_slice(2, 2, &[c(b.z, 0.0), c(b.x, -b.y), c(b.x, b.y), c(-b.z, 0.0)])
}

/// `A ⊗ B` with `A` acting on the higher-order qubit.
fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Operator `op` on qubit `q` of an `n`-qubit register (qubit `q` is bit `q`
/// of the basis index).
fn embed(op: &CMat, q: usize, n: usize) -> CMat {
    let id = CMat::identity(2, 2);
    let mut out = CMat::identity(1, 1);
    for k in (0..n).rev() {
        out = kron(&out, if k == q { op } else { &id });
    }
    out
}

/// Full mixer Hamiltonian `Σ_j n_j · σ_j`.
pub fn mixer_hamiltonian(state: &ProductState) -> CMat {
    let n = state.len();
    let mut h = CMat::zeros(1 << n, 1 << n);
    for (q, b) in state.qubits.iter().enumerate() {
        h += embed(&pauli(b), q, n);
    }
    h
}

/// `exp(-i t H)` by Taylor series with scaling and squaring.
pub fn expm_hermitian(h: &CMat, t: f64) -> CMat {
    let a = h * c(0.0, -t);
    let norm = a.iter().map(|v| v.norm()).sum::<f64>();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = &a * c(0.5f64.powi(squarings as i32), 0.0);
    let dim = h.nrows();
    let mut term = CMat::identity(dim, dim);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Tensor product of `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` built from the
/// top eigenvector of each single-qubit term.
pub fn product_state_vector(state: &ProductState) -> DVector<Complex64> {
    let mut v = DVector::from_element(1, c(1.0, 0.0));
    for b in state.qubits.iter() {
        // top eigenvector of n·σ, phase fixed so the |0> amplitude is real and >= 0
        let (z, x, y) = (b.z, b.x, b.y);
        let local = if (1.0 + z) > 1e-12 {
            let a0 = ((1.0 + z) / 2.0).sqrt();
            let a1 = c(x, y) / (2.0 * a0);
            DVector::from_vec(vec![c(a0, 0.0), a1])
        } else {
            DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)])
        };
        v = local.kronecker(&v);
    }
    v
}

/// `∏_l e^{-iβ_l H_B} e^{-iγ_l H_C}` applied by dense matrix products.
pub fn dense_evolve(
    init: &ProductState,
    energies: &[f64],
    beta: &[f64],
    gamma: &[f64],
) -> DVector<Complex64> {
    let hb = mixer_hamiltonian(init);
    let hc = CMat::from_diagonal(&DVector::from_iterator(
        energies.len(),
        energies.iter().map(|&e| c(e, 0.0)),
    ));
    let mut psi = product_state_vector(init);
    for (&b, &g) in beta.iter().zip(gamma) {
        psi = expm_hermitian(&hc, g) * psi;
        psi = expm_hermitian(&hb, b) * psi;
    }
    psi
}

/// `max_φ ‖a - e^{iφ} b‖_∞` lower bound: aligns the phase on the largest
/// component of `b`, then compares.
pub fn distance_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = b.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0, 0.0) };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

/// Independence number by branching on the lowest remaining vertex.
pub fn independence_number(g: &Graph) -> usize {
    assert!(g.n <= 64);
    let mut nbr = vec![0u64; g.n];
    for &(u, v) in &g.edges {
        nbr[u] |= 1 << v;
        nbr[v] |= 1 << u;
    }
    fn go(avail: u64, nbr: &[u64]) -> usize {
        if avail == 0 {
            return 0;
        }
        let v = avail.trailing_zeros() as usize;
        let rest = avail & !(1 << v);
        let take = 1 + go(rest & !nbr[v], nbr);
        if nbr[v] & rest == 0 {
            // isolated among the remaining vertices: always take it
            return take;
        }
        take.max(go(rest, nbr))
    }
    let all = if g.n == 64 { u64::MAX } else { (1u64 << g.n) - 1 };
    go(all, &nbr)
}

/// Shortest closed tour from city 0 over every permutation of the rest.
pub fn shortest_tour(distances: &[Vec<f64>]) -> (f64, Vec<usize>) {
    let n = distances.len();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = (f64::INFINITY, Vec::new());
    permute(&mut rest, 0, &mut |perm| {
        let mut len = distances[0][perm[0]] + distances[perm[perm.len() - 1]][0];
        for w in perm.windows(2) {
            len += distances[w[0]][w[1]];
        }
        if len < best.0 {
            let mut order = vec![0];
            order.extend_from_slice(perm);
            best = (len, order);
        }
    });
    best
}

/// Number of distinct closed tours from city 0 (counting both directions).
pub fn tour_count(n: usize) -> usize {
    let mut rest: Vec<usize> = (1..n).collect();
    let mut count = 0;
    permute(&mut rest, 0, &mut |_| count += 1);
    count
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}
