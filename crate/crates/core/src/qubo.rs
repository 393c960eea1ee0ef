//! QUBO, Ising and Max-Cut data model.
//!
//! A QUBO maximizes `x^T Q x` over `x ∈ {0,1}^n`. Any QUBO maps onto a
//! Max-Cut instance on `n + 1` vertices: the extra (auxiliary) vertex fixes the
//! reference spin, and `x_i = (1 - y_i y_n) / 2` recovers the binary
//! assignment. The map is exact including the constant `sum(Q) / 4`:
//!
//! ```text
//! y^T (-A/4) y + sum(Q)/4 = x^T Q x
//! ```
//!
//! Without the auxiliary vertex no such map exists in general: expanding the
//! QUBO in spins leaves terms linear in `y`, which a pure quadratic form cannot
//! reproduce. That is why every reduced instance has one more vertex than the
//! QUBO has variables, and why every QUBO solution has exactly two Max-Cut
//! preimages (`y` and `-y`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Absolute tolerance for identity checks and optimum membership.
pub const TOL: f64 = 1e-9;

/// Default variable cap for exhaustive enumeration.
pub const BRUTE_FORCE_CAP: usize = 20;

/// On-disk layout shared by [`Qubo`] and [`MaxCutInstance`].
#[derive(Debug, Clone, Serialize, Deserialize)]
struct MatrixDoc {
    n: usize,
    matrix: Vec<Vec<f64>>,
    #[serde(default)]
    offset: f64,
}

fn flatten(rows: &[Vec<f64>]) -> Result<(usize, Vec<f64>)> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidInput("matrix must have at least one row".into()));
    }
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        check_dim(n, row.len())?;
        data.extend_from_slice(row);
    }
    Ok((n, data))
}

fn check_symmetric_finite(n: usize, data: &[f64]) -> Result<()> {
    if let Some(v) = data.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite coefficient {v}")));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if data[i * n + j] != data[j * n + i] {
                return Err(Error::InvalidInput(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

fn rows_of(n: usize, data: &[f64]) -> Vec<Vec<f64>> {
    data.chunks(n).map(|r| r.to_vec()).collect()
}

/// Symmetric coefficient matrix of a maximization QUBO.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct Qubo {
    n: usize,
    q: Vec<f64>,
}

impl TryFrom<MatrixDoc> for Qubo {
    type Error = Error;

    fn try_from(doc: MatrixDoc) -> Result<Self> {
        let q = Qubo::new(doc.matrix)?;
        check_dim(doc.n, q.n)?;
        Ok(q)
    }
}

impl From<Qubo> for MatrixDoc {
    fn from(q: Qubo) -> Self {
        MatrixDoc {
            n: q.n,
            matrix: q.rows(),
            offset: 0.0,
        }
    }
}

impl Qubo {
    /// Builds a QUBO from row vectors. The matrix must be exactly symmetric.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let (n, q) = flatten(&rows)?;
        Self::from_row_major(n, q)
    }

    pub fn from_row_major(n: usize, q: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("QUBO needs at least one variable".into()));
        }
        check_dim(n * n, q.len())?;
        check_symmetric_finite(n, &q)?;
        Ok(Self { n, q })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_row_major(n, vec![0.0; n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.n + j]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.q
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        rows_of(self.n, &self.q)
    }

    /// Sum of every matrix entry.
    pub fn total(&self) -> f64 {
        self.q.iter().sum()
    }

    /// Largest eigenvalue of the coefficient matrix.
    pub fn max_eigenvalue(&self) -> f64 {
        let m = nalgebra::DMatrix::from_row_slice(self.n, self.n, &self.q);
        m.symmetric_eigenvalues().max()
    }

    /// `x^T Q x` for a basis index whose bit `i` is `x_i`.
    pub fn value_at_index(&self, index: u64) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for i in (0..n).filter(|&i| index >> i & 1 == 1) {
            let row = &self.q[i * n..(i + 1) * n];
            for (j, &qij) in row.iter().enumerate() {
                if index >> j & 1 == 1 {
                    total += qij;
                }
            }
        }
        total
    }
}

/// Folds a linear term into the diagonal: `x^T q x + mu^T x = x^T (q + diag(mu)) x`
/// on binary vectors, because `x_i^2 = x_i`.
pub fn fold_linear(q: &Qubo, mu: &[f64]) -> Result<Qubo> {
    check_dim(q.n, mu.len())?;
    let mut data = q.q.clone();
    for (i, m) in mu.iter().enumerate() {
        data[i * q.n + i] += m;
    }
    Qubo::from_row_major(q.n, data)
}

/// Binary decision vector `x ∈ {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryAssignment(Vec<u8>);

impl BinaryAssignment {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidInput("bits must be 0 or 1".into()));
        }
        Ok(Self(bits))
    }

    /// Bit `i` of `index` becomes `x_i`.
    pub fn from_index(index: u64, n: usize) -> Self {
        Self((0..n).map(|i| (index >> i & 1) as u8).collect())
    }

    pub fn to_index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (b as u64) << i)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Spin vector `y ∈ {-1,+1}^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinAssignment(Vec<i8>);

impl SpinAssignment {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput("spins must be -1 or +1".into()));
        }
        Ok(Self(spins))
    }

    /// Computational-basis convention: bit 0 is spin +1 (Z eigenvalue +1), bit 1 is spin -1.
    pub fn from_index(index: u64, m: usize) -> Self {
        Self(
            (0..m)
                .map(|i| if index >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn to_index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &s)| acc | ((s < 0) as u64) << i)
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Global spin flip `-y`.
    pub fn flipped(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }
}

pub fn qubo_value(q: &Qubo, x: &BinaryAssignment) -> Result<f64> {
    check_dim(q.n, x.len())?;
    Ok(q.value_at_index(x.to_index()))
}

/// Weighted graph with a constant offset. Reduced instances carry
/// `offset = sum(Q)/4` so that cut values line up with QUBO values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct MaxCutInstance {
    m: usize,
    a: Vec<f64>,
    offset: f64,
}

impl TryFrom<MatrixDoc> for MaxCutInstance {
    type Error = Error;

    fn try_from(doc: MatrixDoc) -> Result<Self> {
        let inst = MaxCutInstance::new(doc.matrix, doc.offset)?;
        check_dim(doc.n, inst.m)?;
        Ok(inst)
    }
}

impl From<MaxCutInstance> for MatrixDoc {
    fn from(g: MaxCutInstance) -> Self {
        MatrixDoc {
            n: g.m,
            matrix: g.rows(),
            offset: g.offset,
        }
    }
}

impl MaxCutInstance {
    pub fn new(rows: Vec<Vec<f64>>, offset: f64) -> Result<Self> {
        let (m, a) = flatten(&rows)?;
        Self::from_row_major(m, a, offset)
    }

    pub fn from_row_major(m: usize, a: Vec<f64>, offset: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("graph needs at least one vertex".into()));
        }
        check_dim(m * m, a.len())?;
        check_symmetric_finite(m, &a)?;
        if !offset.is_finite() {
            return Err(Error::InvalidInput("offset must be finite".into()));
        }
        Ok(Self { m, a, offset })
    }

    /// Unweighted graph from an edge list, zero offset.
    pub fn from_edges(m: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut a = vec![0.0; m * m];
        for &(i, j, w) in edges {
            if i >= m || j >= m {
                return Err(Error::InvalidInput(format!("edge ({i}, {j}) out of range")));
            }
            a[i * m + j] += w;
            if i != j {
                a[j * m + i] += w;
            }
        }
        Self::from_row_major(m, a, 0.0)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.m + j]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.a
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        rows_of(self.m, &self.a)
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn total(&self) -> f64 {
        self.a.iter().sum()
    }

    /// `y^T (-A/4) y` for the spin vector encoded by a basis index.
    pub fn ising_at_index(&self, index: u64) -> f64 {
        let m = self.m;
        let spin = |i: usize| if index >> i & 1 == 1 { -1.0 } else { 1.0 };
        let mut total = 0.0;
        for i in 0..m {
            let row = &self.a[i * m..(i + 1) * m];
            let yi = spin(i);
            let mut acc = 0.0;
            for (j, &aij) in row.iter().enumerate() {
                acc += aij * spin(j);
            }
            total += yi * acc;
        }
        -0.25 * total
    }
}

/// Ising-form value `y^T (-A/4) y`, plus the instance offset when requested.
pub fn cut_value(g: &MaxCutInstance, y: &SpinAssignment, include_offset: bool) -> Result<f64> {
    check_dim(g.m, y.len())?;
    let v = g.ising_at_index(y.to_index());
    Ok(if include_offset { v + g.offset } else { v })
}

/// Builds the corresponding graph of `q`.
///
/// Vertices `0..n` mirror the QUBO variables with `a[i][j] = -q[i][j]`
/// (diagonal entries become self-loops, which only add a constant to the
/// Ising form). Vertex `n` is auxiliary with `a[n][i] = a[i][n] = Σ_j q[i][j]`
/// and no self-loop.
pub fn qubo_to_maxcut(q: &Qubo) -> MaxCutInstance {
    let n = q.n;
    let m = n + 1;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            let v = q.get(i, j);
            a[i * m + j] = -v;
            row_sum += v;
        }
        a[n * m + i] = row_sum;
        a[i * m + n] = row_sum;
    }
    MaxCutInstance {
        m,
        a,
        offset: q.total() / 4.0,
    }
}

/// `x_i = (1 - y_i y_n) / 2` where `y_n` is the last (auxiliary) spin.
pub fn spins_to_binary(y: &SpinAssignment) -> Result<BinaryAssignment> {
    let s = y.spins();
    let Some((&last, head)) = s.split_last() else {
        return Err(Error::InvalidInput("need at least the auxiliary spin".into()));
    };
    Ok(BinaryAssignment(
        head.iter().map(|&yi| ((1 - yi * last) / 2) as u8).collect(),
    ))
}

/// Basis-index form of [`spins_to_binary`]: bit `i` of the result is bit `i`
/// of `index` XOR its auxiliary bit.
#[inline]
pub fn spin_index_to_binary_index(index: u64, n: usize) -> u64 {
    let mask = (1u64 << n) - 1;
    if index >> n & 1 == 1 {
        !index & mask
    } else {
        index & mask
    }
}

/// Exact extrema and optimum set from exhaustive enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult<A> {
    pub e_min: f64,
    pub e_max: f64,
    pub optima: Vec<A>,
}

fn enumerate<F>(n: usize, cap: usize, energy: F) -> Result<(f64, f64, Vec<u64>)>
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let values: Vec<f64> = (0..1u64 << n).into_par_iter().map(energy).collect();
    let (e_min, e_max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let optima = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= e_max - TOL)
        .map(|(b, _)| b as u64)
        .collect();
    Ok((e_min, e_max, optima))
}

pub fn brute_force_qubo(q: &Qubo) -> Result<BruteForceResult<BinaryAssignment>> {
    brute_force_qubo_with_cap(q, BRUTE_FORCE_CAP)
}

pub fn brute_force_qubo_with_cap(
    q: &Qubo,
    cap: usize,
) -> Result<BruteForceResult<BinaryAssignment>> {
    let (e_min, e_max, optima) = enumerate(q.n, cap, |b| q.value_at_index(b))?;
    Ok(BruteForceResult {
        e_min,
        e_max,
        optima: optima
            .into_iter()
            .map(|b| BinaryAssignment::from_index(b, q.n))
            .collect(),
    })
}

/// Extrema of the Ising form `y^T(-A/4)y`; the offset is not included.
pub fn brute_force_maxcut(g: &MaxCutInstance) -> Result<BruteForceResult<SpinAssignment>> {
    brute_force_maxcut_with_cap(g, BRUTE_FORCE_CAP)
}

pub fn brute_force_maxcut_with_cap(
    g: &MaxCutInstance,
    cap: usize,
) -> Result<BruteForceResult<SpinAssignment>> {
    let (e_min, e_max, optima) = enumerate(g.m, cap, |b| g.ising_at_index(b))?;
    Ok(BruteForceResult {
        e_min,
        e_max,
        optima: optima
            .into_iter()
            .map(|b| SpinAssignment::from_index(b, g.m))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(rows: &[&[f64]]) -> Qubo {
        Qubo::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn all_binary(n: usize) -> impl Iterator<Item = BinaryAssignment> {
        (0..1u64 << n).map(move |b| BinaryAssignment::from_index(b, n))
    }

    #[test]
    fn rejects_asymmetric_and_nonfinite() {
        assert!(Qubo::new(vec![vec![0.0, 1.0], vec![0.5, 0.0]]).is_err());
        assert!(Qubo::new(vec![vec![f64::NAN]]).is_err());
        assert!(Qubo::new(vec![]).is_err());
        assert!(Qubo::new(vec![vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn fold_linear_cases() {
        let folded = fold_linear(&Qubo::zeros(2).unwrap(), &[1.0, 1.0]).unwrap();
        assert_eq!(folded, q(&[&[1.0, 0.0], &[0.0, 1.0]]));
        let x11 = BinaryAssignment::new(vec![1, 1]).unwrap();
        assert_eq!(qubo_value(&folded, &x11).unwrap(), 2.0);

        let off = q(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(fold_linear(&off, &[0.0, 0.0]).unwrap(), off);

        let base = q(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let mu = [0.0, 2.0];
        let folded = fold_linear(&base, &mu).unwrap();
        assert_eq!(folded, q(&[&[1.0, 0.0], &[0.0, 2.0]]));
        for x in all_binary(2) {
            let direct = qubo_value(&base, &x).unwrap()
                + x.bits().iter().zip(mu).map(|(&b, m)| b as f64 * m).sum::<f64>();
            assert_eq!(qubo_value(&folded, &x).unwrap(), direct);
        }

        assert!(matches!(
            fold_linear(&base, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn qubo_value_cases() {
        let off = q(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(
            qubo_value(&off, &BinaryAssignment::new(vec![0, 0]).unwrap()).unwrap(),
            0.0
        );
        assert_eq!(
            qubo_value(&q(&[&[1.0]]), &BinaryAssignment::new(vec![1]).unwrap()).unwrap(),
            1.0
        );
        assert_eq!(
            qubo_value(&off, &BinaryAssignment::new(vec![1, 1]).unwrap()).unwrap(),
            2.0
        );
        assert!(qubo_value(&off, &BinaryAssignment::new(vec![1]).unwrap()).is_err());
    }

    #[test]
    fn reduction_of_single_variable() {
        let g = qubo_to_maxcut(&q(&[&[1.0]]));
        assert_eq!(g.rows(), vec![vec![-1.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(g.offset(), 0.25);
        let y = SpinAssignment::new(vec![-1, 1]).unwrap();
        assert!((cut_value(&g, &y, true).unwrap() - 1.0).abs() < TOL);
        for b in 0..4 {
            let y = SpinAssignment::from_index(b, 2);
            let x = spins_to_binary(&y).unwrap();
            let lhs = cut_value(&g, &y, true).unwrap();
            assert!((lhs - qubo_value(&q(&[&[1.0]]), &x).unwrap()).abs() < TOL);
        }
    }

    #[test]
    fn reduction_of_two_variables() {
        let qq = q(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let g = qubo_to_maxcut(&qq);
        assert_eq!(
            g.rows(),
            vec![
                vec![0.0, -1.0, 1.0],
                vec![-1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0]
            ]
        );
        assert_eq!(g.offset(), 0.5);
        for b in 0..8 {
            let y = SpinAssignment::from_index(b, 3);
            let x = spins_to_binary(&y).unwrap();
            assert!((cut_value(&g, &y, true).unwrap() - qubo_value(&qq, &x).unwrap()).abs() < TOL);
        }
    }

    #[test]
    fn reduction_of_zero_matrix() {
        let g = qubo_to_maxcut(&Qubo::zeros(3).unwrap());
        assert_eq!(g.m(), 4);
        assert!(g.as_row_major().iter().all(|&v| v == 0.0));
        assert_eq!(g.offset(), 0.0);
    }

    #[test]
    fn cut_value_cases() {
        let g = MaxCutInstance::from_edges(3, &[(0, 1, 1.0), (1, 2, 2.5)]).unwrap();
        let ones = SpinAssignment::new(vec![1, 1, 1]).unwrap();
        assert!((cut_value(&g, &ones, false).unwrap() + g.total() / 4.0).abs() < TOL);
        let y = SpinAssignment::new(vec![1, -1, 1]).unwrap();
        assert_eq!(
            cut_value(&g, &y, false).unwrap(),
            cut_value(&g, &y.flipped(), false).unwrap()
        );
        assert!(cut_value(&g, &SpinAssignment::new(vec![1]).unwrap(), false).is_err());
    }

    #[test]
    fn spins_to_binary_cases() {
        let up = SpinAssignment::new(vec![1, 1, 1]).unwrap();
        assert_eq!(spins_to_binary(&up).unwrap().bits(), &[0, 0]);
        let y = SpinAssignment::new(vec![-1, 1, 1]).unwrap();
        assert_eq!(spins_to_binary(&y).unwrap().bits(), &[1, 0]);
        for b in 0..16 {
            let y = SpinAssignment::from_index(b, 4);
            let x = spins_to_binary(&y).unwrap();
            assert_eq!(x, spins_to_binary(&y.flipped()).unwrap());
            assert_eq!(x.to_index(), spin_index_to_binary_index(b, 3));
        }
    }

    #[test]
    fn brute_force_cases() {
        let r = brute_force_qubo(&q(&[&[1.0]])).unwrap();
        assert_eq!((r.e_min, r.e_max), (0.0, 1.0));
        assert_eq!(r.optima, vec![BinaryAssignment::new(vec![1]).unwrap()]);

        let r = brute_force_qubo(&q(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!((r.e_min, r.e_max), (0.0, 2.0));
        assert_eq!(r.optima, vec![BinaryAssignment::new(vec![1, 1]).unwrap()]);
        let zeros = all_binary(2)
            .filter(|x| qubo_value(&q(&[&[0.0, 1.0], &[1.0, 0.0]]), x).unwrap() == 0.0)
            .count();
        assert_eq!(zeros, 3);
    }

    #[test]
    fn brute_force_refuses_above_cap() {
        let big = Qubo::zeros(5).unwrap();
        assert_eq!(
            brute_force_qubo_with_cap(&big, 4).unwrap_err(),
            Error::CapExceeded { n: 5, cap: 4 }
        );
        assert!(brute_force_maxcut_with_cap(&qubo_to_maxcut(&big), 5).is_err());
    }

    #[test]
    fn json_layout() {
        let g = qubo_to_maxcut(&q(&[&[1.0]]));
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"n":2,"matrix":[[-1.0,1.0],[1.0,0.0]],"offset":0.25}"#);
        let back: MaxCutInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"n":3,"matrix":[[1.0]],"offset":0}"#;
        assert!(serde_json::from_str::<Qubo>(bad).is_err());
        let asym = r#"{"n":2,"matrix":[[0,1],[2,0]]}"#;
        assert!(serde_json::from_str::<Qubo>(asym).is_err());
    }

    fn arb_qubo(max_n: usize) -> impl Strategy<Value = Qubo> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(-1.0f64..1.0, n * (n + 1) / 2).prop_map(move |upper| {
                let mut data = vec![0.0; n * n];
                let mut k = 0;
                for i in 0..n {
                    for j in i..n {
                        data[i * n + j] = upper[k];
                        data[j * n + i] = upper[k];
                        k += 1;
                    }
                }
                Qubo::from_row_major(n, data).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reduction_identity_holds(qq in arb_qubo(7)) {
            let g = qubo_to_maxcut(&qq);
            prop_assert_eq!(g.get(qq.n(), qq.n()), 0.0);
            for i in 0..g.m() {
                for j in 0..g.m() {
                    prop_assert_eq!(g.get(i, j), g.get(j, i));
                }
            }
            for b in 0..1u64 << g.m() {
                let y = SpinAssignment::from_index(b, g.m());
                let lhs = cut_value(&g, &y, true).unwrap();
                let rhs = qubo_value(&qq, &spins_to_binary(&y).unwrap()).unwrap();
                prop_assert!((lhs - rhs).abs() < TOL);
            }
        }

        #[test]
        fn maxcut_optima_pair_up(qq in arb_qubo(6)) {
            let qr = brute_force_qubo(&qq).unwrap();
            let g = qubo_to_maxcut(&qq);
            let mr = brute_force_maxcut(&g).unwrap();
            prop_assert!((mr.e_max + g.offset() - qr.e_max).abs() < TOL);
            prop_assert_eq!(mr.optima.len(), 2 * qr.optima.len());
            for y in &mr.optima {
                prop_assert!(mr.optima.contains(&y.flipped()));
                prop_assert!(qr.optima.contains(&spins_to_binary(y).unwrap()));
            }
        }

        #[test]
        fn fold_linear_preserves_argmax(qq in arb_qubo(5), seed in any::<u64>()) {
            let n = qq.n();
            let mu: Vec<f64> = (0..n).map(|i| ((seed >> (i * 7)) % 13) as f64 / 6.0 - 1.0).collect();
            let folded = fold_linear(&qq, &mu).unwrap();
            let direct: Vec<f64> = all_binary(n)
                .map(|x| qubo_value(&qq, &x).unwrap()
                    + x.bits().iter().zip(&mu).map(|(&b, m)| b as f64 * m).sum::<f64>())
                .collect();
            let best = direct.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let expected: Vec<BinaryAssignment> = all_binary(n)
                .zip(&direct)
                .filter(|(_, &v)| v >= best - TOL)
                .map(|(x, _)| x)
                .collect();
            prop_assert_eq!(brute_force_qubo(&folded).unwrap().optima, expected);
        }
    }
}
