//! Warm-start product states.
//!
//! A warm-start is a product state `⊗_j |ψ_j⟩`, described by one Bloch vector
//! per qubit. The same Bloch vectors define the mixer, so the warm-start is
//! always the top eigenstate of its own mixer.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::relax::{BoxPoint, RelaxedEmbedding};
use crate::rng::stream;

const POLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const NORTH: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };
    pub const PLUS: BlochVector = BlochVector { x: 1.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let b = Self { x, y, z };
        if (b.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "Bloch vector ({x}, {y}, {z}) is not unit length"
            )));
        }
        Ok(b)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Polar angle from +z and azimuth, computed without the `acos`
    /// ill-conditioning near the poles.
    pub fn angles(&self) -> (f64, f64) {
        (self.x.hypot(self.y).atan2(self.z), self.y.atan2(self.x))
    }

    pub fn is_pole(&self) -> bool {
        self.x.hypot(self.y) < POLE_TOL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductState {
    pub qubits: Vec<BlochVector>,
}

impl ProductState {
    pub fn new(qubits: Vec<BlochVector>) -> Result<Self> {
        if qubits.is_empty() {
            return Err(Error::InvalidInput("product state needs a qubit".into()));
        }
        for q in &qubits {
            BlochVector::new(q.x, q.y, q.z)?;
        }
        Ok(Self { qubits })
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    /// Qubits sitting at a pole of the Bloch sphere. Infinite-depth
    /// convergence of the warm-started ansatz is only expected when this is
    /// empty, so runs record it.
    pub fn pole_qubits(&self) -> Vec<usize> {
        self.qubits
            .iter()
            .enumerate()
            .filter(|(_, b)| b.is_pole())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Which qubit (if any) is rotated to the north pole before encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RotationChoice {
    First,
    Last,
    None,
    Qubit(usize),
}

impl RotationChoice {
    /// Concrete qubit index for a state on `n` qubits.
    pub fn resolve(self, n: usize) -> Result<Option<usize>> {
        let idx = match self {
            RotationChoice::None => return Ok(None),
            RotationChoice::First => 0,
            RotationChoice::Last => n.checked_sub(1).ok_or_else(|| {
                Error::InvalidInput("cannot rotate an empty embedding".into())
            })?,
            RotationChoice::Qubit(i) => i,
        };
        if idx >= n {
            return Err(Error::InvalidInput(format!("rotation qubit {idx} out of range for {n}")));
        }
        Ok(Some(idx))
    }
}

impl fmt::Display for RotationChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationChoice::First => f.write_str("first"),
            RotationChoice::Last => f.write_str("last"),
            RotationChoice::None => f.write_str("none"),
            RotationChoice::Qubit(i) => write!(f, "{i}"),
        }
    }
}

impl FromStr for RotationChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "first" => Ok(RotationChoice::First),
            "last" => Ok(RotationChoice::Last),
            "none" => Ok(RotationChoice::None),
            other => other
                .parse()
                .map(RotationChoice::Qubit)
                .map_err(|_| Error::InvalidInput(format!("unknown rotation '{s}'"))),
        }
    }
}

impl Serialize for RotationChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RotationChoice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Warm-start families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WarmStartKind {
    Bm2,
    Bm3,
    Gw2,
    Gw3,
    Box,
    Uniform,
}

impl WarmStartKind {
    pub const ALL: [WarmStartKind; 6] = [
        WarmStartKind::Bm2,
        WarmStartKind::Bm3,
        WarmStartKind::Gw2,
        WarmStartKind::Gw3,
        WarmStartKind::Box,
        WarmStartKind::Uniform,
    ];

    /// Dimension of the relaxed embedding, for the Max-Cut based families.
    pub fn embedding_dim(self) -> Option<usize> {
        match self {
            WarmStartKind::Bm2 | WarmStartKind::Gw2 => Some(2),
            WarmStartKind::Bm3 | WarmStartKind::Gw3 => Some(3),
            WarmStartKind::Box | WarmStartKind::Uniform => None,
        }
    }

    /// Whether the QAOA run happens on the reduced Max-Cut instance.
    pub fn uses_maxcut(self) -> bool {
        self.embedding_dim().is_some()
    }

    pub fn name(self) -> &'static str {
        match self {
            WarmStartKind::Bm2 => "bm2",
            WarmStartKind::Bm3 => "bm3",
            WarmStartKind::Gw2 => "gw2",
            WarmStartKind::Gw3 => "gw3",
            WarmStartKind::Box => "box",
            WarmStartKind::Uniform => "uniform",
        }
    }
}

impl fmt::Display for WarmStartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WarmStartKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WarmStartKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown warm-start '{s}'")))
    }
}

/// Bloch-sphere encoding of a relaxed embedding.
///
/// `k = 2`: `cos(θ/2)|0⟩ + e^{-iπ/2} sin(θ/2)|1⟩`, Bloch `(0, -sin θ, cos θ)`.
/// `k = 3`: `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`, Bloch equal to the embedding vector.
pub fn encode_embedding(e: &RelaxedEmbedding) -> ProductState {
    let qubits = match e.phi() {
        None => e
            .theta()
            .iter()
            .map(|t| BlochVector {
                x: 0.0,
                y: -t.sin(),
                z: t.cos(),
            })
            .collect(),
        Some(phi) => e
            .theta()
            .iter()
            .zip(phi)
            .map(|(t, p)| BlochVector {
                x: t.sin() * p.cos(),
                y: t.sin() * p.sin(),
                z: t.cos(),
            })
            .collect(),
    };
    ProductState { qubits }
}

/// `R_Y(θ_j)|0⟩` with `θ_j = 2 arcsin(clamp(y_j, ε, 1-ε))`.
pub fn encode_box(point: &BoxPoint, eps: f64) -> Result<ProductState> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidInput(format!("eps {eps} outside (0, 1/2)")));
    }
    let qubits = point
        .y_c
        .iter()
        .map(|&y| {
            let t = box_angle(y, eps);
            BlochVector {
                x: t.sin(),
                y: 0.0,
                z: t.cos(),
            }
        })
        .collect();
    Ok(ProductState { qubits })
}

pub fn box_angle(y: f64, eps: f64) -> f64 {
    2.0 * y.clamp(eps, 1.0 - eps).asin()
}

/// Global rotation that puts the chosen qubit at `|0⟩`.
///
/// `k = 2` shifts every angle by `-θ_j`. `k = 3` rotates every vector by
/// `R_z(-φ_j)`, then `R_y(-θ_j)`, then a uniformly random `R_z` drawn from
/// `rng_seed`. Rotations are orthogonal, so all pairwise inner products are
/// preserved.
pub fn vertex_at_top(
    e: &RelaxedEmbedding,
    choice: RotationChoice,
    rng_seed: u64,
) -> Result<RelaxedEmbedding> {
    let Some(j) = choice.resolve(e.len())? else {
        return Ok(e.clone());
    };
    match e.phi() {
        None => {
            let tj = e.theta()[j];
            let mut theta: Vec<f64> = e.theta().iter().map(|t| t - tj).collect();
            theta[j] = 0.0;
            Ok(RelaxedEmbedding::planar(theta))
        }
        Some(phi) => {
            let (tj, pj) = (e.theta()[j], phi[j]);
            let spin: f64 = stream(rng_seed, 0).random::<f64>() * std::f64::consts::TAU;
            let rotated: Vec<Vec<f64>> = e
                .vectors()
                .into_iter()
                .map(|v| rot_z(spin, rot_y(-tj, rot_z(-pj, [v[0], v[1], v[2]]))).to_vec())
                .collect();
            let mut theta = Vec::with_capacity(rotated.len());
            let mut az = Vec::with_capacity(rotated.len());
            for v in &rotated {
                let b = BlochVector {
                    x: v[0],
                    y: v[1],
                    z: v[2],
                };
                let (t, p) = b.angles();
                theta.push(t);
                az.push(p);
            }
            theta[j] = 0.0;
            az[j] = 0.0;
            RelaxedEmbedding::spherical(theta, az)
        }
    }
}

fn rot_z(a: f64, v: [f64; 3]) -> [f64; 3] {
    let (s, c) = a.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]]
}

fn rot_y(a: f64, v: [f64; 3]) -> [f64; 3] {
    let (s, c) = a.sin_cos();
    [c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]]
}

/// `|+⟩^{⊗n}`, the standard QAOA start.
pub fn uniform_state(n: usize) -> Result<ProductState> {
    if n == 0 {
        return Err(Error::InvalidInput("uniform state needs n >= 1".into()));
    }
    Ok(ProductState {
        qubits: vec![BlochVector::PLUS; n],
    })
}

/// Checks that `state` has `n` qubits.
pub fn expect_qubits(state: &ProductState, n: usize) -> Result<()> {
    check_dim(n, state.len())
}
