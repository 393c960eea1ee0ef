use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::qubo::Qubo;
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomKind {
    /// `U[-1, 1]`
    Continuous,
    /// `U{-1, +1}`
    Discrete,
}

/// Symmetric matrix with i.i.d. upper triangle (diagonal included).
pub fn gen_random(kind: RandomKind, n: usize, seed: u64) -> Qubo {
    let mut rng = stream(seed, 0);
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = match kind {
                RandomKind::Continuous => rng.random_range(-1.0..=1.0),
                RandomKind::Discrete => {
                    if rng.random::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            q[i * n + j] = v;
            q[j * n + i] = v;
        }
    }
    Qubo::from_row_major(n, q).expect("symmetric by construction")
}
