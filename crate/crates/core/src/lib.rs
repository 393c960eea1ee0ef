//! Warm-started QAOA for general QUBOs.
//!
//! A QUBO is reduced to Max-Cut on one extra vertex, a relaxation of that
//! Max-Cut instance (or of the QUBO box directly) is mapped onto a product
//! state, and QAOA is simulated exactly from that state with a matching mixer.

pub mod engine;
pub mod error;
pub mod metrics;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod problems;
pub mod qubo;
pub mod relax;
pub mod rng;
pub mod warmstart;

pub use engine::{
    apply_mixer, apply_phase, build_cost_maxcut, build_cost_qubo, evolve, expectation, optimize,
    DiagonalCost, OptProtocol, QaoaParams, StateVector,
};
pub use error::{Error, Result};
pub use metrics::{alpha_histogram, approx_ratio, cross_space_check, opt_prob, AlphaHistogram, MetricPair};
pub use problems::{generate, Instance, InstanceMeta, InstanceSpec, ProblemKind};
pub use qubo::{
    brute_force_maxcut, brute_force_qubo, qubo_to_maxcut, spins_to_binary, BinaryAssignment,
    MaxCutInstance, Qubo, SpinAssignment,
};
pub use relax::{
    project_gw, solve_bm, solve_box_relaxed, solve_gw, BoxPoint, GramFactor, RelaxConfig,
    RelaxedEmbedding,
};
pub use warmstart::{
    encode_box, encode_embedding, uniform_state, vertex_at_top, BlochVector, ProductState,
    RotationChoice, WarmStartKind,
};
