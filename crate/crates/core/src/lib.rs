//! Resource-estimation and verification toolkit for first-quantized
//! Pauli-Fierz (non-relativistic QED) Hamiltonian simulation on a cubic
//! lattice with a truncated electric field.
//!
//! The crate has two halves that check each other:
//!
//! * analytic machinery — LCU decompositions of the lattice operators,
//!   PREP/SELECT block-encoding composition, multi-controlled-X counting,
//!   pairwise/nested commutator bounds, the divide-and-conquer budget
//!   recurrences, and the two total gate-cost models (divide-and-conquer
//!   Trotter + qubitization);
//! * exact dense-matrix oracles at desk scale (dims ≤ 4096) that rebuild
//!   the same operators entry by entry and verify every analytic claim.
//!
//! Nothing here is randomized: all generators are deterministic functions
//! of their parameters, so every CLI run is byte-reproducible.

pub mod blockenc;
pub mod commutators;
pub mod cutoff;
pub mod densemat;
pub mod gatecost;
pub mod lattice;
pub mod lcu;
pub mod operators;
pub mod smx;
pub mod stateprep;
pub mod trotter;

pub use densemat::DenseOperator;
pub use lattice::SimulationParams;

use thiserror::Error;

/// Absolute entrywise tolerance for matrix equality checks.
pub const TOL_MAT: f64 = 1e-10;

/// Schema version stamped into every JSON artifact the CLI emits.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("desk-scale guard: {0}")]
    Guard(String),
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimMismatch(usize, usize),
    #[error("unsupported truncation {truncation} for fragment {fragment}")]
    UnsupportedTruncation {
        fragment: &'static str,
        truncation: String,
    },
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
