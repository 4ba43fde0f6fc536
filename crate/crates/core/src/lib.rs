//! One-qubit open-system dynamics toolkit: channel representation
//! conversions, exact spin-star reduced dynamics, TCL/NZ master-equation
//! generators, and the CNOT/discord case study.
//!
//! All types are immutable values after construction and all operations are
//! pure functions, so everything here is safe to share across threads.

pub mod basis;
pub mod channel;
pub mod cnot;
pub mod discord;
pub mod eigen;
pub mod error;
pub mod kernels;
pub mod matrix;
pub mod spin_star;
pub mod verify;

pub use basis::{bloch_expand, bloch_reconstruct, BlochVector, HermitianBasis, LadderBasis};
pub use channel::{
    apply_generator, apply_kraus, apply_transfer, choi_from_transfer, is_completely_positive,
    is_trace_preserving, kraus_from_choi, transfer_from_choi, transfer_from_map, ChoiMatrix,
    CpVerdict, KrausSet, TpVerdict, TransferMatrix,
};
pub use error::{Error, Result};
pub use matrix::{OperatorMatrix, Subsystem};

/// Tolerances shared across the crate. The defaults match the structural
/// (1e-10) and reconstruction (1e-12) levels used throughout the test suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Hermiticity, positivity, TP residual checks.
    pub structural: f64,
    /// Round-trip and basis-completeness checks.
    pub reconstruction: f64,
    /// Choi eigenvalues below this are dropped during Kraus extraction.
    pub kraus_truncation: f64,
    /// |f12|, |f3| below this count as a generator pole.
    pub pole_epsilon: f64,
    /// Bath sectors with (λ1, λ2) closer than this are merged.
    pub sector_merge: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            structural: 1e-10,
            reconstruction: 1e-12,
            kraus_truncation: 1e-12,
            pole_epsilon: 1e-8,
            sector_merge: 1e-9,
        }
    }
}
