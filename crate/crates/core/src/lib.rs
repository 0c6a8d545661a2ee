//! Synthesis, compilation and exact verification of quantum circuits for
//! discrete-time quantum walks with position-dependent coins.
//!
//! Layout conventions used throughout: qubit 0 is the least significant bit
//! of a basis index. On the walk layout the coin is qubit 0 and position bit
//! `p` is qubit `p + 1`, so the basis index of `|k⟩|c⟩` is `2k + c`.

pub mod circuit;
pub mod coin;
pub mod compile;
pub mod error;
pub mod exec;
pub mod linear;
pub mod naive;
pub mod scaling;
pub mod shift;
pub mod statevec;
pub mod walk;
pub mod walsh;

pub use circuit::{Circuit, DepthConvention, Gate, GateKind, Layout, Op, RegisterMap, Sigma};
pub use coin::CoinField;
pub use error::{Error, Result};
pub use exec::Exec;
pub use statevec::{ComplexMatrix, Mat2, SparseState, C64};

/// Centralized numerical tolerances.
pub mod tol {
    /// ‖M†M − I‖_max for a matrix to count as unitary.
    pub const UNITARY: f64 = 1e-10;
    /// Allowed deviation of a state norm from 1.
    pub const NORM: f64 = 1e-10;
    /// Default entrywise matrix equality.
    pub const MATRIX_EQ: f64 = 1e-12;
    /// Sparse amplitudes below this modulus are dropped.
    pub const PRUNE: f64 = 1e-14;
}
