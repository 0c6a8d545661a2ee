use thiserror::Error;

/// Errors produced by the builders, simulators and analytics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dense-limit-exceeded: {qubits} qubits requested, dense limit is {limit}")]
    DenseLimitExceeded { qubits: usize, limit: usize },

    #[error("gate-arity-mismatch: gate of dimension {dim} applied to {targets} target(s)")]
    GateArityMismatch { dim: usize, targets: usize },

    #[error("duplicate-qubit: wire {0} used more than once by a gate")]
    DuplicateQubit(usize),

    #[error("wire-out-of-range: wire {wire} on a register of {num_wires} wires")]
    WireOutOfRange { wire: usize, num_wires: usize },

    #[error("power-iteration-stall: no convergence after {0} iterations")]
    PowerIterationStall(usize),

    #[error("not-unitary: deviation {0:e} from unitarity")]
    NotUnitary(f64),

    #[error("not-in-basis: gate kind `{0}` is not in the compiled basis")]
    NotInBasis(String),

    #[error("not-walsh-form: {0}")]
    NotWalshForm(String),

    #[error("index-out-of-range: {what} = {value}, allowed range is [0, {bound})")]
    IndexOutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("bad-sample-count: {0} samples, expected a power of two")]
    BadSampleCount(usize),

    #[error("backend-infeasible: {0}")]
    BackendInfeasible(String),

    #[error("size-mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid-input: {0}")]
    InvalidInput(String),

    #[error("qasm-parse: line {line}: {msg}")]
    QasmParse { line: usize, msg: String },
}

impl Error {
    /// Stable short identifier of the error class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DenseLimitExceeded { .. } => "dense-limit-exceeded",
            Error::GateArityMismatch { .. } => "gate-arity-mismatch",
            Error::DuplicateQubit(_) => "duplicate-qubit",
            Error::WireOutOfRange { .. } => "wire-out-of-range",
            Error::PowerIterationStall(_) => "power-iteration-stall",
            Error::NotUnitary(_) => "not-unitary",
            Error::NotInBasis(_) => "not-in-basis",
            Error::NotWalshForm(_) => "not-walsh-form",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::BadSampleCount(_) => "bad-sample-count",
            Error::BackendInfeasible(_) => "backend-infeasible",
            Error::SizeMismatch(_) => "size-mismatch",
            Error::InvalidInput(_) => "invalid-input",
            Error::QasmParse { .. } => "qasm-parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
