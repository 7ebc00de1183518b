use thiserror::Error;

use crate::theory::AtomicType;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate type `{0}`")]
    DuplicateType(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid identifier `{0}`")]
    InvalidName(String),
    #[error("diagrams belong to different theories")]
    TheoryMismatch,
    #[error("type mismatch at index {index}: expected {expected}, found {found}")]
    TypeMismatch { index: usize, expected: AtomicType, found: AtomicType },
    #[error("arity mismatch: expected {expected} wires, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("boundary index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("not a circuit: {0}")]
    NotACircuit(CircuitObstruction),
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

/// Why a diagram fails to be a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircuitObstruction {
    /// Wire joining two outputs or two inputs, given by its index in the wire list.
    BentWire(usize),
    /// Closed wire loops of the listed types.
    Loops(Vec<AtomicType>),
    /// Directed cycles through boxes (box ids).
    Cycles(Vec<Vec<usize>>),
}

impl std::fmt::Display for CircuitObstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CircuitObstruction::BentWire(w) => write!(f, "wire {w} is a cup or cap"),
            CircuitObstruction::Loops(l) => write!(f, "closed loops {l:?}"),
            CircuitObstruction::Cycles(c) => write!(f, "directed cycles {c:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("diagram and model belong to different theories")]
    TheoryMismatch,
    #[error("no tensor for generator `{0}`")]
    MissingGenerator(String),
    #[error("no dimension for type `{0}`")]
    MissingDim(String),
    #[error("dimension of `{0}` must be positive")]
    ZeroDim(String),
    #[error("tensor for `{name}` has {found} entries, expected {expected}")]
    ShapeMismatch { name: String, expected: usize, found: usize },
    #[error("empty dimension range {lo}..={hi}")]
    EmptyRange { lo: usize, hi: usize },
    #[error("boundaries differ: {0}")]
    BoundaryMismatch(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("arity error: {0}")]
    Arity(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("not completely positive: eigenvalue {0:.3e}")]
    NotCompletelyPositive(f64),
    #[error("process is not causal (deviation {0:.3e})")]
    NonCausal(f64),
}
