//! String diagrams for process theories.
//!
//! Diagrams are port graphs over a [`Theory`]; cups and caps are bent wires,
//! so yanking holds by construction and equality is graph isomorphism. On top
//! of that sit the doubling construction ([`doubling`]), a tensor semantics
//! over any involutive semiring ([`tensor`]) and numeric checks of causality,
//! dilation and signalling properties ([`analysis`]).

pub mod analysis;
pub mod demo;
pub mod diagram;
pub mod doubling;
pub mod equality;
pub mod error;
pub mod format;
pub mod random;
pub mod tensor;
pub mod theory;

pub use diagram::{
    compose_all, compose_par, compose_seq, recompose, tensor_all, BoxVariant, Cell, Diagram, Layer, Owner, Port, Side,
    Wire, WireKind,
};
pub use doubling::{
    discard, discard_all, double, purify, q_compose_par, q_compose_seq, q_conjugate, q_dagger, q_equal, q_identity,
    q_transpose, unpurify, QDiagram,
};
pub use equality::{canonical_form, equal, CanonicalForm};
pub use error::{AnalysisError, DiagramError, EvalError};
pub use tensor::{evaluate, numeric_equal, prob_equiv, random_model, Model, Scalar, Tensor, Verdict};
pub use theory::{AtomicType, GeneratorSig, Theory, TypeList};

pub use num_complex::Complex64;
