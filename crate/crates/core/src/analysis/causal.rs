use nalgebra::DMatrix;
use num_complex::Complex64;

use super::max_abs_diff;
use crate::diagram::Diagram;
use crate::doubling::{discard_all, double, q_compose_seq, QDiagram};
use crate::error::AnalysisError;
use crate::tensor::{evaluate, max_distance, Model};

/// Entrywise distance between "discard every output after `f`" and
/// "discard every input".
pub fn causal_deviation(f: &QDiagram, m: &Model<Complex64>) -> Result<f64, AnalysisError> {
    let t = f.theory();
    let lhs = q_compose_seq(&discard_all(t, f.qcod()), f)?;
    let rhs = discard_all(t, f.qdom());
    let dev = max_distance(&evaluate(lhs.base(), m)?, &evaluate(rhs.base(), m)?);
    Ok(dev.expect("both sides have the input legs of f"))
}

pub fn is_causal(f: &QDiagram, m: &Model<Complex64>, tol: f64) -> Result<bool, AnalysisError> {
    Ok(causal_deviation(f, m)? <= tol)
}

fn gram_is_identity(a: &DMatrix<Complex64>, tol: f64) -> bool {
    max_abs_diff(&(a.adjoint() * a), &DMatrix::identity(a.ncols(), a.ncols())) <= tol
}

/// `F†F ≈ I`.
pub fn is_isometry(f: &Diagram, m: &Model<Complex64>, tol: f64) -> Result<bool, AnalysisError> {
    Ok(gram_is_identity(&evaluate(f, m)?.to_matrix(), tol))
}

/// `F†F ≈ I` and `FF† ≈ I`.
pub fn is_unitary(f: &Diagram, m: &Model<Complex64>, tol: f64) -> Result<bool, AnalysisError> {
    let a = evaluate(f, m)?.to_matrix();
    Ok(a.is_square() && gram_is_identity(&a, tol) && gram_is_identity(&a.adjoint(), tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PureCausalReport {
    pub causal: bool,
    pub isometry: bool,
    /// A pure process is causal exactly when it is an isometry.
    pub consistent: bool,
}

pub fn check_theorem_pure_causal(
    f: &Diagram,
    m: &Model<Complex64>,
    tol: f64,
) -> Result<PureCausalReport, AnalysisError> {
    let causal = is_causal(&double(f), m, tol)?;
    let isometry = is_isometry(f, m, tol)?;
    Ok(PureCausalReport { causal, isometry, consistent: causal == isometry })
}
