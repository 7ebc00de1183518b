//! Numeric checks on doubled diagrams evaluated in complex models.
//!
//! A quantum wire of dimension `d` is evaluated as a pair of legs `(ā, a)`;
//! the leg vector of a density matrix `ρ` holds `ρ[a, ā]` at index
//! `ā·d + a`. Several wires interleave their leg pairs in wire order, and
//! their density matrices use the row-major product basis.

mod broadcast;
mod causal;
mod dilation;
mod rel;
mod signalling;
mod states;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::doubling::QDiagram;
use crate::error::{AnalysisError, EvalError};
use crate::tensor::{evaluate, Model, Tensor};

pub use broadcast::{check_broadcast, BroadcastReport, Discrepancy};
pub use causal::{causal_deviation, check_theorem_pure_causal, is_causal, is_isometry, is_unitary, PureCausalReport};
pub use dilation::{choi, choi_from_kraus, kraus_from_choi, stinespring, ChoiMatrix, Stinespring, KRAUS_CUTOFF};
pub use rel::{check_rel_dagger_axiom, rel_dagger_axiom, separable_factors, BoolMatrix, RelReport};
pub use signalling::{check_no_signalling, no_signalling_deviation};
pub use states::{purity_defect, reduced_state, split_if_pure_marginal, Keep};

/// Tolerance used when a precondition asks for a Hermitian or causal input.
pub const PRECONDITION_TOL: f64 = 1e-9;

/// Evaluates the base diagram: output legs first, then input legs.
pub fn channel_tensor(f: &QDiagram, m: &Model<Complex64>) -> Result<Tensor<Complex64>, EvalError> {
    evaluate(f.base(), m)
}

/// The superoperator as a matrix acting on leg vectors.
pub fn superoperator(f: &QDiagram, m: &Model<Complex64>) -> Result<DMatrix<Complex64>, EvalError> {
    Ok(channel_tensor(f, m)?.to_matrix())
}

/// Applies `f` to a density matrix on its input wires.
pub fn apply_channel(
    f: &QDiagram,
    m: &Model<Complex64>,
    rho: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>, AnalysisError> {
    let din = m.dims_of(f.qdom())?;
    let dout = m.dims_of(f.qcod())?;
    let n: usize = din.iter().product();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(AnalysisError::Arity(format!(
            "density matrix is {}x{}, the input space has dimension {n}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let v = DMatrix::from_column_slice(n * n, 1, &density_to_legs(rho, &din));
    let out = superoperator(f, m)? * v;
    Ok(legs_to_density(out.as_slice(), &dout))
}

/// Density matrix of a state (a diagram with no quantum inputs).
pub fn state_density(f: &QDiagram, m: &Model<Complex64>) -> Result<DMatrix<Complex64>, AnalysisError> {
    if !f.qdom().is_empty() {
        return Err(AnalysisError::Arity(format!("expected a state, found {} inputs", f.qdom().len())));
    }
    let dims = m.dims_of(f.qcod())?;
    Ok(legs_to_density(channel_tensor(f, m)?.data(), &dims))
}

/// Splits a row-major index over `dims` into its digits.
fn digits(mut k: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (i, &d) in dims.iter().enumerate().rev() {
        out[i] = k % d;
        k /= d;
    }
    out
}

fn leg_index(row: &[usize], col: &[usize], dims: &[usize]) -> usize {
    let mut k = 0;
    for ((&a, &abar), &d) in row.iter().zip(col).zip(dims) {
        k = (k * d + abar) * d + a;
    }
    k
}

pub fn density_to_legs(rho: &DMatrix<Complex64>, dims: &[usize]) -> Vec<Complex64> {
    let n: usize = dims.iter().product();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..n {
        let rd = digits(r, dims);
        for c in 0..n {
            v[leg_index(&rd, &digits(c, dims), dims)] = rho[(r, c)];
        }
    }
    v
}

pub fn legs_to_density(v: &[Complex64], dims: &[usize]) -> DMatrix<Complex64> {
    let n: usize = dims.iter().product();
    assert_eq!(v.len(), n * n, "leg vector length");
    DMatrix::from_fn(n, n, |r, c| v[leg_index(&digits(r, dims), &digits(c, dims), dims)])
}

/// Largest entrywise modulus of `a - b`; infinite if the shapes differ.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Data for a generator `A → E ⊗ B` whose doubling, with `E` discarded,
/// is the channel with the given Kraus operators (`E` indexes them).
pub fn kraus_generator_data(kraus: &[DMatrix<Complex64>]) -> Vec<Complex64> {
    let (db, da) = kraus[0].shape();
    let mut data = Vec::with_capacity(kraus.len() * db * da);
    for k in kraus {
        for b in 0..db {
            for a in 0..da {
                data.push(k[(b, a)]);
            }
        }
    }
    data
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{BoxVariant, Diagram};
    use crate::doubling::{discard, double, q_identity};
    use crate::theory::Theory;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn legs_round_trip() {
        let dims = [2, 3];
        let rho = DMatrix::from_fn(6, 6, |r, c| Complex64::new(r as f64, c as f64));
        let v = density_to_legs(&rho, &dims);
        assert_eq!(legs_to_density(&v, &dims), rho);
        // single wire: index ā·d + a holds ρ[a, ā]
        let one = density_to_legs(&DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(2., 0.), c(3., 0.), c(4., 0.)]), &[2]);
        assert_eq!(one, vec![c(1., 0.), c(3., 0.), c(2., 0.), c(4., 0.)]);
    }

    #[test]
    fn identity_and_discard_channels() {
        let t = Theory::builder().atomic("A").build().unwrap();
        let a = t.atomic("A").unwrap();
        let m = Model::<Complex64>::new(&t, [("A", 2)]).unwrap();
        let s = superoperator(&q_identity(&t, std::slice::from_ref(&a)), &m).unwrap();
        assert_eq!(s, DMatrix::identity(4, 4));
        // discard is the row vector of the trace: Σ_i ⟨ii|
        let d = channel_tensor(&discard(&t, &a), &m).unwrap();
        assert_eq!(d.data(), &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        let rho = DMatrix::from_row_slice(2, 2, &[c(0.3, 0.), c(0.1, 0.2), c(0.1, -0.2), c(0.7, 0.)]);
        let tr = apply_channel(&discard(&t, &a), &m, &rho).unwrap();
        assert!((tr[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn doubled_hadamard_is_conj_h_tensor_h() {
        let t = Theory::builder().atomic("A").generator("H", &["A"], &["A"]).build().unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // a complex variant so that conjugation matters
        let h = [c(s, 0.), c(0., s), c(s, 0.), c(0., -s)];
        let m = Model::new(&t, [("A", 2)]).unwrap().with_generator("H", h.to_vec()).unwrap();
        let hd = double(&Diagram::generator(&t, "H", BoxVariant::ORIGINAL).unwrap());
        let sup = superoperator(&hd, &m).unwrap();
        let hm = DMatrix::from_row_slice(2, 2, &h);
        let want = hm.map(|x| x.conj()).kronecker(&hm);
        assert!(max_abs_diff(&sup, &want) < 1e-15);
    }
}
