use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::dilation::sorted_eigen;
use crate::error::AnalysisError;

/// Which factor of a bipartite system to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    Left,
    Right,
}

fn check_bipartite(rho: &DMatrix<Complex64>, dims: (usize, usize)) -> Result<(), AnalysisError> {
    if !rho.is_square() {
        return Err(AnalysisError::NotSquare { rows: rho.nrows(), cols: rho.ncols() });
    }
    if rho.nrows() != dims.0 * dims.1 {
        return Err(AnalysisError::Arity(format!(
            "{}x{} matrix on a {}x{} system",
            rho.nrows(),
            rho.ncols(),
            dims.0,
            dims.1
        )));
    }
    Ok(())
}

/// Partial trace of a state on `A ⊗ B` (`dims = (d_A, d_B)`) over the factor
/// that is not kept.
pub fn reduced_state(
    rho: &DMatrix<Complex64>,
    dims: (usize, usize),
    keep: Keep,
) -> Result<DMatrix<Complex64>, AnalysisError> {
    check_bipartite(rho, dims)?;
    let (da, db) = dims;
    Ok(match keep {
        Keep::Left => DMatrix::from_fn(da, da, |i, j| (0..db).map(|k| rho[(i * db + k, j * db + k)]).sum()),
        Keep::Right => DMatrix::from_fn(db, db, |i, j| (0..da).map(|k| rho[(k * db + i, k * db + j)]).sum()),
    })
}

/// Second-largest over largest eigenvalue modulus: 0 for rank one (and for
/// the zero matrix), 1 when the top eigenvalue is degenerate.
pub fn purity_defect(rho: &DMatrix<Complex64>) -> Result<f64, AnalysisError> {
    if !rho.is_square() {
        return Err(AnalysisError::NotSquare { rows: rho.nrows(), cols: rho.ncols() });
    }
    let mut mags: Vec<f64> = sorted_eigen(rho).iter().map(|(l, _)| l.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    match mags.as_slice() {
        [top, second, ..] if *top > 0.0 => Ok(second / top),
        _ => Ok(0.0),
    }
}

/// If the right marginal of `rho` is pure, returns `(ρ_A, φ)` with `φ` a unit
/// vector and `ρ ≈ ρ_A ⊗ |φ⟩⟨φ|`. Returns `None` otherwise.
#[allow(clippy::type_complexity)]
pub fn split_if_pure_marginal(
    rho: &DMatrix<Complex64>,
    dims: (usize, usize),
    tol: f64,
) -> Result<Option<(DMatrix<Complex64>, DVector<Complex64>)>, AnalysisError> {
    let rho_b = reduced_state(rho, dims, Keep::Right)?;
    if purity_defect(&rho_b)? > tol {
        return Ok(None);
    }
    let (da, db) = dims;
    let phi = sorted_eigen(&rho_b).swap_remove(0).1;
    let rho_a = DMatrix::from_fn(da, da, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..db {
            for l in 0..db {
                acc += phi[k].conj() * rho[(i * db + k, j * db + l)] * phi[l];
            }
        }
        acc
    });
    Ok(Some((rho_a, phi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::max_abs_diff;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn proj(v: &[Complex64]) -> DMatrix<Complex64> {
        let v = DVector::from_column_slice(v);
        &v * v.adjoint()
    }

    #[test]
    fn bell_state_marginal_is_maximally_mixed() {
        let rho = proj(&[c(1.), c(0.), c(0.), c(1.)]);
        for keep in [Keep::Left, Keep::Right] {
            let r = reduced_state(&rho, (2, 2), keep).unwrap();
            assert_eq!(r, DMatrix::identity(2, 2));
            assert!((purity_defect(&r).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(split_if_pure_marginal(&rho, (2, 2), 1e-9).unwrap(), None);
    }

    #[test]
    fn product_state_marginals() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = proj(&[c(1.), c(0.)]);
        let plus = proj(&[c(s), c(s)]);
        let rho = zero.kronecker(&plus);
        let left = reduced_state(&rho, (2, 2), Keep::Left).unwrap();
        assert!(max_abs_diff(&left, &zero) < 1e-15);
        assert!(purity_defect(&left).unwrap() < 1e-12);
        let (ra, phi) = split_if_pure_marginal(&rho, (2, 2), 1e-9).unwrap().unwrap();
        assert!(max_abs_diff(&ra, &zero) < 1e-12);
        assert!(max_abs_diff(&(&phi * phi.adjoint()), &plus) < 1e-12);
    }

    #[test]
    fn rejects_non_square() {
        let m = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(purity_defect(&m), Err(AnalysisError::NotSquare { .. })));
        assert!(matches!(reduced_state(&m, (1, 2), Keep::Left), Err(AnalysisError::NotSquare { .. })));
    }
}
