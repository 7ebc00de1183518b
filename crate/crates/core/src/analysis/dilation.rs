use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{causal_deviation, hermitian_deviation, state_density, PRECONDITION_TOL};
use crate::diagram::Diagram;
use crate::doubling::{double, q_compose_par, q_compose_seq, q_identity, QDiagram};
use crate::error::AnalysisError;
use crate::tensor::Model;

/// Default eigenvalue cutoff for Kraus extraction.
pub const KRAUS_CUTOFF: f64 = 1e-10;

/// Choi matrix of a channel `A → B`, indexed by `(in, out)` pairs:
/// `C = Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    pub matrix: DMatrix<Complex64>,
    pub in_dim: usize,
    pub out_dim: usize,
}

/// A Stinespring isometry `V: A → B ⊗ E` with `Φ(ρ) = Tr_E(V ρ V†)`.
#[derive(Clone, Debug)]
pub struct Stinespring {
    pub v: DMatrix<Complex64>,
    pub env_dim: usize,
    pub kraus: Vec<DMatrix<Complex64>>,
}

/// Feeds one half of an unnormalised doubled cup through `f`. All input
/// wires are grouped into `A`, all output wires into `B`.
pub fn choi(f: &QDiagram, m: &Model<Complex64>) -> Result<ChoiMatrix, AnalysisError> {
    let t = f.theory();
    let dom = f.qdom();
    let state = q_compose_seq(&q_compose_par(&q_identity(t, dom), f)?, &double(&Diagram::cups(t, dom)))?;
    Ok(ChoiMatrix {
        matrix: state_density(&state, m)?,
        in_dim: m.dims_of(dom)?.iter().product(),
        out_dim: m.dims_of(f.qcod())?.iter().product(),
    })
}

/// `Σ_k (I ⊗ K_k)|Φ⟩⟨Φ|(I ⊗ K_k)†` with `|Φ⟩ = Σ_i |ii⟩`.
pub fn choi_from_kraus(kraus: &[DMatrix<Complex64>]) -> ChoiMatrix {
    let (db, da) = kraus[0].shape();
    let mut matrix = DMatrix::zeros(da * db, da * db);
    for k in kraus {
        let v = DVector::from_fn(da * db, |r, _| k[(r % db, r / db)]);
        matrix += &v * v.adjoint();
    }
    ChoiMatrix { matrix, in_dim: da, out_dim: db }
}

/// Hermitian eigenvalues and eigenvectors, largest eigenvalue first, each
/// eigenvector rotated so its largest-modulus entry is positive real.
pub(crate) fn sorted_eigen(m: &DMatrix<Complex64>) -> Vec<(f64, DVector<Complex64>)> {
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let mut pairs: Vec<(f64, DVector<Complex64>)> = (0..eig.eigenvalues.len())
        .map(|i| {
            let mut v: DVector<Complex64> = eig.eigenvectors.column(i).into_owned();
            let mut best = 0;
            for (j, x) in v.iter().enumerate() {
                if x.norm() > v[best].norm() + 1e-12 {
                    best = j;
                }
            }
            let p = v[best];
            if p.norm() > 0.0 {
                v *= p.conj() / p.norm();
            }
            (eig.eigenvalues[i], v)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs
}

/// Kraus operators `K[b, a] = √λ · v[a·d_B + b]` from the eigenvectors with
/// eigenvalue above `cutoff`, in decreasing eigenvalue order.
pub fn kraus_from_choi(c: &ChoiMatrix, cutoff: f64) -> Result<Vec<DMatrix<Complex64>>, AnalysisError> {
    let n = c.in_dim * c.out_dim;
    if c.matrix.nrows() != n || c.matrix.ncols() != n {
        return Err(AnalysisError::NotSquare { rows: c.matrix.nrows(), cols: c.matrix.ncols() });
    }
    let dev = hermitian_deviation(&c.matrix);
    if dev > PRECONDITION_TOL {
        return Err(AnalysisError::NotHermitian(dev));
    }
    let eig = sorted_eigen(&c.matrix);
    if let Some(&(lowest, _)) = eig.last() {
        if lowest < -cutoff {
            return Err(AnalysisError::NotCompletelyPositive(lowest));
        }
    }
    let db = c.out_dim;
    let kraus: Vec<_> = eig
        .iter()
        .filter(|(l, _)| *l > cutoff)
        .map(|(l, v)| DMatrix::from_fn(db, c.in_dim, |b, a| v[a * db + b] * l.sqrt()))
        .collect();
    if kraus.is_empty() {
        return Ok(vec![DMatrix::zeros(db, c.in_dim)]);
    }
    Ok(kraus)
}

/// Stacks the Kraus operators of a causal `f` into `V[(b·r + i), a] = K_i[b, a]`.
pub fn stinespring(f: &QDiagram, m: &Model<Complex64>, cutoff: f64) -> Result<Stinespring, AnalysisError> {
    let dev = causal_deviation(f, m)?;
    if dev > PRECONDITION_TOL {
        return Err(AnalysisError::NonCausal(dev));
    }
    let kraus = kraus_from_choi(&choi(f, m)?, cutoff)?;
    let r = kraus.len();
    let (db, da) = kraus[0].shape();
    let v = DMatrix::from_fn(db * r, da, |row, a| kraus[row % r][(row / r, a)]);
    Ok(Stinespring { v, env_dim: r, kraus })
}
