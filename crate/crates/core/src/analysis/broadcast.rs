use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{apply_channel, max_abs_diff, superoperator, Keep};
use crate::doubling::{discard, q_compose_par, q_compose_seq, q_identity, QDiagram};
use crate::error::AnalysisError;
use crate::tensor::Model;

/// An entry where a marginal of the candidate differs from its input on the
/// uniform superposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Discrepancy {
    pub marginal: Keep,
    pub row: usize,
    pub col: usize,
    pub found: Complex64,
    pub expected: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BroadcastReport {
    /// Discarding the right output leaves the identity channel.
    pub left_marginal_ok: bool,
    /// Discarding the left output leaves the identity channel.
    pub right_marginal_ok: bool,
    pub left_deviation: f64,
    pub right_deviation: f64,
    /// Largest entrywise error of either marginal on `|+⟩⟨+|`.
    pub coherence_discrepancy: f64,
    pub discrepancies: Vec<Discrepancy>,
}

impl BroadcastReport {
    pub fn broadcasts(&self) -> bool {
        self.left_marginal_ok && self.right_marginal_ok
    }
}

/// Tests whether `delta: A → A ⊗ A` has both marginals equal to the
/// identity channel.
pub fn check_broadcast(delta: &QDiagram, m: &Model<Complex64>, tol: f64) -> Result<BroadcastReport, AnalysisError> {
    let ok_shape =
        delta.qdom().len() == 1 && delta.qcod().len() == 2 && delta.qcod().iter().all(|t| *t == delta.qdom()[0]);
    if !ok_shape {
        return Err(AnalysisError::Arity(format!(
            "a broadcast candidate maps A to A ⊗ A, found {:?} -> {:?}",
            delta.qdom(),
            delta.qcod()
        )));
    }
    let t = delta.theory();
    let a = &delta.qdom()[0];
    let id = q_identity(t, std::slice::from_ref(a));
    let target = superoperator(&id, m)?;
    let d = m.dim(a)?;
    let amp = Complex64::new(1.0 / d as f64, 0.0);
    let plus = DMatrix::from_element(d, d, amp);

    let mut report = BroadcastReport {
        left_marginal_ok: false,
        right_marginal_ok: false,
        left_deviation: 0.0,
        right_deviation: 0.0,
        coherence_discrepancy: 0.0,
        discrepancies: Vec::new(),
    };
    for keep in [Keep::Left, Keep::Right] {
        let top = match keep {
            Keep::Left => q_compose_par(&id, &discard(t, a))?,
            Keep::Right => q_compose_par(&discard(t, a), &id)?,
        };
        let marginal = q_compose_seq(&top, delta)?;
        let dev = max_abs_diff(&superoperator(&marginal, m)?, &target);
        let out = apply_channel(&marginal, m, &plus)?;
        for r in 0..d {
            for c in 0..d {
                let err = (out[(r, c)] - plus[(r, c)]).norm();
                report.coherence_discrepancy = report.coherence_discrepancy.max(err);
                if err > tol {
                    report.discrepancies.push(Discrepancy {
                        marginal: keep,
                        row: r,
                        col: c,
                        found: out[(r, c)],
                        expected: plus[(r, c)],
                    });
                }
            }
        }
        match keep {
            Keep::Left => {
                report.left_deviation = dev;
                report.left_marginal_ok = dev <= tol;
            }
            Keep::Right => {
                report.right_deviation = dev;
                report.right_marginal_ok = dev <= tol;
            }
        }
    }
    Ok(report)
}
