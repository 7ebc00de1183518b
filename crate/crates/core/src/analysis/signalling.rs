use num_complex::Complex64;

use super::{causal_deviation, PRECONDITION_TOL};
use crate::doubling::{discard, discard_all, q_compose_par, q_compose_seq, q_identity, QDiagram};
use crate::error::{AnalysisError, DiagramError};
use crate::tensor::{evaluate, max_distance, Model};

/// Distance between the right party's view of the shared scenario with the left party's output
/// discarded, and "discard the left inputs" next to the right party's reduced process.
///
/// `rho` is a state on `[A, B]`; `phi_a` takes `A_in ++ [A]` and `phi_b`
/// takes `[B] ++ B_in`. No causality check is made.
pub fn no_signalling_deviation(
    rho: &QDiagram,
    phi_a: &QDiagram,
    phi_b: &QDiagram,
    m: &Model<Complex64>,
) -> Result<f64, AnalysisError> {
    let t = rho.theory();
    if !rho.qdom().is_empty() || rho.qcod().len() != 2 {
        return Err(AnalysisError::Arity(format!(
            "expected a state on two systems, found {:?} -> {:?}",
            rho.qdom(),
            rho.qcod()
        )));
    }
    let (a, b) = (&rho.qcod()[0], &rho.qcod()[1]);
    let a_in = match phi_a.qdom().split_last() {
        Some((last, rest)) if last == a => rest,
        _ => {
            return Err(AnalysisError::Arity(format!("the left process must take {a} last, found {:?}", phi_a.qdom())))
        }
    };
    let b_in = match phi_b.qdom().split_first() {
        Some((first, rest)) if first == b => rest,
        _ => {
            return Err(AnalysisError::Arity(format!(
                "the right process must take {b} first, found {:?}",
                phi_b.qdom()
            )))
        }
    };

    let prep = q_compose_par(&q_compose_par(&q_identity(t, a_in), rho)?, &q_identity(t, b_in))?;
    let both = q_compose_seq(&q_compose_par(phi_a, phi_b)?, &prep)?;
    let lhs = q_compose_seq(&q_compose_par(&discard_all(t, phi_a.qcod()), &q_identity(t, phi_b.qcod()))?, &both)?;

    let rho_b = q_compose_seq(&q_compose_par(&discard(t, a), &q_identity(t, std::slice::from_ref(b)))?, rho)?;
    let right = q_compose_seq(phi_b, &q_compose_par(&rho_b, &q_identity(t, b_in))?)?;
    let rhs = q_compose_par(&discard_all(t, a_in), &right)?;

    let dev = max_distance(&evaluate(lhs.base(), m)?, &evaluate(rhs.base(), m)?);
    dev.ok_or_else(|| AnalysisError::Diagram(DiagramError::Malformed("boundary shapes differ".into())))
}

/// Requires both local processes to be causal, then checks that the left
/// party's choice of input cannot influence the right party.
pub fn check_no_signalling(
    rho: &QDiagram,
    phi_a: &QDiagram,
    phi_b: &QDiagram,
    m: &Model<Complex64>,
    tol: f64,
) -> Result<bool, AnalysisError> {
    for phi in [phi_a, phi_b] {
        let dev = causal_deviation(phi, m)?;
        if dev > PRECONDITION_TOL.max(tol) {
            return Err(AnalysisError::NonCausal(dev));
        }
    }
    Ok(no_signalling_deviation(rho, phi_a, phi_b, m)? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{BoxVariant, Diagram};
    use crate::doubling::double;
    use crate::theory::Theory;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bell_state_with_local_unitaries() {
        let t = Theory::builder()
            .atomic("A")
            .generator("V", &["A"], &["A"])
            .generator("K", &["A", "A"], &["A"])
            .build()
            .unwrap();
        let a = t.atomic("A").unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = Model::new(&t, [("A", 2)])
            .unwrap()
            .with_generator("V", vec![c(s, 0.), c(0., s), c(0., s), c(s, 0.)])
            .unwrap()
            .with_generator("K", vec![c(2., 0.); 8])
            .unwrap();
        let rho = double(&Diagram::cup(&t, &a));
        let vq = double(&Diagram::generator(&t, "V", BoxVariant::ORIGINAL).unwrap());
        let phi_a = q_compose_par(&discard(&t, &a), &vq).unwrap();
        assert!(check_no_signalling(&rho, &phi_a, &vq, &m, 1e-12).unwrap());

        let k = double(&Diagram::generator(&t, "K", BoxVariant::ORIGINAL).unwrap());
        assert!(matches!(check_no_signalling(&rho, &k, &vq, &m, 1e-9), Err(AnalysisError::NonCausal(_))));
        assert!(no_signalling_deviation(&rho, &k, &vq, &m).unwrap() > 1e-3);
    }
}
