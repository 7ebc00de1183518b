use std::ops::RangeInclusive;
use std::sync::Arc;

use super::{evaluate, random_model, Scalar, Tensor};
use crate::diagram::Diagram;
use crate::error::EvalError;

/// Dimension range of the random models drawn by [`prob_equiv`].
pub const PROB_EQUIV_DIMS: RangeInclusive<usize> = 2..=4;

/// Outcome of a randomized equality test.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Every sampled model agreed. Evidence, not proof.
    Equivalent { trials: usize },
    /// The model drawn from `seed` tells the diagrams apart.
    Distinguished { seed: u64, deviation: f64 },
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent { .. })
    }
}

/// Largest entrywise distance, or `None` if the shapes differ.
pub fn max_distance<S: Scalar>(t1: &Tensor<S>, t2: &Tensor<S>) -> Option<f64> {
    if t1.shape() != t2.shape() {
        return None;
    }
    Some(t1.data().iter().zip(t2.data()).map(|(a, b)| a.distance(*b)).fold(0.0, f64::max))
}

pub fn numeric_equal<S: Scalar>(t1: &Tensor<S>, t2: &Tensor<S>, tol: f64) -> bool {
    max_distance(t1, t2).is_some_and(|d| d <= tol)
}

/// Compares the diagrams under `trials` random complex models, drawn from
/// seeds `seed, seed + 1, ...` with dimensions in [`PROB_EQUIV_DIMS`].
pub fn prob_equiv(d1: &Diagram, d2: &Diagram, trials: usize, seed: u64, tol: f64) -> Result<Verdict, EvalError> {
    prob_equiv_with_dims(d1, d2, trials, seed, tol, PROB_EQUIV_DIMS)
}

pub fn prob_equiv_with_dims(
    d1: &Diagram,
    d2: &Diagram,
    trials: usize,
    seed: u64,
    tol: f64,
    dims: RangeInclusive<usize>,
) -> Result<Verdict, EvalError> {
    if !Arc::ptr_eq(d1.theory(), d2.theory()) && **d1.theory() != **d2.theory() {
        return Err(EvalError::TheoryMismatch);
    }
    if d1.dom() != d2.dom() || d1.cod() != d2.cod() {
        return Err(EvalError::BoundaryMismatch(format!(
            "{:?} -> {:?} vs {:?} -> {:?}",
            d1.dom(),
            d1.cod(),
            d2.dom(),
            d2.cod()
        )));
    }
    for t in 0..trials as u64 {
        let s = seed.wrapping_add(t);
        let m = random_model(d1.theory(), dims.clone(), s)?;
        let deviation = max_distance(&evaluate(d1, &m)?, &evaluate(d2, &m)?).unwrap_or(f64::INFINITY);
        if deviation > tol {
            return Ok(Verdict::Distinguished { seed: s, deviation });
        }
    }
    Ok(Verdict::Equivalent { trials })
}
