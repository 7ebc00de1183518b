use crate::diagram::{compose_seq, BoxVariant, Diagram};
use crate::tensor::{evaluate, Model, Tensor};
use crate::theory::Theory;

/// A boolean matrix as rows of bits, `[output][input]`.
pub type BoolMatrix = Vec<Vec<bool>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelReport {
    pub relation: BoolMatrix,
    /// `R† ∘ R`.
    pub composite: BoolMatrix,
    /// Factors `(column, row)` with `R = column · row`, if any.
    pub relation_factors: Option<(Vec<bool>, Vec<bool>)>,
    pub composite_factors: Option<(Vec<bool>, Vec<bool>)>,
}

impl RelReport {
    /// `R† ∘ R` separates while `R` does not.
    pub fn violated(&self) -> bool {
        self.composite_factors.is_some() && self.relation_factors.is_none()
    }
}

fn to_rows(t: &Tensor<bool>) -> BoolMatrix {
    let (r, c) = (t.cod_dims().iter().product::<usize>(), t.dom_dims().iter().product::<usize>());
    (0..r).map(|i| (0..c).map(|j| t.matrix_entry(i, j)).collect()).collect()
}

/// Exhaustive search for `m = column · row` over the booleans.
pub fn separable_factors(m: &BoolMatrix) -> Option<(Vec<bool>, Vec<bool>)> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let bits = |mask: u64, n: usize| (0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>();
    for cm in 0..1u64 << rows {
        let col = bits(cm, rows);
        for rm in 0..1u64 << cols {
            let row = bits(rm, cols);
            if (0..rows).all(|i| (0..cols).all(|j| m[i][j] == (col[i] && row[j]))) {
                return Some((col, row));
            }
        }
    }
    None
}

/// Separability of `R` and `R† ∘ R` for a relation on `{0, .., n-1}` given
/// as `(input, output)` pairs.
pub fn rel_dagger_axiom(n: usize, pairs: &[(usize, usize)]) -> RelReport {
    let t = Theory::builder().atomic("X").generator("R", &["X"], &["X"]).build().expect("valid theory");
    let mut data = vec![false; n * n];
    for &(a, b) in pairs {
        data[b * n + a] = true;
    }
    let m =
        Model::<bool>::new(&t, [("X", n)]).expect("positive dimension").with_generator("R", data).expect("n×n data");
    let r = Diagram::generator(&t, "R", BoxVariant::ORIGINAL).expect("declared");
    let rdr = compose_seq(&r.dagger(), &r).expect("endomorphism");
    let relation = to_rows(&evaluate(&r, &m).expect("complete model"));
    let composite = to_rows(&evaluate(&rdr, &m).expect("complete model"));
    RelReport {
        relation_factors: separable_factors(&relation),
        composite_factors: separable_factors(&composite),
        relation,
        composite,
    }
}

/// The relation `{(0,0), (0,1), (1,1)}` on two points.
pub fn check_rel_dagger_axiom() -> RelReport {
    rel_dagger_axiom(2, &[(0, 0), (0, 1), (1, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample() {
        let r = check_rel_dagger_axiom();
        assert_eq!(r.relation, vec![vec![true, false], vec![true, true]]);
        assert_eq!(r.composite, vec![vec![true, true], vec![true, true]]);
        assert!(r.relation_factors.is_none());
        assert_eq!(r.composite_factors, Some((vec![true, true], vec![true, true])));
        assert!(r.violated());
    }

    #[test]
    fn identity_relation_is_not_a_counterexample() {
        let r = rel_dagger_axiom(2, &[(0, 0), (1, 1)]);
        assert!(r.relation_factors.is_none() && r.composite_factors.is_none());
        assert!(!r.violated());
    }

    #[test]
    fn separability_search() {
        assert!(separable_factors(&vec![vec![false, false], vec![false, false]]).is_some());
        assert!(separable_factors(&vec![vec![true, true], vec![false, false]]).is_some());
        assert!(separable_factors(&vec![vec![true, false], vec![false, true]]).is_none());
    }
}
