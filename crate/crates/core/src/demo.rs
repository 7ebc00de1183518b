//! Scripted constructions with built-in checks.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{check_broadcast, check_rel_dagger_axiom, BroadcastReport};
use crate::diagram::{compose_par, compose_seq, BoxVariant, Diagram};
use crate::doubling::{double, unpurify, QDiagram};
use crate::equality::equal;
use crate::error::AnalysisError;
use crate::random::{random_complex_matrix, random_unitary};
use crate::tensor::{evaluate, max_distance, prob_equiv, Model, Tensor, Verdict};
use crate::theory::Theory;

pub const DEMOS: [&str; 4] = ["teleport", "rel-counterexample", "no-broadcast", "phases"];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DemoReport {
    pub name: &'static str,
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
}

impl DemoReport {
    fn new(name: &'static str) -> DemoReport {
        DemoReport { name, lines: Vec::new(), checks: Vec::new() }
    }

    fn say(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, label: impl Into<String>, passed: bool) {
        self.checks.push(Check { label: label.into(), passed });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run(name: &str, seed: u64) -> Option<Result<DemoReport, AnalysisError>> {
    Some(match name {
        "teleport" => teleport(&[2, 3], seed),
        "rel-counterexample" => Ok(rel_counterexample()),
        "no-broadcast" => no_broadcast(),
        "phases" => phases(&[0.7, 2.1, 5.5], seed),
        _ => return None,
    })
}

fn identity_tensor(d: usize) -> Tensor<Complex64> {
    let data =
        (0..d * d).map(|k| if k / d == k % d { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect();
    Tensor::operator(&[d], &[d], data)
}

/// The teleportation pieces: a shared cup, a joint effect `cap ∘ (U ⊗ id)`
/// on the incoming system and one half of the cup, and the correction `U†`
/// on the other half.
pub struct Teleport {
    pub theory: Arc<Theory>,
    /// Incoming system and shared pair through the joint effect, before
    /// correction. Equal to `U`.
    pub uncorrected: Diagram,
    pub corrected: Diagram,
    /// The same protocol when the effect is the plain cap.
    pub no_error: Diagram,
}

pub fn teleport_diagrams() -> Teleport {
    let t = Theory::builder().atomic("A").generator("U", &["A"], &["A"]).build().expect("valid theory");
    let a = t.atomic("A").expect("declared");
    let id = Diagram::identity(&t, std::slice::from_ref(&a));
    let u = Diagram::generator(&t, "U", BoxVariant::ORIGINAL).expect("declared");
    let share = compose_par(&id, &Diagram::cup(&t, &a)).expect("same theory");
    let effect = compose_seq(&Diagram::cap(&t, &a), &compose_par(&u, &id).expect("same theory")).expect("A ⊗ A");
    let uncorrected = compose_seq(&compose_par(&effect, &id).expect("same theory"), &share).expect("A ⊗ A ⊗ A");
    let corrected = compose_seq(&u.dagger(), &uncorrected).expect("A");
    let plain = compose_par(&Diagram::cap(&t, &a), &id).expect("same theory");
    let no_error = compose_seq(&plain, &share).expect("A ⊗ A ⊗ A");
    Teleport { theory: t, uncorrected, corrected, no_error }
}

pub fn teleport(dims: &[usize], seed: u64) -> Result<DemoReport, AnalysisError> {
    let mut r = DemoReport::new("teleport");
    let tp = teleport_diagrams();
    let t = &tp.theory;
    let a = t.atomic("A")?;
    let id = Diagram::identity(t, &[a]);
    let u = Diagram::generator(t, "U", BoxVariant::ORIGINAL)?;

    r.say("share a cup, apply the effect cap ∘ (U ⊗ id), correct with U†");
    r.check("without error the protocol is the identity wire", equal(&tp.no_error, &id)?);
    r.check("the uncorrected protocol is U", equal(&tp.uncorrected, &u)?);
    r.check("the corrected protocol is U† ∘ U", equal(&tp.corrected, &compose_seq(&u.dagger(), &u)?)?);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &d in dims {
        let um = random_unitary(&mut rng, d);
        let data = (0..d * d).map(|k| um[(k / d, k % d)]).collect();
        let m = Model::new(t, [("A", d)])?.with_generator("U", data)?;
        let dev = max_distance(&evaluate(&tp.corrected, &m)?, &identity_tensor(d)).unwrap_or(f64::INFINITY);
        r.say(format!("dim {d}: |corrected - id| = {dev:.3e} for a random unitary U"));
        r.check(format!("dim {d}: corrected protocol is the identity within 1e-9"), dev <= 1e-9);
        let plain = max_distance(&evaluate(&tp.no_error, &m)?, &identity_tensor(d)).unwrap_or(f64::INFINITY);
        r.check(format!("dim {d}: error-free protocol is the identity"), plain <= 1e-12);
    }
    Ok(r)
}

pub fn rel_counterexample() -> DemoReport {
    let mut r = DemoReport::new("rel-counterexample");
    let rep = check_rel_dagger_axiom();
    let show = |m: &Vec<Vec<bool>>| {
        m.iter()
            .map(|row| row.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>())
            .collect::<Vec<_>>()
            .join("/")
    };
    r.say("R = {(0,0), (0,1), (1,1)} on a two-point set, rows indexed by output");
    r.say(format!("R        = {}", show(&rep.relation)));
    r.say(format!("R† ∘ R   = {}", show(&rep.composite)));
    r.say(match &rep.relation_factors {
        Some(f) => format!("R separates as {f:?}"),
        None => "R is not a product of a state and an effect".to_string(),
    });
    r.say(match &rep.composite_factors {
        Some((c, w)) => format!("R† ∘ R separates as column {c:?} times row {w:?}"),
        None => "R† ∘ R does not separate".to_string(),
    });
    r.check("R does not separate", rep.relation_factors.is_none());
    r.check("R† ∘ R separates", rep.composite_factors.is_some());
    r.check("R† ∘ R is the full relation", rep.composite.iter().flatten().all(|&b| b));
    r
}

/// The measure-and-copy map `ρ ↦ Σ_i ⟨i|ρ|i⟩ |ii⟩⟨ii|` on a `d`-dimensional
/// system, purified through a generator `A → A ⊗ A ⊗ A` whose first output
/// is discarded.
pub fn basis_copy_candidate(d: usize) -> Result<(QDiagram, Model<Complex64>), AnalysisError> {
    let t = Theory::builder().atomic("A").generator("copy", &["A"], &["A", "A", "A"]).build().expect("valid theory");
    let mut data = vec![Complex64::new(0.0, 0.0); d.pow(4)];
    for i in 0..d {
        data[((i * d + i) * d + i) * d + i] = Complex64::new(1.0, 0.0);
    }
    let m = Model::new(&t, [("A", d)])?.with_generator("copy", data)?;
    let g = Diagram::generator(&t, "copy", BoxVariant::ORIGINAL)?;
    Ok((unpurify(&g, 1)?, m))
}

pub fn broadcast_report(d: usize, tol: f64) -> Result<BroadcastReport, AnalysisError> {
    let (delta, m) = basis_copy_candidate(d)?;
    check_broadcast(&delta, &m, tol)
}

pub fn no_broadcast() -> Result<DemoReport, AnalysisError> {
    let mut r = DemoReport::new("no-broadcast");
    r.say("candidate: measure in the computational basis and prepare two copies");
    let two = broadcast_report(2, 1e-9)?;
    r.say(format!(
        "dim 2: marginal deviations {:.3} / {:.3}, coherence discrepancy {:.3}",
        two.left_deviation, two.right_deviation, two.coherence_discrepancy
    ));
    for x in &two.discrepancies {
        r.say(format!(
            "  {:?} marginal on |+><+|: entry ({}, {}) is {:.3}, expected {:.3}",
            x.marginal, x.row, x.col, x.found.re, x.expected.re
        ));
    }
    r.check("dim 2: neither marginal is the identity", !two.left_marginal_ok && !two.right_marginal_ok);
    r.check("dim 2: off-diagonal discrepancy at least 0.49", two.coherence_discrepancy >= 0.49);
    let one = broadcast_report(1, 1e-9)?;
    r.say(format!("dim 1: broadcasts = {}", one.broadcasts()));
    r.check("dim 1: the trivial system broadcasts", one.broadcasts());
    Ok(r)
}

/// Doubling removes a unit-modulus scalar factor.
pub fn phases(thetas: &[f64], seed: u64) -> Result<DemoReport, AnalysisError> {
    let mut r = DemoReport::new("phases");
    let t = Theory::builder()
        .atomic("A")
        .generator("f", &["A"], &["A"])
        .generator("g", &["A"], &["A"])
        .generator("lam", &[], &[])
        .build()
        .expect("valid theory");
    let f = Diagram::generator(&t, "f", BoxVariant::ORIGINAL)?;
    let lam = Diagram::generator(&t, "lam", BoxVariant::ORIGINAL)?;
    let scaled = compose_par(&f, &lam)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fm = random_complex_matrix(&mut rng, 2, 2);
    let gm = random_complex_matrix(&mut rng, 2, 2);
    let flat = |m: &nalgebra::DMatrix<Complex64>| (0..4).map(|k| m[(k / 2, k % 2)]).collect::<Vec<_>>();
    let model = |l: Complex64| -> Result<Model<Complex64>, AnalysisError> {
        Ok(Model::new(&t, [("A", 2)])?
            .with_generator("f", flat(&fm))?
            .with_generator("g", flat(&gm))?
            .with_generator("lam", vec![l])?)
    };
    for &theta in thetas {
        let m = model(Complex64::from_polar(1.0, theta))?;
        let plain = evaluate(&f, &m)?;
        let phased = evaluate(&scaled, &m)?;
        let raw = max_distance(&plain, &phased).unwrap_or(f64::INFINITY);
        let dev = max_distance(&evaluate(double(&scaled).base(), &m)?, &evaluate(double(&f).base(), &m)?)
            .unwrap_or(f64::INFINITY);
        r.say(format!("θ = {theta}: |e^iθ f - f| = {raw:.3}, after doubling {dev:.3e}"));
        r.check(format!("θ = {theta}: doubled diagrams agree within 1e-9"), dev <= 1e-9);
    }
    let m = model(Complex64::new(2.0, 0.0))?;
    let dev = max_distance(&evaluate(double(&scaled).base(), &m)?, &evaluate(double(&f).base(), &m)?)
        .unwrap_or(f64::INFINITY);
    r.say(format!("λ = 2: doubled diagrams differ by {dev:.3}"));
    r.check("a non-unit scalar survives doubling", dev > 1e-6);
    let g = Diagram::generator(&t, "g", BoxVariant::ORIGINAL)?;
    let dev =
        max_distance(&evaluate(double(&g).base(), &m)?, &evaluate(double(&f).base(), &m)?).unwrap_or(f64::INFINITY);
    r.check("unrelated boxes stay apart after doubling", dev > 1e-6);
    let verdict = prob_equiv(double(&scaled).base(), double(&f).base(), 3, seed, 1e-9)?;
    r.check("a random scalar is not a phase", matches!(verdict, Verdict::Distinguished { .. }));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_demos_pass() {
        for name in DEMOS {
            let rep = run(name, 0).unwrap().unwrap();
            assert!(rep.passed(), "{name}: {:#?}", rep.checks);
        }
        assert!(run("nope", 0).is_none());
    }
}
