//! The doubling construction: functoriality, phases, Born rule, purification.

mod common;

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::{rng, slice_diff};
use procflow::analysis::state_density;
use procflow::random::{random_chain, random_diagram, sample_theory, Flavor};
use procflow::{
    compose_par, compose_seq, discard, double, evaluate, purify, q_compose_par, q_compose_seq, q_conjugate, q_dagger,
    q_equal, q_identity, q_transpose, random_model, unpurify, BoxVariant, Diagram, Model, QDiagram, Theory,
};

fn qeq(a: &QDiagram, b: &QDiagram) -> bool {
    q_equal(a, b).unwrap()
}

/// `double(d)` with a random subset of outputs discarded and a random subset
/// of inputs fed by the adjoint of discarding.
fn random_process(r: &mut ChaCha8Rng, t: &Arc<Theory>, steps: usize) -> QDiagram {
    let d = random_diagram(r, t, steps, Flavor::Any);
    let q = double(&d);
    let mut post = q_identity(t, &[]);
    for ty in q.qcod() {
        let piece = if r.random_bool(0.4) { discard(t, ty) } else { q_identity(t, std::slice::from_ref(ty)) };
        post = q_compose_par(&post, &piece).unwrap();
    }
    let mut pre = q_identity(t, &[]);
    for ty in q.qdom() {
        let piece =
            if r.random_bool(0.3) { q_dagger(&discard(t, ty)) } else { q_identity(t, std::slice::from_ref(ty)) };
        pre = q_compose_par(&pre, &piece).unwrap();
    }
    q_compose_seq(&post, &q_compose_seq(&q, &pre).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn doubling_is_functorial(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let [f, g, _] = random_chain(&mut r, &t, 3, Flavor::Any);
        let h = random_diagram(&mut r, &t, 3, Flavor::Any);
        prop_assert!(qeq(&double(&compose_seq(&g, &f).unwrap()), &q_compose_seq(&double(&g), &double(&f)).unwrap()));
        prop_assert!(qeq(&double(&compose_par(&f, &h).unwrap()), &q_compose_par(&double(&f), &double(&h)).unwrap()));
        prop_assert!(qeq(&double(&f.dagger()), &q_dagger(&double(&f))));
        prop_assert!(qeq(&double(&f.transpose()), &q_transpose(&double(&f))));
        prop_assert!(qeq(&double(&f.conjugate()), &q_conjugate(&double(&f))));
    }

    #[test]
    fn quantum_operations_keep_diagrams_valid(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let p = random_process(&mut r, &t, 4);
        p.validate().unwrap();
        q_dagger(&p).validate().unwrap();
        q_conjugate(&p).validate().unwrap();
        prop_assert!(qeq(&q_dagger(&q_dagger(&p)), &p));
        prop_assert!(qeq(&q_conjugate(&q_conjugate(&p)), &p));
        prop_assert!(qeq(&q_transpose(&p), &q_conjugate(&q_dagger(&p))));
    }

    #[test]
    fn purification_round_trips(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let p = random_process(&mut r, &t, 4);
        let (g, env) = purify(&p);
        let back = unpurify(&g, env.len()).unwrap();
        prop_assert!(qeq(&back, &p));
        let m = random_model(&t, 1..=2, seed).unwrap();
        let (a, b) = (evaluate(p.base(), &m).unwrap(), evaluate(back.base(), &m).unwrap());
        prop_assert!(slice_diff(a.data(), b.data()) <= 1e-9 * (1.0 + a.data().iter().map(|z| z.norm()).fold(0.0, f64::max)));
        prop_assert_eq!(p.is_pure(), env.is_empty() && p.env_loops().is_empty());
    }
}

fn phase_theory() -> Arc<Theory> {
    Theory::builder()
        .atomic("A")
        .atomic("B")
        .generator("f", &["A"], &["B", "A"])
        .generator("lam", &[], &[])
        .build()
        .unwrap()
}

fn with_scalar(m: Model<Complex64>, z: Complex64) -> Model<Complex64> {
    m.with_generator("lam", vec![z]).unwrap()
}

#[test]
fn global_phases_disappear_after_doubling() {
    let t = phase_theory();
    let f = Diagram::generator(&t, "f", BoxVariant::ORIGINAL).unwrap();
    let lam = Diagram::generator(&t, "lam", BoxVariant::ORIGINAL).unwrap();
    let scaled = double(&compose_par(&f, &lam).unwrap());
    let plain = double(&f);
    let mut r = rng(5);
    for k in 0..50 {
        let base = random_model(&t, 1..=3, 1000 + k).unwrap();
        let reference = evaluate(plain.base(), &base).unwrap();
        for _ in 0..10 {
            let theta = r.random_range(0.0..TAU);
            let m = with_scalar(base.clone(), Complex64::from_polar(1.0, theta));
            let v = evaluate(scaled.base(), &m).unwrap();
            assert!(slice_diff(v.data(), reference.data()) <= 1e-9);
        }
        let m = with_scalar(base.clone(), Complex64::new(2.0, 0.0));
        let v = evaluate(scaled.base(), &m).unwrap();
        assert!(slice_diff(v.data(), reference.data()) > 1e-6, "non-unit scalars survive doubling");
    }
}

#[test]
fn equal_doubles_differ_by_a_phase() {
    // Two boxes with equal doubles: the ratio of their entries is one
    // unit-modulus number.
    let t =
        Theory::builder().atomic("A").generator("f", &["A"], &["A"]).generator("g", &["A"], &["A"]).build().unwrap();
    let mut r = rng(8);
    for k in 0..20 {
        let m = random_model(&t, 2..=3, k).unwrap();
        let f = m.generator_tensor_by_name("f").unwrap().data().to_vec();
        let theta = r.random_range(0.0..TAU);
        let g: Vec<Complex64> = f.iter().map(|z| z * Complex64::from_polar(1.0, theta)).collect();
        let m = m.with_generator("g", g.clone()).unwrap();
        let df = evaluate(double(&Diagram::generator(&t, "f", BoxVariant::ORIGINAL).unwrap()).base(), &m).unwrap();
        let dg = evaluate(double(&Diagram::generator(&t, "g", BoxVariant::ORIGINAL).unwrap()).base(), &m).unwrap();
        assert!(slice_diff(df.data(), dg.data()) < 1e-9);
        let lam = g[0] / f[0];
        assert!((lam.norm() - 1.0).abs() < 1e-9);
        assert!(f.iter().zip(&g).all(|(a, b)| (a * lam - b).norm() < 1e-9));
    }
}

#[test]
fn born_rule_scalars_are_nonnegative() {
    let t = Theory::builder().atomic("A").generator("psi", &[], &["A"]).generator("pi", &["A"], &[]).build().unwrap();
    let psi = double(&Diagram::generator(&t, "psi", BoxVariant::ORIGINAL).unwrap());
    let pi = double(&Diagram::generator(&t, "pi", BoxVariant::ORIGINAL).unwrap());
    let prob = q_compose_seq(&pi, &psi).unwrap();
    for seed in 0..200 {
        let m = random_model(&t, 1..=4, seed).unwrap();
        let v = evaluate(prob.base(), &m).unwrap().data()[0];
        assert!(v.re >= 0.0 && v.im.abs() <= 1e-9, "{v}");
    }
}

#[test]
fn doubled_states_are_positive_semidefinite() {
    let t = Theory::builder().atomic("A").generator("psi", &[], &["A", "A"]).build().unwrap();
    let a = t.atomic("A").unwrap();
    let psi = double(&Diagram::generator(&t, "psi", BoxVariant::ORIGINAL).unwrap());
    let mixed =
        q_compose_seq(&q_compose_par(&q_identity(&t, std::slice::from_ref(&a)), &discard(&t, &a)).unwrap(), &psi)
            .unwrap();
    for seed in 0..50 {
        let m = random_model(&t, 2..=3, seed).unwrap();
        let rho = state_density(&mixed, &m).unwrap();
        let herm = (&rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(herm < 1e-9);
        let eig = nalgebra::DMatrix::from_fn(rho.nrows(), rho.ncols(), |i, j| (rho[(i, j)] + rho[(j, i)].conj()) * 0.5);
        let min = eig.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        assert!(min > -1e-9, "{min}");
    }
}

#[test]
fn discarding_is_not_a_double() {
    let t = sample_theory();
    let a = t.atomic("A").unwrap();
    let d = discard(&t, &a);
    assert!(!d.is_pure());
    let (g, env) = purify(&d);
    assert_eq!(env, vec![a.clone()]);
    assert!(procflow::equal(&g, &Diagram::identity(&t, &[a])).unwrap());
}
