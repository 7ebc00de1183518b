//! Monoidal laws, yanking, the box quartet, circuits and the equality oracle.

mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{brute_force_isomorphic, oracle_is_circuit, relabel, rewire, rng};
use procflow::random::{random_chain, random_diagram, random_diagram_from, random_types, sample_theory, Flavor};
use procflow::{compose_par, compose_seq, equal, recompose, AtomicType, Diagram};

fn eq(a: &Diagram, b: &Diagram) -> bool {
    equal(a, b).unwrap()
}

fn id(ts: &[AtomicType]) -> Diagram {
    Diagram::identity(&sample_theory(), ts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequential_composition_is_associative(seed in any::<u64>()) {
        let t = sample_theory();
        let [f, g, h] = random_chain(&mut rng(seed), &t, 4, Flavor::Any);
        let left = compose_seq(&compose_seq(&h, &g).unwrap(), &f).unwrap();
        let right = compose_seq(&h, &compose_seq(&g, &f).unwrap()).unwrap();
        prop_assert!(eq(&left, &right));
        left.validate().unwrap();
    }

    #[test]
    fn parallel_composition_is_associative(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let (a, b, c) = (
            random_diagram(&mut r, &t, 3, Flavor::Any),
            random_diagram(&mut r, &t, 3, Flavor::Any),
            random_diagram(&mut r, &t, 3, Flavor::Any),
        );
        let left = compose_par(&compose_par(&a, &b).unwrap(), &c).unwrap();
        let right = compose_par(&a, &compose_par(&b, &c).unwrap()).unwrap();
        prop_assert!(eq(&left, &right));
    }

    #[test]
    fn identities_are_units(seed in any::<u64>()) {
        let t = sample_theory();
        let f = random_diagram(&mut rng(seed), &t, 5, Flavor::Any);
        prop_assert!(eq(&compose_seq(&id(f.cod()), &f).unwrap(), &f));
        prop_assert!(eq(&compose_seq(&f, &id(f.dom())).unwrap(), &f));
        let e = Diagram::empty(&t);
        prop_assert!(eq(&compose_par(&f, &e).unwrap(), &f));
        prop_assert!(eq(&compose_par(&e, &f).unwrap(), &f));
    }

    #[test]
    fn interchange(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let f1 = random_diagram(&mut r, &t, 3, Flavor::Any);
        let g1 = random_diagram_from(&mut r, &t, f1.cod(), 3, Flavor::Any);
        let f2 = random_diagram(&mut r, &t, 3, Flavor::Any);
        let g2 = random_diagram_from(&mut r, &t, f2.cod(), 3, Flavor::Any);
        let left = compose_seq(&compose_par(&g1, &g2).unwrap(), &compose_par(&f1, &f2).unwrap()).unwrap();
        let right = compose_par(&compose_seq(&g1, &f1).unwrap(), &compose_seq(&g2, &f2).unwrap()).unwrap();
        prop_assert!(eq(&left, &right));
    }

    #[test]
    fn swap_axioms(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let a = random_types(&mut r, &t, 2);
        let b = random_types(&mut r, &t, 2);
        let c = random_types(&mut r, &t, 2);
        let s = |x: &[AtomicType], y: &[AtomicType]| Diagram::swap_lists(&t, x, y);
        let cat = |x: &[AtomicType], y: &[AtomicType]| [x, y].concat();

        // involutive
        let twice = compose_seq(&s(&b, &a), &s(&a, &b)).unwrap();
        prop_assert!(eq(&twice, &id(&cat(&a, &b))));
        // unit
        prop_assert!(eq(&s(&a, &[]), &id(&a)));
        // hexagon
        let hex = compose_seq(
            &compose_par(&id(&b), &s(&a, &c)).unwrap(),
            &compose_par(&s(&a, &b), &id(&c)).unwrap(),
        ).unwrap();
        prop_assert!(eq(&s(&a, &cat(&b, &c)), &hex));
        // naturality
        let f = random_diagram(&mut r, &t, 3, Flavor::Any);
        let g = random_diagram(&mut r, &t, 3, Flavor::Any);
        let left = compose_seq(&s(f.cod(), g.cod()), &compose_par(&f, &g).unwrap()).unwrap();
        let right = compose_seq(&compose_par(&g, &f).unwrap(), &s(f.dom(), g.dom())).unwrap();
        prop_assert!(eq(&left, &right));
    }

    #[test]
    fn quartet_is_consistent(seed in any::<u64>()) {
        let t = sample_theory();
        let d = random_diagram(&mut rng(seed), &t, 5, Flavor::Any);
        prop_assert!(eq(&d.transpose(), &d.dagger().conjugate()));
        prop_assert!(eq(&d.transpose(), &d.conjugate().dagger()));
        prop_assert!(eq(&d.dagger().dagger(), &d));
        prop_assert!(eq(&d.conjugate().conjugate(), &d));
        prop_assert!(eq(&d.transpose().transpose(), &d));
        d.dagger().validate().unwrap();
        d.conjugate().validate().unwrap();
    }

    #[test]
    fn dagger_and_conjugate_are_functorial(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let [f, g, _] = random_chain(&mut r, &t, 3, Flavor::Any);
        let gf = compose_seq(&g, &f).unwrap();
        prop_assert!(eq(&gf.dagger(), &compose_seq(&f.dagger(), &g.dagger()).unwrap()));
        prop_assert!(eq(&gf.conjugate(), &compose_seq(&g.conjugate(), &f.conjugate()).unwrap()));
        let h = random_diagram(&mut r, &t, 3, Flavor::Any);
        let fh = compose_par(&f, &h).unwrap();
        prop_assert!(eq(&fh.dagger(), &compose_par(&f.dagger(), &h.dagger()).unwrap()));
        prop_assert!(eq(&fh.conjugate(), &compose_par(&h.conjugate(), &f.conjugate()).unwrap()));
    }

    #[test]
    fn trace_is_cyclic(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let f = random_diagram(&mut r, &t, 3, Flavor::Any);
        let k = random_diagram_from(&mut r, &t, f.dom(), 3, Flavor::Any);
        let g = compose_seq(&k.dagger(), &compose_seq(&k, &f.dagger()).unwrap()).unwrap();
        let gf = compose_seq(&g, &f).unwrap();
        let fg = compose_seq(&f, &g).unwrap();
        prop_assert!(eq(&gf.trace().unwrap(), &fg.trace().unwrap()));
    }

    #[test]
    fn circuits_are_exactly_the_acyclic_cup_free_diagrams(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let flavor = if r.random_bool(0.5) { Flavor::Any } else { Flavor::Circuit };
        let d = random_diagram(&mut r, &t, 6, flavor);
        prop_assert_eq!(d.is_circuit(), oracle_is_circuit(&d));
        if d.is_circuit() {
            let layers = d.layer_decompose().unwrap();
            prop_assert!(eq(&recompose(&t, d.dom(), &layers).unwrap(), &d));
        } else {
            prop_assert!(d.layer_decompose().is_err());
        }
    }

    #[test]
    fn equality_agrees_with_exhaustive_search(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let d = random_diagram(&mut r, &t, 5, Flavor::Any);
        prop_assume!(d.boxes().len() <= 6);
        let mut perm: Vec<usize> = (0..d.boxes().len()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, r.random_range(0..=i));
        }
        let same = relabel(&d, &perm);
        prop_assert!(brute_force_isomorphic(&d, &same));
        prop_assert!(eq(&d, &same));
        if d.wires().len() >= 2 {
            let i = r.random_range(0..d.wires().len());
            let j = r.random_range(0..d.wires().len());
            if let Some(other) = rewire(&d, i, j) {
                prop_assert_eq!(eq(&d, &other), brute_force_isomorphic(&d, &other));
            }
        }
        let e = random_diagram(&mut r, &t, 5, Flavor::Any);
        if e.boxes().len() <= 6 {
            prop_assert_eq!(eq(&d, &e), brute_force_isomorphic(&d, &e));
        }
    }

    #[test]
    fn equality_is_a_congruence(seed in any::<u64>()) {
        let t = sample_theory();
        let mut r = rng(seed);
        let d = random_diagram(&mut r, &t, 4, Flavor::Any);
        let mut perm: Vec<usize> = (0..d.boxes().len()).collect();
        perm.reverse();
        let d2 = relabel(&d, &perm);
        let pre = random_diagram_from(&mut r, &t, d.dom(), 3, Flavor::Any).dagger();
        let post = random_diagram_from(&mut r, &t, d.cod(), 3, Flavor::Any);
        let wrap = |x: &Diagram| compose_seq(&post, &compose_seq(x, &pre).unwrap()).unwrap();
        prop_assert!(eq(&wrap(&d), &wrap(&d2)));
        let side = random_diagram(&mut r, &t, 3, Flavor::Any);
        prop_assert!(eq(&compose_par(&d, &side).unwrap(), &compose_par(&d2, &side).unwrap()));
    }
}

#[test]
fn all_four_yanking_equations() {
    let t = sample_theory();
    for ty in t.types() {
        let i = id(std::slice::from_ref(ty));
        let cup = Diagram::cup(&t, ty);
        let cap = Diagram::cap(&t, ty);
        let s1 = compose_seq(&compose_par(&cap, &i).unwrap(), &compose_par(&i, &cup).unwrap()).unwrap();
        let s2 = compose_seq(&compose_par(&i, &cap).unwrap(), &compose_par(&cup, &i).unwrap()).unwrap();
        assert!(eq(&s1, &i) && eq(&s2, &i));
        let sw = Diagram::swap(&t, ty, ty);
        assert!(eq(&compose_seq(&sw, &cup).unwrap(), &cup));
        assert!(eq(&compose_seq(&cap, &sw).unwrap(), &cap));
    }
}

#[test]
fn closed_circle_is_a_loop_not_nothing() {
    let t = sample_theory();
    let a = t.atomic("A").unwrap();
    let circle = compose_seq(&Diagram::cap(&t, &a), &Diagram::cup(&t, &a)).unwrap();
    assert_eq!(circle.loop_count(), 1);
    assert!(!eq(&circle, &Diagram::empty(&t)));
}
