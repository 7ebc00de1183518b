#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use procflow::{Diagram, Model, Owner, Port, Scalar, Side, Theory, Wire, WireKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn slice_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Entry of box `b`'s tensor at the given port values, worked out from the
/// generator tensor without going through the library's variant code.
fn box_entry<S: Scalar>(d: &Diagram, m: &Model<S>, b: usize, ins: &[usize], outs: &[usize]) -> S {
    let inst = d.boxes()[b];
    let sig = d.theory().generator(inst.generator);
    let (adj, conj) = (inst.variant.adjoint, inst.variant.conjugate);
    let mut gen_out = vec![0; sig.cod.len()];
    let mut gen_in = vec![0; sig.dom.len()];
    for (side, vals) in [(Side::In, ins), (Side::Out, outs)] {
        let gside = if adj { flip(side) } else { side };
        let target = if gside == Side::In { &mut gen_in } else { &mut gen_out };
        let n = target.len();
        for (i, &v) in vals.iter().enumerate() {
            target[if conj { n - 1 - i } else { i }] = v;
        }
    }
    let idx: Vec<usize> = gen_out.into_iter().chain(gen_in).collect();
    let x = m.generator_tensor(inst.generator).expect("complete model").get(&idx);
    if adj ^ conj {
        S::conj(x)
    } else {
        x
    }
}

fn flip(s: Side) -> Side {
    match s {
        Side::In => Side::Out,
        Side::Out => Side::In,
    }
}

/// Sums over every labelling of the wires. Returns `None` when that would
/// take more than `budget` terms.
pub fn brute_force_eval<S: Scalar>(d: &Diagram, m: &Model<S>, budget: usize) -> Option<Vec<S>> {
    let wires = d.wires();
    let dims: Vec<usize> = wires.iter().map(|w| m.dim(&d.port_type(w.ends()[0])).unwrap()).collect();
    let terms = dims.iter().try_fold(1usize, |acc, &x| acc.checked_mul(x).filter(|&n| n <= budget))?;
    let cod_dims = m.dims_of(d.cod()).unwrap();
    let dom_dims = m.dims_of(d.dom()).unwrap();
    let size: usize = cod_dims.iter().chain(&dom_dims).product();
    let mut out = vec![S::zero(); size];

    let mut wire_of = std::collections::HashMap::new();
    for (k, w) in wires.iter().enumerate() {
        for p in w.ends() {
            wire_of.insert(p, k);
        }
    }
    let mut scale = S::one();
    for (ty, &n) in d.loops() {
        for _ in 0..n {
            scale = scale.mul(S::from_count(m.dim(ty).unwrap()));
        }
    }

    let mut vals = vec![0usize; wires.len()];
    for _ in 0..terms {
        let mut term = scale;
        for b in 0..d.boxes().len() {
            let ins: Vec<usize> =
                (0..d.box_dom(b).len()).map(|i| vals[wire_of[&Port::of_box(b, Side::In, i)]]).collect();
            let outs: Vec<usize> =
                (0..d.box_cod(b).len()).map(|i| vals[wire_of[&Port::of_box(b, Side::Out, i)]]).collect();
            term = term.mul(box_entry(d, m, b, &ins, &outs));
        }
        let mut flat = 0;
        for (i, &dim) in cod_dims.iter().enumerate() {
            flat = flat * dim + vals[wire_of[&Port::boundary(Side::Out, i)]];
        }
        for (i, &dim) in dom_dims.iter().enumerate() {
            flat = flat * dim + vals[wire_of[&Port::boundary(Side::In, i)]];
        }
        out[flat] = out[flat].add(term);
        for k in (0..vals.len()).rev() {
            vals[k] += 1;
            if vals[k] < dims[k] {
                break;
            }
            vals[k] = 0;
        }
    }
    Some(out)
}

fn label(d: &Diagram, b: usize) -> (usize, bool, bool) {
    let x = d.boxes()[b];
    (x.generator, x.variant.adjoint, x.variant.conjugate)
}

fn map_port(p: Port, perm: &[usize]) -> Port {
    match p.owner {
        Owner::Boundary => p,
        Owner::Box(b) => Port::of_box(perm[b], p.side, p.index),
    }
}

/// Exhaustive search over label-preserving box bijections.
pub fn brute_force_isomorphic(d1: &Diagram, d2: &Diagram) -> bool {
    if d1.dom() != d2.dom()
        || d1.cod() != d2.cod()
        || d1.loops() != d2.loops()
        || d1.boxes().len() != d2.boxes().len()
        || d1.wires().len() != d2.wires().len()
    {
        return false;
    }
    let target: BTreeSet<Wire> = d2.wires().iter().copied().collect();
    let n = d1.boxes().len();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn go(
        k: usize,
        d1: &Diagram,
        d2: &Diagram,
        perm: &mut [usize],
        used: &mut [bool],
        target: &BTreeSet<Wire>,
    ) -> bool {
        if k == perm.len() {
            return d1.wires().iter().all(|w| {
                let [a, b] = w.ends();
                target.contains(&Wire::new(map_port(a, perm), map_port(b, perm)))
            });
        }
        for j in 0..perm.len() {
            if !used[j] && label(d1, k) == label(d2, j) {
                used[j] = true;
                perm[k] = j;
                if go(k + 1, d1, d2, perm, used, target) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, d1, d2, &mut perm, &mut used, &target)
}

/// Rebuilds `d` with its boxes listed in a different order.
pub fn relabel(d: &Diagram, perm: &[usize]) -> Diagram {
    let n = d.boxes().len();
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let boxes = (0..n).map(|j| {
        let b = d.boxes()[inv[j]];
        (b.generator, b.variant)
    });
    let wires = d.wires().iter().map(|w| {
        let [a, b] = w.ends();
        (map_port(a, perm), map_port(b, perm))
    });
    Diagram::from_parts(
        d.theory().clone(),
        boxes.collect(),
        wires.collect(),
        d.dom().to_vec(),
        d.cod().to_vec(),
        d.loops().clone(),
    )
    .expect("relabelling keeps the diagram valid")
}

/// Exchanges the far ends of two wires, when types allow it.
pub fn rewire(d: &Diagram, i: usize, j: usize) -> Option<Diagram> {
    let (wi, wj) = (d.wires()[i], d.wires()[j]);
    let [a, b] = wi.ends();
    let [c, e] = wj.ends();
    if d.port_type(b) != d.port_type(e) {
        return None;
    }
    let mut wires: Vec<(Port, Port)> = d.wires().iter().map(|w| (w.ends()[0], w.ends()[1])).collect();
    wires[i] = (a, e);
    wires[j] = (c, b);
    let boxes = d.boxes().iter().map(|b| (b.generator, b.variant)).collect();
    Diagram::from_parts(d.theory().clone(), boxes, wires, d.dom().to_vec(), d.cod().to_vec(), d.loops().clone()).ok()
}

pub fn single_type_theory(gens: &[(&str, &[&str], &[&str])]) -> Arc<Theory> {
    let mut b = Theory::builder().atomic("A");
    for (n, dom, cod) in gens {
        b = b.generator(n, dom, cod);
    }
    b.build().unwrap()
}

/// No bent wires, no loops, and a topological order of the boxes exists.
pub fn oracle_is_circuit(d: &Diagram) -> bool {
    if !d.loops().is_empty() || d.wires().iter().any(|w| w.kind() != WireKind::Plain) {
        return false;
    }
    let n = d.boxes().len();
    let mut preds: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for w in d.wires() {
        let [a, b] = w.ends();
        if let (Owner::Box(x), Owner::Box(y)) = (a.owner, b.owner) {
            let (src, dst) = if a.side == Side::Out { (x, y) } else { (y, x) };
            preds[dst].insert(src);
        }
    }
    let mut done = vec![false; n];
    for _ in 0..n {
        let Some(next) = (0..n).find(|&i| !done[i] && preds[i].iter().all(|&p| done[p])) else {
            return false;
        };
        done[next] = true;
    }
    true
}
