//! Doubled diagrams: quantum processes as a base diagram next to its
//! conjugate, plus discarding.
//!
//! A quantum wire of type `A` is two adjacent base wires of type `A`: the
//! conjugate leg first, then the original leg. Base boxes come in pairs,
//! `2k` being the conjugate copy of `2k + 1`. Ports on even legs and even
//! boxes form the conjugate half, the rest the original half. A wire joining
//! the two halves is a discard connection; such wires are derived from the
//! wiring rather than stored.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::diagram::{compose_par, BoxInstance, Diagram, Owner, Port, Side, Wire};
use crate::equality::{canonical_form, CanonicalForm};
use crate::error::DiagramError;
use crate::theory::{AtomicType, Theory, TypeList};

/// A diagram in the doubled theory.
#[derive(Clone)]
pub struct QDiagram {
    base: Diagram,
    qdom: TypeList,
    qcod: TypeList,
    /// Closed loops that run through a discard connection. Every other loop
    /// of `base` has a mirror image and the two count as one pair.
    env_loops: BTreeMap<AtomicType, usize>,
}

impl fmt::Debug for QDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QDiagram")
            .field("qdom", &self.qdom)
            .field("qcod", &self.qcod)
            .field("env_loops", &self.env_loops)
            .field("base", &self.base)
            .finish()
    }
}

fn legs(types: &[AtomicType]) -> TypeList {
    types.iter().flat_map(|t| [t.clone(), t.clone()]).collect()
}

fn unlegs(types: &[AtomicType]) -> TypeList {
    types.iter().step_by(2).cloned().collect()
}

/// Whether `p` belongs to the original half.
fn is_original(p: Port) -> bool {
    match p.owner {
        Owner::Boundary => p.index % 2 == 1,
        Owner::Box(b) => b % 2 == 1,
    }
}

impl QDiagram {
    fn new(base: Diagram, env_loops: BTreeMap<AtomicType, usize>) -> QDiagram {
        let q = QDiagram { qdom: unlegs(base.dom()), qcod: unlegs(base.cod()), base, env_loops };
        debug_assert!(q.validate().is_ok(), "{:?}: {:?}", q.validate(), q);
        q
    }

    pub fn base(&self) -> &Diagram {
        &self.base
    }

    pub fn theory(&self) -> &Arc<Theory> {
        self.base.theory()
    }

    pub fn qdom(&self) -> &[AtomicType] {
        &self.qdom
    }

    pub fn qcod(&self) -> &[AtomicType] {
        &self.qcod
    }

    pub fn env_loops(&self) -> &BTreeMap<AtomicType, usize> {
        &self.env_loops
    }

    /// The mirror image of a port across the two halves.
    fn mirror(&self, p: Port) -> Port {
        match p.owner {
            Owner::Boundary => Port { index: p.index ^ 1, ..p },
            Owner::Box(b) => {
                let n = self.base.box_arity(b, p.side);
                Port { owner: Owner::Box(b ^ 1), side: p.side, index: n - 1 - p.index }
            }
        }
    }

    /// Wires joining the two halves.
    pub fn discard_wires(&self) -> Vec<Wire> {
        self.base
            .wires()
            .iter()
            .copied()
            .filter(|w| {
                let [a, b] = w.ends();
                is_original(a) != is_original(b)
            })
            .collect()
    }

    /// True when no discarding is involved, i.e. the diagram is a doubled
    /// base diagram.
    pub fn is_pure(&self) -> bool {
        self.env_loops.is_empty() && self.discard_wires().is_empty()
    }

    /// Checks the pairing invariants.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let bad = |m: &str| Err(DiagramError::Malformed(m.to_string()));
        let b = &self.base;
        if !b.dom().len().is_multiple_of(2) || !b.cod().len().is_multiple_of(2) {
            return bad("odd number of legs");
        }
        if legs(&self.qdom) != b.dom() || legs(&self.qcod) != b.cod() {
            return bad("legs are not paired");
        }
        if !b.boxes().len().is_multiple_of(2) {
            return bad("unpaired box");
        }
        for pair in b.boxes().chunks(2) {
            let (c, o) = (&pair[0], &pair[1]);
            if c.generator != o.generator || c.variant != o.variant.toggled_conjugate() {
                return bad("box pair is not a conjugate pair");
            }
        }
        let wires: std::collections::HashSet<Wire> = b.wires().iter().copied().collect();
        for w in b.wires() {
            let [p, q] = w.ends();
            let m = Wire::new(self.mirror(p), self.mirror(q));
            if !wires.contains(&m) {
                return bad("wiring is not mirrored");
            }
            if is_original(p) != is_original(q) && m != *w {
                return bad("discard connection is not its own mirror image");
            }
        }
        for (t, &e) in &self.env_loops {
            let total = b.loops().get(t).copied().unwrap_or(0);
            if e > total {
                return bad("more discarded loops than loops");
            }
        }
        for (t, &total) in b.loops() {
            let e = self.env_loops.get(t).copied().unwrap_or(0);
            if (total - e.min(total)) % 2 != 0 {
                return bad("unpaired loop");
            }
        }
        Ok(())
    }

    /// Canonical form of the base diagram followed by the discarded loops.
    pub fn canonical_form(&self) -> CanonicalForm {
        let mut bytes = canonical_form(&self.base).as_bytes().to_vec();
        bytes.extend_from_slice(&(self.env_loops.len() as u32).to_be_bytes());
        for (t, &n) in &self.env_loops {
            bytes.extend_from_slice(&(t.name().len() as u32).to_be_bytes());
            bytes.extend_from_slice(t.name().as_bytes());
            bytes.extend_from_slice(&(n as u32).to_be_bytes());
        }
        CanonicalForm::from_bytes(bytes)
    }
}

/// Structural equality of doubled diagrams.
pub fn q_equal(a: &QDiagram, b: &QDiagram) -> Result<bool, DiagramError> {
    Ok(a.env_loops == b.env_loops && crate::equality::equal(&a.base, &b.base)?)
}

/// The doubled diagram: `conjugate(d)` and `d` side by side with their legs
/// interleaved.
pub fn double(d: &Diagram) -> QDiagram {
    let conj_port = |p: Port| match p.owner {
        Owner::Boundary => Port { index: 2 * p.index, ..p },
        Owner::Box(b) => Port { owner: Owner::Box(2 * b), side: p.side, index: d.box_arity(b, p.side) - 1 - p.index },
    };
    let orig_port = |p: Port| match p.owner {
        Owner::Boundary => Port { index: 2 * p.index + 1, ..p },
        Owner::Box(b) => Port { owner: Owner::Box(2 * b + 1), ..p },
    };
    let boxes = d
        .boxes()
        .iter()
        .flat_map(|b| {
            [
                BoxInstance { id: 2 * b.id, generator: b.generator, variant: b.variant.toggled_conjugate() },
                BoxInstance { id: 2 * b.id + 1, ..*b },
            ]
        })
        .collect();
    let wires = d
        .wires()
        .iter()
        .flat_map(|w| {
            let [a, b] = w.ends();
            [Wire::new(conj_port(a), conj_port(b)), Wire::new(orig_port(a), orig_port(b))]
        })
        .collect();
    let loops = d.loops().iter().map(|(t, n)| (t.clone(), 2 * n)).collect();
    let base = Diagram::assemble(d.theory().clone(), boxes, wires, legs(d.dom()), legs(d.cod()), loops);
    QDiagram::new(base, BTreeMap::new())
}

pub fn q_identity(theory: &Arc<Theory>, types: &[AtomicType]) -> QDiagram {
    double(&Diagram::identity(theory, types))
}

/// The discarding effect on one quantum wire.
pub fn discard(theory: &Arc<Theory>, ty: &AtomicType) -> QDiagram {
    QDiagram::new(Diagram::cap(theory, ty), BTreeMap::new())
}

/// Discards every listed wire; `discard_all(&[])` is the empty diagram.
pub fn discard_all(theory: &Arc<Theory>, types: &[AtomicType]) -> QDiagram {
    types
        .iter()
        .map(|t| discard(theory, t))
        .reduce(|acc, d| q_compose_par(&acc, &d).expect("same theory"))
        .unwrap_or_else(|| q_identity(theory, &[]))
}

/// `g ∘ f` in the doubled theory.
pub fn q_compose_seq(g: &QDiagram, f: &QDiagram) -> Result<QDiagram, DiagramError> {
    if f.qcod.len() != g.qdom.len() {
        return Err(DiagramError::ArityMismatch { expected: g.qdom.len(), found: f.qcod.len() });
    }
    if let Some(index) = f.qcod.iter().zip(&g.qdom).position(|(a, b)| a != b) {
        return Err(DiagramError::TypeMismatch {
            index,
            expected: g.qdom[index].clone(),
            found: f.qcod[index].clone(),
        });
    }
    let (base, fused) = Diagram::compose_seq_traced(&g.base, &f.base)?;
    let mut env = crate::diagram::merge_loops(&f.env_loops, &g.env_loops);
    for l in fused {
        let odd = l.glue.iter().any(|k| k % 2 == 1);
        let even = l.glue.iter().any(|k| k % 2 == 0);
        if odd && even {
            *env.entry(l.ty).or_insert(0) += 1;
        }
    }
    Ok(QDiagram::new(base, env))
}

/// `f ⊗ g` in the doubled theory.
pub fn q_compose_par(f: &QDiagram, g: &QDiagram) -> Result<QDiagram, DiagramError> {
    let base = compose_par(&f.base, &g.base)?;
    Ok(QDiagram::new(base, crate::diagram::merge_loops(&f.env_loops, &g.env_loops)))
}

pub fn q_dagger(f: &QDiagram) -> QDiagram {
    QDiagram::new(f.base.dagger(), f.env_loops.clone())
}

/// Horizontal reflection. The base reflection reverses the legs, which puts
/// each original leg before its conjugate; the legs of every pair are then
/// swapped back.
pub fn q_conjugate(f: &QDiagram) -> QDiagram {
    let c = f.base.conjugate();
    let swap = |p: Port| match p.owner {
        Owner::Boundary => Port { index: p.index ^ 1, ..p },
        Owner::Box(_) => p,
    };
    let wires = c
        .wires()
        .iter()
        .map(|w| {
            let [a, b] = w.ends();
            Wire::new(swap(a), swap(b))
        })
        .collect();
    let base = Diagram::assemble(
        c.theory().clone(),
        c.boxes().to_vec(),
        wires,
        c.dom().to_vec(),
        c.cod().to_vec(),
        c.loops().clone(),
    );
    QDiagram::new(base, f.env_loops.clone())
}

pub fn q_transpose(f: &QDiagram) -> QDiagram {
    q_conjugate(&q_dagger(f))
}

/// A base diagram `g` with an environment `env` such that
/// `f = (discard_all(env) ⊗ q_identity(qcod)) ∘ double(g)`. The environment
/// outputs come first in `g`'s codomain. `env` is empty iff `f` is pure.
pub fn purify(f: &QDiagram) -> (Diagram, TypeList) {
    let b = &f.base;
    let mut cross: Vec<Port> = f
        .discard_wires()
        .iter()
        .map(|w| {
            let [p, q] = w.ends();
            if is_original(p) {
                p
            } else {
                q
            }
        })
        .collect();
    cross.sort();
    let mut env: TypeList = cross.iter().map(|&p| b.port_type(p)).collect();
    let loop_env: usize = f.env_loops.values().sum();
    let shift = env.len() + 2 * loop_env;
    let back = |p: Port| match p.owner {
        Owner::Boundary if p.side == Side::Out => Port { index: shift + p.index / 2, ..p },
        Owner::Boundary => Port { index: p.index / 2, ..p },
        Owner::Box(id) => Port { owner: Owner::Box(id / 2), ..p },
    };

    let mut wires = Vec::new();
    for w in b.wires() {
        let [p, q] = w.ends();
        if is_original(p) && is_original(q) {
            wires.push(Wire::new(back(p), back(q)));
        }
    }
    for (k, &p) in cross.iter().enumerate() {
        wires.push(Wire::new(back(p), Port::boundary(Side::Out, k)));
    }
    for (t, &n) in &f.env_loops {
        for _ in 0..n {
            let k = env.len();
            env.push(t.clone());
            env.push(t.clone());
            wires.push(Wire::new(Port::boundary(Side::Out, k), Port::boundary(Side::Out, k + 1)));
        }
    }

    let boxes = b.boxes().iter().skip(1).step_by(2).map(|x| BoxInstance { id: x.id / 2, ..*x }).collect();
    let loops = b
        .loops()
        .iter()
        .map(|(t, &n)| (t.clone(), (n - f.env_loops.get(t).copied().unwrap_or(0)) / 2))
        .filter(|(_, n)| *n > 0)
        .collect();
    let cod = env.iter().chain(&f.qcod).cloned().collect();
    let g = Diagram::assemble(b.theory().clone(), boxes, wires, f.qdom.clone(), cod, loops);
    (g, env)
}

/// Inverse of [`purify`]: discards the first `env_len` outputs of `double(g)`.
pub fn unpurify(g: &Diagram, env_len: usize) -> Result<QDiagram, DiagramError> {
    if env_len > g.cod().len() {
        return Err(DiagramError::IndexOutOfRange { index: env_len, len: g.cod().len() });
    }
    let (env, rest) = g.cod().split_at(env_len);
    let top = q_compose_par(&discard_all(g.theory(), env), &q_identity(g.theory(), rest))?;
    q_compose_seq(&top, &double(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{compose_seq, BoxVariant};
    use crate::equality::equal;

    fn theory() -> Arc<Theory> {
        Theory::builder()
            .atomic("A")
            .atomic("B")
            .generator("f", &["A"], &["B"])
            .generator("g", &["B"], &["A", "B"])
            .generator("psi", &[], &["A"])
            .build()
            .unwrap()
    }

    fn ty(t: &Theory, n: &str) -> AtomicType {
        t.atomic(n).unwrap()
    }

    fn gen(t: &Arc<Theory>, n: &str) -> Diagram {
        Diagram::generator(t, n, BoxVariant::ORIGINAL).unwrap()
    }

    #[test]
    fn doubled_identity_is_q_identity() {
        let t = theory();
        let a = ty(&t, "A");
        let q = double(&Diagram::identity(&t, std::slice::from_ref(&a)));
        assert_eq!(q.qdom(), std::slice::from_ref(&a));
        assert_eq!(q.base().dom(), &[a.clone(), a.clone()]);
        assert!(equal(q.base(), &Diagram::identity(&t, &[a.clone(), a])).unwrap());
        assert!(q.is_pure());
    }

    #[test]
    fn doubled_cup_pairs_legs() {
        let t = theory();
        let a = ty(&t, "A");
        let q = double(&Diagram::cup(&t, &a));
        // conjugate cup on legs 0 and 2, original cup on legs 1 and 3
        let w: Vec<_> = q.base().wires().iter().map(|w| w.ends().map(|p| p.index)).collect();
        assert_eq!(w, vec![[0, 2], [1, 3]]);
    }

    #[test]
    fn doubling_is_functorial() {
        let t = theory();
        let f = gen(&t, "f");
        let g = gen(&t, "g");
        let gf = compose_seq(&g, &f).unwrap();
        let lhs = double(&gf);
        let rhs = q_compose_seq(&double(&g), &double(&f)).unwrap();
        assert!(q_equal(&lhs, &rhs).unwrap());
        let par = double(&compose_par(&f, &g).unwrap());
        assert!(q_equal(&par, &q_compose_par(&double(&f), &double(&g)).unwrap()).unwrap());
        assert!(q_equal(&q_dagger(&double(&gf)), &double(&gf.dagger())).unwrap());
        assert!(q_equal(&q_conjugate(&double(&gf)), &double(&gf.conjugate())).unwrap());
        assert!(q_equal(&q_transpose(&double(&gf)), &double(&gf.transpose())).unwrap());
    }

    #[test]
    fn discard_after_state() {
        let t = theory();
        let a = ty(&t, "A");
        let d = q_compose_seq(&discard(&t, &a), &double(&gen(&t, "psi"))).unwrap();
        assert!(d.qdom().is_empty() && d.qcod().is_empty());
        assert_eq!(d.discard_wires().len(), 1);
        assert!(!d.is_pure());
    }

    #[test]
    fn discarded_maximally_mixed_state_is_an_env_loop() {
        let t = theory();
        let a = ty(&t, "A");
        let d = discard(&t, &a);
        let circle = q_compose_seq(&d, &q_dagger(&d)).unwrap();
        assert_eq!(circle.env_loops().get(&a), Some(&1));
        let (g, env) = purify(&circle);
        assert_eq!(env, vec![a.clone(), a.clone()]);
        assert!(equal(&g, &Diagram::cup(&t, &a)).unwrap());
        assert!(q_equal(&unpurify(&g, 2).unwrap(), &circle).unwrap());

        let pair = double(&compose_seq(&Diagram::cap(&t, &a), &Diagram::cup(&t, &a)).unwrap());
        assert!(pair.env_loops().is_empty());
        assert_eq!(pair.base().loops().get(&a), Some(&2));
        assert_eq!(purify(&pair).0.loops().get(&a), Some(&1));
    }

    #[test]
    fn purify_discard_is_identity_with_env() {
        let t = theory();
        let a = ty(&t, "A");
        let (g, env) = purify(&discard(&t, &a));
        assert!(equal(&g, &Diagram::identity(&t, std::slice::from_ref(&a))).unwrap());
        assert_eq!(env, vec![a]);
    }

    #[test]
    fn purify_round_trips() {
        let t = theory();
        let (a, b) = (ty(&t, "A"), ty(&t, "B"));
        let f = gen(&t, "f");
        let g = gen(&t, "g");
        assert!(equal(&purify(&double(&f)).0, &f).unwrap());

        // discard both outputs of g, then feed f's output through
        let gq = q_compose_seq(
            &q_compose_par(&discard(&t, &a), &q_identity(&t, std::slice::from_ref(&b))).unwrap(),
            &double(&g),
        )
        .unwrap();
        let q = q_compose_seq(&discard(&t, &b), &q_compose_seq(&gq, &double(&f)).unwrap()).unwrap();
        let (p, env) = purify(&q);
        assert_eq!(env.len(), 2);
        assert_eq!(p.cod(), &[a, b]);
        assert!(q_equal(&unpurify(&p, env.len()).unwrap(), &q).unwrap());
    }

    #[test]
    fn validation_rejects_unpaired_boxes() {
        let t = theory();
        let f = gen(&t, "f");
        let bad =
            QDiagram { base: compose_par(&f, &f).unwrap(), qdom: vec![], qcod: vec![], env_loops: BTreeMap::new() };
        assert!(bad.validate().is_err());
    }
}
