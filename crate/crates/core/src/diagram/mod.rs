//! Port-graph string diagrams.
//!
//! A [`Diagram`] is a set of box instances, a set of wires and two ordered
//! boundaries. Every port (box port or boundary port) lies on exactly one
//! wire. Cups and caps are not boxes: they are wires joining two consumers
//! (cup) or two producers (cap), so the yanking equations hold by wire fusion
//! and diagram equality reduces to port-graph isomorphism.
//!
//! All constructors return fresh values with boxes numbered `0..n` in
//! construction order; diagrams are never mutated after construction.

mod circuit;
mod fuse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::DiagramError;
use crate::theory::{AtomicType, GeneratorSig, Theory, TypeList};

pub use circuit::{recompose, Cell, Layer};
pub(crate) use fuse::{fuse, FusedLoop, RawPort};

/// Which member of a generator's quartet a box instance is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BoxVariant {
    pub adjoint: bool,
    pub conjugate: bool,
}

impl BoxVariant {
    pub const ORIGINAL: BoxVariant = BoxVariant { adjoint: false, conjugate: false };
    pub const ADJOINT: BoxVariant = BoxVariant { adjoint: true, conjugate: false };
    pub const CONJUGATE: BoxVariant = BoxVariant { adjoint: false, conjugate: true };
    pub const TRANSPOSE: BoxVariant = BoxVariant { adjoint: true, conjugate: true };

    pub fn toggled_adjoint(self) -> Self {
        BoxVariant { adjoint: !self.adjoint, ..self }
    }

    pub fn toggled_conjugate(self) -> Self {
        BoxVariant { conjugate: !self.conjugate, ..self }
    }

    pub fn name(self) -> &'static str {
        match (self.adjoint, self.conjugate) {
            (false, false) => "original",
            (true, false) => "adjoint",
            (false, true) => "conjugate",
            (true, true) => "transpose",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "original" => Self::ORIGINAL,
            "adjoint" => Self::ADJOINT,
            "conjugate" => Self::CONJUGATE,
            "transpose" => Self::TRANSPOSE,
            _ => return None,
        })
    }

    /// Effective `(dom, cod)` of a generator seen through this variant.
    ///
    /// The adjoint swaps dom and cod keeping their order; the conjugate keeps
    /// them in place but reverses each.
    pub fn effective(self, sig: &GeneratorSig) -> (TypeList, TypeList) {
        let (mut dom, mut cod) =
            if self.adjoint { (sig.cod.clone(), sig.dom.clone()) } else { (sig.dom.clone(), sig.cod.clone()) };
        if self.conjugate {
            dom.reverse();
            cod.reverse();
        }
        (dom, cod)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Owner {
    Boundary,
    Box(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    In,
    Out,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::In => Side::Out,
            Side::Out => Side::In,
        }
    }
}

/// A port of a box or of the diagram boundary.
///
/// Boundary `In` ports are the diagram's inputs (indexed by dom position),
/// boundary `Out` ports its outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub owner: Owner,
    pub side: Side,
    pub index: usize,
}

impl Port {
    pub const fn boundary(side: Side, index: usize) -> Port {
        Port { owner: Owner::Boundary, side, index }
    }

    pub const fn of_box(id: usize, side: Side, index: usize) -> Port {
        Port { owner: Owner::Box(id), side, index }
    }

    /// Producers emit a wire into the diagram: box outputs and diagram inputs.
    pub fn is_producer(&self) -> bool {
        matches!((self.owner, self.side), (Owner::Box(_), Side::Out) | (Owner::Boundary, Side::In))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WireKind {
    Plain,
    Cup,
    Cap,
}

/// An undirected wire; endpoints are stored sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wire {
    ends: [Port; 2],
}

impl Wire {
    pub fn new(a: Port, b: Port) -> Wire {
        if a <= b {
            Wire { ends: [a, b] }
        } else {
            Wire { ends: [b, a] }
        }
    }

    pub fn ends(&self) -> [Port; 2] {
        self.ends
    }

    pub fn kind(&self) -> WireKind {
        match (self.ends[0].is_producer(), self.ends[1].is_producer()) {
            (true, true) => WireKind::Cap,
            (false, false) => WireKind::Cup,
            _ => WireKind::Plain,
        }
    }

    pub fn other(&self, p: Port) -> Port {
        if self.ends[0] == p {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoxInstance {
    pub id: usize,
    pub generator: usize,
    pub variant: BoxVariant,
}

/// A string diagram over a fixed [`Theory`].
#[derive(Clone)]
pub struct Diagram {
    theory: Arc<Theory>,
    boxes: Vec<BoxInstance>,
    wires: Vec<Wire>,
    dom: TypeList,
    cod: TypeList,
    loops: BTreeMap<AtomicType, usize>,
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Diagram")
            .field("dom", &self.dom)
            .field("cod", &self.cod)
            .field(
                "boxes",
                &self
                    .boxes
                    .iter()
                    .map(|b| format!("{}:{}[{}]", b.id, self.theory.generator(b.generator).name, b.variant.name()))
                    .collect::<Vec<_>>(),
            )
            .field("wires", &self.wires)
            .field("loops", &self.loops)
            .finish()
    }
}

fn assert_types_known(theory: &Theory, types: &[AtomicType]) {
    for t in types {
        assert!(theory.has_type(t), "type `{t}` is not declared in the theory");
    }
}

impl Diagram {
    // ---- constructors -------------------------------------------------

    /// Builds a diagram from raw parts and validates it.
    pub fn from_parts(
        theory: Arc<Theory>,
        boxes: Vec<(usize, BoxVariant)>,
        wires: Vec<(Port, Port)>,
        dom: TypeList,
        cod: TypeList,
        loops: BTreeMap<AtomicType, usize>,
    ) -> Result<Diagram, DiagramError> {
        for &(g, _) in &boxes {
            if g >= theory.generators().len() {
                return Err(DiagramError::Malformed(format!("generator index {g} out of range")));
            }
        }
        for t in dom.iter().chain(&cod).chain(loops.keys()) {
            if !theory.has_type(t) {
                return Err(DiagramError::UnknownType(t.to_string()));
            }
        }
        let mut d = Diagram {
            theory,
            boxes: boxes
                .into_iter()
                .enumerate()
                .map(|(id, (generator, variant))| BoxInstance { id, generator, variant })
                .collect(),
            wires: wires.into_iter().map(|(a, b)| Wire::new(a, b)).collect(),
            dom,
            cod,
            loops: loops.into_iter().filter(|(_, n)| *n > 0).collect(),
        };
        d.wires.sort();
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn assemble(
        theory: Arc<Theory>,
        boxes: Vec<BoxInstance>,
        mut wires: Vec<Wire>,
        dom: TypeList,
        cod: TypeList,
        loops: BTreeMap<AtomicType, usize>,
    ) -> Diagram {
        wires.sort();
        let d = Diagram { theory, boxes, wires, dom, cod, loops };
        debug_assert!(d.validate().is_ok(), "{:?}: {:?}", d.validate(), d);
        d
    }

    /// A single generator box wired straight to the boundary.
    pub fn generator(theory: &Arc<Theory>, name: &str, variant: BoxVariant) -> Result<Diagram, DiagramError> {
        let id = theory.generator_id(name)?;
        Ok(Self::single_box(theory, id, variant))
    }

    pub(crate) fn single_box(theory: &Arc<Theory>, generator: usize, variant: BoxVariant) -> Diagram {
        let (dom, cod) = variant.effective(theory.generator(generator));
        let mut wires = Vec::with_capacity(dom.len() + cod.len());
        for i in 0..dom.len() {
            wires.push(Wire::new(Port::boundary(Side::In, i), Port::of_box(0, Side::In, i)));
        }
        for i in 0..cod.len() {
            wires.push(Wire::new(Port::of_box(0, Side::Out, i), Port::boundary(Side::Out, i)));
        }
        Self::assemble(
            theory.clone(),
            vec![BoxInstance { id: 0, generator, variant }],
            wires,
            dom,
            cod,
            BTreeMap::new(),
        )
    }

    /// Parallel plain wires. `identity(&[])` is the empty diagram.
    ///
    /// # Panics
    /// If a type is not declared in `theory`.
    pub fn identity(theory: &Arc<Theory>, types: &[AtomicType]) -> Diagram {
        let perm: Vec<usize> = (0..types.len()).collect();
        Self::permutation(theory, types, &perm).expect("identity permutation")
    }

    pub fn empty(theory: &Arc<Theory>) -> Diagram {
        Self::identity(theory, &[])
    }

    /// Wire-only diagram with `cod[j] = types[perm[j]]`.
    pub fn permutation(theory: &Arc<Theory>, types: &[AtomicType], perm: &[usize]) -> Result<Diagram, DiagramError> {
        assert_types_known(theory, types);
        let mut seen = vec![false; types.len()];
        if perm.len() != types.len() || perm.iter().any(|&p| p >= types.len() || std::mem::replace(&mut seen[p], true))
        {
            return Err(DiagramError::InvalidPermutation(perm.to_vec()));
        }
        let wires = perm
            .iter()
            .enumerate()
            .map(|(j, &p)| Wire::new(Port::boundary(Side::In, p), Port::boundary(Side::Out, j)))
            .collect();
        let cod = perm.iter().map(|&p| types[p].clone()).collect();
        Ok(Self::assemble(theory.clone(), vec![], wires, types.to_vec(), cod, BTreeMap::new()))
    }

    pub fn swap(theory: &Arc<Theory>, a: &AtomicType, b: &AtomicType) -> Diagram {
        Self::permutation(theory, &[a.clone(), b.clone()], &[1, 0]).expect("swap permutation")
    }

    /// The symmetry `left ⊗ right -> right ⊗ left` on whole type lists.
    pub fn swap_lists(theory: &Arc<Theory>, left: &[AtomicType], right: &[AtomicType]) -> Diagram {
        let types: TypeList = left.iter().chain(right).cloned().collect();
        let n = left.len();
        let perm: Vec<usize> = (n..types.len()).chain(0..n).collect();
        Self::permutation(theory, &types, &perm).expect("block swap")
    }

    /// The cup state `I -> a ⊗ a`.
    pub fn cup(theory: &Arc<Theory>, a: &AtomicType) -> Diagram {
        assert_types_known(theory, std::slice::from_ref(a));
        Self::assemble(
            theory.clone(),
            vec![],
            vec![Wire::new(Port::boundary(Side::Out, 0), Port::boundary(Side::Out, 1))],
            vec![],
            vec![a.clone(), a.clone()],
            BTreeMap::new(),
        )
    }

    /// The cap effect `a ⊗ a -> I`.
    pub fn cap(theory: &Arc<Theory>, a: &AtomicType) -> Diagram {
        assert_types_known(theory, std::slice::from_ref(a));
        Self::assemble(
            theory.clone(),
            vec![],
            vec![Wire::new(Port::boundary(Side::In, 0), Port::boundary(Side::In, 1))],
            vec![a.clone(), a.clone()],
            vec![],
            BTreeMap::new(),
        )
    }

    /// Cup on a whole type list, `I -> types ⊗ types`, pairing position `i`
    /// with position `n + i`.
    pub fn cups(theory: &Arc<Theory>, types: &[AtomicType]) -> Diagram {
        assert_types_known(theory, types);
        let n = types.len();
        let wires = (0..n).map(|i| Wire::new(Port::boundary(Side::Out, i), Port::boundary(Side::Out, n + i))).collect();
        let cod = types.iter().chain(types).cloned().collect();
        Self::assemble(theory.clone(), vec![], wires, vec![], cod, BTreeMap::new())
    }

    /// Cap on a whole type list, the adjoint of [`cups`](Self::cups).
    pub fn caps(theory: &Arc<Theory>, types: &[AtomicType]) -> Diagram {
        Self::cups(theory, types).dagger()
    }

    // ---- accessors ----------------------------------------------------

    pub fn theory(&self) -> &Arc<Theory> {
        &self.theory
    }

    pub fn boxes(&self) -> &[BoxInstance] {
        &self.boxes
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn dom(&self) -> &[AtomicType] {
        &self.dom
    }

    pub fn cod(&self) -> &[AtomicType] {
        &self.cod
    }

    pub fn loops(&self) -> &BTreeMap<AtomicType, usize> {
        &self.loops
    }

    pub fn loop_count(&self) -> usize {
        self.loops.values().sum()
    }

    pub fn generator_sig(&self, b: &BoxInstance) -> &GeneratorSig {
        self.theory.generator(b.generator)
    }

    pub fn box_dom(&self, id: usize) -> TypeList {
        let b = &self.boxes[id];
        b.variant.effective(self.theory.generator(b.generator)).0
    }

    pub fn box_cod(&self, id: usize) -> TypeList {
        let b = &self.boxes[id];
        b.variant.effective(self.theory.generator(b.generator)).1
    }

    pub(crate) fn box_arity(&self, id: usize, side: Side) -> usize {
        let b = &self.boxes[id];
        let sig = self.theory.generator(b.generator);
        match (side, b.variant.adjoint) {
            (Side::In, false) | (Side::Out, true) => sig.dom.len(),
            _ => sig.cod.len(),
        }
    }

    pub fn port_type(&self, p: Port) -> AtomicType {
        match (p.owner, p.side) {
            (Owner::Boundary, Side::In) => self.dom[p.index].clone(),
            (Owner::Boundary, Side::Out) => self.cod[p.index].clone(),
            (Owner::Box(b), Side::In) => self.box_dom(b)[p.index].clone(),
            (Owner::Box(b), Side::Out) => self.box_cod(b)[p.index].clone(),
        }
    }

    /// Every port of the diagram, boundary first.
    pub fn ports(&self) -> Vec<Port> {
        let mut ports = Vec::new();
        ports.extend((0..self.dom.len()).map(|i| Port::boundary(Side::In, i)));
        ports.extend((0..self.cod.len()).map(|i| Port::boundary(Side::Out, i)));
        for b in &self.boxes {
            for side in [Side::In, Side::Out] {
                ports.extend((0..self.box_arity(b.id, side)).map(|i| Port::of_box(b.id, side, i)));
            }
        }
        ports
    }

    /// Map from each port to the port at the other end of its wire.
    pub fn partner_map(&self) -> HashMap<Port, Port> {
        let mut m = HashMap::with_capacity(self.wires.len() * 2);
        for w in &self.wires {
            let [a, b] = w.ends();
            m.insert(a, b);
            m.insert(b, a);
        }
        m
    }

    /// Checks that every port lies on exactly one wire and that wire
    /// endpoints agree on their type.
    pub fn validate(&self) -> Result<(), DiagramError> {
        for (i, b) in self.boxes.iter().enumerate() {
            if b.id != i {
                return Err(DiagramError::Malformed(format!("box {i} carries id {}", b.id)));
            }
        }
        let mut count: HashMap<Port, usize> = self.ports().into_iter().map(|p| (p, 0)).collect();
        for w in &self.wires {
            for p in w.ends() {
                match count.get_mut(&p) {
                    Some(c) => *c += 1,
                    None => return Err(DiagramError::Malformed(format!("wire endpoint {p:?} is not a port"))),
                }
            }
            let [a, b] = w.ends();
            if a == b {
                return Err(DiagramError::Malformed(format!("wire {a:?} joins a port to itself")));
            }
            if self.port_type(a) != self.port_type(b) {
                return Err(DiagramError::Malformed(format!("wire {a:?}-{b:?} joins different types")));
            }
        }
        if let Some((p, c)) = count.iter().find(|(_, c)| **c != 1) {
            return Err(DiagramError::Malformed(format!("port {p:?} lies on {c} wires")));
        }
        Ok(())
    }

    // ---- composition --------------------------------------------------

    fn check_same_theory(&self, other: &Diagram) -> Result<(), DiagramError> {
        if Arc::ptr_eq(&self.theory, &other.theory) || *self.theory == *other.theory {
            Ok(())
        } else {
            Err(DiagramError::TheoryMismatch)
        }
    }

    /// `self ∘ f`: plugs the outputs of `f` into the inputs of `self`, in order.
    pub fn after(&self, f: &Diagram) -> Result<Diagram, DiagramError> {
        compose_seq(self, f)
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Diagram) -> Result<Diagram, DiagramError> {
        compose_par(self, other)
    }

    pub(crate) fn compose_seq_traced(g: &Diagram, f: &Diagram) -> Result<(Diagram, Vec<FusedLoop>), DiagramError> {
        g.check_same_theory(f)?;
        if f.cod.len() != g.dom.len() {
            return Err(DiagramError::ArityMismatch { expected: g.dom.len(), found: f.cod.len() });
        }
        if let Some(index) = f.cod.iter().zip(&g.dom).position(|(a, b)| a != b) {
            return Err(DiagramError::TypeMismatch {
                index,
                expected: g.dom[index].clone(),
                found: f.cod[index].clone(),
            });
        }
        let nf = f.boxes.len();
        let map_f = |p: Port| match (p.owner, p.side) {
            (Owner::Boundary, Side::Out) => RawPort::Glue(p.index),
            _ => RawPort::Kept(p),
        };
        let map_g = |p: Port| match p.owner {
            Owner::Boundary if p.side == Side::In => RawPort::Glue(p.index),
            Owner::Boundary => RawPort::Kept(p),
            Owner::Box(b) => RawPort::Kept(Port::of_box(b + nf, p.side, p.index)),
        };
        let raw: Vec<[RawPort; 2]> =
            f.wires.iter().map(|w| w.ends().map(map_f)).chain(g.wires.iter().map(|w| w.ends().map(map_g))).collect();
        let (wires, new_loops) = fuse(&raw, &f.cod);

        let boxes =
            f.boxes.iter().copied().chain(g.boxes.iter().map(|b| BoxInstance { id: b.id + nf, ..*b })).collect();
        let mut loops = merge_loops(&f.loops, &g.loops);
        for l in &new_loops {
            *loops.entry(l.ty.clone()).or_insert(0) += 1;
        }
        let d = Self::assemble(f.theory.clone(), boxes, wires, f.dom.clone(), g.cod.clone(), loops);
        Ok((d, new_loops))
    }

    // ---- reflections ----------------------------------------------------

    /// Vertical reflection: swaps inputs and outputs, keeps orders.
    pub fn dagger(&self) -> Diagram {
        let flip = |p: Port| Port { side: p.side.flip(), ..p };
        Self::assemble(
            self.theory.clone(),
            self.boxes.iter().map(|b| BoxInstance { variant: b.variant.toggled_adjoint(), ..*b }).collect(),
            self.wires
                .iter()
                .map(|w| {
                    let [a, b] = w.ends();
                    Wire::new(flip(a), flip(b))
                })
                .collect(),
            self.cod.clone(),
            self.dom.clone(),
            self.loops.clone(),
        )
    }

    /// Horizontal reflection: keeps inputs and outputs, reverses every order.
    pub fn conjugate(&self) -> Diagram {
        let mirror = |p: Port| {
            let n = match p.owner {
                Owner::Boundary => match p.side {
                    Side::In => self.dom.len(),
                    Side::Out => self.cod.len(),
                },
                Owner::Box(b) => self.box_arity(b, p.side),
            };
            Port { index: n - 1 - p.index, ..p }
        };
        let mut dom = self.dom.clone();
        dom.reverse();
        let mut cod = self.cod.clone();
        cod.reverse();
        Self::assemble(
            self.theory.clone(),
            self.boxes.iter().map(|b| BoxInstance { variant: b.variant.toggled_conjugate(), ..*b }).collect(),
            self.wires
                .iter()
                .map(|w| {
                    let [a, b] = w.ends();
                    Wire::new(mirror(a), mirror(b))
                })
                .collect(),
            dom,
            cod,
            self.loops.clone(),
        )
    }

    /// 180° rotation, i.e. bending every input up and every output down with
    /// cups and caps. Equal to `conjugate ∘ dagger`.
    pub fn transpose(&self) -> Diagram {
        self.dagger().conjugate()
    }

    // ---- traces ---------------------------------------------------------

    /// Feeds output `out_index` back into input `in_index`.
    pub fn partial_trace(&self, out_index: usize, in_index: usize) -> Result<Diagram, DiagramError> {
        if out_index >= self.cod.len() {
            return Err(DiagramError::IndexOutOfRange { index: out_index, len: self.cod.len() });
        }
        if in_index >= self.dom.len() {
            return Err(DiagramError::IndexOutOfRange { index: in_index, len: self.dom.len() });
        }
        if self.cod[out_index] != self.dom[in_index] {
            return Err(DiagramError::TypeMismatch {
                index: in_index,
                expected: self.dom[in_index].clone(),
                found: self.cod[out_index].clone(),
            });
        }
        let map = |p: Port| match (p.owner, p.side) {
            (Owner::Boundary, Side::Out) if p.index == out_index => RawPort::Glue(0),
            (Owner::Boundary, Side::In) if p.index == in_index => RawPort::Glue(0),
            (Owner::Boundary, Side::Out) if p.index > out_index => RawPort::Kept(Port { index: p.index - 1, ..p }),
            (Owner::Boundary, Side::In) if p.index > in_index => RawPort::Kept(Port { index: p.index - 1, ..p }),
            _ => RawPort::Kept(p),
        };
        let raw: Vec<[RawPort; 2]> = self.wires.iter().map(|w| w.ends().map(map)).collect();
        let (wires, new_loops) = fuse(&raw, std::slice::from_ref(&self.cod[out_index]));
        let mut loops = self.loops.clone();
        for l in new_loops {
            *loops.entry(l.ty).or_insert(0) += 1;
        }
        let mut dom = self.dom.clone();
        dom.remove(in_index);
        let mut cod = self.cod.clone();
        cod.remove(out_index);
        Ok(Self::assemble(self.theory.clone(), self.boxes.clone(), wires, dom, cod, loops))
    }

    /// Traces output `i` against input `i` for every position. Requires
    /// `dom == cod`.
    pub fn trace(&self) -> Result<Diagram, DiagramError> {
        if self.dom.len() != self.cod.len() {
            return Err(DiagramError::ArityMismatch { expected: self.dom.len(), found: self.cod.len() });
        }
        let mut d = self.clone();
        while !d.dom.is_empty() {
            d = d.partial_trace(0, 0)?;
        }
        Ok(d)
    }
}

/// `g ∘ f`. Requires `cod(f) == dom(g)`.
pub fn compose_seq(g: &Diagram, f: &Diagram) -> Result<Diagram, DiagramError> {
    Diagram::compose_seq_traced(g, f).map(|(d, _)| d)
}

/// `f ⊗ g`: side by side, boundaries concatenated.
pub fn compose_par(f: &Diagram, g: &Diagram) -> Result<Diagram, DiagramError> {
    f.check_same_theory(g)?;
    let nf = f.boxes.len();
    let shift = |p: Port| match (p.owner, p.side) {
        (Owner::Boundary, Side::In) => Port { index: p.index + f.dom.len(), ..p },
        (Owner::Boundary, Side::Out) => Port { index: p.index + f.cod.len(), ..p },
        (Owner::Box(b), _) => Port { owner: Owner::Box(b + nf), ..p },
    };
    let wires = f
        .wires
        .iter()
        .copied()
        .chain(g.wires.iter().map(|w| {
            let [a, b] = w.ends();
            Wire::new(shift(a), shift(b))
        }))
        .collect();
    let boxes = f.boxes.iter().copied().chain(g.boxes.iter().map(|b| BoxInstance { id: b.id + nf, ..*b })).collect();
    Ok(Diagram::assemble(
        f.theory.clone(),
        boxes,
        wires,
        f.dom.iter().chain(&g.dom).cloned().collect(),
        f.cod.iter().chain(&g.cod).cloned().collect(),
        merge_loops(&f.loops, &g.loops),
    ))
}

/// Sequential composition of a non-empty chain, applied right to left:
/// `compose_all(&[h, g, f]) = h ∘ g ∘ f`.
pub fn compose_all(chain: &[&Diagram]) -> Result<Diagram, DiagramError> {
    let (last, rest) = chain.split_last().expect("non-empty chain");
    rest.iter().rev().try_fold((*last).clone(), |acc, g| compose_seq(g, &acc))
}

/// Tensor product of a non-empty list, left to right.
pub fn tensor_all(parts: &[&Diagram]) -> Result<Diagram, DiagramError> {
    let (first, rest) = parts.split_first().expect("non-empty list");
    rest.iter().try_fold((*first).clone(), |acc, g| compose_par(&acc, g))
}

pub(crate) fn merge_loops(
    a: &BTreeMap<AtomicType, usize>,
    b: &BTreeMap<AtomicType, usize>,
) -> BTreeMap<AtomicType, usize> {
    let mut out = a.clone();
    for (t, n) in b {
        *out.entry(t.clone()).or_insert(0) += n;
    }
    out
}
