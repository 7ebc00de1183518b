//! Structural equality of diagrams via canonical port-graph encodings.
//!
//! Boundary ports are anchored by position, so only box identities are free.
//! Boxes are colored by label and refined by their wiring until stable; if
//! ties remain, each tied box is individualized in turn and the
//! lexicographically smallest resulting encoding is kept.
//!
//! Byte layout (all integers big-endian `u32`, strings length-prefixed UTF-8):
//!
//! ```text
//! "PFCF" 0x01
//! dom:   count, names...
//! cod:   count, names...
//! loops: count, (name, multiplicity)...
//! boxes: count, (generator name, variant byte)...   in canonical order
//! wires: count, (port, port)...                     sorted; each end sorted
//! port:  owner (0 = boundary, 1 + canonical box index), side byte (0 in, 1 out), index
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::diagram::{Diagram, Owner, Port, Side};
use crate::error::DiagramError;

/// Deterministic encoding of a diagram up to renaming of its boxes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub(crate) fn from_bytes(bytes: Vec<u8>) -> CanonicalForm {
        CanonicalForm(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({} bytes)", self.0.len())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Neighbour {
    Boundary(Side, usize),
    Box(usize, Side, usize),
}

struct Graph<'a> {
    d: &'a Diagram,
    partner: std::collections::HashMap<Port, Port>,
    /// Ports of each box in a fixed order (inputs then outputs).
    ports: Vec<Vec<Port>>,
}

impl<'a> Graph<'a> {
    fn new(d: &'a Diagram) -> Self {
        let ports = d
            .boxes()
            .iter()
            .map(|b| {
                let ins = (0..d.box_dom(b.id).len()).map(|i| Port::of_box(b.id, Side::In, i));
                let outs = (0..d.box_cod(b.id).len()).map(|i| Port::of_box(b.id, Side::Out, i));
                ins.chain(outs).collect()
            })
            .collect();
        Graph { d, partner: d.partner_map(), ports }
    }

    fn initial_colors(&self) -> Vec<usize> {
        let labels: Vec<(&str, bool, bool)> = self
            .d
            .boxes()
            .iter()
            .map(|b| (self.d.generator_sig(b).name.as_str(), b.variant.adjoint, b.variant.conjugate))
            .collect();
        rank(&labels)
    }

    /// Refines `colors` until the number of classes stops growing.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<(usize, Vec<Neighbour>)> = self
                .ports
                .iter()
                .enumerate()
                .map(|(b, ports)| {
                    let nb = ports
                        .iter()
                        .map(|p| {
                            let q = self.partner[p];
                            match q.owner {
                                Owner::Boundary => Neighbour::Boundary(q.side, q.index),
                                Owner::Box(c) => Neighbour::Box(colors[c], q.side, q.index),
                            }
                        })
                        .collect();
                    (colors[b], nb)
                })
                .collect();
            colors = rank(&sigs);
            let now = count_classes(&colors);
            if now == classes {
                return colors;
            }
            classes = now;
        }
    }

    fn search(&self, colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
        let colors = self.refine(colors);
        let n = colors.len();
        if count_classes(&colors) == n {
            let enc = self.encode(&colors);
            if best.as_ref().is_none_or(|b| enc < *b) {
                *best = Some(enc);
            }
            return;
        }
        // first non-singleton cell, by color
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c] += 1;
        }
        let cell = (0..n).find(|&c| sizes[c] > 1).expect("non-discrete coloring has a tied cell");
        for v in (0..n).filter(|&b| colors[b] == cell) {
            let split: Vec<usize> =
                colors.iter().enumerate().map(|(b, &c)| 2 * c + usize::from(c == cell && b != v)).collect();
            self.search(rank(&split), best);
        }
    }

    fn encode(&self, colors: &[usize]) -> Vec<u8> {
        let d = self.d;
        let mut out = Vec::with_capacity(64 + 16 * d.wires().len());
        out.extend_from_slice(b"PFCF\x01");
        put_u32(&mut out, d.dom().len());
        for t in d.dom() {
            put_str(&mut out, t.name());
        }
        put_u32(&mut out, d.cod().len());
        for t in d.cod() {
            put_str(&mut out, t.name());
        }
        put_u32(&mut out, d.loops().len());
        for (t, k) in d.loops() {
            put_str(&mut out, t.name());
            put_u32(&mut out, *k);
        }
        let mut order: Vec<usize> = (0..colors.len()).collect();
        order.sort_by_key(|&b| colors[b]);
        put_u32(&mut out, order.len());
        for &b in &order {
            let inst = &d.boxes()[b];
            put_str(&mut out, &d.generator_sig(inst).name);
            out.push(u8::from(inst.variant.adjoint) | (u8::from(inst.variant.conjugate) << 1));
        }
        let port_key = |p: Port| -> (u32, u8, u32) {
            let owner = match p.owner {
                Owner::Boundary => 0,
                Owner::Box(b) => 1 + colors[b] as u32,
            };
            (owner, u8::from(p.side == Side::Out), p.index as u32)
        };
        let mut wires: Vec<[(u32, u8, u32); 2]> = d
            .wires()
            .iter()
            .map(|w| {
                let [a, b] = w.ends().map(port_key);
                if a <= b {
                    [a, b]
                } else {
                    [b, a]
                }
            })
            .collect();
        wires.sort();
        put_u32(&mut out, wires.len());
        for w in wires {
            for (owner, side, index) in w {
                out.extend_from_slice(&owner.to_be_bytes());
                out.push(side);
                out.extend_from_slice(&index.to_be_bytes());
            }
        }
        out
    }
}

fn put_u32(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&(v as u32).to_be_bytes());
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len());
    out.extend_from_slice(s.as_bytes());
}

/// Replaces each value by the rank of its value among the distinct values.
fn rank<T: Ord>(values: &[T]) -> Vec<usize> {
    let mut distinct: Vec<&T> = values.iter().collect();
    distinct.sort();
    distinct.dedup();
    values.iter().map(|v| distinct.binary_search(&v).expect("value present")).collect()
}

fn count_classes(colors: &[usize]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m + 1)
}

/// Canonical encoding of `d`, stable under any renumbering of its boxes.
pub fn canonical_form(d: &Diagram) -> CanonicalForm {
    debug_assert!(d.validate().is_ok());
    let g = Graph::new(d);
    let mut best = None;
    g.search(g.initial_colors(), &mut best);
    CanonicalForm(best.unwrap_or_else(|| g.encode(&[])))
}

/// Structural equality: same boundary types, same loops and isomorphic port
/// graphs respecting boundary order, box labels and wiring.
pub fn equal(d1: &Diagram, d2: &Diagram) -> Result<bool, DiagramError> {
    if !Arc::ptr_eq(d1.theory(), d2.theory()) && **d1.theory() != **d2.theory() {
        return Err(DiagramError::TheoryMismatch);
    }
    if d1.dom() != d2.dom() || d1.cod() != d2.cod() || d1.loops() != d2.loops() {
        return Ok(false);
    }
    if d1.boxes().len() != d2.boxes().len() || d1.wires().len() != d2.wires().len() {
        return Ok(false);
    }
    if box_label_counts(d1) != box_label_counts(d2) {
        return Ok(false);
    }
    Ok(canonical_form(d1) == canonical_form(d2))
}

fn box_label_counts(d: &Diagram) -> BTreeMap<(usize, bool, bool), usize> {
    let mut m = BTreeMap::new();
    for b in d.boxes() {
        *m.entry((b.generator, b.variant.adjoint, b.variant.conjugate)).or_insert(0) += 1;
    }
    m
}
