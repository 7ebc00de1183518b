//! Circuit recognition and layering.
//!
//! A diagram is a circuit when it has no cup or cap wires, no closed loops
//! and its box graph (output of one box feeding an input of another) is
//! acyclic. Circuits can be cut into layers of boxes, identities and swaps.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::sync::Arc;

use super::{compose_par, compose_seq, BoxVariant, Diagram, Owner, Port, Side, WireKind};
use crate::error::{CircuitObstruction, DiagramError};
use crate::theory::{AtomicType, Theory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Box { id: usize, generator: usize, variant: BoxVariant },
    Identity(AtomicType),
    Swap(AtomicType, AtomicType),
}

pub type Layer = Vec<Cell>;

impl Diagram {
    /// Box-to-box successor lists: `b -> c` when an output of `b` is wired
    /// to an input of `c`.
    fn box_successors(&self) -> Vec<BTreeSet<usize>> {
        let mut succ = vec![BTreeSet::new(); self.boxes.len()];
        for w in &self.wires {
            let [a, b] = w.ends();
            let (src, dst) = if a.is_producer() { (a, b) } else { (b, a) };
            if let (Owner::Box(s), Side::Out, Owner::Box(d), Side::In) = (src.owner, src.side, dst.owner, dst.side) {
                succ[s].insert(d);
            }
        }
        succ
    }

    /// One witness cycle per strongly connected component that contains a
    /// cycle, each rotated to start at its smallest box id.
    pub fn directed_cycles(&self) -> Vec<Vec<usize>> {
        let succ = self.box_successors();
        let mut cycles = Vec::new();
        for comp in tarjan_scc(&succ) {
            let root = *comp.iter().min().expect("non-empty component");
            if comp.len() == 1 && !succ[root].contains(&root) {
                continue;
            }
            let members: BTreeSet<usize> = comp.into_iter().collect();
            cycles.push(shortest_cycle_through(root, &succ, &members));
        }
        cycles.sort();
        cycles
    }

    fn circuit_obstruction(&self) -> Option<CircuitObstruction> {
        if let Some(i) = self.wires.iter().position(|w| w.kind() != WireKind::Plain) {
            return Some(CircuitObstruction::BentWire(i));
        }
        if !self.loops.is_empty() {
            let types = self.loops.iter().flat_map(|(t, n)| std::iter::repeat_n(t.clone(), *n)).collect();
            return Some(CircuitObstruction::Loops(types));
        }
        let cycles = self.directed_cycles();
        if !cycles.is_empty() {
            return Some(CircuitObstruction::Cycles(cycles));
        }
        None
    }

    pub fn is_circuit(&self) -> bool {
        self.circuit_obstruction().is_none()
    }

    /// Cuts a circuit into layers. Boxes are placed one per layer in
    /// topological order (smallest id first among ready boxes); wires are
    /// brought into position with layers holding a single adjacent swap.
    pub fn layer_decompose(&self) -> Result<Vec<Layer>, DiagramError> {
        if let Some(ob) = self.circuit_obstruction() {
            return Err(DiagramError::NotACircuit(ob));
        }
        let partner = self.partner_map();
        let succ = self.box_successors();
        let mut indegree = vec![0usize; self.boxes.len()];
        for s in &succ {
            for &d in s {
                indegree[d] += 1;
            }
        }
        // Multiple wires between the same pair of boxes count once in `succ`,
        // which is all Kahn's algorithm needs.
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..self.boxes.len()).filter(|&b| indegree[b] == 0).map(Reverse).collect();

        let mut frontier: Vec<Port> = (0..self.dom.len()).map(|i| Port::boundary(Side::In, i)).collect();
        let mut layers = Vec::new();

        while let Some(Reverse(b)) = ready.pop() {
            let inputs: Vec<Port> =
                (0..self.box_dom(b).len()).map(|i| partner[&Port::of_box(b, Side::In, i)]).collect();
            let first =
                inputs.iter().map(|p| frontier.iter().position(|q| q == p).expect("input wire on frontier")).min();
            let mut rest: Vec<Port> = frontier.iter().copied().filter(|p| !inputs.contains(p)).collect();
            let at = match first {
                Some(pos) => frontier[..pos].iter().filter(|p| !inputs.contains(p)).count(),
                None => rest.len(),
            };
            let mut target = rest.split_off(at);
            let mut arranged = rest;
            arranged.extend(inputs.iter().copied());
            arranged.append(&mut target);
            self.emit_swaps(&mut frontier, &arranged, &mut layers);

            let inst = self.boxes[b];
            let outputs: Vec<Port> = (0..self.box_cod(b).len()).map(|j| Port::of_box(b, Side::Out, j)).collect();
            let mut layer: Layer = frontier[..at].iter().map(|p| Cell::Identity(self.port_type(*p))).collect();
            layer.push(Cell::Box { id: b, generator: inst.generator, variant: inst.variant });
            layer.extend(frontier[at + inputs.len()..].iter().map(|p| Cell::Identity(self.port_type(*p))));
            layers.push(layer);
            frontier.splice(at..at + inputs.len(), outputs);

            for &d in &succ[b] {
                indegree[d] -= 1;
                if indegree[d] == 0 {
                    ready.push(Reverse(d));
                }
            }
        }

        let mut by_output = frontier.clone();
        by_output.sort_by_key(|p| partner[p].index);
        self.emit_swaps(&mut frontier, &by_output, &mut layers);
        Ok(layers)
    }

    /// Bubble-sorts `frontier` into `target` order, one swap per layer.
    fn emit_swaps(&self, frontier: &mut [Port], target: &[Port], layers: &mut Vec<Layer>) {
        let rank = |p: &Port| target.iter().position(|q| q == p).expect("same port set");
        while let Some(i) = (0..frontier.len().saturating_sub(1)).find(|&i| rank(&frontier[i]) > rank(&frontier[i + 1]))
        {
            let mut layer: Layer = Vec::with_capacity(frontier.len() - 1);
            for (j, p) in frontier.iter().enumerate() {
                if j == i {
                    layer.push(Cell::Swap(self.port_type(*p), self.port_type(frontier[i + 1])));
                } else if j != i + 1 {
                    layer.push(Cell::Identity(self.port_type(*p)));
                }
            }
            layers.push(layer);
            frontier.swap(i, i + 1);
        }
    }
}

/// Rebuilds a diagram from layers: each layer is the tensor of its cells and
/// layers are composed in order starting from `identity(dom)`.
pub fn recompose(theory: &Arc<Theory>, dom: &[AtomicType], layers: &[Layer]) -> Result<Diagram, DiagramError> {
    let mut acc = Diagram::identity(theory, dom);
    for layer in layers {
        let mut row = Diagram::empty(theory);
        for cell in layer {
            let piece = match cell {
                Cell::Box { generator, variant, .. } => Diagram::single_box(theory, *generator, *variant),
                Cell::Identity(t) => Diagram::identity(theory, std::slice::from_ref(t)),
                Cell::Swap(a, b) => Diagram::swap(theory, a, b),
            };
            row = compose_par(&row, &piece)?;
        }
        acc = compose_seq(&row, &acc)?;
    }
    Ok(acc)
}

fn tarjan_scc(succ: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        succ: &'a [BTreeSet<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for &w in s.succ[v].iter() {
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("tarjan stack");
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            s.out.push(comp);
        }
    }
    let n = succ.len();
    let mut s = State {
        succ,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

/// Breadth-first search for the shortest cycle through `root` that stays
/// inside `members`.
fn shortest_cycle_through(root: usize, succ: &[BTreeSet<usize>], members: &BTreeSet<usize>) -> Vec<usize> {
    if succ[root].contains(&root) {
        return vec![root];
    }
    let mut parent = vec![usize::MAX; succ.len()];
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v] {
            if !members.contains(&w) {
                continue;
            }
            if w == root {
                let mut path = vec![v];
                let mut cur = v;
                while cur != root {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return path;
            }
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    unreachable!("strongly connected component without a cycle through its root")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::compose_all;
    use crate::equality::equal;

    fn theory() -> Arc<Theory> {
        Theory::builder()
            .atomic("A")
            .generator("f", &["A"], &["A"])
            .generator("g", &["A"], &["A"])
            .generator("bell", &[], &["A", "A"])
            .generator("meas", &["A", "A"], &[])
            .build()
            .unwrap()
    }

    #[test]
    fn single_box_is_one_layer() {
        let t = theory();
        let f = Diagram::generator(&t, "f", BoxVariant::ORIGINAL).unwrap();
        assert!(f.is_circuit());
        let layers = f.layer_decompose().unwrap();
        assert_eq!(layers.len(), 1);
        assert!(matches!(layers[0][..], [Cell::Box { id: 0, .. }]));
    }

    #[test]
    fn sequential_boxes_layer_in_order() {
        let t = theory();
        let f = Diagram::generator(&t, "f", BoxVariant::ORIGINAL).unwrap();
        let g = Diagram::generator(&t, "g", BoxVariant::ORIGINAL).unwrap();
        let gf = compose_seq(&g, &f).unwrap();
        let layers = gf.layer_decompose().unwrap();
        assert_eq!(layers.len(), 2);
        let gen = |l: &Layer| match l[0] {
            Cell::Box { generator, .. } => t.generator(generator).name.clone(),
            _ => panic!(),
        };
        assert_eq!(gen(&layers[0]), "f");
        assert_eq!(gen(&layers[1]), "g");
    }

    #[test]
    fn traced_box_is_a_cycle() {
        let t = theory();
        let f = Diagram::generator(&t, "f", BoxVariant::ORIGINAL).unwrap();
        let tr = f.trace().unwrap();
        assert!(!tr.is_circuit());
        assert_eq!(tr.directed_cycles(), vec![vec![0]]);
        assert!(matches!(tr.layer_decompose(), Err(DiagramError::NotACircuit(CircuitObstruction::Cycles(_)))));
    }

    #[test]
    fn cups_are_not_circuits_but_snakes_are() {
        let t = theory();
        let a = t.atomic("A").unwrap();
        assert!(!Diagram::cup(&t, &a).is_circuit());
        let id = Diagram::identity(&t, std::slice::from_ref(&a));
        let snake = compose_seq(
            &compose_par(&Diagram::cap(&t, &a), &id).unwrap(),
            &compose_par(&id, &Diagram::cup(&t, &a)).unwrap(),
        )
        .unwrap();
        assert!(snake.is_circuit());
    }

    #[test]
    fn two_box_cycle_witness() {
        let t = theory();
        let f = Diagram::generator(&t, "f", BoxVariant::ORIGINAL).unwrap();
        let g = Diagram::generator(&t, "g", BoxVariant::ORIGINAL).unwrap();
        let tr = compose_seq(&g, &f).unwrap().trace().unwrap();
        assert_eq!(tr.directed_cycles(), vec![vec![0, 1]]);
    }

    #[test]
    fn teleport_skeleton_layers_through_a_swap() {
        // (meas ⊗ id) ∘ (swap ⊗ id) ∘ (id ⊗ bell): the measured pair arrives
        // crossed, so one swap layer is needed.
        let t = theory();
        let a = t.atomic("A").unwrap();
        let id = Diagram::identity(&t, std::slice::from_ref(&a));
        let bell = Diagram::generator(&t, "bell", BoxVariant::ORIGINAL).unwrap();
        let meas = Diagram::generator(&t, "meas", BoxVariant::ORIGINAL).unwrap();
        let prep = compose_par(&id, &bell).unwrap();
        let cross = compose_par(&Diagram::swap(&t, &a, &a), &id).unwrap();
        let measure = compose_par(&meas, &id).unwrap();
        let d = compose_all(&[&measure, &cross, &prep]).unwrap();
        let layers = d.layer_decompose().unwrap();
        assert_eq!(layers.len(), 3);
        assert!(layers.iter().any(|l| l.iter().any(|c| matches!(c, Cell::Swap(..)))));
        let back = recompose(&t, d.dom(), &layers).unwrap();
        assert!(equal(&back, &d).unwrap());
    }
}
