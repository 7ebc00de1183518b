//! Tensor-network contraction of a diagram.

use std::sync::Arc;

use super::{Model, Scalar, Tensor};
use crate::diagram::{Diagram, Owner, Port, Side};
use crate::error::EvalError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ContractionOrder {
    /// Repeatedly contract the connected pair with the smallest result,
    /// ties broken by the smallest shared wire label.
    #[default]
    Greedy,
    /// Fold the box tensors in box order.
    LeftToRight,
}

/// A tensor whose axes are named by wire labels.
#[derive(Clone, Debug)]
struct Node<S> {
    labels: Vec<usize>,
    dims: Vec<usize>,
    data: Vec<S>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Offsets of every row-major multi-index over `dims` under `strides`.
fn offsets(dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for (&d, &s) in dims.iter().zip(strides) {
        let mut next = Vec::with_capacity(out.len() * d);
        for &o in &out {
            for i in 0..d {
                next.push(o + i * s);
            }
        }
        out = next;
    }
    out
}

impl<S: Scalar> Node<S> {
    fn size_of(labels: &[usize], dim_of: &impl Fn(usize) -> usize) -> usize {
        labels.iter().map(|&l| dim_of(l)).product()
    }

    /// Sums over labels that occur twice on this node (a wire from a box to
    /// itself).
    fn trace_repeated(self) -> Node<S> {
        let st = strides(&self.dims);
        let mut free = Vec::new();
        let mut paired: Vec<(usize, usize)> = Vec::new();
        for (i, &l) in self.labels.iter().enumerate() {
            match self.labels.iter().position(|&m| m == l) {
                Some(j) if j < i => paired.push((j, i)),
                _ if self.labels[i + 1..].contains(&l) => {}
                _ => free.push(i),
            }
        }
        if paired.is_empty() {
            return self;
        }
        let free_dims: Vec<usize> = free.iter().map(|&i| self.dims[i]).collect();
        let free_off = offsets(&free_dims, &free.iter().map(|&i| st[i]).collect::<Vec<_>>());
        let pair_dims: Vec<usize> = paired.iter().map(|&(i, _)| self.dims[i]).collect();
        let pair_off = offsets(&pair_dims, &paired.iter().map(|&(i, j)| st[i] + st[j]).collect::<Vec<_>>());
        let data =
            free_off.iter().map(|&f| pair_off.iter().fold(S::zero(), |acc, &p| acc.add(self.data[f + p]))).collect();
        Node { labels: free.iter().map(|&i| self.labels[i]).collect(), dims: free_dims, data }
    }

    /// Contracts shared labels; result axes are `self`'s free labels then
    /// `other`'s.
    fn contract(&self, other: &Node<S>) -> Node<S> {
        let sa = strides(&self.dims);
        let sb = strides(&other.dims);
        let mut free_a = Vec::new();
        let mut shared = Vec::new();
        for (i, l) in self.labels.iter().enumerate() {
            match other.labels.iter().position(|m| m == l) {
                Some(j) => shared.push((i, j)),
                None => free_a.push(i),
            }
        }
        let free_b: Vec<usize> = (0..other.labels.len()).filter(|j| !self.labels.contains(&other.labels[*j])).collect();

        let dims_fa: Vec<usize> = free_a.iter().map(|&i| self.dims[i]).collect();
        let dims_fb: Vec<usize> = free_b.iter().map(|&j| other.dims[j]).collect();
        let dims_sh: Vec<usize> = shared.iter().map(|&(i, _)| self.dims[i]).collect();
        let off_a = offsets(&dims_fa, &free_a.iter().map(|&i| sa[i]).collect::<Vec<_>>());
        let off_b = offsets(&dims_fb, &free_b.iter().map(|&j| sb[j]).collect::<Vec<_>>());
        let sh_a = offsets(&dims_sh, &shared.iter().map(|&(i, _)| sa[i]).collect::<Vec<_>>());
        let sh_b = offsets(&dims_sh, &shared.iter().map(|&(_, j)| sb[j]).collect::<Vec<_>>());

        let mut data = Vec::with_capacity(off_a.len() * off_b.len());
        for &oa in &off_a {
            for &ob in &off_b {
                let mut acc = S::zero();
                for (&xa, &xb) in sh_a.iter().zip(&sh_b) {
                    acc = acc.add(self.data[oa + xa].mul(other.data[ob + xb]));
                }
                data.push(acc);
            }
        }
        Node {
            labels: free_a.iter().map(|&i| self.labels[i]).chain(free_b.iter().map(|&j| other.labels[j])).collect(),
            dims: dims_fa.into_iter().chain(dims_fb).collect(),
            data,
        }
    }

    fn permuted(&self, order: &[usize]) -> Vec<S> {
        let st = strides(&self.dims);
        let pos: Vec<usize> =
            order.iter().map(|l| self.labels.iter().position(|m| m == l).expect("label present")).collect();
        let dims: Vec<usize> = pos.iter().map(|&p| self.dims[p]).collect();
        offsets(&dims, &pos.iter().map(|&p| st[p]).collect::<Vec<_>>()).into_iter().map(|o| self.data[o]).collect()
    }
}

/// Evaluates with the default (greedy) contraction order.
pub fn evaluate<S: Scalar>(d: &Diagram, m: &Model<S>) -> Result<Tensor<S>, EvalError> {
    evaluate_with(d, m, ContractionOrder::Greedy)
}

/// Interprets `d` in `m`. The result has the output axes in cod order
/// followed by the input axes in dom order; each closed loop of type `A`
/// contributes a factor `dim(A)`.
pub fn evaluate_with<S: Scalar>(d: &Diagram, m: &Model<S>, order: ContractionOrder) -> Result<Tensor<S>, EvalError> {
    if !Arc::ptr_eq(d.theory(), m.theory()) && **d.theory() != **m.theory() {
        return Err(EvalError::TheoryMismatch);
    }

    // label k < wires.len() is wire k; fresh labels follow for boundary-to-boundary wires
    let mut label_dims: Vec<usize> = Vec::with_capacity(d.wires().len());
    let mut port_label = std::collections::HashMap::new();
    let mut nodes: Vec<Node<S>> = Vec::new();
    let mut deltas = Vec::new();
    for (k, w) in d.wires().iter().enumerate() {
        let [a, b] = w.ends();
        let dim = m.dim(&d.port_type(a))?;
        label_dims.push(dim);
        if a.owner == Owner::Boundary && b.owner == Owner::Boundary {
            deltas.push((a, b, dim));
        } else {
            port_label.insert(a, k);
            port_label.insert(b, k);
        }
    }
    for (a, b, dim) in deltas {
        let la = label_dims.len();
        label_dims.push(dim);
        let lb = label_dims.len();
        label_dims.push(dim);
        port_label.insert(a, la);
        port_label.insert(b, lb);
        let mut data = vec![S::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = S::one();
        }
        nodes.push(Node { labels: vec![la, lb], dims: vec![dim, dim], data });
    }

    let mut box_nodes = Vec::with_capacity(d.boxes().len());
    for b in d.boxes() {
        let t = m.generator_tensor(b.generator)?;
        let sig = d.generator_sig(b);
        let (ncod, ndom) = (sig.cod.len(), sig.dom.len());
        let mut labels = vec![usize::MAX; ncod + ndom];
        for side in [Side::In, Side::Out] {
            let gen_side = if b.variant.adjoint { side.flip() } else { side };
            let n = if gen_side == Side::Out { ncod } else { ndom };
            for i in 0..n {
                let gi = if b.variant.conjugate { n - 1 - i } else { i };
                let axis = if gen_side == Side::Out { gi } else { ncod + gi };
                labels[axis] = port_label[&Port::of_box(b.id, side, i)];
            }
        }
        let data = if b.variant.adjoint != b.variant.conjugate {
            t.data().iter().map(|x| x.conj()).collect()
        } else {
            t.data().to_vec()
        };
        box_nodes.push(Node { labels, dims: t.shape().to_vec(), data }.trace_repeated());
    }
    nodes.splice(0..0, box_nodes);

    let dim_of = |l: usize| label_dims[l];
    let mut result = match order {
        ContractionOrder::Greedy => contract_greedy(nodes, &dim_of),
        ContractionOrder::LeftToRight => nodes.into_iter().reduce(|acc, n| acc.contract(&n)),
    }
    .unwrap_or(Node { labels: vec![], dims: vec![], data: vec![S::one()] });

    for (ty, &count) in d.loops() {
        let factor = S::from_count(m.dim(ty)?);
        for _ in 0..count {
            result.data.iter_mut().for_each(|x| *x = x.mul(factor));
        }
    }

    let boundary: Vec<usize> = (0..d.cod().len())
        .map(|i| port_label[&Port::boundary(Side::Out, i)])
        .chain((0..d.dom().len()).map(|i| port_label[&Port::boundary(Side::In, i)]))
        .collect();
    let data = result.permuted(&boundary);
    Ok(Tensor::operator(&m.dims_of(d.cod())?, &m.dims_of(d.dom())?, data))
}

/// Result size, smallest shared label, then the two node positions.
type Cost = (usize, usize, usize, usize);

fn contract_greedy<S: Scalar>(mut nodes: Vec<Node<S>>, dim_of: &impl Fn(usize) -> usize) -> Option<Node<S>> {
    loop {
        let mut best: Option<(Cost, usize, usize)> = None;
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                let shared: Vec<usize> =
                    nodes[i].labels.iter().copied().filter(|l| nodes[j].labels.contains(l)).collect();
                let Some(&min_label) = shared.iter().min() else { continue };
                let result_labels: Vec<usize> =
                    nodes[i].labels.iter().chain(&nodes[j].labels).copied().filter(|l| !shared.contains(l)).collect();
                let key = (Node::<S>::size_of(&result_labels, dim_of), min_label, i, j);
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, i, j));
                }
            }
        }
        match best {
            Some((_, i, j)) => {
                let b = nodes.remove(j);
                let a = nodes.remove(i);
                nodes.insert(i, a.contract(&b));
            }
            None => break,
        }
    }
    nodes.into_iter().reduce(|acc, n| acc.contract(&n))
}
