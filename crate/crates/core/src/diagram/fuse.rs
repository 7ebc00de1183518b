use super::{Port, Wire};
use crate::theory::AtomicType;

/// Endpoint of a wire fragment before fusion. `Glue(k)` ports disappear:
/// each must occur exactly twice, and the two fragments meeting there are
/// joined into one wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RawPort {
    Kept(Port),
    Glue(usize),
}

/// A closed circle produced by fusion, with the glue points it passes through.
#[derive(Clone, Debug)]
pub(crate) struct FusedLoop {
    pub ty: AtomicType,
    pub glue: Vec<usize>,
}

/// Joins wire fragments through their glue points. `glue_types[k]` is the
/// type carried through glue point `k`.
pub(crate) fn fuse(fragments: &[[RawPort; 2]], glue_types: &[AtomicType]) -> (Vec<Wire>, Vec<FusedLoop>) {
    let mut incidence: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(2); glue_types.len()];
    for (w, ends) in fragments.iter().enumerate() {
        for (e, p) in ends.iter().enumerate() {
            if let RawPort::Glue(k) = p {
                incidence[*k].push((w, e));
            }
        }
    }
    debug_assert!(incidence.iter().all(|v| v.len() == 2), "glue point without exactly two fragments");

    // Given that we arrive at glue point `k` via fragment end (w, e), the
    // fragment end on the far side of the glue point.
    let across = |k: usize, w: usize, e: usize| -> (usize, usize) {
        let inc = &incidence[k];
        if inc[0] == (w, e) {
            inc[1]
        } else {
            inc[0]
        }
    };

    let mut visited = vec![false; fragments.len()];
    let mut wires = Vec::new();
    for start in 0..fragments.len() {
        if visited[start] {
            continue;
        }
        let Some(origin_end) = fragments[start].iter().position(|p| matches!(p, RawPort::Kept(_))) else {
            continue;
        };
        let RawPort::Kept(origin) = fragments[start][origin_end] else { unreachable!() };
        let (mut w, mut e) = (start, 1 - origin_end);
        loop {
            visited[w] = true;
            match fragments[w][e] {
                RawPort::Kept(p) => {
                    wires.push(Wire::new(origin, p));
                    break;
                }
                RawPort::Glue(k) => {
                    let (nw, ne) = across(k, w, e);
                    w = nw;
                    e = 1 - ne;
                }
            }
        }
    }

    let mut loops = Vec::new();
    for start in 0..fragments.len() {
        if visited[start] {
            continue;
        }
        let RawPort::Glue(k0) = fragments[start][0] else { unreachable!("kept ends were walked above") };
        let mut glue = Vec::new();
        let (mut w, mut e) = (start, 1);
        loop {
            visited[w] = true;
            let RawPort::Glue(k) = fragments[w][e] else { unreachable!() };
            glue.push(k);
            let (nw, ne) = across(k, w, e);
            if (nw, ne) == (start, 0) {
                break;
            }
            w = nw;
            e = 1 - ne;
        }
        loops.push(FusedLoop { ty: glue_types[k0].clone(), glue });
    }
    (wires, loops)
}
