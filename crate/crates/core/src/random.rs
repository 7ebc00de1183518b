//! Seeded generators for diagrams, unitaries and channels.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::diagram::{compose_par, compose_seq, BoxVariant, Diagram};
use crate::theory::{AtomicType, Theory, TypeList};

/// Three types and a spread of generator shapes, including states, effects
/// and a scalar.
pub fn sample_theory() -> Arc<Theory> {
    Theory::builder()
        .atomic("A")
        .atomic("B")
        .atomic("C")
        .generator("f", &["A"], &["B"])
        .generator("g", &["A", "B"], &["C"])
        .generator("h", &["C"], &["A", "A"])
        .generator("k", &["A"], &["A"])
        .generator("m", &["B", "C"], &["B", "A"])
        .generator("psi", &[], &["A"])
        .generator("pi", &["B"], &[])
        .generator("lam", &[], &[])
        .build()
        .expect("valid theory")
}

/// What a random diagram may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Boxes, identities and swaps only.
    Circuit,
    /// Also cups, caps and boxes with a traced wire.
    Any,
}

const MAX_WIDTH: usize = 6;

pub fn random_variant<R: Rng + ?Sized>(rng: &mut R) -> BoxVariant {
    *[BoxVariant::ORIGINAL, BoxVariant::ADJOINT, BoxVariant::CONJUGATE, BoxVariant::TRANSPOSE]
        .choose(rng)
        .expect("non-empty")
}

pub fn random_types<R: Rng + ?Sized>(rng: &mut R, theory: &Theory, max_len: usize) -> TypeList {
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| theory.types().choose(rng).expect("theory has types").clone()).collect()
}

/// Wraps `piece` as `id(cur[..at]) ⊗ piece ⊗ id(cur[at + consumed..])`.
fn layer(theory: &Arc<Theory>, cur: &[AtomicType], at: usize, consumed: usize, piece: &Diagram) -> Diagram {
    let left = Diagram::identity(theory, &cur[..at]);
    let right = Diagram::identity(theory, &cur[at + consumed..]);
    compose_par(&compose_par(&left, piece).expect("same theory"), &right).expect("same theory")
}

/// A diagram with domain `dom`, grown by stacking `steps` random layers.
pub fn random_diagram_from<R: Rng + ?Sized>(
    rng: &mut R,
    theory: &Arc<Theory>,
    dom: &[AtomicType],
    steps: usize,
    flavor: Flavor,
) -> Diagram {
    let mut d = Diagram::identity(theory, dom);
    let mut done = 0;
    let mut attempts = 0;
    while done < steps && attempts < steps * 20 {
        attempts += 1;
        let cur = d.cod().to_vec();
        let choice = rng.random_range(0..if flavor == Flavor::Any { 10 } else { 7 });
        let next = match choice {
            0..=4 | 9 => {
                let gid = rng.random_range(0..theory.generators().len());
                let variant = random_variant(rng);
                let mut piece = Diagram::generator(theory, &theory.generator(gid).name, variant).expect("declared");
                if choice == 9 {
                    let pairs: Vec<(usize, usize)> = (0..piece.cod().len())
                        .flat_map(|o| (0..piece.dom().len()).map(move |i| (o, i)))
                        .filter(|&(o, i)| piece.cod()[o] == piece.dom()[i])
                        .collect();
                    let Some(&(o, i)) = pairs.choose(rng) else { continue };
                    piece = piece.partial_trace(o, i).expect("matching types");
                }
                let (bdom, bcod) = (piece.dom().to_vec(), piece.cod().to_vec());
                if cur.len() + bcod.len() > MAX_WIDTH + bdom.len() {
                    continue;
                }
                let spots: Vec<usize> = (0..=cur.len().saturating_sub(bdom.len()))
                    .filter(|&i| i + bdom.len() <= cur.len() && cur[i..i + bdom.len()] == bdom[..])
                    .collect();
                let Some(&at) = spots.choose(rng) else { continue };
                layer(theory, &cur, at, bdom.len(), &piece)
            }
            5 | 6 => {
                if cur.len() < 2 {
                    continue;
                }
                let at = rng.random_range(0..cur.len() - 1);
                layer(theory, &cur, at, 2, &Diagram::swap(theory, &cur[at], &cur[at + 1]))
            }
            7 => {
                if cur.len() + 2 > MAX_WIDTH {
                    continue;
                }
                let ty = theory.types().choose(rng).expect("theory has types").clone();
                let at = rng.random_range(0..=cur.len());
                layer(theory, &cur, at, 0, &Diagram::cup(theory, &ty))
            }
            _ => {
                let spots: Vec<usize> = (0..cur.len().saturating_sub(1)).filter(|&i| cur[i] == cur[i + 1]).collect();
                let Some(&at) = spots.choose(rng) else { continue };
                layer(theory, &cur, at, 2, &Diagram::cap(theory, &cur[at]))
            }
        };
        d = compose_seq(&next, &d).expect("layer matches");
        done += 1;
    }
    d
}

/// A diagram on a random domain of up to three wires.
pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, theory: &Arc<Theory>, steps: usize, flavor: Flavor) -> Diagram {
    let dom = random_types(rng, theory, 3);
    random_diagram_from(rng, theory, &dom, steps, flavor)
}

/// Three diagrams `f, g, h` with `h ∘ g ∘ f` defined.
pub fn random_chain<R: Rng + ?Sized>(rng: &mut R, theory: &Arc<Theory>, steps: usize, flavor: Flavor) -> [Diagram; 3] {
    let f = random_diagram(rng, theory, steps, flavor);
    let g = random_diagram_from(rng, theory, f.cod(), steps, flavor);
    let h = random_diagram_from(rng, theory, g.cod(), steps, flavor);
    [f, g, h]
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DMatrix<Complex64> {
    let qr = random_complex_matrix(rng, d, d).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let p = r[(j, j)];
        if p.norm() > 0.0 {
            let phase = p / p.norm();
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// `rows × cols` matrix with orthonormal columns (`rows ≥ cols`).
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    assert!(rows >= cols, "an isometry cannot shrink the space");
    random_unitary(rng, rows).columns(0, cols).into_owned()
}

/// `count` Kraus operators `d_out × d_in` with `Σ K†K = I`, cut from a
/// random isometry `d_in → d_out · count`.
pub fn random_kraus<R: Rng + ?Sized>(rng: &mut R, d_in: usize, d_out: usize, count: usize) -> Vec<DMatrix<Complex64>> {
    assert!(d_out * count >= d_in, "not enough room for a trace-preserving map");
    let v = random_isometry(rng, d_out * count, d_in);
    (0..count).map(|k| v.rows(k * d_out, d_out).into_owned()).collect()
}
