//! Dense tensor semantics for diagrams over an involutive semiring.
//!
//! Complex numbers give finite-dimensional Hilbert spaces; booleans give
//! relations. Cups and caps are fixed to the computational basis:
//! `cup[i][j] = one` iff `i == j`.

mod equiv;
mod model;
mod network;

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use equiv::{max_distance, numeric_equal, prob_equiv, prob_equiv_with_dims, Verdict, PROB_EQUIV_DIMS};
pub use model::{random_model, Model};
pub use network::{evaluate, evaluate_with, ContractionOrder};

/// Scalar operations needed to interpret diagrams.
///
/// `(add, zero)` is a commutative monoid, `(mul, one)` a monoid, `mul`
/// distributes over `add`, and `conj` is an involution compatible with `mul`.
pub trait Scalar: Copy + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;
    fn conj(self) -> Self;
    /// Distance used by approximate comparisons.
    fn distance(self, other: Self) -> f64;

    /// `one + one + ... + one`, `n` times.
    fn from_count(n: usize) -> Self {
        (0..n).fold(Self::zero(), |acc, _| acc.add(Self::one()))
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }
    fn from_count(n: usize) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl Scalar for bool {
    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(self, other: Self) -> Self {
        self || other
    }
    fn mul(self, other: Self) -> Self {
        self && other
    }
    fn conj(self) -> Self {
        self
    }
    fn distance(self, other: Self) -> f64 {
        if self == other {
            0.0
        } else {
            1.0
        }
    }
}

/// What a tensor axis stands for in the evaluated diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxisRole {
    Cod(usize),
    Dom(usize),
}

/// Dense row-major tensor. Operator tensors list their output axes first,
/// then their input axes.
#[derive(Clone, PartialEq)]
pub struct Tensor<S> {
    shape: Vec<usize>,
    data: Vec<S>,
    axes: Vec<AxisRole>,
}

impl<S: Scalar> Tensor<S> {
    /// Operator tensor of shape `cod_dims ++ dom_dims`.
    pub fn operator(cod_dims: &[usize], dom_dims: &[usize], data: Vec<S>) -> Tensor<S> {
        let shape: Vec<usize> = cod_dims.iter().chain(dom_dims).copied().collect();
        assert_eq!(data.len(), shape.iter().product::<usize>(), "entry count must equal the product of the shape");
        let axes = (0..cod_dims.len()).map(AxisRole::Cod).chain((0..dom_dims.len()).map(AxisRole::Dom)).collect();
        Tensor { shape, data, axes }
    }

    pub fn scalar(value: S) -> Tensor<S> {
        Tensor { shape: vec![], data: vec![value], axes: vec![] }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn axes(&self) -> &[AxisRole] {
        &self.axes
    }

    pub fn is_scalar(&self) -> bool {
        self.shape.is_empty()
    }

    pub fn cod_dims(&self) -> Vec<usize> {
        self.axes.iter().zip(&self.shape).filter(|(a, _)| matches!(a, AxisRole::Cod(_))).map(|(_, &d)| d).collect()
    }

    pub fn dom_dims(&self) -> Vec<usize> {
        self.axes.iter().zip(&self.shape).filter(|(a, _)| matches!(a, AxisRole::Dom(_))).map(|(_, &d)| d).collect()
    }

    pub fn get(&self, index: &[usize]) -> S {
        assert_eq!(index.len(), self.shape.len());
        let mut off = 0;
        for (i, (&x, &d)) in index.iter().zip(&self.shape).enumerate() {
            assert!(x < d, "index {x} out of bounds for axis {i} of size {d}");
            off = off * d + x;
        }
        self.data[off]
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Tensor<S> {
        Tensor { data: self.data.iter().map(|&x| f(x)).collect(), ..self.clone() }
    }

    /// Conjugate transpose: swaps the output and input axis groups and
    /// conjugates every entry.
    pub fn adjoint(&self) -> Tensor<S> {
        let cod = self.cod_dims();
        let dom = self.dom_dims();
        let rows: usize = cod.iter().product();
        let cols: usize = dom.iter().product();
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..cols {
            for r in 0..rows {
                data.push(self.data[r * cols + c].conj());
            }
        }
        Tensor::operator(&dom, &cod, data)
    }

    /// Entry `[r][c]` of the matrix view (rows = outputs, columns = inputs).
    pub fn matrix_entry(&self, r: usize, c: usize) -> S {
        let cols: usize = self.dom_dims().iter().product();
        self.data[r * cols + c]
    }
}

impl Tensor<Complex64> {
    /// Matrix view: rows indexed by the outputs, columns by the inputs.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let rows: usize = self.cod_dims().iter().product();
        let cols: usize = self.dom_dims().iter().product();
        DMatrix::from_row_slice(rows, cols, &self.data)
    }

    pub fn from_matrix(cod_dims: &[usize], dom_dims: &[usize], m: &DMatrix<Complex64>) -> Tensor<Complex64> {
        assert_eq!(m.nrows(), cod_dims.iter().product::<usize>());
        assert_eq!(m.ncols(), dom_dims.iter().product::<usize>());
        let data = (0..m.nrows()).flat_map(|r| (0..m.ncols()).map(move |c| m[(r, c)])).collect();
        Tensor::operator(cod_dims, dom_dims, data)
    }
}

impl<S: fmt::Debug> fmt::Debug for Tensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tensor").field("shape", &self.shape).field("data", &self.data).finish()
    }
}
