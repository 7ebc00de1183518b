use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Scalar, Tensor};
use crate::error::EvalError;
use crate::theory::{AtomicType, Theory};

/// An interpretation of a theory: a dimension per type and a tensor per
/// generator. Variant tensors (adjoint, conjugate, transpose) are derived at
/// evaluation time and never stored.
#[derive(Clone, Debug)]
pub struct Model<S> {
    theory: Arc<Theory>,
    dims: BTreeMap<AtomicType, usize>,
    gens: Vec<Option<Tensor<S>>>,
}

impl<S: Scalar> Model<S> {
    /// A model with the given dimensions and no generator tensors yet.
    pub fn new<'a>(
        theory: &Arc<Theory>,
        dims: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Model<S>, EvalError> {
        let mut map = BTreeMap::new();
        for (name, d) in dims {
            let ty = theory.atomic(name)?;
            if d == 0 {
                return Err(EvalError::ZeroDim(name.to_string()));
            }
            map.insert(ty, d);
        }
        Ok(Model { theory: theory.clone(), dims: map, gens: vec![None; theory.generators().len()] })
    }

    /// Sets the tensor of generator `name`, given row-major with output axes
    /// first.
    pub fn with_generator(mut self, name: &str, data: Vec<S>) -> Result<Model<S>, EvalError> {
        let id = self.theory.generator_id(name)?;
        let sig = self.theory.generator(id);
        let cod = self.dims_of(&sig.cod)?;
        let dom = self.dims_of(&sig.dom)?;
        let expected: usize = cod.iter().chain(&dom).product();
        if data.len() != expected {
            return Err(EvalError::ShapeMismatch { name: name.to_string(), expected, found: data.len() });
        }
        self.gens[id] = Some(Tensor::operator(&cod, &dom, data));
        Ok(self)
    }

    pub fn theory(&self) -> &Arc<Theory> {
        &self.theory
    }

    pub fn dims(&self) -> &BTreeMap<AtomicType, usize> {
        &self.dims
    }

    pub fn dim(&self, ty: &AtomicType) -> Result<usize, EvalError> {
        self.dims.get(ty).copied().ok_or_else(|| EvalError::MissingDim(ty.to_string()))
    }

    pub fn dims_of(&self, types: &[AtomicType]) -> Result<Vec<usize>, EvalError> {
        types.iter().map(|t| self.dim(t)).collect()
    }

    pub fn generator_tensor(&self, id: usize) -> Result<&Tensor<S>, EvalError> {
        self.gens[id].as_ref().ok_or_else(|| EvalError::MissingGenerator(self.theory.generator(id).name.clone()))
    }

    pub fn generator_tensor_by_name(&self, name: &str) -> Result<&Tensor<S>, EvalError> {
        self.generator_tensor(self.theory.generator_id(name)?)
    }

    /// Checks that every generator has a tensor.
    pub fn is_complete(&self) -> bool {
        self.gens.iter().all(Option::is_some)
    }
}

/// Draws a complex model: dimensions uniform in `dims`, entries with
/// independent standard-normal real and imaginary parts. Bit-exact for a
/// given seed.
pub fn random_model(
    theory: &Arc<Theory>,
    dims: RangeInclusive<usize>,
    seed: u64,
) -> Result<Model<Complex64>, EvalError> {
    let (lo, hi) = (*dims.start(), *dims.end());
    if lo == 0 || lo > hi {
        return Err(EvalError::EmptyRange { lo, hi });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model =
        Model { theory: theory.clone(), dims: BTreeMap::new(), gens: vec![None; theory.generators().len()] };
    for ty in theory.types() {
        model.dims.insert(ty.clone(), rng.random_range(lo..=hi));
    }
    for (id, sig) in theory.generators().iter().enumerate() {
        let cod = model.dims_of(&sig.cod)?;
        let dom = model.dims_of(&sig.dom)?;
        let n: usize = cod.iter().chain(&dom).product();
        let data = (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        model.gens[id] = Some(Tensor::operator(&cod, &dom, data));
    }
    Ok(model)
}
