//! Process-theory signatures: atomic wire types and generator boxes.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::DiagramError;

/// A named system type. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicType(Arc<str>);

impl AtomicType {
    pub fn new(name: &str) -> Self {
        AtomicType(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for AtomicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for AtomicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered list of atomic types. The empty list is the unit type.
pub type TypeList = Vec<AtomicType>;

/// Signature of a generator box `name: dom -> cod`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSig {
    pub name: String,
    pub dom: TypeList,
    pub cod: TypeList,
}

/// The vocabulary diagrams are built from.
///
/// Theories are shared behind an [`Arc`]; two diagrams can only be combined
/// when their theories compare equal.
#[derive(Clone, Debug)]
pub struct Theory {
    types: Vec<AtomicType>,
    generators: Vec<GeneratorSig>,
    type_index: HashMap<AtomicType, usize>,
    generator_index: HashMap<String, usize>,
}

impl PartialEq for Theory {
    fn eq(&self, other: &Self) -> bool {
        self.types == other.types && self.generators == other.generators
    }
}

impl Eq for Theory {}

impl Theory {
    pub fn builder() -> TheoryBuilder {
        TheoryBuilder::default()
    }

    pub fn types(&self) -> &[AtomicType] {
        &self.types
    }

    pub fn generators(&self) -> &[GeneratorSig] {
        &self.generators
    }

    pub fn atomic(&self, name: &str) -> Result<AtomicType, DiagramError> {
        let key = AtomicType::new(name);
        self.type_index
            .get(&key)
            .map(|&i| self.types[i].clone())
            .ok_or_else(|| DiagramError::UnknownType(name.to_string()))
    }

    pub fn has_type(&self, ty: &AtomicType) -> bool {
        self.type_index.contains_key(ty)
    }

    pub fn type_position(&self, ty: &AtomicType) -> Option<usize> {
        self.type_index.get(ty).copied()
    }

    pub fn generator_id(&self, name: &str) -> Result<usize, DiagramError> {
        self.generator_index.get(name).copied().ok_or_else(|| DiagramError::UnknownGenerator(name.to_string()))
    }

    pub fn generator(&self, id: usize) -> &GeneratorSig {
        &self.generators[id]
    }

    /// Parses a list of type names against this theory.
    pub fn type_list(&self, names: &[&str]) -> Result<TypeList, DiagramError> {
        names.iter().map(|n| self.atomic(n)).collect()
    }
}

/// Incremental construction of a [`Theory`]; validation happens in [`build`](Self::build).
#[derive(Default, Debug)]
pub struct TheoryBuilder {
    types: Vec<String>,
    generators: Vec<(String, Vec<String>, Vec<String>)>,
}

impl TheoryBuilder {
    pub fn atomic(mut self, name: &str) -> Self {
        self.types.push(name.to_string());
        self
    }

    pub fn generator(mut self, name: &str, dom: &[&str], cod: &[&str]) -> Self {
        self.generators.push((
            name.to_string(),
            dom.iter().map(|s| s.to_string()).collect(),
            cod.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<Arc<Theory>, DiagramError> {
        let mut types = Vec::new();
        let mut type_index = HashMap::new();
        for name in &self.types {
            if !is_identifier(name) {
                return Err(DiagramError::InvalidName(name.clone()));
            }
            let ty = AtomicType::new(name);
            if type_index.insert(ty.clone(), types.len()).is_some() {
                return Err(DiagramError::DuplicateType(name.clone()));
            }
            types.push(ty);
        }

        let lookup = |n: &String| -> Result<AtomicType, DiagramError> {
            let ty = AtomicType::new(n);
            type_index.get(&ty).map(|&i| types[i].clone()).ok_or_else(|| DiagramError::UnknownType(n.clone()))
        };

        let mut generators = Vec::new();
        let mut generator_index = HashMap::new();
        for (name, dom, cod) in &self.generators {
            if !is_identifier(name) {
                return Err(DiagramError::InvalidName(name.clone()));
            }
            let sig = GeneratorSig {
                name: name.clone(),
                dom: dom.iter().map(&lookup).collect::<Result<_, _>>()?,
                cod: cod.iter().map(&lookup).collect::<Result<_, _>>()?,
            };
            if generator_index.insert(name.clone(), generators.len()).is_some() {
                return Err(DiagramError::DuplicateGenerator(name.clone()));
            }
            generators.push(sig);
        }

        Ok(Arc::new(Theory { types, generators, type_index, generator_index }))
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '\'')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_looks_up() {
        let t = Theory::builder().atomic("A").atomic("B").generator("f", &["A"], &["B"]).build().unwrap();
        assert_eq!(t.types().len(), 2);
        let f = t.generator(t.generator_id("f").unwrap());
        assert_eq!(f.dom, vec![AtomicType::new("A")]);
        assert_eq!(f.cod, vec![AtomicType::new("B")]);
    }

    #[test]
    fn rejects_bad_signatures() {
        let dup = Theory::builder().atomic("A").atomic("A").build();
        assert!(matches!(dup, Err(DiagramError::DuplicateType(_))));
        let unknown = Theory::builder().atomic("A").generator("f", &["C"], &[]).build();
        assert!(matches!(unknown, Err(DiagramError::UnknownType(_))));
        let dup_gen = Theory::builder().atomic("A").generator("f", &[], &[]).generator("f", &["A"], &[]).build();
        assert!(matches!(dup_gen, Err(DiagramError::DuplicateGenerator(_))));
        assert!(matches!(Theory::builder().atomic("").build(), Err(DiagramError::InvalidName(_))));
    }
}
