//! JSON diagram files, schema `procflow/v1`.
//!
//! ```json
//! {
//!   "schema": "procflow/v1",
//!   "theory": {
//!     "types": ["A"],
//!     "generators": [{ "name": "f", "dom": ["A"], "cod": ["A"] }]
//!   },
//!   "diagram": { "op": "compose", "args": [{ "op": "cap", "type": "A" }, { "op": "cup", "type": "A" }] },
//!   "diagrams": { "other": { "op": "id", "types": ["A"] } },
//!   "model": {
//!     "semiring": "complex",
//!     "dims": { "A": 2 },
//!     "tensors": { "f": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]] }
//!   }
//! }
//! ```
//!
//! Tensors are nested arrays shaped `cod ++ dom`; complex entries are
//! `[re, im]` pairs (a bare number is read as real), boolean entries are
//! `true`/`false` or `0`/`1`.

mod expr;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use thiserror::Error;

use crate::diagram::Diagram;
use crate::doubling::QDiagram;
use crate::tensor::{Model, Scalar};
use crate::theory::Theory;

pub use expr::{graph_expr, quantum_expr, BuildError, Expr, GraphBox, Value};

pub const SCHEMA: &str = "procflow/v1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("type error at {0}")]
    Type(BuildError),
    #[error("theory error: {0}")]
    Theory(String),
    #[error("model error: {0}")]
    Model(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGenerator {
    pub name: String,
    #[serde(default)]
    pub dom: Vec<String>,
    #[serde(default)]
    pub cod: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTheory {
    pub types: Vec<String>,
    #[serde(default)]
    pub generators: Vec<RawGenerator>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semiring {
    Complex,
    Boolean,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    pub semiring: Semiring,
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub tensors: BTreeMap<String, Json>,
}

/// The document as written on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub schema: String,
    pub theory: RawTheory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<Expr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagrams: BTreeMap<String, Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<RawModel>,
}

#[derive(Clone, Debug)]
pub enum AnyModel {
    Complex(Model<Complex64>),
    Boolean(Model<bool>),
}

/// A parsed and type-checked document.
#[derive(Clone, Debug)]
pub struct Document {
    pub raw: RawDocument,
    pub theory: Arc<Theory>,
}

fn json_error(e: serde_json::Error) -> FormatError {
    FormatError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

pub fn theory_from_raw(raw: &RawTheory) -> Result<Arc<Theory>, FormatError> {
    let mut b = Theory::builder();
    for t in &raw.types {
        b = b.atomic(t);
    }
    for g in &raw.generators {
        let dom: Vec<&str> = g.dom.iter().map(String::as_str).collect();
        let cod: Vec<&str> = g.cod.iter().map(String::as_str).collect();
        b = b.generator(&g.name, &dom, &cod);
    }
    b.build().map_err(|e| FormatError::Theory(e.to_string()))
}

pub fn theory_to_raw(t: &Theory) -> RawTheory {
    RawTheory {
        types: t.types().iter().map(|x| x.name().to_string()).collect(),
        generators: t
            .generators()
            .iter()
            .map(|g| RawGenerator {
                name: g.name.clone(),
                dom: g.dom.iter().map(|x| x.name().to_string()).collect(),
                cod: g.cod.iter().map(|x| x.name().to_string()).collect(),
            })
            .collect(),
    }
}

impl Document {
    /// Parses the JSON text, checks the schema tag and type-checks every
    /// expression.
    pub fn parse(text: &str) -> Result<Document, FormatError> {
        let raw: RawDocument = serde_json::from_str(text).map_err(json_error)?;
        if raw.schema != SCHEMA {
            return Err(FormatError::Parse {
                line: 1,
                column: 1,
                message: format!("unsupported schema `{}`, expected `{SCHEMA}`", raw.schema),
            });
        }
        let theory = theory_from_raw(&raw.theory)?;
        let doc = Document { raw, theory };
        if let Some(e) = &doc.raw.diagram {
            doc.build(e)?;
        }
        for name in doc.raw.diagrams.keys() {
            doc.named(name)?;
        }
        Ok(doc)
    }

    pub fn new(theory: &Arc<Theory>) -> Document {
        Document {
            raw: RawDocument {
                schema: SCHEMA.to_string(),
                theory: theory_to_raw(theory),
                diagram: None,
                diagrams: BTreeMap::new(),
                model: None,
            },
            theory: theory.clone(),
        }
    }

    pub fn with_diagram(mut self, d: &Diagram) -> Document {
        self.raw.diagram = Some(graph_expr(d));
        self
    }

    pub fn with_quantum(mut self, q: &QDiagram) -> Document {
        self.raw.diagram = Some(quantum_expr(q));
        self
    }

    pub fn with_named(mut self, name: &str, e: Expr) -> Document {
        self.raw.diagrams.insert(name.to_string(), e);
        self
    }

    pub fn with_complex_model(mut self, m: &Model<Complex64>) -> Document {
        self.raw.model = Some(model_to_raw(m, Semiring::Complex, |z| Json::from(vec![z.re, z.im])));
        self
    }

    pub fn with_boolean_model(mut self, m: &Model<bool>) -> Document {
        self.raw.model = Some(model_to_raw(m, Semiring::Boolean, Json::from));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.raw).expect("serializable")
    }

    pub fn build(&self, e: &Expr) -> Result<Value, FormatError> {
        let mut b = expr::Builder { theory: &self.theory, named: &self.raw.diagrams, stack: Vec::new() };
        b.build("diagram", e).map_err(FormatError::Type)
    }

    /// The main `diagram` entry.
    pub fn diagram(&self) -> Result<Value, FormatError> {
        match &self.raw.diagram {
            Some(e) => self.build(e),
            None => {
                Err(FormatError::Type(BuildError { path: "diagram".into(), message: "document has no diagram".into() }))
            }
        }
    }

    pub fn named(&self, name: &str) -> Result<Value, FormatError> {
        self.build(&Expr::Ref { name: name.to_string() })
    }

    pub fn model(&self) -> Result<Option<AnyModel>, FormatError> {
        let Some(raw) = &self.raw.model else { return Ok(None) };
        Ok(Some(match raw.semiring {
            Semiring::Complex => AnyModel::Complex(model_from_raw(&self.theory, raw, complex_leaf)?),
            Semiring::Boolean => AnyModel::Boolean(model_from_raw(&self.theory, raw, bool_leaf)?),
        }))
    }
}

fn complex_leaf(v: &Json) -> Option<Complex64> {
    match v {
        Json::Number(n) => Some(Complex64::new(n.as_f64()?, 0.0)),
        Json::Array(a) if a.len() == 2 => Some(Complex64::new(a[0].as_f64()?, a[1].as_f64()?)),
        _ => None,
    }
}

fn bool_leaf(v: &Json) -> Option<bool> {
    match v {
        Json::Bool(b) => Some(*b),
        Json::Number(n) => match n.as_u64()? {
            0 => Some(false),
            1 => Some(true),
            _ => None,
        },
        _ => None,
    }
}

fn flatten<S>(v: &Json, shape: &[usize], leaf: &impl Fn(&Json) -> Option<S>, out: &mut Vec<S>) -> Result<(), String> {
    match shape.split_first() {
        None => {
            out.push(leaf(v).ok_or_else(|| format!("bad entry {v}"))?);
            Ok(())
        }
        Some((&n, rest)) => {
            let arr = v.as_array().ok_or_else(|| format!("expected an array of length {n}, found {v}"))?;
            if arr.len() != n {
                return Err(format!("expected an array of length {n}, found length {}", arr.len()));
            }
            arr.iter().try_for_each(|x| flatten(x, rest, leaf, out))
        }
    }
}

fn nest<S: Copy>(data: &[S], shape: &[usize], leaf: &impl Fn(S) -> Json) -> Json {
    match shape.split_first() {
        None => leaf(data[0]),
        Some((&n, rest)) => {
            let stride = data.len() / n.max(1);
            Json::Array((0..n).map(|i| nest(&data[i * stride..(i + 1) * stride], rest, leaf)).collect())
        }
    }
}

fn model_from_raw<S: Scalar>(
    theory: &Arc<Theory>,
    raw: &RawModel,
    leaf: impl Fn(&Json) -> Option<S>,
) -> Result<Model<S>, FormatError> {
    let merr = |e: &dyn std::fmt::Display| FormatError::Model(e.to_string());
    let mut m = Model::new(theory, raw.dims.iter().map(|(k, &v)| (k.as_str(), v))).map_err(|e| merr(&e))?;
    for (name, v) in &raw.tensors {
        let id = theory.generator_id(name).map_err(|e| merr(&e))?;
        let sig = theory.generator(id);
        let shape = m.dims_of(&sig.cod).and_then(|c| Ok([c, m.dims_of(&sig.dom)?].concat())).map_err(|e| merr(&e))?;
        let mut data = Vec::new();
        flatten(v, &shape, &leaf, &mut data).map_err(|e| FormatError::Model(format!("tensor `{name}`: {e}")))?;
        m = m.with_generator(name, data).map_err(|e| merr(&e))?;
    }
    Ok(m)
}

fn model_to_raw<S: Scalar>(m: &Model<S>, semiring: Semiring, leaf: impl Fn(S) -> Json) -> RawModel {
    let t = m.theory();
    let mut tensors = BTreeMap::new();
    for (id, g) in t.generators().iter().enumerate() {
        if let Ok(x) = m.generator_tensor(id) {
            tensors.insert(g.name.clone(), nest(x.data(), x.shape(), &leaf));
        }
    }
    RawModel { semiring, dims: m.dims().iter().map(|(k, &v)| (k.name().to_string(), v)).collect(), tensors }
}
