use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagram::{compose_par, compose_seq, BoxVariant, Diagram, Owner, Port, Side};
use crate::doubling::{
    discard_all, double, purify, q_compose_par, q_compose_seq, q_conjugate, q_dagger, q_transpose, unpurify, QDiagram,
};
use crate::error::DiagramError;
use crate::theory::{AtomicType, Theory, TypeList};

/// Expression tree of a diagram file. `compose` lists its arguments in
/// mathematical order: `[g, f]` is `g ∘ f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Expr {
    #[serde(rename = "box")]
    Gen {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        variant: Option<String>,
    },
    Id {
        types: Vec<String>,
    },
    Swap {
        left: Vec<String>,
        right: Vec<String>,
    },
    Cup {
        #[serde(rename = "type")]
        ty: String,
    },
    Cap {
        #[serde(rename = "type")]
        ty: String,
    },
    Compose {
        args: Vec<Expr>,
    },
    Tensor {
        args: Vec<Expr>,
    },
    Dagger {
        arg: Box<Expr>,
    },
    Transpose {
        arg: Box<Expr>,
    },
    Conjugate {
        arg: Box<Expr>,
    },
    /// Feeds output `out` into input `in`; without indices, traces every
    /// output against the matching input.
    Trace {
        arg: Box<Expr>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        out: Option<usize>,
        #[serde(default, rename = "in", skip_serializing_if = "Option::is_none")]
        inp: Option<usize>,
    },
    Double {
        arg: Box<Expr>,
    },
    Discard {
        types: Vec<String>,
    },
    /// `double(arg)` with its first `env` outputs discarded.
    Purification {
        env: usize,
        arg: Box<Expr>,
    },
    /// Another entry of the document's `diagrams` map.
    Ref {
        name: String,
    },
    /// An explicit port graph. Ports are written `in:i` / `out:i` for the
    /// boundary and `b.in:i` / `b.out:i` for box `b`.
    Graph {
        dom: Vec<String>,
        cod: Vec<String>,
        boxes: Vec<GraphBox>,
        wires: Vec<[String; 2]>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        loops: BTreeMap<String, usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphBox {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

/// A built expression: a plain diagram or a doubled one.
#[derive(Clone, Debug)]
pub enum Value {
    Classical(Diagram),
    Quantum(QDiagram),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Classical(_) => "diagram",
            Value::Quantum(_) => "quantum diagram",
        }
    }
}

/// Failure to build an expression, with the path to the offending node.
#[derive(Clone, Debug, PartialEq)]
pub struct BuildError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for BuildError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

pub(crate) struct Builder<'a> {
    pub theory: &'a Arc<Theory>,
    pub named: &'a BTreeMap<String, Expr>,
    pub stack: Vec<String>,
}

fn parse_port(s: &str) -> Option<Port> {
    let side = |x: &str| match x {
        "in" => Some(Side::In),
        "out" => Some(Side::Out),
        _ => None,
    };
    let (head, index) = s.split_once(':')?;
    let index: usize = index.parse().ok()?;
    match head.split_once('.') {
        None => Some(Port::boundary(side(head)?, index)),
        Some((b, sd)) => Some(Port::of_box(b.parse().ok()?, side(sd)?, index)),
    }
}

pub(crate) fn port_string(p: Port) -> String {
    let side = match p.side {
        Side::In => "in",
        Side::Out => "out",
    };
    match p.owner {
        Owner::Boundary => format!("{side}:{}", p.index),
        Owner::Box(b) => format!("{b}.{side}:{}", p.index),
    }
}

impl Builder<'_> {
    fn err<T>(&self, path: &str, message: impl ToString) -> Result<T, BuildError> {
        Err(BuildError { path: path.to_string(), message: message.to_string() })
    }

    fn types(&self, path: &str, names: &[String]) -> Result<TypeList, BuildError> {
        names.iter().map(|n| self.theory.atomic(n).or_else(|e| self.err(path, e))).collect()
    }

    fn ty(&self, path: &str, name: &str) -> Result<AtomicType, BuildError> {
        self.theory.atomic(name).or_else(|e| self.err(path, e))
    }

    fn variant(&self, path: &str, v: &Option<String>) -> Result<BoxVariant, BuildError> {
        match v {
            None => Ok(BoxVariant::ORIGINAL),
            Some(s) => BoxVariant::from_name(s).map_or_else(|| self.err(path, format!("unknown variant `{s}`")), Ok),
        }
    }

    fn classical(&mut self, path: &str, e: &Expr) -> Result<Diagram, BuildError> {
        match self.build(path, e)? {
            Value::Classical(d) => Ok(d),
            Value::Quantum(_) => self.err(path, "expected a diagram, found a quantum diagram"),
        }
    }

    pub fn build(&mut self, path: &str, e: &Expr) -> Result<Value, BuildError> {
        let t = self.theory;
        let lift = |r: Result<Diagram, DiagramError>| r.map(Value::Classical);
        let res: Result<Value, DiagramError> = match e {
            Expr::Gen { name, variant } => {
                let v = self.variant(path, variant)?;
                lift(Diagram::generator(t, name, v))
            }
            Expr::Id { types } => Ok(Value::Classical(Diagram::identity(t, &self.types(path, types)?))),
            Expr::Swap { left, right } => {
                Ok(Value::Classical(Diagram::swap_lists(t, &self.types(path, left)?, &self.types(path, right)?)))
            }
            Expr::Cup { ty } => Ok(Value::Classical(Diagram::cup(t, &self.ty(path, ty)?))),
            Expr::Cap { ty } => Ok(Value::Classical(Diagram::cap(t, &self.ty(path, ty)?))),
            Expr::Compose { args } | Expr::Tensor { args } => {
                let seq = matches!(e, Expr::Compose { .. });
                let op = if seq { "compose" } else { "tensor" };
                if args.is_empty() {
                    return self.err(path, format!("{op} needs at least one argument"));
                }
                let mut vals = Vec::with_capacity(args.len());
                for (i, a) in args.iter().enumerate() {
                    vals.push(self.build(&format!("{path}.{op}[{i}]"), a)?);
                }
                // compose folds right to left, tensor left to right
                if seq {
                    vals.reverse();
                }
                let mut acc = vals.remove(0);
                for (i, v) in vals.into_iter().enumerate() {
                    let idx = if seq { args.len() - 2 - i } else { i + 1 };
                    let sub = format!("{path}.{op}[{idx}]");
                    acc = match (acc, v, seq) {
                        (Value::Classical(a), Value::Classical(b), true) => {
                            Value::Classical(compose_seq(&b, &a).or_else(|e| self.err(&sub, e))?)
                        }
                        (Value::Classical(a), Value::Classical(b), false) => {
                            Value::Classical(compose_par(&a, &b).or_else(|e| self.err(&sub, e))?)
                        }
                        (Value::Quantum(a), Value::Quantum(b), true) => {
                            Value::Quantum(q_compose_seq(&b, &a).or_else(|e| self.err(&sub, e))?)
                        }
                        (Value::Quantum(a), Value::Quantum(b), false) => {
                            Value::Quantum(q_compose_par(&a, &b).or_else(|e| self.err(&sub, e))?)
                        }
                        (a, b, _) => {
                            return self.err(&sub, format!("cannot combine a {} with a {}", a.kind(), b.kind()));
                        }
                    };
                }
                Ok(acc)
            }
            Expr::Dagger { arg } | Expr::Transpose { arg } | Expr::Conjugate { arg } => {
                let name = match e {
                    Expr::Dagger { .. } => "dagger",
                    Expr::Transpose { .. } => "transpose",
                    _ => "conjugate",
                };
                let v = self.build(&format!("{path}.{name}"), arg)?;
                Ok(match (v, e) {
                    (Value::Classical(d), Expr::Dagger { .. }) => Value::Classical(d.dagger()),
                    (Value::Classical(d), Expr::Transpose { .. }) => Value::Classical(d.transpose()),
                    (Value::Classical(d), _) => Value::Classical(d.conjugate()),
                    (Value::Quantum(q), Expr::Dagger { .. }) => Value::Quantum(q_dagger(&q)),
                    (Value::Quantum(q), Expr::Transpose { .. }) => Value::Quantum(q_transpose(&q)),
                    (Value::Quantum(q), _) => Value::Quantum(q_conjugate(&q)),
                })
            }
            Expr::Trace { arg, out, inp } => {
                let d = self.classical(&format!("{path}.trace"), arg)?;
                match (out, inp) {
                    (Some(o), Some(i)) => lift(d.partial_trace(*o, *i)),
                    (None, None) => lift(d.trace()),
                    _ => return self.err(path, "trace takes both `out` and `in`, or neither"),
                }
            }
            Expr::Double { arg } => Ok(Value::Quantum(double(&self.classical(&format!("{path}.double"), arg)?))),
            Expr::Discard { types } => Ok(Value::Quantum(discard_all(t, &self.types(path, types)?))),
            Expr::Purification { env, arg } => {
                let g = self.classical(&format!("{path}.purification"), arg)?;
                unpurify(&g, *env).map(Value::Quantum)
            }
            Expr::Ref { name } => {
                if self.stack.contains(name) {
                    return self.err(path, format!("`{name}` refers to itself"));
                }
                let Some(target) = self.named.get(name) else {
                    return self.err(path, format!("no diagram named `{name}`"));
                };
                self.stack.push(name.clone());
                let v = self.build(&format!("{path}.ref({name})"), target);
                self.stack.pop();
                return v;
            }
            Expr::Graph { dom, cod, boxes, wires, loops } => {
                let mut bs = Vec::with_capacity(boxes.len());
                for (i, b) in boxes.iter().enumerate() {
                    let sub = format!("{path}.boxes[{i}]");
                    let g = t.generator_id(&b.name).or_else(|e| self.err(&sub, e))?;
                    bs.push((g, self.variant(&sub, &b.variant)?));
                }
                let mut ws = Vec::with_capacity(wires.len());
                for (i, [a, b]) in wires.iter().enumerate() {
                    let sub = format!("{path}.wires[{i}]");
                    let pa = parse_port(a).map_or_else(|| self.err(&sub, format!("bad port `{a}`")), Ok)?;
                    let pb = parse_port(b).map_or_else(|| self.err(&sub, format!("bad port `{b}`")), Ok)?;
                    ws.push((pa, pb));
                }
                let mut ls = BTreeMap::new();
                for (n, &c) in loops {
                    ls.insert(self.ty(path, n)?, c);
                }
                lift(Diagram::from_parts(t.clone(), bs, ws, self.types(path, dom)?, self.types(path, cod)?, ls))
            }
        };
        res.or_else(|e| self.err(path, e))
    }
}

fn names(types: &[AtomicType]) -> Vec<String> {
    types.iter().map(|t| t.name().to_string()).collect()
}

/// The port graph of `d` as an expression.
pub fn graph_expr(d: &Diagram) -> Expr {
    Expr::Graph {
        dom: names(d.dom()),
        cod: names(d.cod()),
        boxes: d
            .boxes()
            .iter()
            .map(|b| GraphBox {
                name: d.generator_sig(b).name.clone(),
                variant: (b.variant != BoxVariant::ORIGINAL).then(|| b.variant.name().to_string()),
            })
            .collect(),
        wires: d.wires().iter().map(|w| w.ends().map(port_string)).collect(),
        loops: d.loops().iter().map(|(t, &n)| (t.name().to_string(), n)).collect(),
    }
}

/// A doubled diagram as the purification of its port graph.
pub fn quantum_expr(q: &QDiagram) -> Expr {
    let (g, env) = purify(q);
    if env.is_empty() {
        Expr::Double { arg: Box::new(graph_expr(&g)) }
    } else {
        Expr::Purification { env: env.len(), arg: Box::new(graph_expr(&g)) }
    }
}
