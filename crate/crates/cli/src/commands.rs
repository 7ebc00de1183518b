use std::fmt;
use std::path::Path;

use procflow::analysis::{
    causal_deviation, check_broadcast, check_no_signalling, is_isometry, is_unitary, no_signalling_deviation,
    stinespring, Keep, KRAUS_CUTOFF,
};
use procflow::format::{graph_expr, quantum_expr, AnyModel, Document, FormatError, Value};
use procflow::tensor::{evaluate, prob_equiv, random_model, Model, Tensor, Verdict, PROB_EQUIV_DIMS};
use procflow::{double, equal, q_equal, AnalysisError, Complex64, Diagram, EvalError, QDiagram};
use serde_json::{json, Value as Json};

use crate::{Check, Mode};

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Format(FormatError),
    Type(String),
    Model(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 2,
            CliError::Format(FormatError::Parse { .. }) => 2,
            CliError::Format(FormatError::Type(_) | FormatError::Theory(_)) => 3,
            CliError::Format(FormatError::Model(_)) => 4,
            CliError::Type(_) => 3,
            CliError::Model(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.code() {
            2 => "parse",
            3 => "type",
            _ => "model",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Type(m) | CliError::Model(m) => f.write_str(m),
            CliError::Format(e) => write!(f, "{e}"),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> CliError {
        CliError::Format(e)
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> CliError {
        match e {
            EvalError::BoundaryMismatch(_) | EvalError::Diagram(_) => CliError::Type(e.to_string()),
            _ => CliError::Model(e.to_string()),
        }
    }
}

pub struct Outcome {
    pub lines: Vec<String>,
    pub json: Json,
    pub pass: bool,
}

/// Analysis errors that mean "the property does not hold" rather than "the
/// input is wrong".
fn analysis_outcome(check: &str, e: AnalysisError) -> Result<Outcome, CliError> {
    match e {
        AnalysisError::NonCausal(_)
        | AnalysisError::NotHermitian(_)
        | AnalysisError::NotCompletelyPositive(_)
        | AnalysisError::NotSquare { .. } => Ok(Outcome {
            lines: vec![format!("{check}: fail ({e})")],
            json: json!({ "check": check, "pass": false, "reason": e.to_string() }),
            pass: false,
        }),
        AnalysisError::Eval(e) => Err(e.into()),
        AnalysisError::Diagram(e) => Err(CliError::Type(e.to_string())),
        AnalysisError::Arity(m) => Err(CliError::Type(m)),
    }
}

fn load(path: &Path) -> Result<Document, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(Document::parse(&text)?)
}

fn random_complex(doc: &Document, seed: u64) -> Result<Model<Complex64>, CliError> {
    Ok(random_model(&doc.theory, PROB_EQUIV_DIMS, seed)?)
}

/// `None` uses the document's own model, falling back to a random one.
fn resolve_model(doc: &Document, spec: Option<&str>, seed: u64) -> Result<AnyModel, CliError> {
    match spec {
        None => match doc.model()? {
            Some(m) => Ok(m),
            None => Ok(AnyModel::Complex(random_complex(doc, seed)?)),
        },
        Some(s) => {
            if let Some(n) = s.strip_prefix("random:") {
                let n: u64 = n.parse().map_err(|_| CliError::Io(format!("bad model seed `{n}`")))?;
                return Ok(AnyModel::Complex(random_complex(doc, n)?));
            }
            let other = load(Path::new(s))?;
            if *other.theory != *doc.theory {
                return Err(CliError::Model(format!("model file {s} declares a different theory")));
            }
            let m = other.model()?.ok_or_else(|| CliError::Model(format!("{s} has no model")))?;
            Ok(m)
        }
    }
}

fn complex_model(doc: &Document, spec: Option<&str>, seed: u64) -> Result<Model<Complex64>, CliError> {
    match resolve_model(doc, spec, seed)? {
        AnyModel::Complex(m) => Ok(m),
        AnyModel::Boolean(_) => Err(CliError::Model("this check needs a complex model".into())),
    }
}

fn main_diagram(doc: &Document) -> Result<Value, CliError> {
    Ok(doc.diagram()?)
}

fn quantum(v: Value) -> QDiagram {
    match v {
        Value::Classical(d) => double(&d),
        Value::Quantum(q) => q,
    }
}

fn base(v: &Value) -> &Diagram {
    match v {
        Value::Classical(d) => d,
        Value::Quantum(q) => q.base(),
    }
}

fn type_names(ts: &[procflow::AtomicType]) -> Vec<String> {
    ts.iter().map(|t| t.name().to_string()).collect()
}

fn unravel(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for k in (0..shape.len()).rev() {
        idx[k] = flat % shape[k];
        flat /= shape[k];
    }
    idx
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn entries<S: procflow::Scalar>(t: &Tensor<S>, keep: impl Fn(S) -> bool) -> Vec<(Vec<usize>, S)> {
    t.data().iter().enumerate().filter(|(_, &x)| keep(x)).map(|(i, &x)| (unravel(i, t.shape()), x)).collect()
}

pub fn eval(file: &Path, model: Option<&str>, seed: u64, tol: f64) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let value = main_diagram(&doc)?;
    let d = base(&value);
    let mut lines = vec![format!("dom {:?}", type_names(d.dom())), format!("cod {:?}", type_names(d.cod()))];
    if let Value::Quantum(q) = &value {
        lines.push(format!("doubled: {:?} -> {:?}", type_names(q.qdom()), type_names(q.qcod())));
    }
    let loops: serde_json::Map<String, Json> =
        d.loops().iter().map(|(t, n)| (t.name().to_string(), json!(n))).collect();
    lines.push(if loops.is_empty() {
        "loops: none".to_string()
    } else {
        format!("loops: {}", d.loops().iter().map(|(t, n)| format!("{t} x{n}")).collect::<Vec<_>>().join(", "))
    });
    let (shape, rows, data): (Vec<usize>, Vec<String>, Json) = match resolve_model(&doc, model, seed)? {
        AnyModel::Complex(m) => {
            let t = evaluate(d, &m)?;
            let nz = entries(&t, |z| z.norm() > tol);
            let rows = nz.iter().map(|(i, z)| format!("  {i:?} {}", fmt_complex(*z))).collect();
            let data = t.data().iter().map(|z| json!([z.re, z.im])).collect();
            (t.shape().to_vec(), rows, data)
        }
        AnyModel::Boolean(m) => {
            let t = evaluate(d, &m)?;
            let rows = entries(&t, |b| b).iter().map(|(i, _)| format!("  {i:?} 1")).collect();
            (t.shape().to_vec(), rows, json!(t.data()))
        }
    };
    lines.push(format!("shape {shape:?}"));
    lines.push(format!("entries ({} shown):", rows.len()));
    lines.extend(rows);
    let json = json!({
        "dom": type_names(d.dom()),
        "cod": type_names(d.cod()),
        "loops": loops,
        "shape": shape,
        "data": data,
    });
    Ok(Outcome { lines, json, pass: true })
}

pub fn eq(left: &Path, right: &Path, mode: Mode, trials: usize, seed: u64, tol: f64) -> Result<Outcome, CliError> {
    let (da, db) = (load(left)?, load(right)?);
    if *da.theory != *db.theory {
        return Err(CliError::Model("the two files declare different theories".into()));
    }
    let (va, vb) = (main_diagram(&da)?, main_diagram(&db)?);
    match mode {
        Mode::Structural => {
            let same = match (&va, &vb) {
                (Value::Classical(a), Value::Classical(b)) => equal(a, b),
                (Value::Quantum(a), Value::Quantum(b)) => q_equal(a, b),
                _ => return Err(CliError::Type("cannot compare a classical diagram with a doubled one".into())),
            }
            .map_err(|e| CliError::Type(e.to_string()))?;
            let word = if same { "equal" } else { "distinct" };
            Ok(Outcome { lines: vec![word.into()], json: json!({ "mode": "structural", "equal": same }), pass: same })
        }
        Mode::Numeric => match prob_equiv(base(&va), base(&vb), trials, seed, tol) {
            Ok(Verdict::Equivalent { trials }) => Ok(Outcome {
                lines: vec![format!("equal ({trials} random models agree)")],
                json: json!({ "mode": "numeric", "equal": true, "trials": trials }),
                pass: true,
            }),
            Ok(Verdict::Distinguished { seed, deviation }) => Ok(Outcome {
                lines: vec![format!("distinct: witness seed {seed}, deviation {deviation:.3e}")],
                json: json!({ "mode": "numeric", "equal": false, "witness_seed": seed, "deviation": deviation }),
                pass: false,
            }),
            Err(EvalError::BoundaryMismatch(m)) => Ok(Outcome {
                lines: vec![format!("distinct: {m}")],
                json: json!({ "mode": "numeric", "equal": false, "reason": m }),
                pass: false,
            }),
            Err(e) => Err(e.into()),
        },
    }
}

fn verdict(check: &str, pass: bool, mut lines: Vec<String>, mut json: Json) -> Outcome {
    lines.push(format!("{check}: {}", if pass { "pass" } else { "fail" }));
    json["check"] = json!(check);
    json["pass"] = json!(pass);
    Outcome { lines, json, pass }
}

fn named_quantum(doc: &Document, name: &str) -> Result<QDiagram, CliError> {
    if !doc.raw.diagrams.contains_key(name) {
        return Err(CliError::Type(format!("the nosignal check needs a diagram named `{name}`")));
    }
    Ok(quantum(doc.named(name)?))
}

pub fn analyze(file: &Path, check: Check, model: Option<&str>, seed: u64, tol: f64) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let m = complex_model(&doc, model, seed)?;
    let run = || -> Result<Result<Outcome, AnalysisError>, CliError> {
        Ok(match check {
            Check::Causal => {
                let q = quantum(main_diagram(&doc)?);
                causal_deviation(&q, &m).map(|dev| {
                    verdict("causal", dev <= tol, vec![format!("deviation {dev:.3e}")], json!({ "deviation": dev }))
                })
            }
            Check::Isometry | Check::Unitary => {
                let Value::Classical(d) = main_diagram(&doc)? else {
                    return Err(CliError::Type("isometry and unitarity checks need a classical diagram".into()));
                };
                let (name, ok) = if check == Check::Isometry {
                    ("isometry", is_isometry(&d, &m, tol))
                } else {
                    ("unitary", is_unitary(&d, &m, tol))
                };
                ok.map(|ok| verdict(name, ok, Vec::new(), json!({})))
            }
            Check::Stinespring => {
                let q = quantum(main_diagram(&doc)?);
                stinespring(&q, &m, KRAUS_CUTOFF).map(|s| {
                    let mut lines = vec![
                        format!("environment dimension {}", s.env_dim),
                        format!("kraus operators {}", s.kraus.len()),
                        format!("isometry {}x{}:", s.v.nrows(), s.v.ncols()),
                    ];
                    let rows: Vec<Vec<Json>> =
                        s.v.row_iter().map(|r| r.iter().map(|z| json!([z.re, z.im])).collect()).collect();
                    for r in s.v.row_iter() {
                        lines.push(format!("  {}", r.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>().join("  ")));
                    }
                    verdict(
                        "stinespring",
                        true,
                        lines,
                        json!({ "env_dim": s.env_dim, "kraus": s.kraus.len(), "v": rows }),
                    )
                })
            }
            Check::Broadcast => {
                let q = quantum(main_diagram(&doc)?);
                check_broadcast(&q, &m, tol).map(|r| {
                    let mut lines = vec![
                        format!("left marginal {} (deviation {:.3e})", ok_word(r.left_marginal_ok), r.left_deviation),
                        format!(
                            "right marginal {} (deviation {:.3e})",
                            ok_word(r.right_marginal_ok),
                            r.right_deviation
                        ),
                        format!("coherence discrepancy {:.3e}", r.coherence_discrepancy),
                    ];
                    let mut ds = Vec::new();
                    for d in &r.discrepancies {
                        let side = if d.marginal == Keep::Left { "left" } else { "right" };
                        lines.push(format!(
                            "  {side} [{}, {}] found {} expected {}",
                            d.row,
                            d.col,
                            fmt_complex(d.found),
                            fmt_complex(d.expected)
                        ));
                        ds.push(json!({
                            "marginal": side, "row": d.row, "col": d.col,
                            "found": [d.found.re, d.found.im], "expected": [d.expected.re, d.expected.im],
                        }));
                    }
                    let json = json!({
                        "left_deviation": r.left_deviation,
                        "right_deviation": r.right_deviation,
                        "coherence_discrepancy": r.coherence_discrepancy,
                        "discrepancies": ds,
                    });
                    verdict("broadcast", r.broadcasts(), lines, json)
                })
            }
            Check::Nosignal => {
                let rho = named_quantum(&doc, "state")?;
                let left = named_quantum(&doc, "left")?;
                let right = named_quantum(&doc, "right")?;
                check_no_signalling(&rho, &left, &right, &m, tol).and_then(|ok| {
                    let dev = no_signalling_deviation(&rho, &left, &right, &m)?;
                    Ok(verdict("nosignal", ok, vec![format!("deviation {dev:.3e}")], json!({ "deviation": dev })))
                })
            }
        })
    };
    let name = format!("{check:?}").to_lowercase();
    run()?.or_else(|e| analysis_outcome(&name, e))
}

fn ok_word(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "wrong"
    }
}

pub fn demo(name: &str, seed: u64) -> Result<Outcome, CliError> {
    let report = match procflow::demo::run(name, seed) {
        None => return Err(CliError::Type(format!("unknown demo `{name}`"))),
        Some(r) => r,
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return analysis_outcome(name, e),
    };
    let mut lines = report.lines.clone();
    for c in &report.checks {
        lines.push(format!("[{}] {}", if c.passed { "pass" } else { "FAIL" }, c.label));
    }
    let checks: Vec<Json> = report.checks.iter().map(|c| json!({ "label": c.label, "passed": c.passed })).collect();
    let json = json!({ "demo": report.name, "lines": report.lines, "checks": checks, "passed": report.passed() });
    Ok(Outcome { lines, json, pass: report.passed() })
}

pub fn export(file: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let mut doc = load(file)?;
    if doc.raw.diagram.is_some() {
        doc.raw.diagram = Some(match main_diagram(&doc)? {
            Value::Classical(d) => graph_expr(&d),
            Value::Quantum(q) => quantum_expr(&q),
        });
    }
    let text = doc.to_json();
    let json: Json = serde_json::from_str(&text).expect("own output parses");
    let lines = match out {
        Some(p) => {
            std::fs::write(p, format!("{text}\n"))
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
            vec![format!("wrote {}", p.display())]
        }
        None => vec![text],
    };
    Ok(Outcome { lines, json, pass: true })
}
