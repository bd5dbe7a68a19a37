//! JSON definition files and verification reports.
//!
//! Tensors are written as lists of `[index..., "p/q"]` rows. A linear map is
//! stored as its coefficient tensor with the codomain legs first, so a
//! multiplication row `[k, i, j, c]` reads `e_i e_j = … + c e_k + …` and a
//! comultiplication row `[j, k, i, c]` reads `Δe_i = … + c e_j⊗e_k + …`.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "basis": ["e", "a"],
//!   "field": "q",
//!   "unit": [[0, "1"]],
//!   "mult": [[0, 0, 0, "1"], [1, 0, 1, "1"], [1, 1, 0, "1"], [0, 1, 1, "1"]],
//!   "comult": [[0, 0, 0, "1"], [1, 1, 1, "1"]],
//!   "counit": [[0, "1"], [1, "1"]],
//!   "antipode": [[0, 0, "1"], [1, 1, "1"]]
//! }
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cross::Construction;
use crate::hopf::{validate_hopf, HopfAlgebra, HopfError, HopfValidation};
use crate::linear::LinearMap;
use crate::scalar::{Field, Scalar};
use crate::tensor::{entries_from_json, entries_to_json, SparseTensor};
use crate::twist::{verify_cocycle, Cocycle, TwistError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: line {line}, column {column}: {message}")]
    Json { path: String, line: usize, column: usize, message: String },
    #[error("{path}: field `{field}`: {message}")]
    Schema { path: String, field: String, message: String },
    #[error("{path}: not a Hopf algebra: {}", first_failure(.validation))]
    Axioms { path: String, validation: Box<HopfValidation> },
    #[error("{path}: {source}")]
    Hopf { path: String, source: HopfError },
    #[error("{path}: {source}")]
    Twist { path: String, source: TwistError },
}

fn first_failure(v: &HopfValidation) -> String {
    match v.failures().next() {
        Some(c) => {
            let w = c.witness.as_ref().expect("failed checks carry a witness");
            format!("{} fails at basis {:?}: {} vs {}", c.axiom.name(), w.basis, w.lhs, w.rhs)
        }
        None => "no failure".into(),
    }
}

impl IoError {
    /// Malformed input as opposed to a well-formed object that fails a check.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, IoError::Axioms { .. } | IoError::Twist { source: TwistError::Condition(_) | TwistError::NoInverse, .. })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Overrides the `field` key of the file.
    pub field: Option<Field>,
    pub skip_verify: bool,
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|e| IoError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn parse_json(text: &str, path: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

struct Fields<'a> {
    path: &'a str,
    obj: &'a Map<String, Value>,
}

impl<'a> Fields<'a> {
    fn new(value: &'a Value, path: &'a str, allowed: &[&str]) -> Result<Self, IoError> {
        let obj = value.as_object().ok_or_else(|| IoError::Schema {
            path: path.to_string(),
            field: "<root>".into(),
            message: "expected a JSON object".into(),
        })?;
        if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(schema(path, k, "unknown field"));
        }
        Ok(Fields { path, obj })
    }

    fn get(&self, name: &str) -> Result<&'a Value, IoError> {
        self.obj.get(name).ok_or_else(|| schema(self.path, name, "missing"))
    }

    fn optional(&self, name: &str) -> Option<&'a Value> {
        self.obj.get(name)
    }

    fn rows(&self, name: &str) -> Result<Vec<Vec<Value>>, IoError> {
        let v = self.get(name)?;
        let list = v.as_array().ok_or_else(|| schema(self.path, name, "expected a list of entries"))?;
        list.iter()
            .enumerate()
            .map(|(i, row)| {
                row.as_array().cloned().ok_or_else(|| schema(self.path, name, &format!("entry {i} is not a list")))
            })
            .collect()
    }

    fn tensor(&self, name: &str, shape: &[usize], field: Field) -> Result<SparseTensor, IoError> {
        let rows = self.rows(name)?;
        entries_from_json(shape, &rows, &|s| field.parse(s).map_err(|e| e.to_string()))
            .map_err(|m| schema(self.path, name, &m))
    }

    fn map(&self, name: &str, domain: &[usize], codomain: &[usize], field: Field) -> Result<LinearMap, IoError> {
        let mut shape = codomain.to_vec();
        shape.extend_from_slice(domain);
        let t = self.tensor(name, &shape, field)?;
        LinearMap::from_tensor(&t, domain.len()).map_err(|e| schema(self.path, name, &e.to_string()))
    }
}

fn schema(path: &str, field: &str, message: &str) -> IoError {
    IoError::Schema { path: path.to_string(), field: field.to_string(), message: message.to_string() }
}

fn field_of(f: &Fields<'_>, opts: &LoadOptions) -> Result<Field, IoError> {
    if let Some(field) = opts.field {
        return Ok(field);
    }
    match f.optional("field") {
        None => Ok(Field::Rational),
        Some(Value::String(s)) => s.parse().map_err(|e: crate::scalar::ScalarError| schema(f.path, "field", &e.to_string())),
        Some(_) => Err(schema(f.path, "field", "expected \"q\" or \"fp:<prime>\"")),
    }
}

const HOPF_FIELDS: [&str; 8] = ["dim", "basis", "field", "unit", "mult", "comult", "counit", "antipode"];

fn hopf_from_value(value: &Value, path: &str, opts: &LoadOptions) -> Result<HopfAlgebra, IoError> {
    let f = Fields::new(value, path, &HOPF_FIELDS)?;
    let field = field_of(&f, opts)?;
    let n = f
        .get("dim")?
        .as_u64()
        .filter(|&n| n > 0)
        .ok_or_else(|| schema(path, "dim", "expected a positive integer"))? as usize;
    let labels: Vec<String> = match f.optional("basis") {
        None => (0..n).map(|i| format!("e{i}")).collect(),
        Some(v) => v
            .as_array()
            .and_then(|l| l.iter().map(|x| x.as_str().map(str::to_string)).collect::<Option<Vec<_>>>())
            .ok_or_else(|| schema(path, "basis", "expected a list of strings"))?,
    };
    if labels.len() != n {
        return Err(schema(path, "basis", &format!("{} labels for dimension {n}", labels.len())));
    }
    let unit = f.tensor("unit", &[n], field)?;
    let mult = f.map("mult", &[n, n], &[n], field)?;
    let comult = f.map("comult", &[n], &[n, n], field)?;
    let counit = f.map("counit", &[n], &[], field)?;
    let antipode = f.map("antipode", &[n], &[n], field)?;
    let h = HopfAlgebra::from_parts(labels, unit, mult, counit, comult, antipode)
        .map_err(|source| IoError::Hopf { path: path.to_string(), source })?;
    if !opts.skip_verify {
        let validation = validate_hopf(&h).map_err(|source| IoError::Hopf { path: path.to_string(), source })?;
        if !validation.is_valid() {
            return Err(IoError::Axioms { path: path.to_string(), validation: Box::new(validation) });
        }
    }
    Ok(h)
}

pub fn parse_hopf(text: &str, path: &str, opts: &LoadOptions) -> Result<HopfAlgebra, IoError> {
    hopf_from_value(&parse_json(text, path)?, path, opts)
}

/// Loads a Hopf algebra definition. Unless `skip_verify` is set, every axiom
/// is checked and a failure is an [`IoError::Axioms`].
pub fn load_hopf(path: &Path, opts: &LoadOptions) -> Result<HopfAlgebra, IoError> {
    parse_hopf(&read(path)?, &path.display().to_string(), opts)
}

fn map_rows(m: &LinearMap) -> Value {
    json!(entries_to_json(&m.to_tensor()))
}

pub fn hopf_to_value(h: &HopfAlgebra) -> Value {
    let field = h.unit().iter_flat().next().map(|(_, s)| s.field()).unwrap_or_default();
    json!({
        "dim": h.dim(),
        "basis": h.labels(),
        "field": field.to_string(),
        "unit": entries_to_json(h.unit()),
        "mult": map_rows(h.mult()),
        "comult": map_rows(h.comult()),
        "counit": map_rows(h.counit()),
        "antipode": map_rows(h.antipode()),
    })
}

/// Canonical text: sorted keys, one entry per line, trailing newline.
pub fn to_canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_canonical(v, 0, &mut out);
    out.push('\n');
    out
}

// Pretty-printed like serde_json, except that arrays of scalars stay on one
// line so tensor entries read as rows.
fn write_canonical(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            // serde_json's default map keeps keys sorted
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_canonical(x, indent + 1, out);
                if i + 1 < m.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(a) if a.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_canonical(x, indent + 1, out);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

pub fn hopf_to_json(h: &HopfAlgebra) -> String {
    to_canonical_json(&hopf_to_value(h))
}

pub fn save_hopf(h: &HopfAlgebra, path: &Path) -> Result<(), IoError> {
    write(path, &hopf_to_json(h))
}

fn write(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|e| IoError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// An element of `H⊗H` together with its host, as stored in cocycle and
/// R-matrix files: `{"host": <path or inline definition>, "element": rows}`.
#[derive(Clone, Debug)]
pub struct ElementFile {
    pub host: HopfAlgebra,
    /// The host file, when `host` was given as a path.
    pub host_path: Option<PathBuf>,
    pub element: SparseTensor,
}

pub fn parse_element(text: &str, path: &Path, opts: &LoadOptions) -> Result<ElementFile, IoError> {
    let name = path.display().to_string();
    let value = parse_json(text, &name)?;
    if value.get("inverse").is_some() {
        return Err(schema(&name, "inverse", "the inverse is computed, never read"));
    }
    let f = Fields::new(&value, &name, &["host", "element", "field"])?;
    let (host, host_path) = match f.get("host")? {
        Value::String(p) => {
            let p = path.parent().unwrap_or(Path::new(".")).join(p);
            (load_hopf(&p, opts)?, Some(p))
        }
        inline @ Value::Object(_) => (hopf_from_value(inline, &format!("{name}#host"), opts)?, None),
        _ => return Err(schema(&name, "host", "expected a path or an inline definition")),
    };
    let field = field_of(&f, opts)?;
    let n = host.dim();
    let element = f.tensor("element", &[n, n], field)?;
    Ok(ElementFile { host, host_path, element })
}

pub fn load_element(path: &Path, opts: &LoadOptions) -> Result<ElementFile, IoError> {
    parse_element(&read(path)?, path, opts)
}

/// Loads a cocycle file and verifies the cocycle (its inverse is computed).
pub fn load_cocycle(path: &Path, opts: &LoadOptions) -> Result<Cocycle, IoError> {
    let e = load_element(path, opts)?;
    verify_cocycle(&e.host, &e.element).map_err(|source| IoError::Twist { path: path.display().to_string(), source })
}

pub fn element_to_json(host: &str, element: &SparseTensor) -> String {
    to_canonical_json(&json!({ "host": host, "element": entries_to_json(element) }))
}

/// `{"construction": "mirror" | "twisted_mirror" | "mbar", "hopf": path,
/// "cocycle": path}`; paths are relative to the request file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionRequest {
    pub construction: Construction,
    pub hopf: PathBuf,
    pub cocycle: Option<PathBuf>,
}

pub fn parse_request(text: &str, path: &Path) -> Result<ConstructionRequest, IoError> {
    let name = path.display().to_string();
    let value = parse_json(text, &name)?;
    let f = Fields::new(&value, &name, &["construction", "hopf", "cocycle"])?;
    let construction = match f.get("construction")?.as_str() {
        Some("mirror") => Construction::Mirror,
        Some("twisted_mirror") => Construction::TwistedMirror,
        Some("mbar") => Construction::Mbar,
        _ => return Err(schema(&name, "construction", "expected \"mirror\", \"twisted_mirror\" or \"mbar\"")),
    };
    let dir = path.parent().unwrap_or(Path::new("."));
    let hopf = f.get("hopf")?.as_str().map(|p| dir.join(p)).ok_or_else(|| schema(&name, "hopf", "expected a path"))?;
    let cocycle = match f.optional("cocycle") {
        None => None,
        Some(Value::String(p)) => Some(dir.join(p)),
        Some(_) => return Err(schema(&name, "cocycle", "expected a path")),
    };
    match (construction, &cocycle) {
        (Construction::TwistedMirror, None) => Err(schema(&name, "cocycle", "required for twisted_mirror")),
        (Construction::Mirror | Construction::Mbar, Some(_)) => {
            Err(schema(&name, "cocycle", "only twisted_mirror takes a cocycle"))
        }
        _ => Ok(ConstructionRequest { construction, hopf, cocycle }),
    }
}

pub fn load_request(path: &Path) -> Result<ConstructionRequest, IoError> {
    parse_request(&read(path)?, path)
}

/// Serializes a tensor for a report witness.
pub fn tensor_value(t: &SparseTensor) -> Value {
    json!({ "shape": t.shape(), "entries": entries_to_json(t) })
}

pub fn scalar_value(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub id: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// The outcome of one command: every check with its witness, the inputs'
/// digests and the toolkit version.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub construction: String,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Value>,
}

impl VerificationReport {
    pub fn new(construction: &str) -> Self {
        VerificationReport {
            construction: construction.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            checks: Vec::new(),
            outcome: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, id: &str, witness: Option<Value>) {
        self.checks.push(CheckEntry { id: id.to_string(), passed: witness.is_none(), witness, millis: None });
    }

    pub fn add_input(&mut self, path: &Path) -> Result<(), IoError> {
        let bytes = fs::read(path).map_err(|e| IoError::Io { path: path.display().to_string(), message: e.to_string() })?;
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        Ok(())
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(&serde_json::to_value(self).expect("reports serialize"))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn emit_report(report: &VerificationReport, path: &Path) -> Result<(), IoError> {
    write(path, &report.to_json())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{sweedler_h4, FiniteGroup};

    #[test]
    fn hopf_round_trip() {
        let h = sweedler_h4();
        let text = hopf_to_json(&h);
        let back = parse_hopf(&text, "h4", &LoadOptions::default()).unwrap();
        assert_eq!(back, h);
        assert_eq!(hopf_to_json(&back), text);
    }

    #[test]
    fn module_doc_example_is_z2() {
        let doc = r#"{
          "dim": 2, "basis": ["e", "a"], "field": "q", "unit": [[0, "1"]],
          "mult": [[0, 0, 0, "1"], [1, 0, 1, "1"], [1, 1, 0, "1"], [0, 1, 1, "1"]],
          "comult": [[0, 0, 0, "1"], [1, 1, 1, "1"]],
          "counit": [[0, "1"], [1, "1"]],
          "antipode": [[0, 0, "1"], [1, 1, "1"]]
        }"#;
        let h = parse_hopf(doc, "doc", &LoadOptions::default()).unwrap();
        assert!(h.same_structure(&FiniteGroup::cyclic(2).algebra()));
    }

    #[test]
    fn schema_errors_name_the_field() {
        let mut v = hopf_to_value(&FiniteGroup::cyclic(2).algebra());
        v["mult"] = json!([[0, 0, "1"]]);
        let err = parse_hopf(&v.to_string(), "bad", &LoadOptions::default()).unwrap_err();
        assert!(matches!(&err, IoError::Schema { field, .. } if field == "mult"), "{err}");
        v["mult"] = json!([[0, 0, 5, "1"]]);
        let err = parse_hopf(&v.to_string(), "bad", &LoadOptions::default()).unwrap_err();
        assert!(matches!(&err, IoError::Schema { field, .. } if field == "mult"), "{err}");
        let err = parse_hopf("{\"dim\": 2,", "cut", &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, IoError::Json { line: 1, .. }));
        let mut v = hopf_to_value(&FiniteGroup::cyclic(2).algebra());
        v["colour"] = json!("red");
        assert!(matches!(parse_hopf(&v.to_string(), "x", &LoadOptions::default()), Err(IoError::Schema { field, .. }) if field == "colour"));
    }

    #[test]
    fn axiom_failures_unless_skipped() {
        let mut v = hopf_to_value(&FiniteGroup::cyclic(2).algebra());
        v["antipode"] = json!([]);
        let err = parse_hopf(&v.to_string(), "zero-antipode", &LoadOptions::default()).unwrap_err();
        assert!(!err.is_input_error());
        assert!(err.to_string().contains("antipode"), "{err}");
        let opts = LoadOptions { skip_verify: true, ..Default::default() };
        assert!(parse_hopf(&v.to_string(), "zero-antipode", &opts).is_ok());
    }

    #[test]
    fn prime_field_files() {
        let h = FiniteGroup::cyclic(3).algebra();
        let opts = LoadOptions { field: Some(Field::Prime(7)), ..Default::default() };
        let back = parse_hopf(&hopf_to_json(&h), "z3", &opts).unwrap();
        assert_eq!(back.unit().get_flat(0), Scalar::modular(1, 7));
        assert!(hopf_to_json(&back).contains("\"fp:7\""));
    }

    #[test]
    fn requests() {
        let p = Path::new("dir/req.json");
        let r = parse_request(r#"{"construction": "mbar", "hopf": "h4.json"}"#, p).unwrap();
        assert_eq!(r.hopf, Path::new("dir/h4.json"));
        let err = parse_request(r#"{"construction": "twisted_mirror", "hopf": "h4.json"}"#, p).unwrap_err();
        assert!(matches!(err, IoError::Schema { field, .. } if field == "cocycle"));
    }

    #[test]
    fn empty_report() {
        let r = VerificationReport::new("check");
        assert!(r.passed());
        let text = r.to_json();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["checks"], json!([]));
        assert_eq!(text, r.to_json());
    }
}
