//! Table formatting and artifact writing.

use crate::CliError;
use inner_entropy_core::QuadratureConfig;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// Text produced by a command, plus a failure message for `verify`.
pub struct Output {
    pub text: String,
    pub failure: Option<String>,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Self { text, failure: None }
    }
}

pub fn write(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// A real with 17 significant digits, `inf`/`-inf`/`nan` otherwise.
pub fn real(x: f64) -> String {
    // Adding zero maps -0 to +0.
    let x = x + 0.0;
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// A JSON number, or a string for non-finite values.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x + 0.0)
    } else {
        Value::String(real(x))
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| num(*x)).collect())
}

/// Header fields shared by every table.
pub fn header(quantity: &str, n: Option<usize>, cfg: &QuadratureConfig) -> Vec<(&'static str, String)> {
    let mut h = vec![("quantity", quantity.to_string())];
    if let Some(n) = n {
        h.push(("n", n.to_string()));
    }
    h.push(("t_max", real(cfg.t_max)));
    h.push(("abs_tol", real(cfg.abs_tol)));
    h.push(("divergence_cap", real(cfg.divergence_cap)));
    h.push(("max_subdivisions", cfg.max_subdivisions.to_string()));
    h
}

/// CSV with a `# key=value ...` header line and the given column names.
pub fn csv(header: &[(&str, String)], columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = String::from("#");
    for (k, v) in header {
        let _ = write!(s, " {k}={v}");
    }
    s.push('\n');
    s.push_str(&columns.join(","));
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Pretty JSON document `{"header": {...}, ...body}` with a trailing newline.
pub fn json_doc(header: &[(&str, String)], body: Map<String, Value>) -> String {
    let mut h = Map::new();
    for (k, v) in header {
        h.insert((*k).to_string(), Value::String(v.clone()));
    }
    let mut doc = body;
    doc.insert("header".into(), Value::Object(h));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
    s.push('\n');
    s
}
