//! JSON system files.
//!
//! ```json
//! { "name": "optional", "A": [[2.8, [0, 2]], [[0, 2], 2.8]], "b": [[-1, 1], 3] }
//! ```
//!
//! An entry is either a number `a` (meaning `[a, a]`) or a pair `[lo, hi]`.
//! Locations in error messages are 1-based.

use serde_json::{Map, Number, Value};
use tolreg_core::{Interval, IntervalMatrix, IntervalVector};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("missing key \"{0}\"")]
    Missing(&'static str),
    #[error("{0}")]
    Shape(String),
    #[error("bad entry at {0}: expected a number or a [lo, hi] pair")]
    BadEntry(String),
    #[error("improper interval at {0}")]
    Improper(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemFile {
    pub name: Option<String>,
    pub a: IntervalMatrix,
    pub b: IntervalVector,
}

fn entry(v: &Value, at: impl Fn() -> String) -> Result<Interval, FormatError> {
    let (lo, hi) = match v {
        Value::Number(n) => {
            let x = n.as_f64().ok_or_else(|| FormatError::BadEntry(at()))?;
            (x, x)
        }
        Value::Array(p) if p.len() == 2 => match (p[0].as_f64(), p[1].as_f64()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(FormatError::BadEntry(at())),
        },
        _ => return Err(FormatError::BadEntry(at())),
    };
    if lo > hi {
        return Err(FormatError::Improper(at()));
    }
    Interval::new(lo, hi).map_err(|_| FormatError::BadEntry(at()))
}

pub fn parse_system(text: &str) -> Result<SystemFile, FormatError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let obj = doc.as_object().ok_or_else(|| FormatError::Shape("top level must be an object".into()))?;
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(FormatError::Shape("\"name\" must be a string".into())),
    };
    let rows = obj
        .get("A")
        .ok_or(FormatError::Missing("A"))?
        .as_array()
        .ok_or_else(|| FormatError::Shape("\"A\" must be an array of rows".into()))?;
    if rows.is_empty() {
        return Err(FormatError::Shape("\"A\" has no rows".into()));
    }
    let mut a_rows = Vec::with_capacity(rows.len());
    let mut cols = None;
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| FormatError::Shape(format!("row {} of \"A\" is not an array", i + 1)))?;
        if row.is_empty() {
            return Err(FormatError::Shape(format!("row {} of \"A\" is empty", i + 1)));
        }
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(FormatError::Shape(format!(
                    "ragged matrix: row {} has {} entries, expected {c}",
                    i + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        let parsed: Result<Vec<Interval>, _> =
            row.iter().enumerate().map(|(j, v)| entry(v, || format!("({},{})", i + 1, j + 1))).collect();
        a_rows.push(parsed?);
    }
    let b = obj
        .get("b")
        .ok_or(FormatError::Missing("b"))?
        .as_array()
        .ok_or_else(|| FormatError::Shape("\"b\" must be an array".into()))?;
    if b.len() != rows.len() {
        return Err(FormatError::Shape(format!("\"b\" has {} entries, \"A\" has {} rows", b.len(), rows.len())));
    }
    let b: Vec<Interval> = b.iter().enumerate().map(|(i, v)| entry(v, || format!("b[{}]", i + 1))).collect::<Result<_, _>>()?;
    let a = IntervalMatrix::from_rows(&a_rows).map_err(|e| FormatError::Shape(e.to_string()))?;
    let b = IntervalVector::new(b).map_err(|e| FormatError::Shape(e.to_string()))?;
    Ok(SystemFile { name, a, b })
}

/// A finite float as a JSON number; non-finite values become strings.
pub fn num(x: f64) -> Value {
    match Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None if x.is_nan() => Value::String("nan".into()),
        None if x > 0.0 => Value::String("inf".into()),
        None => Value::String("-inf".into()),
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// Degenerate intervals are written as plain numbers.
pub fn interval_value(x: Interval) -> Value {
    if x.is_degenerate() {
        num(x.lo())
    } else {
        Value::Array(vec![num(x.lo()), num(x.hi())])
    }
}

pub fn interval_pair(x: Interval) -> Value {
    Value::Array(vec![num(x.lo()), num(x.hi())])
}

pub fn system_value(sys: &SystemFile) -> Value {
    let mut obj = Map::new();
    if let Some(name) = &sys.name {
        obj.insert("name".into(), Value::String(name.clone()));
    }
    let rows = (0..sys.a.rows())
        .map(|i| Value::Array(sys.a.row(i).iter().map(|&e| interval_value(e)).collect()))
        .collect();
    obj.insert("A".into(), Value::Array(rows));
    obj.insert("b".into(), Value::Array(sys.b.iter().map(|&e| interval_value(e)).collect()));
    Value::Object(obj)
}

pub fn serialize_system(sys: &SystemFile) -> String {
    let mut s = serde_json::to_string_pretty(&system_value(sys)).expect("values are serializable");
    s.push('\n');
    s
}
