//! Plain-text view of the JSON reports.
//!
//! Objects, and arrays holding objects, flatten into `path = value` lines with
//! dotted paths; every other value is written as compact JSON. [`from_text`]
//! inverts [`to_text`] exactly.

use serde_json::{Map, Value};

pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}

fn nested(v: &Value) -> bool {
    match v {
        Value::Object(m) => !m.is_empty(),
        Value::Array(a) => a.iter().any(|x| matches!(x, Value::Object(_))),
        _ => false,
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    if !nested(v) {
        out.push_str(&format!("{prefix} = {v}\n"));
        return;
    }
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(prefix, k), x, out);
            }
        }
        Value::Array(a) => {
            for (k, x) in a.iter().enumerate() {
                flatten(&join(prefix, &k.to_string()), x, out);
            }
        }
        _ => unreachable!(),
    }
}

#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "text report: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

pub fn from_text(text: &str) -> Result<Value, ParseError> {
    let mut root = Value::Object(Map::new());
    for line in text.lines().filter(|l| !l.is_empty()) {
        let (path, raw) = line
            .split_once(" = ")
            .ok_or_else(|| ParseError(format!("no ` = ` in {line:?}")))?;
        let value: Value =
            serde_json::from_str(raw).map_err(|e| ParseError(format!("{line:?}: {e}")))?;
        let keys: Vec<&str> = path.split('.').collect();
        insert(&mut root, &keys, value)?;
    }
    Ok(root)
}

fn insert(at: &mut Value, keys: &[&str], value: Value) -> Result<(), ParseError> {
    let (first, rest) = keys.split_first().expect("non-empty path");
    let index = first.parse::<usize>().ok();
    let slot = match (at, index) {
        (Value::Array(a), Some(k)) => {
            if k == a.len() {
                a.push(Value::Null);
            }
            a.get_mut(k)
                .ok_or_else(|| ParseError(format!("array index {k} skips ahead")))?
        }
        (Value::Object(m), None) => m.entry(first.to_string()).or_insert(Value::Null),
        _ => return Err(ParseError(format!("path segment {first:?} does not fit"))),
    };
    if rest.is_empty() {
        *slot = value;
        return Ok(());
    }
    if slot.is_null() {
        *slot = if rest[0].parse::<usize>().is_ok() {
            Value::Array(Vec::new())
        } else {
            Value::Object(Map::new())
        };
    }
    insert(slot, rest, value)
}
