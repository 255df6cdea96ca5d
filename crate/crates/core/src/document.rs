//! Pretty printer for the JSON documents this crate reads and writes.
//!
//! Arrays of scalars stay on one line so matrices print one row per line and
//! point lists one point per line.

use serde::Serialize;
use serde_json::Value;

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("document types serialize to JSON");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push_str(&serde_json::to_string(v).expect("scalar array"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                out.push('\n');
                pad(indent + 1, out);
                write_value(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
            }
            out.push('\n');
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            let len = map.len();
            for (i, (key, item)) in map.iter().enumerate() {
                out.push('\n');
                pad(indent + 1, out);
                out.push_str(&serde_json::to_string(key).expect("string key"));
                out.push_str(": ");
                write_value(item, indent + 1, out);
                if i + 1 < len {
                    out.push(',');
                }
            }
            out.push('\n');
            pad(indent, out);
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalar")),
    }
}

fn pad(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}
