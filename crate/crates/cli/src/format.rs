//! Fixed-width numeric text output.

use std::fmt::Write as _;

use serde_json::Value;

/// `x` with 17 significant digits: fixed notation for decimal exponents in
/// `[-4, 17)`, scientific otherwise.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.16}", x);
    }
    let sci = format!("{:.16e}", x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-4..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        let (mantissa, _) = sci.split_at(sci.find('e').unwrap());
        format!("{mantissa}e{exp:+03}")
    }
}

const MAX_TEXT_ROWS: usize = 12;

/// Flattens a JSON value into `path = value` lines. Long arrays are
/// summarized by their length.
pub fn flatten(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&path, v, out);
            }
        }
        Value::Array(items) if items.len() > MAX_TEXT_ROWS => {
            let _ = writeln!(out, "{prefix} = [{} rows]", items.len());
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{prefix} = [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix} = {}", scalar(other));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap()),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Null => "null".into(),
        other => other.to_string(),
    }
}
