use std::io::{self, Write};

use serde_json::{Map, Number, Value};

/// Rounds to 12 significant digits so that output is stable across
/// platforms and summation orders.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Applies [`round12`] to every float in a JSON tree.
pub fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64 number"));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

/// Writes one line; a closed pipe (e.g. `| head`) ends output quietly.
fn emit(line: &str) {
    let _ = writeln!(io::stdout().lock(), "{line}");
}

pub fn print_json(v: Value) {
    emit(&serde_json::to_string_pretty(&rounded(v)).expect("JSON values serialize"));
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Rows must be objects sharing the keys of the first row.
pub fn print_csv(rows: &[Value]) {
    let Some(Value::Object(first)) = rows.first() else {
        return;
    };
    let keys: Vec<&String> = first.keys().collect();
    emit(&keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","));
    for row in rows {
        let row = rounded(row.clone());
        let cells: Vec<String> = keys
            .iter()
            .map(|k| csv_cell(row.get(k.as_str()).unwrap_or(&Value::Null)))
            .collect();
        emit(&cells.join(","));
    }
}

pub fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => panic!("expected a JSON object"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round12(0.1 + 0.2), 0.3);
        assert_eq!(round12(1.0 - 1e-15), 1.0);
        assert_eq!(round12(0.7219280948873623), 0.721928094887);
        assert_eq!(round12(-0.0), 0.0);
        let v = rounded(serde_json::json!({"a": [1.00000000000001, 2], "b": "x"}));
        assert_eq!(v.to_string(), r#"{"a":[1.0,2],"b":"x"}"#);
    }
}
