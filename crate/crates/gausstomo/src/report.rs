//! Deterministic JSON report rendering.
//!
//! Reports must be byte-identical across runs with the same inputs and
//! seed, so this module renders [`serde_json::Value`] trees itself:
//! object keys come out sorted (the default `serde_json` map is ordered),
//! and every finite float is printed with 17 significant digits, enough to
//! reproduce the exact `f64` on re-parse. Timing information never goes
//! into the report body — the CLI emits it on stderr.

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Wraps a float as a JSON value, mapping non-finite values to descriptive
/// strings (JSON has no NaN/Infinity literals).
pub fn float_value(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None => Value::String(format!("{x}")),
    }
}

/// Vector of floats as a JSON array.
pub fn float_array(xs: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(xs.into_iter().map(float_value).collect())
}

/// Renders a value deterministically: sorted keys, two-space indentation,
/// floats with 17 significant digits.
pub fn render_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

/// SHA-256 of the deterministic rendering, as lowercase hex. Used as the
/// inputs digest in report entries.
pub fn digest(value: &Value) -> String {
    let rendered = render_json(value);
    let mut hasher = Sha256::new();
    hasher.update(rendered.as_bytes());
    let bytes = hasher.finalize();
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(out, n),
        Value::String(s) => {
            // serde_json's string escaping is deterministic.
            out.push_str(&serde_json::to_string(s).expect("string serialization is infallible"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, indent + 1);
                write_value(out, item, indent + 1);
            }
            newline(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            // serde_json's default map is a BTreeMap: iteration is sorted.
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, indent + 1);
                out.push_str(&serde_json::to_string(key).expect("string serialization"));
                out.push_str(": ");
                write_value(out, item, indent + 1);
            }
            newline(out, indent);
            out.push('}');
        }
    }
}

fn write_number(out: &mut String, n: &serde_json::Number) {
    if let Some(i) = n.as_i64() {
        out.push_str(&i.to_string());
    } else if let Some(u) = n.as_u64() {
        out.push_str(&u.to_string());
    } else if let Some(f) = n.as_f64() {
        // 17 significant digits reproduce any f64 exactly on parse.
        out.push_str(&format!("{f:.16e}"));
    } else {
        out.push_str(&n.to_string());
    }
}

fn newline(out: &mut String, indent: usize) {
    out.push('\n');
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip_exactly() {
        for x in [
            0.1,
            -1.0 / 3.0,
            std::f64::consts::PI,
            1.2345678901234567e-12,
            -9.87654321e300,
            2.0f64.powi(-1074), // smallest subnormal
            0.0,
        ] {
            let rendered = render_json(&float_value(x));
            let parsed: f64 = rendered.trim().parse().unwrap();
            assert_eq!(parsed.to_bits(), x.to_bits(), "value {x} drifted");
        }
    }

    #[test]
    fn rendering_is_deterministic_and_sorted() {
        let a = json!({"zeta": 1, "alpha": {"nested": [1.5, 2.5]}, "mid": true});
        let first = render_json(&a);
        let second = render_json(&a);
        assert_eq!(first, second);
        let alpha_pos = first.find("\"alpha\"").unwrap();
        let mid_pos = first.find("\"mid\"").unwrap();
        let zeta_pos = first.find("\"zeta\"").unwrap();
        assert!(alpha_pos < mid_pos && mid_pos < zeta_pos);
    }

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let a = json!({"op": "classify", "x": 1.0});
        let b = json!({"op": "classify", "x": 1.0 + f64::EPSILON});
        assert_eq!(digest(&a), digest(&a));
        assert_ne!(digest(&a), digest(&b));
        assert_eq!(digest(&a).len(), 64);
    }

    #[test]
    fn non_finite_floats_become_strings() {
        assert_eq!(float_value(f64::NAN), Value::String("NaN".into()));
        assert_eq!(float_value(f64::INFINITY), Value::String("inf".into()));
    }

    #[test]
    fn empty_containers_render_compactly() {
        let v = json!({"empty_list": [], "empty_map": {}});
        let text = render_json(&v);
        assert!(text.contains("\"empty_list\": []"));
        assert!(text.contains("\"empty_map\": {}"));
    }
}
