//! Canonical JSON emission: keys sorted (serde_json's default BTreeMap) and
//! every float printed with 17 significant digits, so identical runs emit
//! byte-identical summaries.

use std::io;

use serde_json::ser::Formatter;
use serde_json::Value;

struct Fixed17;

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{:.16e}", value as f64)
    }
}

/// Serialize a JSON value with sorted keys and fixed float formatting.
pub fn to_canonical_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed17);
    serde::Serialize::serialize(value, &mut ser).expect("json serialization cannot fail");
    String::from_utf8(out).expect("serde_json emits utf-8")
}

/// Pretty variant with the same float policy (two-space indent).
pub fn to_canonical_pretty(value: &Value) -> String {
    // serde_json's PrettyFormatter is a struct we cannot easily wrap with a
    // float override, so do a cheap two-pass: canonical compact first, then
    // re-parse purely structurally for indentation of the already-formatted
    // text. Numbers must not be touched, so indent by tokenizing strings and
    // structure characters only.
    let compact = to_canonical_string(value);
    let mut out = String::with_capacity(compact.len() * 2);
    let mut indent = 0usize;
    let mut in_string = false;
    let mut escape = false;
    let bytes = compact.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        let c = b as char;
        if in_string {
            out.push(c);
            if escape {
                escape = false;
            } else if c == '\\' {
                escape = true;
            } else if c == '"' {
                in_string = false;
            }
            continue;
        }
        match c {
            '"' => {
                in_string = true;
                out.push(c);
            }
            '{' | '[' => {
                out.push(c);
                // empty containers stay on one line
                let next = bytes.get(i + 1).map(|&n| n as char);
                if next == Some('}') || next == Some(']') {
                    continue;
                }
                indent += 1;
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
            }
            '}' | ']' => {
                let prev = bytes.get(i.wrapping_sub(1)).map(|&p| p as char);
                if prev == Some('{') || prev == Some('[') {
                    out.push(c);
                    continue;
                }
                indent = indent.saturating_sub(1);
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
                out.push(c);
            }
            ',' => {
                out.push(c);
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
            }
            ':' => {
                out.push(c);
                out.push(' ');
            }
            _ => out.push(c),
        }
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_use_17_significant_digits() {
        let v = json!({"x": 1.0, "y": 0.1});
        let s = to_canonical_string(&v);
        assert_eq!(s, r#"{"x":1.0000000000000000e0,"y":1.0000000000000001e-1}"#);
    }

    #[test]
    fn keys_are_sorted() {
        let v: Value = serde_json::from_str(r#"{"b": 1, "a": 2}"#).unwrap();
        let s = to_canonical_string(&v);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }

    #[test]
    fn determinism_byte_identical() {
        let v = json!({"vals": [0.1, 0.2, 3.0e-17], "name": "run", "n": 64});
        assert_eq!(to_canonical_string(&v), to_canonical_string(&v));
        let p = to_canonical_pretty(&v);
        let reparsed: Value = serde_json::from_str(&p).unwrap();
        assert_eq!(reparsed, v);
    }

    #[test]
    fn pretty_preserves_strings_with_structure_chars() {
        let v = json!({"s": "a{b}[c],:\"d\"", "t": [1, 2]});
        let p = to_canonical_pretty(&v);
        let reparsed: Value = serde_json::from_str(&p).unwrap();
        assert_eq!(reparsed, v);
    }
}
