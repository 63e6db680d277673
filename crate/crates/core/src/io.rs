//! Output formatting and file plumbing: 17-significant-digit floats, a
//! deterministic JSON writer, atomic file writes, and the `a+bi` complex
//! literal syntax used by CLI flags.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Format with 17 significant digits (lossless for f64), `.` decimal
/// separator regardless of locale.
pub fn fmt_f64(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        // keep integers readable; still round-trips exactly
        format!("{:.1}", x)
    } else {
        format!("{:.16e}", x)
    }
}

/// Minimal deterministic JSON writer: keys in insertion order, floats via
/// [`fmt_f64`]. serde_json is used for parsing; emission goes through this
/// so reports are byte-stable.
#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn obj() -> Json {
        Json::Object(Vec::new())
    }

    pub fn push(&mut self, key: &str, value: Json) -> &mut Self {
        if let Json::Object(pairs) = self {
            pairs.push((key.to_string(), value));
        } else {
            panic!("push on non-object Json");
        }
        self
    }

    pub fn complex(z: Complex64) -> Json {
        Json::Array(vec![Json::Float(z.re), Json::Float(z.im)])
    }

    pub fn floats(xs: &[f64]) -> Json {
        Json::Array(xs.iter().map(|&x| Json::Float(x)).collect())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0);
        s
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Float(x) => out.push_str(&fmt_f64(*x)),
            Json::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        c if (c as u32) < 0x20 => {
                            let _ = write!(out, "\\u{:04x}", c as u32);
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                let inline = items
                    .iter()
                    .all(|i| matches!(i, Json::Float(_) | Json::Int(_) | Json::Bool(_)))
                    && items.len() <= 8;
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    if !inline {
                        out.push('\n');
                        out.push_str(&"  ".repeat(indent + 1));
                    }
                    item.write(out, indent + 1);
                }
                if !inline {
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent));
                }
                out.push(']');
            }
            Json::Object(pairs) => {
                if pairs.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (k, (key, value)) in pairs.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent + 1));
                    let _ = write!(out, "\"{key}\": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
        }
    }
}

/// Write `contents` to `path` atomically (temp file in the same directory,
/// then rename).
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Parse the `a+bi` / `a-bi` literal form; a bare real like `0.3` and a bare
/// imaginary like `0.5i` or `i` are accepted.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim().replace(' ', "");
    if t.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let bad = || Error::Parse(format!("cannot parse complex literal `{s}`"));
    if let Some(body) = t.strip_suffix('i') {
        // find the split between real and imaginary parts: the last +/- that
        // is not an exponent sign and not the leading sign
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = body[..k].parse().map_err(|_| bad())?;
                let imtxt = &body[k..];
                let im: f64 = if imtxt == "+" {
                    1.0
                } else if imtxt == "-" {
                    -1.0
                } else {
                    imtxt.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Parse a comma-separated list of complex literals.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_complex)
        .collect()
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", fmt_f64(z.re), fmt_f64(z.im))
    } else {
        format!("{}-{}i", fmt_f64(z.re), fmt_f64(-z.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trips() {
        for &x in &[0.1, -3.25e-17, 1.0, std::f64::consts::PI, 1e300, -0.0] {
            let s = fmt_f64(x);
            let y: f64 = s.parse().unwrap();
            assert_eq!(x, y, "{s}");
        }
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.0+0.0i").unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(parse_complex("1.5-2i").unwrap(), Complex64::new(1.5, -2.0));
        assert_eq!(parse_complex("0.4").unwrap(), Complex64::new(0.4, 0.0));
        assert_eq!(parse_complex("0.3i").unwrap(), Complex64::new(0.0, 0.3));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e-4i").unwrap(), Complex64::new(1e-3, 2e-4));
        assert!(parse_complex("xyz").is_err());
        let l = parse_complex_list("0.2, -0.3, 0.1+0.1i").unwrap();
        assert_eq!(l.len(), 3);
    }

    #[test]
    fn json_writer_is_stable() {
        let mut o = Json::obj();
        o.push("b", Json::Int(1));
        o.push("a", Json::Float(0.5));
        o.push("list", Json::floats(&[1.0, 2.0]));
        let s1 = o.render();
        let s2 = o.render();
        assert_eq!(s1, s2);
        assert!(s1.find("\"b\"").unwrap() < s1.find("\"a\"").unwrap());
        let parsed: serde_json::Value = serde_json::from_str(&s1).unwrap();
        assert_eq!(parsed["b"], serde_json::json!(1));
    }
}
