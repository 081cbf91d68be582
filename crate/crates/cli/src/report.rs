//! Run reports. Human output interleaves prose with `kv ` lines; the
//! machine-readable format keeps only the `kv ` lines, so it is a strict
//! subset of the human output.

use std::fmt::Write as _;

pub const KV_PREFIX: &str = "kv ";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Kv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Line {
    Text(String),
    Kv(String),
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    lines: Vec<Line>,
}

/// Encodes a value for a `key=value` field: whitespace is dropped, so
/// polynomials print as `x^2-1` and lists as `a,b`.
pub fn kv_value(s: &str) -> String {
    let v: String = s.split_whitespace().collect();
    if v.is_empty() {
        "-".into()
    } else {
        v
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Report {
    pub fn text(&mut self, line: impl Into<String>) {
        self.lines.push(Line::Text(line.into()));
    }

    /// A machine-readable line `kv <scope> k1=v1 k2=v2 ...`.
    pub fn kv(&mut self, scope: &str, fields: &[(&str, String)]) {
        let mut line = format!("{KV_PREFIX}{scope}");
        for (k, v) in fields {
            let _ = write!(line, " {k}={}", kv_value(v));
        }
        self.lines.push(Line::Kv(line));
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for line in &self.lines {
            match (line, format) {
                (Line::Text(t), Format::Human) | (Line::Kv(t), _) => {
                    out.push_str(t);
                    out.push('\n');
                }
                (Line::Text(_), Format::Kv) => {}
            }
        }
        out
    }
}
