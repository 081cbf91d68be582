use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingData {
    field: Field,
    vars: Vec<String>,
}

/// Descriptor of a polynomial ring `k[x_0, ..., x_{n-1}]`.
///
/// Variables are identified by position; names only matter for display and
/// parsing. Two descriptors are equal when field and names agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring(Arc<RingData>);

impl Ring {
    pub fn new<S: Into<String>>(field: Field, vars: impl IntoIterator<Item = S>) -> Result<Ring> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::usage(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::usage(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Ring(Arc::new(RingData { field, vars })))
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> Scalar {
        self.0.field.zero()
    }

    pub fn one(&self) -> Scalar {
        self.0.field.one()
    }

    /// Same field, variables reordered: new variable `i` is old variable `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Ring {
        let vars = perm.iter().map(|&i| self.0.vars[i].clone()).collect();
        Ring(Arc::new(RingData {
            field: self.0.field,
            vars,
        }))
    }

    /// The ring keeping only the listed variables, in the given order.
    pub fn subring(&self, keep: &[usize]) -> Ring {
        self.permuted(keep)
    }

    /// Prepends fresh variables, renaming them if they clash with existing ones.
    pub fn with_leading_vars(&self, names: &[&str]) -> Ring {
        let mut vars: Vec<String> = names.iter().map(|n| self.fresh_name(n)).collect();
        vars.extend(self.0.vars.iter().cloned());
        Ring(Arc::new(RingData {
            field: self.0.field,
            vars,
        }))
    }

    /// Appends fresh variables, renaming them if they clash.
    pub fn with_trailing_vars(&self, names: &[&str]) -> Ring {
        let mut vars = self.0.vars.clone();
        for n in names {
            let mut candidate = n.to_string();
            while vars.contains(&candidate) {
                candidate.push('_');
            }
            vars.push(candidate);
        }
        Ring(Arc::new(RingData {
            field: self.0.field,
            vars,
        }))
    }

    fn fresh_name(&self, base: &str) -> String {
        let mut candidate = base.to_string();
        while self.0.vars.contains(&candidate) {
            candidate.push('_');
        }
        candidate
    }

    pub fn ensure_same(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::usage(format!("ring mismatch: {self} vs {other}")))
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.0.field, self.0.vars.join(","))
    }
}

impl FromStr for Ring {
    type Err = Error;

    /// Parses the display form, e.g. `Q[x,y]` or `F3[x]`.
    fn from_str(s: &str) -> Result<Ring> {
        let s = s.trim();
        let (field, rest) = s
            .split_once('[')
            .ok_or_else(|| Error::usage(format!("ring `{s}` must look like Q[x,y]")))?;
        let vars = rest
            .strip_suffix(']')
            .ok_or_else(|| Error::usage(format!("ring `{s}` is missing `]`")))?;
        let vars: Vec<&str> = vars
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .collect();
        Ring::new(field.parse()?, vars)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
