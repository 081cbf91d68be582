//! Membership in the partial localizations `k[x,y]_{f,S}` (denominators built
//! from `f` and polynomials in `x`) and `k[x,y]_{f,T}` (same with `y`), and
//! the check that their intersection is `k[x,y]_f`.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::poly::univariate::{irreducible_over_q, is_irreducible_fp, Dense, Irreducibility};
use crate::poly::{parse_poly_at, MonomialOrder, Polynomial, Ring};
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Denominators: powers of `f` times nonzero polynomials in `x`.
    S,
    /// Denominators: powers of `f` times nonzero polynomials in `y`.
    T,
    /// Denominators: powers of `f` only.
    FOnly,
}

/// A reduced fraction in `k(x, y)` whose denominator is given as a product
/// of irreducible factors with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredFraction {
    numerator: Polynomial,
    factors: Vec<(Polynomial, u32)>,
}

impl FactoredFraction {
    /// Validates the factorization: factors are nonconstant, pairwise
    /// non-associate, irreducible as far as can be certified, and none
    /// divides the numerator.
    pub fn new(numerator: Polynomial, factors: Vec<(Polynomial, u32)>) -> Result<FactoredFraction> {
        let ring = numerator.ring().clone();
        if ring.nvars() != 2 {
            return Err(Error::usage(format!(
                "fractions live in k(x, y), got ring {ring}"
            )));
        }
        let mut normalized: Vec<(Polynomial, u32)> = Vec::with_capacity(factors.len());
        for (h, k) in factors {
            ring.ensure_same(h.ring())?;
            if k == 0 {
                continue;
            }
            if h.is_constant() {
                return Err(Error::usage(format!("denominator factor {h} is constant")));
            }
            let h = h.monic(MonomialOrder::GrevLex);
            if normalized.iter().any(|(g, _)| *g == h) {
                return Err(Error::usage(format!(
                    "denominator factor {h} is listed twice (up to a unit)"
                )));
            }
            check_irreducible(&h)?;
            normalized.push((h, k));
        }
        if numerator.is_zero() && !normalized.is_empty() {
            return Err(Error::usage("zero fraction must have denominator 1"));
        }
        for (h, _) in &normalized {
            if !numerator.is_zero() && numerator.exact_div(h)?.is_some() {
                return Err(Error::usage(format!(
                    "fraction is not reduced: {h} divides the numerator {numerator}"
                )));
            }
        }
        Ok(FactoredFraction {
            numerator,
            factors: normalized,
        })
    }

    /// Parses `numerator / [h1]^k1 [h2] ...`; a bare numerator has denominator 1.
    pub fn parse(ring: &Ring, text: &str) -> Result<FactoredFraction> {
        FactoredFraction::parse_at(ring, text, 1, 1)
    }

    pub fn parse_at(
        ring: &Ring,
        text: &str,
        line: usize,
        column: usize,
    ) -> Result<FactoredFraction> {
        let Some(open) = text.find('[') else {
            return FactoredFraction::new(parse_poly_at(ring, text, line, column)?, Vec::new());
        };
        let head = text[..open].trim_end();
        let numer_text = head.strip_suffix('/').ok_or_else(|| Error::Parse {
            line,
            column: column + open,
            message: "expected `/` before the factored denominator".into(),
        })?;
        let numerator = parse_poly_at(ring, numer_text, line, column)?;
        let mut factors = Vec::new();
        let mut rest = &text[open..];
        let mut offset = open;
        loop {
            let trimmed = rest.trim_start();
            offset += rest.len() - trimmed.len();
            rest = trimmed;
            if rest.is_empty() {
                break;
            }
            let perr = |at: usize, message: &str| Error::Parse {
                line,
                column: column + at,
                message: message.into(),
            };
            if !rest.starts_with('[') {
                return Err(perr(offset, "expected `[factor]`"));
            }
            let close = rest.find(']').ok_or_else(|| perr(offset, "unclosed `[`"))?;
            let h = parse_poly_at(ring, &rest[1..close], line, column + offset + 1)?;
            let mut consumed = close + 1;
            let mut mult = 1;
            if rest[consumed..].starts_with('^') {
                let digits: String = rest[consumed + 1..]
                    .chars()
                    .take_while(char::is_ascii_digit)
                    .collect();
                mult = digits
                    .parse()
                    .map_err(|_| perr(offset + consumed + 1, "expected a multiplicity"))?;
                consumed += 1 + digits.len();
            }
            factors.push((h, mult));
            rest = &rest[consumed..];
            offset += consumed;
        }
        FactoredFraction::new(numerator, factors)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn factors(&self) -> &[(Polynomial, u32)] {
        &self.factors
    }

    /// Product with a fraction whose factors are disjoint from these.
    pub fn mul_disjoint(&self, other: &FactoredFraction) -> Result<FactoredFraction> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FactoredFraction::new(&self.numerator * &other.numerator, factors)
    }
}

impl fmt::Display for FactoredFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.numerator)?;
        if self.factors.is_empty() {
            return Ok(());
        }
        let den = self
            .factors
            .iter()
            .map(|(h, k)| {
                if *k == 1 {
                    format!("[{h}]")
                } else {
                    format!("[{h}]^{k}")
                }
            })
            .join(" ");
        write!(f, " / {den}")
    }
}

fn univariate_var(h: &Polynomial) -> Option<usize> {
    match h.vars_used().as_slice() {
        [v] => Some(*v),
        _ => None,
    }
}

fn check_irreducible(h: &Polynomial) -> Result<()> {
    if let Some(v) = univariate_var(h) {
        let d = Dense::from_poly(h, v)?;
        let verdict = match h.ring().field() {
            Field::Prime(_) => {
                if is_irreducible_fp(&d)? {
                    Irreducibility::Irreducible
                } else {
                    Irreducibility::Reducible
                }
            }
            Field::Rationals => irreducible_over_q(&d)?,
        };
        return match verdict {
            Irreducibility::Irreducible => Ok(()),
            Irreducibility::Reducible => {
                Err(Error::usage(format!("denominator factor {h} is reducible")))
            }
            Irreducibility::Unknown => Err(Error::usage(format!(
                "cannot certify that {h} is irreducible"
            ))),
        };
    }
    // A genuinely bivariate factor must be primitive in each variable,
    // otherwise a univariate content splits off.
    for v in 0..2 {
        let other = 1 - v;
        let coeffs = h.coefficients_in(v);
        let mut content: Option<Dense> = None;
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            let d = Dense::from_poly(c, other)?;
            content = Some(match content {
                None => d.monic(),
                Some(g) => g.gcd(&d),
            });
        }
        if content.is_some_and(|g| g.degree().unwrap_or(0) > 0) {
            return Err(Error::usage(format!(
                "denominator factor {h} is reducible: it has a content in {}",
                h.ring().vars()[other]
            )));
        }
    }
    Ok(())
}

/// Whether `g` lies in the partial localization of `k[x, y]` at `f` on the given side.
pub fn member_partial_localization(
    g: &FactoredFraction,
    f: &Polynomial,
    side: Side,
) -> Result<bool> {
    g.numerator.ring().ensure_same(f.ring())?;
    if f.is_zero() {
        return Err(Error::usage("f must be nonzero"));
    }
    for (h, _) in &g.factors {
        let divides_f = f.exact_div(h)?.is_some();
        let allowed = match side {
            Side::S => divides_f || univariate_var(h) == Some(0),
            Side::T => divides_f || univariate_var(h) == Some(1),
            Side::FOnly => divides_f,
        };
        if !allowed {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleVerdict {
    pub fraction: String,
    pub in_s: bool,
    pub in_t: bool,
    pub in_f: bool,
}

impl SampleVerdict {
    pub fn consistent(&self) -> bool {
        (self.in_s && self.in_t) == self.in_f
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionReport {
    pub f: String,
    pub samples: Vec<SampleVerdict>,
}

impl IntersectionReport {
    /// Samples where membership in both partial localizations differs from
    /// membership in `k[x, y]_f`.
    pub fn violations(&self) -> Vec<&SampleVerdict> {
        self.samples.iter().filter(|s| !s.consistent()).collect()
    }

    pub fn holds(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Classifies each sample and checks `S`- and `T`-membership together agree with `f`-membership.
pub fn intersection_is_fraction_ring(
    f: &Polynomial,
    samples: &[FactoredFraction],
) -> Result<IntersectionReport> {
    let mut out = Vec::with_capacity(samples.len());
    for g in samples {
        out.push(SampleVerdict {
            fraction: g.to_string(),
            in_s: member_partial_localization(g, f, Side::S)?,
            in_t: member_partial_localization(g, f, Side::T)?,
            in_f: member_partial_localization(g, f, Side::FOnly)?,
        });
    }
    Ok(IntersectionReport {
        f: f.to_string(),
        samples: out,
    })
}

/// The fixed sample set `1/(x-1), 1/(y-1), 1/x, (x+y)/x^2, 1/(x(y-1))`.
pub fn standard_samples(ring: &Ring) -> Result<Vec<FactoredFraction>> {
    [
        "1 / [x - 1]",
        "1 / [y - 1]",
        "1 / [x]",
        "x + y / [x]^2",
        "1 / [x] [y - 1]",
    ]
    .iter()
    .map(|t| FactoredFraction::parse(ring, t))
    .collect()
}
