//! Dense univariate polynomials over a field, for point counts and
//! irreducibility checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Ring};
use crate::scalar::{Field, Rational, Scalar};

/// Coefficients in ascending degree with no trailing zeros; the zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    pub field: Field,
    pub coeffs: Vec<Scalar>,
}

impl Dense {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Dense {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Dense { field, coeffs }
    }

    /// Views a polynomial that only involves `var` as a dense polynomial.
    pub fn from_poly(p: &Polynomial, var: usize) -> Result<Dense> {
        let field = p.ring().field();
        if p.vars_used().iter().any(|&v| v != var) {
            return Err(Error::usage(format!(
                "{p} is not univariate in {}",
                p.ring().vars()[var]
            )));
        }
        let deg = p.degree_in(var).unwrap_or(0) as usize;
        let mut coeffs = vec![field.zero(); deg + 1];
        for (m, c) in p.terms() {
            coeffs[m.exponents()[var] as usize] = c.clone();
        }
        Ok(Dense::new(field, coeffs))
    }

    pub fn to_poly(&self, ring: &Ring, var: usize) -> Polynomial {
        let n = ring.nvars();
        Polynomial::from_terms(
            ring,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, var, i as u32), c.clone())),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Dense {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero lead");
                Dense::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Remainder of division by nonzero `d`.
    pub fn rem(&self, d: &Dense) -> Dense {
        let dl = d
            .lead()
            .expect("division by zero polynomial")
            .inv()
            .expect("nonzero lead");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = &r[top] * &dl;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let idx = top - dd + i;
                    r[idx] = &r[idx] - &(&c * dc);
                }
            }
            r.pop();
            while r.last().is_some_and(Scalar::is_zero) {
                r.pop();
            }
        }
        Dense::new(self.field, r)
    }

    pub fn gcd(&self, other: &Dense) -> Dense {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }
}

/// All monic polynomials of degree `d` over a finite field, in a fixed order.
pub fn monic_polys(field: Field, d: usize) -> Result<Vec<Dense>> {
    let elems = field
        .elements()
        .ok_or_else(|| Error::usage("enumeration needs a finite field"))?;
    let q = elems.len();
    let total = q
        .checked_pow(d as u32)
        .ok_or_else(|| Error::bound("monic_polys", "too many polynomials"))?;
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push(elems[idx % q].clone());
            idx /= q;
        }
        coeffs.push(field.one());
        out.push(Dense::new(field, coeffs));
    }
    Ok(out)
}

/// Irreducibility over `F_p` by trial division with all monic polynomials of
/// degree at most half the degree.
pub fn is_irreducible_fp(f: &Dense) -> Result<bool> {
    let Some(deg) = f.degree() else {
        return Ok(false);
    };
    if deg == 0 {
        return Ok(false);
    }
    for d in 1..=deg / 2 {
        for g in monic_polys(f.field, d)? {
            if f.rem(&g).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Monic irreducible polynomials over `F_p` of degree `1..=max_degree`.
pub fn monic_irreducibles(field: Field, max_degree: usize) -> Result<Vec<Dense>> {
    let mut out = Vec::new();
    for d in 1..=max_degree {
        for f in monic_polys(field, d)? {
            if is_irreducible_fp(&f)? {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// Outcome of an irreducibility check over `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    /// Degree at least 4 with no certificate found.
    Unknown,
}

/// Irreducibility over `Q`: rational-root test up to degree 3, otherwise a
/// certificate that the reduction modulo a small prime is irreducible.
pub fn irreducible_over_q(f: &Dense) -> Result<Irreducibility> {
    if f.field != Field::Rationals {
        return Err(Error::usage("expected a polynomial over Q"));
    }
    let Some(deg) = f.degree() else {
        return Ok(Irreducibility::Reducible);
    };
    if deg == 0 {
        return Ok(Irreducibility::Reducible);
    }
    if deg == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    let ints = primitive_integer_coeffs(f);
    if has_rational_root(&ints) {
        return Ok(Irreducibility::Reducible);
    }
    if deg <= 3 {
        return Ok(Irreducibility::Irreducible);
    }
    let lead = ints.last().unwrap().clone();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if (&lead % BigInt::from(p)).is_zero() {
            continue;
        }
        let field = Field::Prime(p);
        let reduced = Dense::new(field, ints.iter().map(|c| field.from_bigint(c)).collect());
        if is_irreducible_fp(&reduced)? {
            return Ok(Irreducibility::Irreducible);
        }
    }
    Ok(Irreducibility::Unknown)
}

/// Integer coefficients with gcd 1 and positive leading coefficient.
fn primitive_integer_coeffs(f: &Dense) -> Vec<BigInt> {
    let rats: Vec<&Rational> = f
        .coeffs
        .iter()
        .map(|c| c.as_rational().expect("rational"))
        .collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut ints: Vec<BigInt> = rats
        .iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() {
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    ints
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

fn has_rational_root(ints: &[BigInt]) -> bool {
    if ints[0].is_zero() {
        return true;
    }
    let lead = ints.last().unwrap();
    for p in divisors(&ints[0]) {
        for q in divisors(lead) {
            for sign in [1i32, -1] {
                // evaluate q^d f(p/q) = Σ c_i p^i q^(d-i)
                let d = ints.len() - 1;
                let pp = &p * BigInt::from(sign);
                let mut acc = BigInt::zero();
                for (i, c) in ints.iter().enumerate() {
                    acc += c * num_traits::pow(pp.clone(), i) * num_traits::pow(q.clone(), d - i);
                }
                if acc.is_zero() {
                    return true;
                }
            }
        }
    }
    false
}
