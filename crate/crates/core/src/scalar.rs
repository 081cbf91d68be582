//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! Every [`Scalar`] knows which field it lives in, so mixing elements of
//! different fields is detected. The `try_*` methods report that as a usage
//! error; the operator impls treat it as a bug and panic, which is what the
//! polynomial layer relies on after it has checked ring descriptors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported prime modulus; products of two residues fit in `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p > MAX_PRIME {
            return Err(Error::usage(format!("modulus {p} too large")));
        }
        if !is_prime(p) {
            return Err(Error::usage(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(Rational::from_integer(n)),
            Field::Prime(p) => {
                Scalar::Prime(PrimeFieldElement::new(n.rem_euclid(*p as i64) as u64, *p))
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(Rational(BigRational::from_integer(n.clone()))),
            Field::Prime(p) => {
                let r = n
                    .mod_floor(&BigInt::from(*p))
                    .to_u64()
                    .expect("residue fits");
                Scalar::Prime(PrimeFieldElement::new(r, *p))
            }
        }
    }

    /// Maps a rational into this field. Fails in `F_p` when `p` divides the denominator.
    pub fn from_rational(&self, q: &Rational) -> Result<Scalar> {
        match self {
            Field::Rationals => Ok(Scalar::Rational(q.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(q.0.numer());
                let den = self.from_bigint(q.0.denom());
                num.try_div(&den)
            }
        }
    }

    /// All elements of a finite field in the order `0, 1, ..., p-1`.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(
                (0..*p)
                    .map(|v| Scalar::Prime(PrimeFieldElement::new(v, *p)))
                    .collect(),
            ),
        }
    }

    /// Parses `-3/7`, `12` or (prime fields only) `p:k`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        if let Some((p, k)) = text.split_once(':') {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::usage(format!("bad modulus in `{text}`")))?;
            let k: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::usage(format!("bad residue in `{text}`")))?;
            return match self {
                Field::Prime(q) if *q == p => Ok(self.from_i64(k)),
                _ => Err(Error::usage(format!(
                    "literal `{text}` does not belong to {self}"
                ))),
            };
        }
        let q: Rational = text.parse()?;
        self.from_rational(&q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// `Q` or `F<p>` with `p` prime, e.g. `F3`.
    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rationals);
        }
        match s.strip_prefix('F').map(str::parse::<u64>) {
            Some(Ok(p)) => Field::prime(p),
            _ => Err(Error::usage(format!(
                "unknown field `{s}`, expected Q or F<p>"
            ))),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Rational> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn from_integer(n: i64) -> Rational {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational> {
        let cleaned = s.trim().replace('\u{2212}', "-");
        let bad = || Error::usage(format!("invalid rational `{s}`"));
        let (n, d) = match cleaned.split_once('/') {
            Some((n, d)) => (n.trim().to_string(), d.trim().to_string()),
            None => (cleaned.clone(), "1".to_string()),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        Rational::new(n, d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeFieldElement {
    value: u64,
    modulus: u64,
}

impl PrimeFieldElement {
    fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        PrimeFieldElement { value, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let p = self.modulus;
        let (mut base, mut exp, mut acc) = (self.value, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Some(PrimeFieldElement::new(acc, p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(Rational),
    Prime(PrimeFieldElement),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Prime(e) => Field::Prime(e.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.0.is_zero(),
            Scalar::Prime(e) => e.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.0.is_one(),
            Scalar::Prime(e) => e.value == 1,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "mixed-field operands: {} and {}",
                self.field(),
                other.field()
            )))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self * other)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rational(q) => {
                if q.0.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(Rational(q.0.recip())))
                }
            }
            Scalar::Prime(e) => e.inv().map(Scalar::Prime).ok_or(Error::DivisionByZero),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Prime(_) => None,
        }
    }

    /// True when the textual form needs no sign or parentheses in a product.
    pub(crate) fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.0.is_negative(),
            Scalar::Prime(_) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Prime(e) => write!(f, "{}", e.value),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!(
        "mixed-field scalar arithmetic: {} vs {}",
        a.field(),
        b.field()
    )
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(Rational(&a.0 + &b.0)),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.modulus == b.modulus => Scalar::Prime(
                PrimeFieldElement::new((a.value + b.value) % a.modulus, a.modulus),
            ),
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(Rational(&a.0 - &b.0)),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.modulus == b.modulus => Scalar::Prime(
                PrimeFieldElement::new((a.value + a.modulus - b.value) % a.modulus, a.modulus),
            ),
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(Rational(&a.0 * &b.0)),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.modulus == b.modulus => Scalar::Prime(
                PrimeFieldElement::new(a.value * b.value % a.modulus, a.modulus),
            ),
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(Rational(-&a.0)),
            Scalar::Prime(a) => Scalar::Prime(PrimeFieldElement::new(
                (a.modulus - a.value) % a.modulus,
                a.modulus,
            )),
        }
    }
}
