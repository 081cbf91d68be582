use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Ring};
use crate::scalar::Scalar;

/// Sparse polynomial: a map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Polynomial {
        Polynomial::constant(ring, ring.one())
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Polynomial {
        Polynomial::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_i64(ring: &Ring, n: i64) -> Polynomial {
        Polynomial::constant(ring, ring.field().from_i64(n))
    }

    pub fn var(ring: &Ring, index: usize) -> Polynomial {
        Polynomial::term(ring, Monomial::var(ring.nvars(), index, 1), ring.one())
    }

    pub fn term(ring: &Ring, m: Monomial, c: Scalar) -> Polynomial {
        debug_assert_eq!(m.nvars(), ring.nvars());
        debug_assert_eq!(c.field(), ring.field());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, summing duplicates.
    pub fn from_terms(
        ring: &Ring,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Polynomial {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(self.ring.zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (lexicographic exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Terms sorted descending in the given order.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|t| t.0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponents()[var]).max()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponents()[var] > 0)
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&v| self.uses_var(v))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient in `order`. Zero stays zero.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self * other)
    }

    /// Exact division: `Some(q)` with `self = q * divisor`, or `None` when not divisible.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Option<Polynomial>> {
        self.ring.ensure_same(&divisor.ring)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = MonomialOrder::Lex;
        let (dm, dc) = divisor.leading_term(order).unwrap();
        let (dm, dc_inv) = (dm.clone(), dc.inv()?);
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term(order) {
            let Some(shift) = m.div(&dm) else {
                return Ok(None);
            };
            let c = c * &dc_inv;
            rem = &rem - &divisor.mul_monomial(&shift, &c);
            quot.add_term(shift, &c);
        }
        Ok(Some(quot))
    }

    /// Coefficients with respect to `var`: entry `i` is the coefficient of `var^i`,
    /// a polynomial in the same ring not involving `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Polynomial::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.exponents().to_vec();
            let k = e[var] as usize;
            e[var] = 0;
            out[k].add_term(Monomial::from_exponents(e), c);
        }
        out
    }

    /// Ring homomorphism `x_i -> images[i]`; coefficients are kept (fields must agree).
    pub fn substitute(&self, images: &[Polynomial], target: &Ring) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::usage(format!(
                "substitution needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        if target.field() != self.ring.field() {
            return Err(Error::usage("substitution across different fields"));
        }
        for img in images {
            target.ensure_same(&img.ring)?;
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(target)]; images.len()];
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Moves the polynomial into `target`, where variable `j` of `self` becomes
    /// variable `mapping[j]` of `target`.
    pub fn embed(&self, target: &Ring, mapping: &[usize]) -> Polynomial {
        debug_assert_eq!(mapping.len(), self.ring.nvars());
        debug_assert_eq!(target.field(), self.ring.field());
        let n = target.nvars();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; n];
            for (j, &k) in mapping.iter().enumerate() {
                e[k] += m.exponents()[j];
            }
            (Monomial::from_exponents(e), c.clone())
        });
        Polynomial::from_terms(target, terms)
    }

    /// Inverse of [`Polynomial::embed`]: fails if a dropped variable occurs.
    pub fn restrict(&self, target: &Ring, mapping: &[usize]) -> Option<Polynomial> {
        let mut keep = vec![false; self.ring.nvars()];
        for &k in mapping {
            keep[k] = true;
        }
        if (0..self.ring.nvars()).any(|v| !keep[v] && self.uses_var(v)) {
            return None;
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let e = mapping.iter().map(|&k| m.exponents()[k]).collect();
            (Monomial::from_exponents(e), c.clone())
        });
        Some(Polynomial::from_terms(target, terms))
    }

    /// Evaluates at a point of `k^n`.
    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        debug_assert_eq!(point.len(), self.ring.nvars());
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Replaces the ring descriptor by an equal-shaped one (same field and arity).
    pub(crate) fn with_ring(mut self, ring: &Ring) -> Polynomial {
        debug_assert_eq!(ring.nvars(), self.ring.nvars());
        self.ring = ring.clone();
        self
    }
}

fn combine(a: &Polynomial, b: &Polynomial, negate: bool) -> Polynomial {
    assert!(a.ring == b.ring, "ring mismatch: {} vs {}", a.ring, b.ring);
    let mut out = a.clone();
    for (m, c) in &b.terms {
        if negate {
            out.add_term(m.clone(), &-c);
        } else {
            out.add_term(m.clone(), c);
        }
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert!(
            self.ring == rhs.ring,
            "ring mismatch: {} vs {}",
            self.ring,
            rhs.ring
        );
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for Polynomial {
    /// Terms descending in grevlex, e.g. `x^2*y - 3/4*z + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self
            .sorted_terms(MonomialOrder::GrevLex)
            .into_iter()
            .enumerate()
        {
            let (neg, abs) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                m.fmt_with(self.ring.vars(), f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.ring)
    }
}
