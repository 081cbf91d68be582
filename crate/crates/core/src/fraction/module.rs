use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::ideal::{CoordinateRing, Engine, Ideal};
use crate::poly::Polynomial;

/// Rank-one projective module over a coordinate ring, realized as a
/// fractional ideal `N / d` with `N` an ideal and `d` a nonzero element.
///
/// Invertibility is witnessed by a nonzerodivisor `n0 ∈ N` and the ideal
/// `Q = (n0) : N`, which satisfy `N·Q = (n0)` modulo the relations, so that
/// `(d / n0)·Q` is the inverse module.
#[derive(Clone, Debug)]
pub struct InvertibleModule {
    base: CoordinateRing,
    numerator: Vec<Polynomial>,
    denominator: Polynomial,
    generator: Option<Polynomial>,
    witness: Polynomial,
    inverse: Vec<Polynomial>,
}

impl InvertibleModule {
    /// The module `R` itself.
    pub fn trivial(base: &CoordinateRing) -> InvertibleModule {
        let one = Polynomial::one(base.ring());
        InvertibleModule {
            base: base.clone(),
            numerator: vec![one.clone()],
            denominator: one.clone(),
            generator: Some(one.clone()),
            witness: one.clone(),
            inverse: vec![one],
        }
    }

    /// `(g) / d` for a nonzerodivisor `g`: free with generator `g / d`.
    pub fn principal(
        eng: &Engine,
        base: &CoordinateRing,
        g: &Polynomial,
        d: &Polynomial,
    ) -> Result<InvertibleModule> {
        InvertibleModule::fractional(eng, base, std::slice::from_ref(g), d)
    }

    /// The fractional ideal `(gens) / d`, checked to be invertible.
    pub fn fractional(
        eng: &Engine,
        base: &CoordinateRing,
        gens: &[Polynomial],
        d: &Polynomial,
    ) -> Result<InvertibleModule> {
        for g in gens.iter().chain([d]) {
            base.ring().ensure_same(g.ring())?;
        }
        if base.is_zero(eng, d)? {
            return Err(Error::usage(
                "denominator of a fractional ideal must be nonzero",
            ));
        }
        let mut numerator = Vec::new();
        for g in gens {
            let r = base.reduce(eng, g)?;
            if !r.is_zero() {
                numerator.push(r);
            }
        }
        let mut witness = None;
        for g in &numerator {
            if base.is_nonzerodivisor(eng, g)? {
                witness = Some(g.clone());
                break;
            }
        }
        let Some(witness) = witness else {
            return Err(Error::usage(
                "fractional ideal has no nonzerodivisor generator",
            ));
        };
        let n_ideal = base.lift(&numerator)?;
        let generator = numerator.iter().find(|g| {
            base.lift(std::slice::from_ref(*g))
                .and_then(|i| i.same_ideal(eng, &n_ideal))
                .unwrap_or(false)
        }).cloned();
        let inverse = match &generator {
            Some(g) if *g == witness => vec![Polynomial::one(base.ring())],
            _ => {
                let colon = base
                    .lift(std::slice::from_ref(&witness))?
                    .quotient(eng, &n_ideal)?;
                let mut q = Vec::new();
                for g in colon.reduced(eng)?.generators() {
                    let r = base.reduce(eng, g)?;
                    if !r.is_zero() {
                        q.push(r);
                    }
                }
                q
            }
        };
        let module = InvertibleModule {
            base: base.clone(),
            numerator,
            denominator: base.reduce(eng, d)?,
            generator,
            witness,
            inverse,
        };
        if !module.check_invertible(eng)? {
            return Err(Error::usage("fractional ideal is not invertible"));
        }
        Ok(module)
    }

    /// `N·Q + J == (n0) + J`.
    pub fn check_invertible(&self, eng: &Engine) -> Result<bool> {
        let mut prod = Vec::new();
        for a in &self.numerator {
            for b in &self.inverse {
                prod.push(a * b);
            }
        }
        self.base
            .same_ideal(eng, &prod, std::slice::from_ref(&self.witness))
    }

    pub fn base(&self) -> &CoordinateRing {
        &self.base
    }

    pub fn numerator(&self) -> &[Polynomial] {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// Numerator of a generator when the module is free.
    pub fn generator(&self) -> Option<&Polynomial> {
        self.generator.as_ref()
    }

    pub fn is_free(&self) -> bool {
        self.generator.is_some()
    }

    /// True for `R` itself presented as `(1) / 1` (up to units).
    pub fn is_unit_ideal(&self) -> bool {
        self.generator.as_ref().is_some_and(|g| g.is_constant())
    }

    pub fn witness(&self) -> &Polynomial {
        &self.witness
    }

    /// Generators of `Q = (n0) : N`.
    pub fn inverse_numerator(&self) -> &[Polynomial] {
        &self.inverse
    }

    /// Whether the fraction `p / denominator` lies in the module.
    pub fn contains_numerator(&self, eng: &Engine, p: &Polynomial) -> Result<bool> {
        self.base.lift(&self.numerator)?.contains(eng, p)
    }

    /// Fractional-ideal product. The result is invertible by construction.
    pub fn tensor(&self, other: &InvertibleModule, eng: &Engine) -> Result<InvertibleModule> {
        self.base.ring().ensure_same(other.base.ring())?;
        let red = |p: Polynomial| self.base.reduce(eng, &p);
        let numerator = products(&self.numerator, &other.numerator)
            .into_iter()
            .map(red)
            .collect::<Result<Vec<_>>>()?;
        let inverse = products(&self.inverse, &other.inverse)
            .into_iter()
            .map(red)
            .collect::<Result<Vec<_>>>()?;
        let generator = match (&self.generator, &other.generator) {
            (Some(a), Some(b)) => Some(red(a * b)?),
            _ => None,
        };
        Ok(InvertibleModule {
            base: self.base.clone(),
            numerator: dedup(numerator),
            denominator: red(&self.denominator * &other.denominator)?,
            generator,
            witness: red(&self.witness * &other.witness)?,
            inverse: dedup(inverse),
        })
    }

    pub fn power(&self, k: u32, eng: &Engine) -> Result<InvertibleModule> {
        let mut acc = InvertibleModule::trivial(&self.base);
        if k == 0 {
            return Ok(acc);
        }
        let numerator = symmetric_products(&self.numerator, k);
        let inverse = symmetric_products(&self.inverse, k);
        let red = |p: Polynomial| self.base.reduce(eng, &p);
        acc.numerator = dedup(numerator.into_iter().map(red).collect::<Result<_>>()?);
        acc.inverse = dedup(inverse.into_iter().map(red).collect::<Result<_>>()?);
        acc.denominator = red(self.denominator.pow(k))?;
        acc.witness = red(self.witness.pow(k))?;
        acc.generator = match &self.generator {
            Some(g) => Some(red(g.pow(k))?),
            None => None,
        };
        Ok(acc)
    }
}

impl fmt::Display for InvertibleModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.numerator.iter().join(", "))?;
        if !self.denominator.is_one() {
            write!(f, " / ({})", self.denominator)?;
        }
        Ok(())
    }
}

fn products(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    a.iter().cartesian_product(b).map(|(x, y)| x * y).collect()
}

/// Generators of `(gens)^k`: all degree-`k` products with repetition.
fn symmetric_products(gens: &[Polynomial], k: u32) -> Vec<Polynomial> {
    gens.iter()
        .combinations_with_replacement(k as usize)
        .map(|combo| {
            combo
                .into_iter()
                .fold(None, |acc: Option<Polynomial>, g| {
                    Some(acc.map_or_else(|| g.clone(), |a| &a * g))
                })
                .unwrap()
        })
        .collect()
}

fn dedup(mut v: Vec<Polynomial>) -> Vec<Polynomial> {
    v.retain(|p| !p.is_zero());
    let mut out: Vec<Polynomial> = Vec::with_capacity(v.len());
    for p in v {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// A section `σ / d` of an invertible module, named by a label.
#[derive(Clone, Debug)]
pub struct SectionPair {
    label: String,
    section: Polynomial,
    module: InvertibleModule,
}

impl SectionPair {
    /// Checks that the numerator `σ` lies in the numerator ideal.
    pub fn new(
        eng: &Engine,
        label: impl Into<String>,
        section: Polynomial,
        module: InvertibleModule,
    ) -> Result<SectionPair> {
        module.base.ring().ensure_same(section.ring())?;
        if !module.contains_numerator(eng, &section)? {
            return Err(Error::usage(format!(
                "section {section} is not an element of the module {module}"
            )));
        }
        let section = module.base.reduce(eng, &section)?;
        Ok(SectionPair {
            label: label.into(),
            section,
            module,
        })
    }

    /// A section of the trivial module, i.e. an element of the ring.
    pub fn free(
        eng: &Engine,
        base: &CoordinateRing,
        label: impl Into<String>,
        section: Polynomial,
    ) -> Result<SectionPair> {
        SectionPair::new(eng, label, section, InvertibleModule::trivial(base))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Numerator `σ` of the section.
    pub fn section(&self) -> &Polynomial {
        &self.section
    }

    pub fn module(&self) -> &InvertibleModule {
        &self.module
    }

    /// Generators `σ·q / n0` (q over the inverse numerator) of the ideal
    /// `s·L^{-1} ⊆ R`, whose zero locus is where the section vanishes.
    pub fn vanishing_generators(&self, eng: &Engine) -> Result<Vec<Polynomial>> {
        let base = &self.module.base;
        let mut out = Vec::new();
        for q in &self.module.inverse {
            let t = base
                .exact_div(eng, &(&self.section * q), &self.module.witness)?
                .ok_or_else(|| {
                    Error::Verification("section times inverse not divisible by witness".into())
                })?;
            out.push(t);
        }
        Ok(out)
    }

    pub fn vanishing_ideal(&self, eng: &Engine) -> Result<Ideal> {
        self.module.base.lift(&self.vanishing_generators(eng)?)
    }

    /// True when the section is nowhere vanishing on `R/I`, i.e. `1 ∈ I + s·L^{-1}`.
    pub fn is_unit_modulo(&self, eng: &Engine, ideal: &Ideal) -> Result<bool> {
        ideal.with(&self.vanishing_generators(eng)?)?.is_unit(eng)
    }
}

/// Sparse vector of non-negative exponents indexed by section position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiExponent(BTreeMap<usize, u32>);

impl MultiExponent {
    pub fn zero() -> MultiExponent {
        MultiExponent::default()
    }

    pub fn unit(index: usize) -> MultiExponent {
        MultiExponent::single(index, 1)
    }

    pub fn single(index: usize, k: u32) -> MultiExponent {
        let mut m = MultiExponent::zero();
        m.set(index, k);
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> MultiExponent {
        let mut m = MultiExponent::zero();
        for (i, k) in pairs {
            m.set(i, m.get(i) + k);
        }
        m
    }

    pub fn get(&self, index: usize) -> u32 {
        self.0.get(&index).copied().unwrap_or(0)
    }

    pub fn set(&mut self, index: usize, k: u32) {
        if k == 0 {
            self.0.remove(&index);
        } else {
            self.0.insert(index, k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Nonzero entries in index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&i, &k)| (i, k))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn add(&self, other: &MultiExponent) -> MultiExponent {
        MultiExponent::from_pairs(self.iter().chain(other.iter()))
    }

    /// Componentwise maximum.
    pub fn sup(&self, other: &MultiExponent) -> MultiExponent {
        let mut out = self.clone();
        for (i, k) in other.iter() {
            out.set(i, out.get(i).max(k));
        }
        out
    }

    /// Componentwise order.
    pub fn le(&self, other: &MultiExponent) -> bool {
        self.iter().all(|(i, k)| k <= other.get(i))
    }

    /// `other - self`, defined when `self ≤ other`.
    pub fn gap_to(&self, other: &MultiExponent) -> Option<MultiExponent> {
        if !self.le(other) {
            return None;
        }
        Some(MultiExponent::from_pairs(
            other.iter().map(|(i, k)| (i, k - self.get(i))),
        ))
    }
}

impl fmt::Display for MultiExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(
            f,
            "{}",
            self.iter().map(|(i, k)| format!("{i}:{k}")).join(",")
        )
    }
}
