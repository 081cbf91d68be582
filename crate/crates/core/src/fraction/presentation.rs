use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::fraction::{InvertibleModule, MultiExponent, SectionPair};
use crate::ideal::{CoordinateRing, Engine, Ideal, RingMap};
use crate::poly::{MonomialOrder, Polynomial, Ring};

/// The ring `R_U`: colimit of the tensor powers `L^a` along multiplication by
/// the sections, for a finite collection `U` of pairs `(s_α, L_α)`.
///
/// Nothing is presented globally; every query is answered by ideal
/// computations in `R`.
#[derive(Debug)]
pub struct FractionPresentation {
    base: CoordinateRing,
    pairs: Vec<SectionPair>,
    null: OnceLock<Ideal>,
}

impl Clone for FractionPresentation {
    fn clone(&self) -> Self {
        FractionPresentation {
            base: self.base.clone(),
            pairs: self.pairs.clone(),
            null: self.null.clone(),
        }
    }
}

/// `p / s^a` with `p` the numerator of an element of `L^a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionElement {
    numerator: Polynomial,
    exponent: MultiExponent,
}

impl FractionElement {
    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn exponent(&self) -> &MultiExponent {
        &self.exponent
    }
}

/// Outcome of asking whether a map `R -> A` extends to `R_U`.
#[derive(Clone, Debug)]
pub enum Factorization {
    Factors(FactoredMap),
    DoesNotFactor { failing: Vec<String> },
}

/// The unique extension `R_U -> A` of a map `φ: R -> A`.
#[derive(Clone, Debug)]
pub struct FactoredMap {
    presentation: FractionPresentation,
    phi: RingMap,
}

/// Contraction `I ⊆ R` of an ideal of `R_U` and the verdict on `R/I -> R_U/I_U`.
#[derive(Clone, Debug)]
pub struct Contraction {
    /// Contains the relations of the base ring.
    pub ideal: Ideal,
    /// Labels of sections that are not units modulo `I`.
    pub failing: Vec<String>,
}

impl Contraction {
    pub fn is_isomorphism(&self) -> bool {
        self.failing.is_empty()
    }
}

impl FractionPresentation {
    pub fn new(base: &CoordinateRing, pairs: Vec<SectionPair>) -> Result<FractionPresentation> {
        for (i, p) in pairs.iter().enumerate() {
            base.ring().ensure_same(p.module().base().ring())?;
            if pairs[..i].iter().any(|q| q.label() == p.label()) {
                return Err(Error::usage(format!(
                    "duplicate section label `{}`",
                    p.label()
                )));
            }
        }
        Ok(FractionPresentation {
            base: base.clone(),
            pairs,
            null: OnceLock::new(),
        })
    }

    /// Inverts ring elements, each a section of the trivial module.
    pub fn free(
        eng: &Engine,
        base: &CoordinateRing,
        sections: &[(&str, Polynomial)],
    ) -> Result<FractionPresentation> {
        let pairs = sections
            .iter()
            .map(|(label, s)| SectionPair::free(eng, base, *label, s.clone()))
            .collect::<Result<Vec<_>>>()?;
        FractionPresentation::new(base, pairs)
    }

    pub fn base(&self) -> &CoordinateRing {
        &self.base
    }

    pub fn ring(&self) -> &Ring {
        self.base.ring()
    }

    pub fn pairs(&self) -> &[SectionPair] {
        &self.pairs
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.pairs.iter().position(|p| p.label() == label)
    }

    fn check_exponent(&self, a: &MultiExponent) -> Result<()> {
        match a.max_index() {
            Some(i) if i >= self.pairs.len() => Err(Error::usage(format!(
                "exponent refers to section {i}, which does not exist"
            ))),
            _ => Ok(()),
        }
    }

    /// `∏ σ_α^{a_α}`.
    pub fn section_power(&self, a: &MultiExponent) -> Polynomial {
        let mut acc = Polynomial::one(self.ring());
        for (i, k) in a.iter() {
            acc = &acc * &self.pairs[i].section().pow(k);
        }
        acc
    }

    /// `⊗ L_α^{a_α}` as a fractional ideal.
    pub fn tensor_power(&self, eng: &Engine, a: &MultiExponent) -> Result<InvertibleModule> {
        self.check_exponent(a)?;
        let mut acc = InvertibleModule::trivial(&self.base);
        for (i, k) in a.iter() {
            acc = acc.tensor(&self.pairs[i].module().power(k, eng)?, eng)?;
        }
        Ok(acc)
    }

    /// The element `p / s^a`; `p` must lie in the numerator ideal of `L^a`.
    pub fn element(
        &self,
        eng: &Engine,
        p: &Polynomial,
        a: &MultiExponent,
    ) -> Result<FractionElement> {
        self.ring().ensure_same(p.ring())?;
        self.check_exponent(a)?;
        let all_trivial = a
            .iter()
            .all(|(i, _)| self.pairs[i].module().is_unit_ideal());
        if !all_trivial && !self.tensor_power(eng, a)?.contains_numerator(eng, p)? {
            return Err(Error::usage(format!(
                "{p} is not in the numerator of L^({a})"
            )));
        }
        Ok(FractionElement {
            numerator: self.base.reduce(eng, p)?,
            exponent: a.clone(),
        })
    }

    /// The image of `p ∈ R`.
    pub fn from_base(&self, eng: &Engine, p: &Polynomial) -> Result<FractionElement> {
        self.element(eng, p, &MultiExponent::zero())
    }

    pub fn one(&self) -> FractionElement {
        FractionElement {
            numerator: Polynomial::one(self.ring()),
            exponent: MultiExponent::zero(),
        }
    }

    pub fn zero(&self) -> FractionElement {
        FractionElement {
            numerator: Polynomial::zero(self.ring()),
            exponent: MultiExponent::zero(),
        }
    }

    /// `s_α / s_α`, which equals one.
    pub fn section_ratio(&self, index: usize) -> FractionElement {
        FractionElement {
            numerator: self.pairs[index].section().clone(),
            exponent: MultiExponent::unit(index),
        }
    }

    /// Elements `a ∈ R` with `a·s^c = 0` for some `c`, i.e. `J : (∏ σ_α)^∞`.
    pub fn null_ideal(&self, eng: &Engine) -> Result<Ideal> {
        if let Some(n) = self.null.get() {
            return Ok(n.clone());
        }
        let all = MultiExponent::from_pairs((0..self.pairs.len()).map(|i| (i, 1)));
        let prod = self.base.reduce(eng, &self.section_power(&all))?;
        let null = if prod.is_zero() {
            Ideal::unit(self.ring())
        } else {
            self.base.relations().saturate(eng, &prod)?.reduced(eng)?
        };
        Ok(self.null.get_or_init(|| null).clone())
    }

    pub fn is_zero_ring(&self, eng: &Engine) -> Result<bool> {
        self.null_ideal(eng)?.is_unit(eng)
    }

    /// `p/s^a = q/s^b` iff `s^c (s^b p - s^a q) = 0` for some `c`.
    pub fn fraction_eq(
        &self,
        eng: &Engine,
        u: &FractionElement,
        v: &FractionElement,
    ) -> Result<bool> {
        let lhs = &u.numerator * &self.section_power(&v.exponent);
        let rhs = &v.numerator * &self.section_power(&u.exponent);
        self.null_ideal(eng)?.contains(eng, &(&lhs - &rhs))
    }

    fn lift_to(&self, u: &FractionElement, target: &MultiExponent) -> Polynomial {
        let gap = u
            .exponent
            .gap_to(target)
            .expect("target dominates exponent");
        &u.numerator * &self.section_power(&gap)
    }

    pub fn add(
        &self,
        eng: &Engine,
        u: &FractionElement,
        v: &FractionElement,
    ) -> Result<FractionElement> {
        let c = u.exponent.sup(&v.exponent);
        let p = &self.lift_to(u, &c) + &self.lift_to(v, &c);
        Ok(FractionElement {
            numerator: self.base.reduce(eng, &p)?,
            exponent: c,
        })
    }

    pub fn neg(&self, u: &FractionElement) -> FractionElement {
        FractionElement {
            numerator: -&u.numerator,
            exponent: u.exponent.clone(),
        }
    }

    pub fn sub(
        &self,
        eng: &Engine,
        u: &FractionElement,
        v: &FractionElement,
    ) -> Result<FractionElement> {
        self.add(eng, u, &self.neg(v))
    }

    pub fn mul(
        &self,
        eng: &Engine,
        u: &FractionElement,
        v: &FractionElement,
    ) -> Result<FractionElement> {
        let p = &u.numerator * &v.numerator;
        Ok(FractionElement {
            numerator: self.base.reduce(eng, &p)?,
            exponent: u.exponent.add(&v.exponent),
        })
    }

    /// Pairs `(t, u)` with `t` running over generators of `s^a·L^{-a} ⊆ R` and
    /// `u = t · (p / s^a) ∈ R`.
    fn clearing_pairs(
        &self,
        eng: &Engine,
        u: &FractionElement,
    ) -> Result<Vec<(Polynomial, Polynomial)>> {
        if u.exponent.is_zero() {
            return Ok(vec![(Polynomial::one(self.ring()), u.numerator.clone())]);
        }
        let module = self.tensor_power(eng, &u.exponent)?;
        let sigma = self.section_power(&u.exponent);
        let n0 = module.witness();
        let mut out = Vec::new();
        for q in module.inverse_numerator() {
            let t = self.exact(eng, &(&sigma * q), n0)?;
            let v = self.exact(eng, &(&u.numerator * q), n0)?;
            out.push((t, v));
        }
        Ok(out)
    }

    fn exact(&self, eng: &Engine, c: &Polynomial, d: &Polynomial) -> Result<Polynomial> {
        self.base.exact_div(eng, c, d)?.ok_or_else(|| {
            Error::Verification(format!("{c} is not divisible by {d} in {}", self.base))
        })
    }

    /// Factors `φ: R -> A` through `R -> R_U` when every section becomes
    /// nowhere vanishing on `A`; otherwise reports the sections that do not.
    pub fn universal_factorization(&self, eng: &Engine, phi: &RingMap) -> Result<Factorization> {
        self.ring().ensure_same(phi.source().ring())?;
        for rel in self.base.relations().generators() {
            if !phi.target().is_zero(eng, &phi.apply_raw(rel)?)? {
                return Err(Error::usage(format!(
                    "map is not well defined on {}: {rel} does not map to zero",
                    self.base
                )));
            }
        }
        let mut failing = Vec::new();
        for pair in &self.pairs {
            let gens = pair.vanishing_generators(eng)?;
            if !phi.extend(eng, &gens)?.is_unit(eng)? {
                failing.push(pair.label().to_string());
            }
        }
        if failing.is_empty() {
            Ok(Factorization::Factors(FactoredMap {
                presentation: self.clone(),
                phi: phi.clone(),
            }))
        } else {
            Ok(Factorization::DoesNotFactor { failing })
        }
    }

    /// Contraction to `R` of the ideal generated by `gens` in `R_U`, and
    /// whether `R/I -> R_U/I_U` is an isomorphism (every section a unit mod `I`).
    pub fn extend_contract(&self, eng: &Engine, gens: &[FractionElement]) -> Result<Contraction> {
        let mut cleared = Vec::new();
        for g in gens {
            cleared.extend(self.clearing_pairs(eng, g)?.into_iter().map(|(_, u)| u));
        }
        let mut ideal = self.base.lift(&cleared)?;
        for pair in &self.pairs {
            ideal = saturate_by_generators(eng, &ideal, &pair.vanishing_generators(eng)?)?;
        }
        let ideal = ideal.reduced(eng)?;
        let mut failing = Vec::new();
        for pair in &self.pairs {
            if !pair.is_unit_modulo(eng, &ideal)? {
                failing.push(pair.label().to_string());
            }
        }
        Ok(Contraction { ideal, failing })
    }

    /// The single pair `(⊗ s_α, ⊗ L_α)` over the listed labels; `R_{U_J}` is
    /// the fraction ring of that pair alone.
    pub fn finite_subset_reduce(&self, eng: &Engine, labels: &[&str]) -> Result<SectionPair> {
        let mut exponent = MultiExponent::zero();
        for l in labels {
            let i = self
                .index_of(l)
                .ok_or_else(|| Error::usage(format!("unknown section `{l}`")))?;
            exponent = exponent.add(&MultiExponent::unit(i));
        }
        let label = if labels.is_empty() {
            "1".to_string()
        } else {
            labels.join("*")
        };
        let module = self.tensor_power(eng, &exponent)?;
        SectionPair::new(eng, label, self.section_power(&exponent), module)
    }

    /// The pulled-back collection over the target of `φ`.
    pub fn base_change(&self, eng: &Engine, phi: &RingMap) -> Result<FractionPresentation> {
        self.ring().ensure_same(phi.source().ring())?;
        let target = phi.target();
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for pair in &self.pairs {
            let m = pair.module();
            let module = if m.is_unit_ideal() {
                InvertibleModule::trivial(target)
            } else {
                let gens = m
                    .numerator()
                    .iter()
                    .map(|g| phi.apply(eng, g))
                    .collect::<Result<Vec<_>>>()?;
                InvertibleModule::fractional(eng, target, &gens, &phi.apply(eng, m.denominator())?)?
            };
            pairs.push(SectionPair::new(
                eng,
                pair.label(),
                phi.apply(eng, pair.section())?,
                module,
            )?);
        }
        FractionPresentation::new(target, pairs)
    }

    /// Image of an element in the base-changed presentation.
    pub fn map_element(
        &self,
        eng: &Engine,
        phi: &RingMap,
        u: &FractionElement,
    ) -> Result<FractionElement> {
        Ok(FractionElement {
            numerator: phi.apply(eng, &u.numerator)?,
            exponent: u.exponent.clone(),
        })
    }

    /// For collections of ring elements only: the presentation
    /// `R[t_α] / (J, t_α σ_α - 1, p·t^a for each generator)` of `R_U / (gens)`.
    pub fn rabinowitsch_ideal(&self, gens: &[FractionElement]) -> Result<Ideal> {
        if let Some(p) = self.pairs.iter().find(|p| !p.module().is_unit_ideal()) {
            return Err(Error::usage(format!(
                "section `{}` is not a ring element",
                p.label()
            )));
        }
        let names: Vec<String> = (0..self.pairs.len()).map(|i| format!("t{i}")).collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let k = self.pairs.len();
        let big = self.ring().with_leading_vars(&name_refs);
        let mapping: Vec<usize> = (k..k + self.ring().nvars()).collect();
        let embed = |p: &Polynomial| p.embed(&big, &mapping);
        let mut out: Vec<Polynomial> = self
            .base
            .relations()
            .generators()
            .iter()
            .map(embed)
            .collect();
        for (i, pair) in self.pairs.iter().enumerate() {
            out.push(
                &(&Polynomial::var(&big, i) * &embed(pair.section())) - &Polynomial::one(&big),
            );
        }
        for g in gens {
            let mut t = embed(&g.numerator);
            for (i, e) in g.exponent.iter() {
                t = &t * &Polynomial::var(&big, i).pow(e);
            }
            out.push(t);
        }
        Ideal::new(&big, out)
    }

    pub fn display_element(&self, u: &FractionElement) -> String {
        if u.exponent.is_zero() {
            return u.numerator.to_string();
        }
        let den = u
            .exponent
            .iter()
            .map(|(i, k)| {
                let l = self.pairs[i].label();
                if k == 1 {
                    l.to_string()
                } else {
                    format!("{l}^{k}")
                }
            })
            .join("*");
        format!("({}) / {den}", u.numerator)
    }
}

/// `I : (t_1, ..., t_r)^∞ = ∩_j I : t_j^∞`.
fn saturate_by_generators(eng: &Engine, ideal: &Ideal, ts: &[Polynomial]) -> Result<Ideal> {
    let mut acc: Option<Ideal> = None;
    for t in ts {
        let s = if t.is_zero() {
            Ideal::unit(ideal.ring())
        } else {
            ideal.saturate(eng, t)?
        };
        acc = Some(match acc {
            None => s,
            Some(a) => a.intersect(eng, &s)?,
        });
    }
    Ok(acc.unwrap_or_else(|| Ideal::unit(ideal.ring())))
}

impl FactoredMap {
    pub fn map(&self) -> &RingMap {
        &self.phi
    }

    /// Image of `p / s^a`: the unique `w` with `φ(t)·w = φ(t·p/s^a)` for all
    /// generators `t` of `s^a·L^{-a}`, read off as the normal form of `z` in
    /// `A[z] / (φ(t)·z - φ(u))`.
    pub fn apply(&self, eng: &Engine, u: &FractionElement) -> Result<Polynomial> {
        if u.exponent.is_zero() {
            return self.phi.apply(eng, &u.numerator);
        }
        let target = self.phi.target();
        let ring = target.ring();
        let big = ring.with_leading_vars(&["z"]);
        let mapping: Vec<usize> = (1..=ring.nvars()).collect();
        let z = Polynomial::var(&big, 0);
        let mut gens: Vec<Polynomial> = target
            .relations()
            .generators()
            .iter()
            .map(|g| g.embed(&big, &mapping))
            .collect();
        for (t, v) in self.presentation.clearing_pairs(eng, u)? {
            let ti = self.phi.apply(eng, &t)?.embed(&big, &mapping);
            let vi = self.phi.apply(eng, &v)?.embed(&big, &mapping);
            gens.push(&(&ti * &z) - &vi);
        }
        let gb = eng.groebner(&big, &gens, MonomialOrder::Block(1))?;
        let w = gb
            .normal_form(&z)
            .restrict(ring, &mapping)
            .ok_or_else(|| Error::Verification("image of a fraction is not determined".into()))?;
        target.reduce(eng, &w)
    }

    /// Images of the generators `n / s_α` (n over the numerator ideal of `L_α`).
    pub fn generator_images(&self, eng: &Engine) -> Result<Vec<(String, Polynomial)>> {
        let mut out = Vec::new();
        for (i, pair) in self.presentation.pairs.iter().enumerate() {
            for n in pair.module().numerator() {
                let u = FractionElement {
                    numerator: n.clone(),
                    exponent: MultiExponent::unit(i),
                };
                let shown = self.presentation.display_element(&u);
                out.push((shown, self.apply(eng, &u)?));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FractionPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} inverting ", self.base)?;
        if self.pairs.is_empty() {
            return write!(f, "nothing");
        }
        let parts = self.pairs.iter().map(|p| {
            if p.module().is_unit_ideal() {
                format!("{} = {}", p.label(), p.section())
            } else {
                format!("{} = {} in {}", p.label(), p.section(), p.module())
            }
        });
        write!(f, "{}", parts.format(", "))
    }
}
