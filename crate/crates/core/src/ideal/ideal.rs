use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::ideal::{Engine, GroebnerBasis};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Ring};

/// Finitely generated ideal with a lazily computed grevlex Gröbner basis.
#[derive(Clone)]
pub struct Ideal {
    ring: Ring,
    generators: Vec<Polynomial>,
    basis: OnceLock<Arc<GroebnerBasis>>,
}

/// Monomials outside the leading-term ideal of a zero-dimensional ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientBasis {
    /// Ascending in grevlex; closed under division.
    pub staircase: Vec<Monomial>,
}

impl QuotientBasis {
    pub fn dimension(&self) -> usize {
        self.staircase.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Colength {
    Finite(QuotientBasis),
    Infinite,
}

impl Colength {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            Colength::Finite(q) => Some(q.dimension()),
            Colength::Infinite => None,
        }
    }
}

impl Ideal {
    pub fn new(ring: &Ring, generators: Vec<Polynomial>) -> Result<Ideal> {
        for g in &generators {
            ring.ensure_same(g.ring())?;
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal {
            ring: ring.clone(),
            generators,
            basis: OnceLock::new(),
        })
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal {
            ring: ring.clone(),
            generators: Vec::new(),
            basis: OnceLock::new(),
        }
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal::principal(&Polynomial::one(ring))
    }

    pub fn principal(f: &Polynomial) -> Ideal {
        Ideal::new(f.ring(), vec![f.clone()]).expect("same ring")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn groebner(&self, eng: &Engine) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.basis.get() {
            return Ok(gb.clone());
        }
        let gb = eng.groebner(&self.ring, &self.generators, MonomialOrder::GrevLex)?;
        Ok(self.basis.get_or_init(|| gb).clone())
    }

    pub fn groebner_in(&self, eng: &Engine, order: MonomialOrder) -> Result<Arc<GroebnerBasis>> {
        if order == MonomialOrder::GrevLex {
            return self.groebner(eng);
        }
        eng.groebner(&self.ring, &self.generators, order)
    }

    /// The ideal generated by its own reduced grevlex basis.
    pub fn reduced(&self, eng: &Engine) -> Result<Ideal> {
        let gb = self.groebner(eng)?;
        let out = Ideal {
            ring: self.ring.clone(),
            generators: gb.polys().to_vec(),
            basis: OnceLock::new(),
        };
        let _ = out.basis.set(gb);
        Ok(out)
    }

    pub fn normal_form(&self, eng: &Engine, f: &Polynomial) -> Result<Polynomial> {
        self.ring.ensure_same(f.ring())?;
        Ok(self.groebner(eng)?.normal_form(f))
    }

    pub fn contains(&self, eng: &Engine, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(eng, f)?.is_zero())
    }

    pub fn contains_ideal(&self, eng: &Engine, other: &Ideal) -> Result<bool> {
        self.ring.ensure_same(&other.ring)?;
        let gb = self.groebner(eng)?;
        Ok(other.generators.iter().all(|g| gb.contains(g)))
    }

    pub fn is_unit(&self, eng: &Engine) -> Result<bool> {
        Ok(self.groebner(eng)?.is_unit())
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Equality of ideals via reduced Gröbner bases.
    pub fn same_ideal(&self, eng: &Engine, other: &Ideal) -> Result<bool> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.groebner(eng)?.polys() == other.groebner(eng)?.polys())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.ensure_same(&other.ring)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn with(&self, extra: &[Polynomial]) -> Result<Ideal> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.ensure_same(&other.ring)?;
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a * b);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    pub fn power(&self, k: u32) -> Result<Ideal> {
        let mut acc = Ideal::unit(&self.ring);
        for _ in 0..k {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// Generators of `self ∩ k[vars not in block]`, as an ideal of the subring
    /// on the remaining variables (original relative order).
    pub fn eliminate(&self, eng: &Engine, block: &[usize]) -> Result<Ideal> {
        let n = self.ring.nvars();
        if let Some(&bad) = block.iter().find(|&&v| v >= n) {
            return Err(Error::usage(format!("variable index {bad} out of range")));
        }
        let rest: Vec<usize> = (0..n).filter(|v| !block.contains(v)).collect();
        let mut perm: Vec<usize> = (0..n).filter(|v| block.contains(v)).collect();
        let k = perm.len();
        perm.extend(rest.iter().copied());
        let permuted_ring = self.ring.permuted(&perm);
        // old variable perm[i] becomes new variable i
        let mut mapping = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            mapping[old] = new;
        }
        let gens: Vec<Polynomial> = self
            .generators
            .iter()
            .map(|g| g.embed(&permuted_ring, &mapping))
            .collect();
        let gb = eng.groebner(&permuted_ring, &gens, MonomialOrder::Block(k))?;
        let sub = self.ring.subring(&rest);
        let keep: Vec<usize> = (k..n).collect();
        let out = gb
            .polys()
            .iter()
            .filter_map(|g| g.restrict(&sub, &keep))
            .collect();
        Ideal::new(&sub, out)
    }

    /// `self ∩ other` via `t·I + (1 - t)·J` and elimination of `t`.
    pub fn intersect(&self, eng: &Engine, other: &Ideal) -> Result<Ideal> {
        self.ring.ensure_same(&other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let big = self.ring.with_leading_vars(&["t"]);
        let n = self.ring.nvars();
        let mapping: Vec<usize> = (1..=n).collect();
        let t = Polynomial::var(&big, 0);
        let one_minus_t = &Polynomial::one(&big) - &t;
        let mut gens = Vec::new();
        for g in &self.generators {
            gens.push(&t * &g.embed(&big, &mapping));
        }
        for g in &other.generators {
            gens.push(&one_minus_t * &g.embed(&big, &mapping));
        }
        let elim = Ideal::new(&big, gens)?.eliminate(eng, &[0])?;
        Ideal::new(
            &self.ring,
            elim.generators
                .into_iter()
                .map(|g| g.with_ring(&self.ring))
                .collect(),
        )
    }

    /// `self : (f)`.
    pub fn quotient_by(&self, eng: &Engine, f: &Polynomial) -> Result<Ideal> {
        self.ring.ensure_same(f.ring())?;
        if f.is_zero() || self.contains(eng, f)? {
            return Ok(Ideal::unit(&self.ring));
        }
        let meet = self.intersect(eng, &Ideal::principal(f))?;
        let mut gens = Vec::with_capacity(meet.generators.len());
        for g in &meet.generators {
            let q = g.exact_div(f)?.ok_or_else(|| {
                Error::Verification("intersection with (f) not divisible by f".into())
            })?;
            gens.push(q);
        }
        Ideal::new(&self.ring, gens)
    }

    /// `self : other`.
    pub fn quotient(&self, eng: &Engine, other: &Ideal) -> Result<Ideal> {
        self.ring.ensure_same(&other.ring)?;
        let mut acc = Ideal::unit(&self.ring);
        for g in &other.generators {
            let q = self.quotient_by(eng, g)?;
            acc = if acc.is_unit(eng)? {
                q
            } else {
                acc.intersect(eng, &q)?
            };
        }
        Ok(acc)
    }

    /// `self : f^∞` through the Rabinowitsch presentation `I + (t·f - 1)`.
    pub fn saturate(&self, eng: &Engine, f: &Polynomial) -> Result<Ideal> {
        self.ring.ensure_same(f.ring())?;
        if f.is_zero() {
            return Err(Error::usage("saturation by the zero polynomial"));
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        let big = self.ring.with_leading_vars(&["t"]);
        let mapping: Vec<usize> = (1..=self.ring.nvars()).collect();
        let mut gens: Vec<Polynomial> = self
            .generators
            .iter()
            .map(|g| g.embed(&big, &mapping))
            .collect();
        gens.push(&(&Polynomial::var(&big, 0) * &f.embed(&big, &mapping)) - &Polynomial::one(&big));
        let elim = Ideal::new(&big, gens)?.eliminate(eng, &[0])?;
        Ideal::new(
            &self.ring,
            elim.generators
                .into_iter()
                .map(|g| g.with_ring(&self.ring))
                .collect(),
        )
    }

    /// `self : f^∞` as the stable value of `I : f^k`. Independent of [`Ideal::saturate`].
    pub fn saturate_by_chain(&self, eng: &Engine, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::usage("saturation by the zero polynomial"));
        }
        let mut current = self.clone();
        loop {
            let next = current.quotient_by(eng, f)?;
            if next.same_ideal(eng, &current)? {
                return Ok(current);
            }
            current = next;
        }
    }

    /// `self : J^∞ = ∩_j (self : g_j^∞)` over generators `g_j` of `J`.
    pub fn saturate_ideal(&self, eng: &Engine, other: &Ideal) -> Result<Ideal> {
        self.ring.ensure_same(&other.ring)?;
        if other.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let mut acc: Option<Ideal> = None;
        for g in &other.generators {
            let s = self.saturate(eng, g)?;
            acc = Some(match acc {
                None => s,
                Some(a) => a.intersect(eng, &s)?,
            });
        }
        Ok(acc.unwrap())
    }

    /// Staircase of `k[x]/I` when finite dimensional.
    pub fn colength(&self, eng: &Engine) -> Result<Colength> {
        let gb = self.groebner(eng)?;
        Ok(staircase(&self.ring, &gb.leading_monomials()))
    }

    /// Image of the ideal under `x_i -> images[i]` in `target`.
    pub fn map(&self, images: &[Polynomial], target: &Ring) -> Result<Ideal> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.substitute(images, target))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(target, gens)
    }
}

pub(crate) fn staircase(ring: &Ring, leads: &[Monomial]) -> Colength {
    let n = ring.nvars();
    if leads.iter().any(Monomial::is_one) {
        return Colength::Finite(QuotientBasis {
            staircase: Vec::new(),
        });
    }
    let mut bound = vec![u32::MAX; n];
    for m in leads {
        if let Some(v) = m.pure_power_of() {
            bound[v] = bound[v].min(m.exponents()[v]);
        }
    }
    if bound.contains(&u32::MAX) {
        return Colength::Infinite;
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        let m = Monomial::from_exponents(exps.clone());
        if !leads.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == n {
                out.sort_by(|a, b| MonomialOrder::GrevLex.cmp(a, b));
                return Colength::Finite(QuotientBasis { staircase: out });
            }
            exps[i] += 1;
            if exps[i] < bound[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        if self.generators.is_empty() {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.ring)
    }
}
