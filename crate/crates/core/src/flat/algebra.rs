use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::ideal::{staircase, Colength, CoordinateRing, Engine, GroebnerBasis, Ideal, RingMap};
use crate::poly::{det_berkowitz, Monomial, MonomialOrder, PolyMatrix, Polynomial, Ring};

/// A commutative algebra free of rank `n` over a base coordinate ring `A`,
/// given by structure constants: `b_i · b_j = Σ_k c[i][j][k] b_k`.
#[derive(Clone, Debug)]
pub struct FiniteFlatAlgebra {
    base: CoordinateRing,
    labels: Vec<String>,
    structure: Vec<Vec<Vec<Polynomial>>>,
    unit: Vec<Polynomial>,
    presentation: Option<Arc<QuotientPresentation>>,
}

/// How an algebra built from a quotient `P/I` maps polynomials of `P` to coordinates.
#[derive(Debug)]
struct QuotientPresentation {
    ring: Ring,
    permuted: Ring,
    mapping: Vec<usize>,
    fiber_count: usize,
    basis: Vec<Monomial>,
    gb: Arc<GroebnerBasis>,
}

/// Coordinates of an element of the algebra; multiplication by it is a section
/// of the algebra viewed as a free rank-one module over itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSection {
    pub coords: Vec<Polynomial>,
}

impl FiniteFlatAlgebra {
    /// Validates commutativity, associativity and the unit law modulo the base relations.
    pub fn from_table(
        eng: &Engine,
        base: &CoordinateRing,
        labels: Vec<String>,
        structure: Vec<Vec<Vec<Polynomial>>>,
        unit: Vec<Polynomial>,
    ) -> Result<FiniteFlatAlgebra> {
        let n = labels.len();
        let shape_ok = structure.len() == n
            && structure
                .iter()
                .all(|row| row.len() == n && row.iter().all(|c| c.len() == n))
            && unit.len() == n;
        if !shape_ok {
            return Err(Error::usage(format!(
                "structure constants must form a {n}x{n}x{n} table with a length-{n} unit"
            )));
        }
        for p in structure.iter().flatten().flatten().chain(&unit) {
            base.ring().ensure_same(p.ring())?;
        }
        let red = |p: &Polynomial| base.reduce(eng, p);
        let structure = structure
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.iter().map(red).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let unit = unit.iter().map(red).collect::<Result<Vec<_>>>()?;
        let alg = FiniteFlatAlgebra {
            base: base.clone(),
            labels,
            structure,
            unit,
            presentation: None,
        };
        alg.validate(eng)?;
        Ok(alg)
    }

    fn validate(&self, eng: &Engine) -> Result<()> {
        let n = self.rank();
        let c = &self.structure;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !self.base.equal(eng, &c[i][j][k], &c[j][i][k])? {
                        return Err(Error::usage(format!(
                            "not commutative: {} * {}",
                            self.labels[i], self.labels[j]
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let mut left = Polynomial::zero(self.base.ring());
                        let mut right = Polynomial::zero(self.base.ring());
                        for k in 0..n {
                            left = &left + &(&c[i][j][k] * &c[k][l][m]);
                            right = &right + &(&c[j][l][k] * &c[i][k][m]);
                        }
                        if !self.base.equal(eng, &left, &right)? {
                            return Err(Error::usage(format!(
                                "not associative: ({} * {}) * {}",
                                self.labels[i], self.labels[j], self.labels[l]
                            )));
                        }
                    }
                }
            }
        }
        for j in 0..n {
            for k in 0..n {
                let mut acc = Polynomial::zero(self.base.ring());
                for i in 0..n {
                    acc = &acc + &(&self.unit[i] * &c[i][j][k]);
                }
                let expected = if j == k {
                    Polynomial::one(self.base.ring())
                } else {
                    Polynomial::zero(self.base.ring())
                };
                if !self.base.equal(eng, &acc, &expected)? {
                    return Err(Error::usage(format!(
                        "unit law fails on {}",
                        self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `P/I` over `A = k[other vars] / (I ∩ k[other vars])`, with basis the
    /// standard monomials in the fiber variables. Requires every basis element
    /// involving fiber variables to have a constant leading coefficient there.
    pub fn from_quotient(eng: &Engine, ideal: &Ideal, fiber: &[&str]) -> Result<FiniteFlatAlgebra> {
        let ring = ideal.ring();
        let mut fiber_idx = Vec::with_capacity(fiber.len());
        for name in fiber {
            let i = ring
                .var_index(name)
                .ok_or_else(|| Error::usage(format!("unknown fiber variable `{name}`")))?;
            if fiber_idx.contains(&i) {
                return Err(Error::usage(format!(
                    "fiber variable `{name}` listed twice"
                )));
            }
            fiber_idx.push(i);
        }
        let k = fiber_idx.len();
        let rest: Vec<usize> = (0..ring.nvars())
            .filter(|v| !fiber_idx.contains(v))
            .collect();
        let perm: Vec<usize> = fiber_idx.iter().chain(&rest).copied().collect();
        let permuted = ring.permuted(&perm);
        let mut mapping = vec![0; ring.nvars()];
        for (new, &old) in perm.iter().enumerate() {
            mapping[old] = new;
        }
        let gens: Vec<Polynomial> = ideal
            .generators()
            .iter()
            .map(|g| g.embed(&permuted, &mapping))
            .collect();
        let gb = eng.groebner(&permuted, &gens, MonomialOrder::Block(k))?;

        let base_ring = ring.subring(&rest);
        let base_positions: Vec<usize> = (k..ring.nvars()).collect();
        let mut base_rels = Vec::new();
        let mut fiber_leads = Vec::new();
        for g in gb.polys() {
            if (0..k).all(|v| !g.uses_var(v)) {
                base_rels.push(
                    g.restrict(&base_ring, &base_positions)
                        .expect("no fiber variables"),
                );
                continue;
            }
            let (lead, _) = g.leading_term(MonomialOrder::Block(k)).expect("nonzero");
            let lead_fiber = &lead.exponents()[..k];
            let top: Vec<_> = g
                .terms()
                .filter(|(m, _)| &m.exponents()[..k] == lead_fiber)
                .collect();
            if top.len() != 1 || top[0].0.exponents()[k..].iter().any(|&e| e > 0) {
                return Err(Error::usage(format!(
                    "{} is not free over the base: leading coefficient of {g} is not constant",
                    ring
                )));
            }
            fiber_leads.push(Monomial::from_exponents(lead_fiber.to_vec()));
        }
        let fiber_ring = permuted.subring(&(0..k).collect::<Vec<_>>());
        let basis = match staircase(&fiber_ring, &fiber_leads) {
            Colength::Finite(q) => q.staircase,
            Colength::Infinite => return Err(Error::usage("quotient is not finite over the base")),
        };
        let base = CoordinateRing::new(Ideal::new(&base_ring, base_rels)?);
        let labels = basis
            .iter()
            .map(|m| Polynomial::term(&fiber_ring, m.clone(), fiber_ring.one()).to_string())
            .collect();
        let pres = QuotientPresentation {
            ring: ring.clone(),
            permuted: permuted.clone(),
            mapping,
            fiber_count: k,
            basis,
            gb,
        };
        let n = pres.basis.len();
        let mut structure = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = Monomial::from_exponents(
                    pres.basis[i]
                        .mul(&pres.basis[j])
                        .exponents()
                        .iter()
                        .copied()
                        .chain(std::iter::repeat_n(0, rest.len()))
                        .collect(),
                );
                structure[i][j] = pres.split(
                    &base,
                    eng,
                    &Polynomial::term(&permuted, prod, permuted.one()),
                )?;
            }
        }
        let mut unit = vec![Polynomial::zero(&base_ring); n];
        if n > 0 {
            unit[0] = Polynomial::one(&base_ring);
        }
        let mut alg = FiniteFlatAlgebra::from_table(eng, &base, labels, structure, unit)?;
        alg.presentation = Some(Arc::new(pres));
        Ok(alg)
    }

    /// `A[x] / (x^n + c_{n-1} x^{n-1} + ... + c_0)` with `coeffs = [c_0, ..., c_{n-1}]`.
    pub fn from_monic(
        eng: &Engine,
        base: &CoordinateRing,
        var: &str,
        coeffs: &[Polynomial],
    ) -> Result<FiniteFlatAlgebra> {
        for c in coeffs {
            base.ring().ensure_same(c.ring())?;
        }
        let big = base.ring().with_leading_vars(&[var]);
        let mapping: Vec<usize> = (1..=base.ring().nvars()).collect();
        let x = Polynomial::var(&big, 0);
        let mut m = x.pow(coeffs.len() as u32);
        for (i, c) in coeffs.iter().enumerate() {
            m = &m + &(&c.embed(&big, &mapping) * &x.pow(i as u32));
        }
        let mut gens = vec![m];
        gens.extend(
            base.relations()
                .generators()
                .iter()
                .map(|g| g.embed(&big, &mapping)),
        );
        let name = big.vars()[0].clone();
        FiniteFlatAlgebra::from_quotient(eng, &Ideal::new(&big, gens)?, &[name.as_str()])
    }

    pub fn base(&self) -> &CoordinateRing {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure(&self) -> &[Vec<Vec<Polynomial>>] {
        &self.structure
    }

    pub fn unit(&self) -> &[Polynomial] {
        &self.unit
    }

    /// The ring `P` for algebras built from a quotient.
    pub fn ambient_ring(&self) -> Option<&Ring> {
        self.presentation.as_ref().map(|p| &p.ring)
    }

    /// Coordinates of a polynomial of `P` (algebras built from a quotient only).
    pub fn section(&self, eng: &Engine, f: &Polynomial) -> Result<ModuleSection> {
        let pres = self.presentation.as_ref().ok_or_else(|| {
            Error::usage("algebra was given by a table; supply coordinates instead")
        })?;
        pres.ring.ensure_same(f.ring())?;
        let coords = pres.split(&self.base, eng, &f.embed(&pres.permuted, &pres.mapping))?;
        Ok(ModuleSection { coords })
    }

    pub fn section_from_coords(&self, coords: Vec<Polynomial>) -> Result<ModuleSection> {
        if coords.len() != self.rank() {
            return Err(Error::usage(format!(
                "section needs {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        for c in &coords {
            self.base.ring().ensure_same(c.ring())?;
        }
        Ok(ModuleSection { coords })
    }

    pub fn multiply(
        &self,
        eng: &Engine,
        s: &ModuleSection,
        t: &ModuleSection,
    ) -> Result<ModuleSection> {
        let n = self.rank();
        let mut coords = vec![Polynomial::zero(self.base.ring()); n];
        for i in 0..n {
            for j in 0..n {
                let st = &s.coords[i] * &t.coords[j];
                if st.is_zero() {
                    continue;
                }
                for (k, c) in coords.iter_mut().enumerate() {
                    *c = &*c + &(&st * &self.structure[i][j][k]);
                }
            }
        }
        let coords = coords
            .iter()
            .map(|c| self.base.reduce(eng, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleSection { coords })
    }

    /// Matrix of multiplication by `s`: column `j` holds the coordinates of `s·b_j`.
    pub fn mult_operator(&self, eng: &Engine, s: &ModuleSection) -> Result<PolyMatrix> {
        let n = self.rank();
        let mut m = vec![vec![Polynomial::zero(self.base.ring()); n]; n];
        for (k, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut acc = Polynomial::zero(self.base.ring());
                for i in 0..n {
                    acc = &acc + &(&s.coords[i] * &self.structure[i][j][k]);
                }
                *entry = self.base.reduce(eng, &acc)?;
            }
        }
        Ok(m)
    }

    /// The norm `det(s)`: determinant of the multiplication operator.
    pub fn det_section(&self, eng: &Engine, s: &ModuleSection) -> Result<Polynomial> {
        let m = self.mult_operator(eng, s)?;
        let reduce = |p: Polynomial| self.base.reduce(eng, &p).expect("same ring");
        Ok(det_berkowitz(self.base.ring(), &m, &reduce))
    }

    /// `E ⊗_A B` along `φ: A -> B`.
    pub fn base_change(&self, eng: &Engine, phi: &RingMap) -> Result<FiniteFlatAlgebra> {
        self.base.ring().ensure_same(phi.source().ring())?;
        let structure = self
            .structure
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        c.iter()
                            .map(|p| phi.apply(eng, p))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let unit = self
            .unit
            .iter()
            .map(|p| phi.apply(eng, p))
            .collect::<Result<Vec<_>>>()?;
        FiniteFlatAlgebra::from_table(eng, phi.target(), self.labels.clone(), structure, unit)
    }

    pub fn map_section(
        &self,
        eng: &Engine,
        phi: &RingMap,
        s: &ModuleSection,
    ) -> Result<ModuleSection> {
        let coords = s
            .coords
            .iter()
            .map(|p| phi.apply(eng, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleSection { coords })
    }

    /// `det(s ⊗ 1)` computed on the base-changed algebra.
    pub fn base_change_det(
        &self,
        eng: &Engine,
        s: &ModuleSection,
        phi: &RingMap,
    ) -> Result<Polynomial> {
        let eb = self.base_change(eng, phi)?;
        eb.det_section(eng, &self.map_section(eng, phi, s)?)
    }

    pub fn display_section(&self, s: &ModuleSection) -> String {
        let parts: Vec<String> = s
            .coords
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| {
                if l == "1" {
                    format!("({c})")
                } else {
                    format!("({c})*{l}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl QuotientPresentation {
    /// Normal form of a polynomial of the permuted ring, split into base
    /// coefficients of the standard fiber monomials.
    fn split(
        &self,
        base: &CoordinateRing,
        eng: &Engine,
        f: &Polynomial,
    ) -> Result<Vec<Polynomial>> {
        let k = self.fiber_count;
        let nf = self.gb.normal_form(f);
        let base_ring = base.ring();
        let mut coords = vec![Polynomial::zero(base_ring); self.basis.len()];
        for (m, c) in nf.terms() {
            let fiber = Monomial::from_exponents(m.exponents()[..k].to_vec());
            let idx = self.basis.iter().position(|b| *b == fiber).ok_or_else(|| {
                Error::Verification(format!(
                    "normal form term {fiber:?} is not a standard monomial"
                ))
            })?;
            let rest = Monomial::from_exponents(m.exponents()[k..].to_vec());
            coords[idx] = &coords[idx] + &Polynomial::term(base_ring, rest, c.clone());
        }
        coords.iter().map(|c| base.reduce(eng, c)).collect()
    }
}

impl fmt::Display for FiniteFlatAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {} over {} with basis {{{}}}",
            self.rank(),
            self.base,
            self.labels.iter().join(", ")
        )
    }
}
