use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fraction::FractionPresentation;
use crate::hilb::{LocalizedHilb, UnivFamilyA1};
use crate::ideal::{CoordinateRing, Engine, Ideal};
use crate::linalg;
use crate::poly::univariate::{monic_irreducibles, monic_polys, Dense};
use crate::poly::{Monomial, Polynomial, Ring};
use crate::scalar::{Field, Scalar};

/// Affine spaces whose Hilbert schemes of points are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineSpace {
    Line,
    Plane,
}

impl AffineSpace {
    pub fn ring(self, field: Field) -> Ring {
        let vars: &[&str] = match self {
            AffineSpace::Line => &["x"],
            AffineSpace::Plane => &["x", "y"],
        };
        Ring::new(field, vars.iter().copied()).expect("valid names")
    }

    fn max_points(self) -> usize {
        match self {
            AffineSpace::Line => 3,
            AffineSpace::Plane => 2,
        }
    }
}

impl fmt::Display for AffineSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineSpace::Line => write!(f, "A1"),
            AffineSpace::Plane => write!(f, "A2"),
        }
    }
}

/// An `F_q`-point of `Hilb^n`: an ideal of colength `n`.
#[derive(Clone, Debug)]
pub struct HilbPoint {
    pub ideal: Ideal,
}

impl HilbPoint {
    /// Display of the reduced generators; canonical for the ideal.
    pub fn key(&self) -> String {
        self.ideal.to_string()
    }
}

/// Enumeration limits: `q ∈ {2, 3, 5}` and at most 3 points on the line, 2 on the plane.
pub fn check_enumeration_bounds(space: AffineSpace, field: Field, n: usize) -> Result<()> {
    if !matches!(field, Field::Prime(2 | 3 | 5)) {
        return Err(Error::bound(
            "enumerate_points",
            format!("field {field} is outside {{F2, F3, F5}}"),
        ));
    }
    if n == 0 || n > space.max_points() {
        return Err(Error::bound(
            "enumerate_points",
            format!("n = {n} is outside 1..={} on {space}", space.max_points()),
        ));
    }
    Ok(())
}

fn all_units(eng: &Engine, ideal: &Ideal, sections: &[Polynomial]) -> Result<bool> {
    for s in sections {
        if !ideal.with(std::slice::from_ref(s))?.is_unit(eng)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All colength-`n` ideals of `F_q[x]` or `F_q[x, y]` on which every section
/// is a unit, sorted canonically.
pub fn enumerate_points(
    eng: &Engine,
    space: AffineSpace,
    field: Field,
    n: usize,
    sections: &[Polynomial],
) -> Result<Vec<HilbPoint>> {
    check_enumeration_bounds(space, field, n)?;
    let ring = space.ring(field);
    for s in sections {
        ring.ensure_same(s.ring())?;
    }
    let mut points = match space {
        AffineSpace::Line => line_points(eng, &ring, n, sections)?,
        AffineSpace::Plane => plane_points(eng, &ring, n, sections)?,
    };
    points.sort_by_cached_key(HilbPoint::key);
    Ok(points)
}

fn line_points(
    eng: &Engine,
    ring: &Ring,
    n: usize,
    sections: &[Polynomial],
) -> Result<Vec<HilbPoint>> {
    let mut out = Vec::new();
    for m in monic_polys(ring.field(), n)? {
        let ideal = Ideal::principal(&m.to_poly(ring, 0));
        if all_units(eng, &ideal, sections)? {
            out.push(HilbPoint { ideal });
        }
    }
    Ok(out)
}

/// Colength-`n` ideals for `n ≤ 2` are generated in degree ≤ 2 and meet the
/// six-dimensional space of polynomials of degree ≤ 2 in a subspace of
/// codimension `n`. Each such subspace is the kernel of a unique `n x 6`
/// matrix in reduced row echelon form.
fn plane_points(
    eng: &Engine,
    ring: &Ring,
    n: usize,
    sections: &[Polynomial],
) -> Result<Vec<HilbPoint>> {
    let field = ring.field();
    let monomials: Vec<Polynomial> = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]
        .iter()
        .map(|e| Polynomial::term(ring, Monomial::from_exponents(e.to_vec()), field.one()))
        .collect();
    let dim = monomials.len();
    let candidates = rref_matrices(field, n, dim)?;
    let bounds = eng.bounds();
    let found: Vec<Result<Option<HilbPoint>>> = candidates
        .par_iter()
        .map(|constraints| {
            let local = Engine::new(bounds, None);
            let gens: Vec<Polynomial> = linalg::nullspace(field, constraints, dim)
                .iter()
                .map(|v| {
                    let terms = v
                        .iter()
                        .zip(&monomials)
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, m)| m.scale(c));
                    terms.fold(Polynomial::zero(ring), |acc, t| &acc + &t)
                })
                .collect();
            let ideal = Ideal::new(ring, gens)?;
            if ideal.colength(&local)?.dimension() != Some(n)
                || !all_units(&local, &ideal, sections)?
            {
                return Ok(None);
            }
            Ok(Some(HilbPoint {
                ideal: ideal.reduced(&local)?,
            }))
        })
        .collect();
    let mut out = Vec::new();
    for r in found {
        if let Some(p) = r? {
            out.push(p);
        }
    }
    Ok(out)
}

/// All `rows x cols` matrices of rank `rows` in reduced row echelon form.
fn rref_matrices(field: Field, rows: usize, cols: usize) -> Result<Vec<linalg::Matrix>> {
    let elems = field
        .elements()
        .ok_or_else(|| Error::usage("enumeration needs a finite field"))?;
    let mut out = Vec::new();
    for pivots in (0..cols).combinations(rows) {
        let free: Vec<(usize, usize)> = (0..rows)
            .flat_map(|r| {
                let pivots = &pivots;
                (pivots[r] + 1..cols)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let choices = free.iter().map(|_| elems.iter()).multi_cartesian_product();
        let fill = |values: Vec<&Scalar>| {
            let mut m = vec![vec![field.zero(); cols]; rows];
            for (r, &p) in pivots.iter().enumerate() {
                m[r][p] = field.one();
            }
            for ((r, c), v) in free.iter().zip(values) {
                m[*r][*c] = v.clone();
            }
            m
        };
        if free.is_empty() {
            out.push(fill(Vec::new()));
        } else {
            out.extend(choices.map(fill));
        }
    }
    Ok(out)
}

/// All tuples in `F_q^n`, in lexicographic order.
fn all_tuples(field: Field, n: usize) -> Result<Vec<Vec<Scalar>>> {
    let elems = field
        .elements()
        .ok_or_else(|| Error::usage("enumeration needs a finite field"))?;
    Ok((0..n)
        .map(|_| elems.iter().cloned())
        .multi_cartesian_product()
        .collect())
}

/// Double count of the `F_q`-points of the localized Hilbert scheme of the line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCount {
    pub n: usize,
    pub q: u64,
    pub sections: Vec<String>,
    /// Colength-`n` ideals of `F_q[x]` on which every section is a unit.
    pub count_ideal: usize,
    /// Coefficient tuples at which every norm is nonzero.
    pub count_norm: usize,
    /// For every monic `m` and section `s`: `1 ∈ (m, s)` iff the norm of `s` is nonzero at `m`.
    pub norm_consistent: bool,
    /// Every enumerated point is the contraction of its extension with verdict "isomorphism".
    pub closed: bool,
}

impl DoubleCount {
    pub fn holds(&self) -> bool {
        self.count_ideal == self.count_norm && self.norm_consistent && self.closed
    }
}

fn field_of(q: u64) -> Result<Field> {
    Field::prime(q).map_err(|_| {
        Error::bound(
            "enumerate_points",
            format!("q = {q} is not a supported prime"),
        )
    })
}

/// Counts points of `Hilb^n` of the localized line in two independent ways.
pub fn verify_localized_count(
    eng: &Engine,
    n: usize,
    sections: &[Polynomial],
    q: u64,
) -> Result<DoubleCount> {
    let field = field_of(q)?;
    check_enumeration_bounds(AffineSpace::Line, field, n)?;
    let points = enumerate_points(eng, AffineSpace::Line, field, n, sections)?;
    let hilb = LocalizedHilb::new(eng, n, field, sections)?;
    let fam = &hilb.family;

    let mut count_norm = 0;
    for e in all_tuples(field, n)? {
        if hilb.norms.iter().all(|nm| !nm.evaluate(&e).is_zero()) {
            count_norm += 1;
        }
    }

    let line = AffineSpace::Line.ring(field);
    let mut norm_consistent = true;
    for m in monic_polys(field, n)? {
        let e = fam.coordinates_of_monic(&m.coeffs)?;
        let ideal = Ideal::principal(&m.to_poly(&line, 0));
        for (s, nm) in sections.iter().zip(&hilb.norms) {
            let unit = ideal.with(std::slice::from_ref(s))?.is_unit(eng)?;
            if unit == nm.evaluate(&e).is_zero() {
                norm_consistent = false;
            }
        }
    }

    let base = CoordinateRing::polynomial(&line);
    let labels: Vec<String> = (0..sections.len()).map(|i| format!("s{i}")).collect();
    let pairs: Vec<(&str, Polynomial)> = labels
        .iter()
        .map(String::as_str)
        .zip(sections.iter().cloned())
        .collect();
    let u = FractionPresentation::free(eng, &base, &pairs)?;
    let mut closed = true;
    for p in &points {
        let gens = p
            .ideal
            .generators()
            .iter()
            .map(|g| u.from_base(eng, g))
            .collect::<Result<Vec<_>>>()?;
        let c = u.extend_contract(eng, &gens)?;
        if !c.is_isomorphism() || !c.ideal.same_ideal(eng, &p.ideal)? {
            closed = false;
        }
    }

    Ok(DoubleCount {
        n,
        q,
        sections: sections.iter().map(ToString::to_string).collect(),
        count_ideal: points.len(),
        count_norm,
        norm_consistent,
        closed,
    })
}

/// Open-subscheme checks for the localized line: the points for a set of
/// sections are the intersection of the points for each section alone, and
/// counts only drop as sections are added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenSubschemeReport {
    pub n: usize,
    pub q: u64,
    pub count: usize,
    pub per_section: Vec<(String, usize)>,
    pub full_count: usize,
    pub intersection_matches: bool,
    pub monotone: bool,
}

impl OpenSubschemeReport {
    pub fn holds(&self) -> bool {
        self.intersection_matches
            && self.monotone
            && self.full_count == (self.q as usize).pow(self.n as u32)
    }
}

pub fn verify_open_subscheme(
    eng: &Engine,
    n: usize,
    sections: &[Polynomial],
    q: u64,
) -> Result<OpenSubschemeReport> {
    let field = field_of(q)?;
    let keys = |s: &[Polynomial]| -> Result<BTreeSet<String>> {
        Ok(enumerate_points(eng, AffineSpace::Line, field, n, s)?
            .iter()
            .map(HilbPoint::key)
            .collect())
    };
    let all = keys(sections)?;
    let full = keys(&[])?;
    let mut per_section = Vec::new();
    let mut meet = full.clone();
    let mut monotone = all.is_subset(&full);
    for (i, s) in sections.iter().enumerate() {
        let single = keys(std::slice::from_ref(s))?;
        monotone &= single.is_subset(&full);
        meet = meet.intersection(&single).cloned().collect();
        per_section.push((s.to_string(), single.len()));
        let mut rest = sections.to_vec();
        rest.remove(i);
        monotone &= all.len() <= keys(&rest)?.len();
    }
    Ok(OpenSubschemeReport {
        n,
        q,
        count: all.len(),
        per_section,
        full_count: full.len(),
        intersection_matches: meet == all,
        monotone,
    })
}

/// `F_q`-points of `Hilb^n` of the local ring of the line at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StalkCount {
    pub n: usize,
    pub q: u64,
    /// Colength-`n` ideals supported at the origin (`x^n ∈ I`).
    pub count_ideal: usize,
    /// Tuples at which the norms of all test sections are nonzero.
    pub count_norm: usize,
    /// Monic irreducibles of degree ≤ n with nonzero constant term.
    pub test_sections: usize,
}

impl StalkCount {
    pub fn holds(&self) -> bool {
        self.count_ideal == 1 && self.count_norm == 1
    }
}

pub fn stalk_hilb(eng: &Engine, n: usize, q: u64) -> Result<StalkCount> {
    let field = field_of(q)?;
    check_enumeration_bounds(AffineSpace::Line, field, n)?;
    let line = AffineSpace::Line.ring(field);
    let xn = Polynomial::var(&line, 0).pow(n as u32);
    let mut count_ideal = 0;
    for m in monic_polys(field, n)? {
        if Ideal::principal(&m.to_poly(&line, 0)).contains(eng, &xn)? {
            count_ideal += 1;
        }
    }
    let tests: Vec<Polynomial> = monic_irreducibles(field, n)?
        .into_iter()
        .filter(|f| !f.coeffs[0].is_zero())
        .map(|f: Dense| f.to_poly(&line, 0))
        .collect();
    let fam = UnivFamilyA1::new(eng, n, field)?;
    let norms = tests
        .iter()
        .map(|f| fam.norm_of_section(eng, f))
        .collect::<Result<Vec<_>>>()?;
    let mut count_norm = 0;
    for e in all_tuples(field, n)? {
        if norms.iter().all(|nm| !nm.evaluate(&e).is_zero()) {
            count_norm += 1;
        }
    }
    Ok(StalkCount {
        n,
        q,
        count_ideal,
        count_norm,
        test_sections: tests.len(),
    })
}
