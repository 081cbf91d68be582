use itertools::Itertools;

use crate::error::Result;
use crate::flat::{FiniteFlatAlgebra, ModuleSection};
use crate::ideal::{CoordinateRing, Engine, Ideal, RingMap};
use crate::poly::{det_berkowitz, Polynomial};

/// `Fitt_j` of the cokernel of `matrix: A^cols -> A^rows`: the ideal of
/// `(rows - j)`-minors, with the usual conventions at the edges.
pub fn fitting_ideal(
    eng: &Engine,
    base: &CoordinateRing,
    matrix: &[Vec<Polynomial>],
    j: usize,
) -> Result<Ideal> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    if j >= rows {
        return Ok(Ideal::unit(base.ring()));
    }
    let size = rows - j;
    if size > cols {
        return base.lift(&[]);
    }
    let reduce = |p: Polynomial| base.reduce(eng, &p).expect("same ring");
    let mut minors = Vec::new();
    for rs in (0..rows).combinations(size) {
        for cs in (0..cols).combinations(size) {
            let sub: Vec<Vec<Polynomial>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| matrix[r][c].clone()).collect())
                .collect();
            let d = det_berkowitz(base.ring(), &sub, &reduce);
            if !d.is_zero() {
                minors.push(d);
            }
        }
    }
    base.lift(&minors)
}

/// Fitting-ideal test for local freeness of constant rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalFreeness {
    pub rank: usize,
    /// `Fitt_{rank-1} = 0` (vacuous for rank 0).
    pub lower_vanishes: bool,
    /// `Fitt_rank = A`.
    pub upper_is_unit: bool,
}

impl LocalFreeness {
    pub fn is_locally_free(&self) -> bool {
        self.lower_vanishes && self.upper_is_unit
    }
}

/// Whether the cokernel of `matrix` (rows = generators, columns = relations)
/// is locally free of rank `n`.
pub fn check_locally_free(
    eng: &Engine,
    base: &CoordinateRing,
    matrix: &[Vec<Polynomial>],
    n: usize,
) -> Result<LocalFreeness> {
    let lower_vanishes = match n.checked_sub(1) {
        None => true,
        Some(j) => {
            let f = fitting_ideal(eng, base, matrix, j)?;
            f.same_ideal(eng, base.relations())?
        }
    };
    let upper_is_unit = fitting_ideal(eng, base, matrix, n)?.is_unit(eng)?;
    Ok(LocalFreeness {
        rank: n,
        lower_vanishes,
        upper_is_unit,
    })
}

/// Both sides of the σ-inverting equivalence for a map `φ: A -> B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaVerdicts {
    /// Every norm `det(s_α)` maps to a unit of `B`.
    pub norms_invertible: bool,
    /// Every multiplication operator becomes invertible over `B`.
    pub operators_invertible: bool,
}

impl SigmaVerdicts {
    pub fn agree(&self) -> bool {
        self.norms_invertible == self.operators_invertible
    }
}

/// Evaluates both conditions independently: the norm side through
/// determinants, the operator side by showing the cokernel of `φ(M_α)` is
/// zero (each basis vector lies in the column span), without determinants.
pub fn sigma_inverting_equiv(
    eng: &Engine,
    e: &FiniteFlatAlgebra,
    sections: &[ModuleSection],
    phi: &RingMap,
) -> Result<SigmaVerdicts> {
    let target = phi.target();
    let mut norms_invertible = true;
    for s in sections {
        let det = e.det_section(eng, s)?;
        if !target.is_unit(eng, &phi.apply(eng, &det)?)? {
            norms_invertible = false;
            break;
        }
    }
    let mut operators_invertible = true;
    for s in sections {
        let m = e.mult_operator(eng, s)?;
        let mapped = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| phi.apply(eng, p))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if !cokernel_is_zero(eng, target, &mapped)? {
            operators_invertible = false;
            break;
        }
    }
    Ok(SigmaVerdicts {
        norms_invertible,
        operators_invertible,
    })
}

/// `B^n / (columns of m) = 0`, tested in `B[u_1..u_n]` modulo `(u)^2`.
pub fn cokernel_is_zero(
    eng: &Engine,
    base: &CoordinateRing,
    m: &[Vec<Polynomial>],
) -> Result<bool> {
    let n = m.len();
    if n == 0 {
        return Ok(true);
    }
    let names: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let big = base.ring().with_leading_vars(&refs);
    let mapping: Vec<usize> = (n..n + base.ring().nvars()).collect();
    let u = |i: usize| Polynomial::var(&big, i);
    let mut gens: Vec<Polynomial> = base
        .relations()
        .generators()
        .iter()
        .map(|g| g.embed(&big, &mapping))
        .collect();
    for i in 0..n {
        for j in i..n {
            gens.push(&u(i) * &u(j));
        }
    }
    for j in 0..n {
        let mut col = Polynomial::zero(&big);
        for (k, row) in m.iter().enumerate() {
            col = &col + &(&row[j].embed(&big, &mapping) * &u(k));
        }
        gens.push(col);
    }
    let ideal = Ideal::new(&big, gens)?;
    for i in 0..n {
        if !ideal.contains(eng, &u(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}
