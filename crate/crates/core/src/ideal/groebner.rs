//! Buchberger's algorithm on term vectors kept sorted by the monomial order.
//!
//! Polynomials are stored ascending, so the leading term is the last entry
//! and can be popped in O(1) during reduction.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::Bounds;
use crate::poly::{Monomial, MonomialOrder, Polynomial, Ring};
use crate::scalar::Scalar;

pub(crate) type Terms = Vec<(Monomial, Scalar)>;

pub(crate) fn to_terms(p: &Polynomial, order: MonomialOrder) -> Terms {
    let mut v: Terms = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    v.sort_by(|a, b| order.cmp(&a.0, &b.0));
    v
}

pub(crate) fn from_terms(ring: &Ring, t: Terms) -> Polynomial {
    Polynomial::from_terms(ring, t)
}

fn lead(t: &Terms) -> &(Monomial, Scalar) {
    t.last().expect("nonzero polynomial")
}

fn make_monic(mut t: Terms) -> Terms {
    if let Some((_, c)) = t.last() {
        if !c.is_one() {
            let inv = c.inv().expect("nonzero");
            for (_, a) in t.iter_mut() {
                *a = &*a * &inv;
            }
        }
    }
    t
}

/// `p - coef * shift * g`, both ascending.
fn sub_scaled(
    p: &Terms,
    coef: &Scalar,
    shift: &Monomial,
    g: &Terms,
    order: MonomialOrder,
) -> Terms {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    let scaled = |k: usize| -> (Monomial, Scalar) { (g[k].0.mul(shift), -&(&g[k].1 * coef)) };
    while i < p.len() || j < g.len() {
        if j == g.len() {
            out.push(p[i].clone());
            i += 1;
            continue;
        }
        let (gm, gc) = scaled(j);
        if i == p.len() {
            out.push((gm, gc));
            j += 1;
            continue;
        }
        match order.cmp(&p[i].0, &gm) {
            Ordering::Less => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((gm, gc));
                j += 1;
            }
            Ordering::Equal => {
                let s = &p[i].1 + &gc;
                if !s.is_zero() {
                    out.push((gm, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Full reduction of `p` by `basis` (all monic).
pub(crate) fn reduce_full(mut p: Terms, basis: &[Terms], order: MonomialOrder) -> Terms {
    let mut rem: Terms = Vec::new();
    while let Some((m, c)) = p.last() {
        match basis.iter().find(|g| lead(g).0.divides(m)) {
            Some(g) => {
                let shift = m.div(&lead(g).0).unwrap();
                let coef = c.clone();
                p = sub_scaled(&p, &coef, &shift, g, order);
            }
            None => rem.push(p.pop().unwrap()),
        }
    }
    rem.reverse();
    rem
}

fn max_degree(t: &Terms) -> u32 {
    t.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
}

fn s_poly(f: &Terms, g: &Terms, order: MonomialOrder) -> Terms {
    let (fm, gm) = (&lead(f).0, &lead(g).0);
    let l = fm.lcm(gm);
    let fs = l.div(fm).unwrap();
    let gs = l.div(gm).unwrap();
    let one = lead(f).1.field().one();
    let zero: Terms = Vec::new();
    let a = sub_scaled(&zero, &-&one, &fs, f, order);
    sub_scaled(&a, &one, &gs, g, order)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic, sorted by
/// leading monomial descending.
pub(crate) fn buchberger(
    gens: &[Polynomial],
    order: MonomialOrder,
    bounds: &Bounds,
) -> Result<Vec<Terms>> {
    let mut basis: Vec<Terms> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return Ok(vec![vec![(
                Monomial::one(g.ring().nvars()),
                g.ring().one(),
            )]]);
        }
        let t = make_monic(to_terms(g, order));
        if max_degree(&t) > bounds.max_degree {
            return Err(Error::bound(
                "groebner",
                format!("generator degree exceeds {}", bounds.max_degree),
            ));
        }
        basis.push(t);
    }
    basis.sort_by(|a, b| {
        order
            .cmp(&lead(a).0, &lead(b).0)
            .then_with(|| a.len().cmp(&b.len()))
    });

    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push(Pair {
                i,
                j,
                lcm: lead(&basis[i]).0.lcm(&lead(&basis[j]).0),
            });
            pending.insert((i, j));
        }
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        // normal strategy: smallest lcm, ties by index
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                pa.lcm
                    .degree()
                    .cmp(&pb.lcm.degree())
                    .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                    .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        pending.remove(&(pair.i, pair.j));

        let (fi, fj) = (&basis[pair.i], &basis[pair.j]);
        if lead(fi).0.is_coprime(&lead(fj).0) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != pair.i
                && k != pair.j
                && lead(&basis[k]).0.divides(&pair.lcm)
                && !pending.contains(&(pair.i.min(k), pair.i.max(k)))
                && !pending.contains(&(pair.j.min(k), pair.j.max(k)))
        });
        if chain {
            continue;
        }

        processed += 1;
        if processed > bounds.max_pairs {
            return Err(Error::bound(
                "groebner",
                format!("more than {} S-pairs reduced", bounds.max_pairs),
            ));
        }
        let s = s_poly(fi, fj, order);
        let r = reduce_full(s, &basis, order);
        if r.is_empty() {
            continue;
        }
        if lead(&r).0.is_one() {
            let n = lead(&r).0.nvars();
            let one = lead(&r).1.field().one();
            return Ok(vec![vec![(Monomial::one(n), one)]]);
        }
        let r = make_monic(r);
        if max_degree(&r) > bounds.max_degree {
            return Err(Error::bound(
                "groebner",
                format!(
                    "intermediate degree {} exceeds {}",
                    max_degree(&r),
                    bounds.max_degree
                ),
            ));
        }
        let k = basis.len();
        for i in 0..k {
            pairs.push(Pair {
                i,
                j: k,
                lcm: lead(&basis[i]).0.lcm(&lead(&r).0),
            });
            pending.insert((i, k));
        }
        basis.push(r);
    }

    Ok(interreduce(basis, order))
}

fn interreduce(mut basis: Vec<Terms>, order: MonomialOrder) -> Vec<Terms> {
    basis.sort_by(|a, b| order.cmp(&lead(a).0, &lead(b).0));
    let mut minimal: Vec<Terms> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|h| lead(h).0.divides(&lead(&g).0)) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let mut g = minimal[i].clone();
        let head = g.pop().unwrap();
        let others: Vec<Terms> = minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, h)| h.clone())
            .collect();
        let mut tail = reduce_full(g, &others, order);
        tail.push(head);
        reduced.push(tail);
    }
    reduced.sort_by(|a, b| order.cmp(&lead(b).0, &lead(a).0));
    reduced
}

/// A reduced Gröbner basis together with the order it was computed in.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    polys: Vec<Polynomial>,
    terms: Vec<Terms>,
}

impl GroebnerBasis {
    pub(crate) fn from_terms_vec(
        ring: &Ring,
        order: MonomialOrder,
        terms: Vec<Terms>,
    ) -> Arc<GroebnerBasis> {
        let polys = terms.iter().map(|t| from_terms(ring, t.clone())).collect();
        Arc::new(GroebnerBasis {
            ring: ring.clone(),
            order,
            polys,
            terms,
        })
    }

    pub(crate) fn from_polys(
        ring: &Ring,
        order: MonomialOrder,
        polys: Vec<Polynomial>,
    ) -> Arc<GroebnerBasis> {
        let terms = polys.iter().map(|p| to_terms(p, order)).collect();
        Arc::new(GroebnerBasis {
            ring: ring.clone(),
            order,
            polys,
            terms,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// True for the unit ideal, whose reduced basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_one()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.terms.iter().map(|t| lead(t).0.clone()).collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(f.ring(), &self.ring, "normal form across rings");
        if self.terms.is_empty() || f.is_zero() {
            return f.clone();
        }
        let r = reduce_full(to_terms(f, self.order), &self.terms, self.order);
        from_terms(&self.ring, r)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }
}
