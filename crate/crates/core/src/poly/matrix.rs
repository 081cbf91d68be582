//! Determinants of square matrices with polynomial entries.
//!
//! Two unrelated algorithms: Berkowitz (division free, valid over any
//! commutative ring, so usable modulo relations) and fraction-free Bareiss
//! elimination (needs exact division, so only over polynomial rings).

use crate::error::Result;
use crate::poly::{Polynomial, Ring};

pub type PolyMatrix = Vec<Vec<Polynomial>>;

fn check_square(m: &[Vec<Polynomial>]) {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix is not square");
}

/// Berkowitz determinant. `reduce` is applied after every product, e.g. a
/// normal form modulo the relations of a quotient ring.
pub fn det_berkowitz(
    ring: &Ring,
    m: &[Vec<Polynomial>],
    reduce: &dyn Fn(Polynomial) -> Polynomial,
) -> Polynomial {
    check_square(m);
    let n = m.len();
    // p holds the characteristic polynomial coefficients of the leading r x r block,
    // highest degree first: det(tI - A_r) = p[0] t^r + ... + p[r].
    let mut p = vec![Polynomial::one(ring)];
    for r in 0..n {
        let a = &m[r][r];
        // first column of the Toeplitz matrix: 1, -a, -R C, -R A C, ..., -R A^{r-1} C
        let mut column = Vec::with_capacity(r + 2);
        column.push(Polynomial::one(ring));
        column.push(-a);
        let mut v: Vec<Polynomial> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let mut rv = Polynomial::zero(ring);
            for (j, vj) in v.iter().enumerate() {
                rv = &rv + &(&m[r][j] * vj);
            }
            column.push(-&reduce(rv));
            let next: Vec<Polynomial> = (0..r)
                .map(|i| {
                    let mut acc = Polynomial::zero(ring);
                    for (j, vj) in v.iter().enumerate() {
                        acc = &acc + &(&m[i][j] * vj);
                    }
                    reduce(acc)
                })
                .collect();
            v = next;
        }
        let mut q = Vec::with_capacity(r + 2);
        for i in 0..=r + 1 {
            let mut acc = Polynomial::zero(ring);
            for (j, pj) in p.iter().enumerate().take(i + 1) {
                acc = &acc + &(&column[i - j] * pj);
            }
            q.push(reduce(acc));
        }
        p = q;
    }
    let last = p.pop().unwrap();
    if n % 2 == 1 {
        -&last
    } else {
        last
    }
}

/// Fraction-free Gaussian elimination. Entries must lie in a polynomial ring
/// over a field (an integral domain), where the divisions are exact.
pub fn det_bareiss(ring: &Ring, m: &[Vec<Polynomial>]) -> Result<Polynomial> {
    check_square(m);
    let n = m.len();
    if n == 0 {
        return Ok(Polynomial::one(ring));
    }
    let mut a: Vec<Vec<Polynomial>> = m.to_vec();
    let mut negate = false;
    let mut prev = Polynomial::one(ring);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Polynomial::zero(ring));
            };
            a.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)?
                    .expect("Bareiss division is exact over a domain");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}
