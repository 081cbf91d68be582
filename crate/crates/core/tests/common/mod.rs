#![allow(dead_code)]

use hilbloc::{
    Engine, Field, FractionElement, FractionPresentation, Monomial, MultiExponent, Polynomial,
    Ring, Scalar,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_scalar(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    match field.order() {
        Some(q) => field.from_i64(rng.gen_range(0..q as i64)),
        None => field.from_i64(rng.gen_range(-3..=3)),
    }
}

pub fn nonzero_scalar(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    loop {
        let c = random_scalar(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

/// All monomials of total degree exactly `d` in `n` variables.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    if n == 0 {
        return if d == 0 {
            vec![Monomial::one(0)]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for rest in monomials_of_degree(n - 1, d - first) {
            let mut e = vec![first];
            e.extend_from_slice(rest.exponents());
            out.push(Monomial::from_exponents(e));
        }
    }
    out
}

pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

/// A random polynomial with up to `terms` terms of total degree at most `max_deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, ring: &Ring, max_deg: u32, terms: usize) -> Polynomial {
    let monos = monomials_up_to(ring.nvars(), max_deg);
    let picks = (0..terms).map(|_| {
        (
            monos[rng.gen_range(0..monos.len())].clone(),
            random_scalar(rng, ring.field()),
        )
    });
    Polynomial::from_terms(ring, picks.collect::<Vec<_>>())
}

pub fn random_nonzero_poly(
    rng: &mut ChaCha8Rng,
    ring: &Ring,
    max_deg: u32,
    terms: usize,
) -> Polynomial {
    loop {
        let p = random_poly(rng, ring, max_deg, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_nonconstant_poly(
    rng: &mut ChaCha8Rng,
    ring: &Ring,
    max_deg: u32,
    terms: usize,
) -> Polynomial {
    loop {
        let p = random_poly(rng, ring, max_deg, terms);
        if !p.is_constant() {
            return p;
        }
    }
}

/// A random homogeneous polynomial of degree `d` (possibly zero).
pub fn random_homogeneous(rng: &mut ChaCha8Rng, ring: &Ring, d: u32, terms: usize) -> Polynomial {
    let monos = monomials_of_degree(ring.nvars(), d);
    let picks = (0..terms).map(|_| {
        (
            monos[rng.gen_range(0..monos.len())].clone(),
            random_scalar(rng, ring.field()),
        )
    });
    Polynomial::from_terms(ring, picks.collect::<Vec<_>>())
}

/// A random monic univariate polynomial of degree `d` in variable 0.
pub fn random_monic(rng: &mut ChaCha8Rng, ring: &Ring, d: u32) -> Polynomial {
    let x = Polynomial::var(ring, 0);
    let mut m = x.pow(d);
    for i in 0..d {
        m = &m + &x.pow(i).scale(&random_scalar(rng, ring.field()));
    }
    m
}

/// Value of a prime-field scalar as an integer in `0..p`.
pub fn fp_value(c: &Scalar) -> u64 {
    match c {
        Scalar::Prime(e) => e.value(),
        Scalar::Rational(_) => panic!("expected a prime-field scalar"),
    }
}

/// Rank of a matrix over F_p by Gaussian elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = (1..p)
            .find(|&i| rows[rank][c] * i % p == 1)
            .expect("unit pivot");
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let factor = rows[r][c];
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + p * p - factor * rows[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn random_element(
    rng: &mut ChaCha8Rng,
    eng: &Engine,
    u: &FractionPresentation,
) -> hilbloc::Result<FractionElement> {
    let a = MultiExponent::from_pairs((0..u.pairs().len()).map(|i| (i, rng.gen_range(0..=2))));
    let module = u.tensor_power(eng, &a)?;
    let mut p = Polynomial::zero(u.ring());
    for g in module.numerator() {
        p = &p + &(&random_poly(rng, u.ring(), 2, 2) * g);
    }
    u.element(eng, &p, &a)
}

/// The same element rewritten with a larger exponent and perturbed by the null ideal.
pub fn rewrite(
    rng: &mut ChaCha8Rng,
    eng: &Engine,
    u: &FractionPresentation,
    e: &FractionElement,
) -> hilbloc::Result<FractionElement> {
    let extra = MultiExponent::from_pairs((0..u.pairs().len()).map(|i| (i, rng.gen_range(0..=1))));
    let total = e.exponent().add(&extra);
    let mut noise = Polynomial::zero(u.ring());
    for g in u.null_ideal(eng)?.generators() {
        noise = &noise + &(&random_poly(rng, u.ring(), 1, 2) * g);
    }
    let p = &(e.numerator() * &u.section_power(&extra)) + &(&noise * &u.section_power(&total));
    u.element(eng, &p, &total)
}
