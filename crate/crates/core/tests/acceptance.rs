//! Acceptance run: one pass/fail line per criterion, nonzero exit on any failure.

mod common;

use std::error::Error as StdError;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use hilbloc::flat::sigma_inverting_equiv;
use hilbloc::hilb::{
    enumerate_points, stalk_hilb, verify_localized_count, AffineSpace, UnivFamilyA1,
};
use hilbloc::nonscheme::{
    intersection_is_fraction_ring, member_partial_localization, standard_samples, FactoredFraction,
    Side,
};
use hilbloc::poly::sylvester_resultant;
use hilbloc::{
    parse_poly, CoordinateRing, Engine, Field, FiniteFlatAlgebra, FractionElement,
    FractionPresentation, Ideal, InvertibleModule, Monomial, MultiExponent, Polynomial, Ring,
    RingMap, SectionPair,
};
use rand::Rng;

type Outcome = Result<String, Box<dyn StdError>>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+).into());
        }
    };
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 10] = [
        (
            "AC1",
            "Groebner membership matches the linear-algebra oracle",
            ac1,
        ),
        (
            "AC2",
            "extension of the contraction recovers the ideal of R_f",
            ac2,
        ),
        (
            "AC3",
            "fraction equality is an equivalence and s/s = 1",
            ac3,
        ),
        (
            "AC4",
            "norm of multiplication equals the Sylvester resultant",
            ac4,
        ),
        ("AC5", "double count of points of the localized line", ac5),
        (
            "AC6",
            "stalk of the Hilbert scheme at the origin has one point",
            ac6,
        ),
        (
            "AC7",
            "colength-2 ideals of the plane match the matrix oracle",
            ac7,
        ),
        (
            "AC8",
            "norm and operator verdicts of the sigma-inverting test agree",
            ac8,
        ),
        (
            "AC9",
            "S- and T-membership together equal f-membership",
            ac9,
        ),
        (
            "AC10",
            "finiteness verdict matches the dimension comparison",
            ac10,
        ),
    ];
    let filters: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let selected: Vec<_> = criteria
        .iter()
        .filter(|(id, name, _)| {
            filters.is_empty()
                || filters
                    .iter()
                    .any(|f| id.contains(f.as_str()) || name.contains(f.as_str()))
        })
        .collect();
    panic::set_hook(Box::new(|_| {}));
    let total = Instant::now();
    let mut failed = 0;
    for (id, name, run) in &selected {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(Ok(detail)) => println!("[PASS] {id} {name} ({detail}; {secs:.2}s)"),
            Ok(Err(e)) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {e} ({secs:.2}s)");
            }
            Err(p) => {
                failed += 1;
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("[FAIL] {id} {name}: panicked: {msg} ({secs:.2}s)");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        selected.len() - failed,
        selected.len(),
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ring(field: Field, vars: &[&str]) -> Ring {
    Ring::new(field, vars.iter().copied()).expect("valid ring")
}

fn poly(r: &Ring, s: &str) -> Polynomial {
    parse_poly(r, s).expect("valid polynomial")
}

// ---------------------------------------------------------------- AC1

/// Membership of a homogeneous `g` of degree `d` in the ideal of homogeneous
/// `gens`: `g` must lie in the span of the degree-`d` multiples `m·f`.
fn degree_oracle(p: u64, nvars: usize, gens: &[Polynomial], g: &Polynomial, d: u32) -> bool {
    let monos = monomials_of_degree(nvars, d);
    let index = |m: &[u32]| {
        monos
            .iter()
            .position(|x| x.exponents() == m)
            .expect("monomial of degree d")
    };
    let vector = |poly: &Polynomial, shift: &Monomial| {
        let mut v = vec![0u64; monos.len()];
        for (m, c) in poly.terms() {
            let e: Vec<u32> = m
                .exponents()
                .iter()
                .zip(shift.exponents())
                .map(|(a, b)| a + b)
                .collect();
            v[index(&e)] = fp_value(c);
        }
        v
    };
    let mut rows = Vec::new();
    for f in gens {
        let df = f.total_degree().expect("nonzero generator");
        if df <= d {
            for m in monomials_of_degree(nvars, d - df) {
                rows.push(vector(f, &m));
            }
        }
    }
    let before = rank_mod_p(rows.clone(), p);
    rows.push(vector(g, &Monomial::one(nvars)));
    rank_mod_p(rows, p) == before
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let eng = Engine::default();
    let mut rng = rng(0xA1);
    let names = ["x", "y", "z"];
    let (mut pairs, mut members) = (0, 0);
    for case in 0..520usize {
        let p = if case % 2 == 0 { 2 } else { 3 };
        let nvars = 1 + (case / 2) % 3;
        let r = ring(Field::Prime(p), &names[..nvars]);
        let mut gens = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let deg = rng.gen_range(1..=3);
            let g = random_homogeneous(&mut rng, &r, deg, 3);
            if !g.is_zero() {
                gens.push(g);
            }
        }
        let d = rng.gen_range(1..=4u32);
        let g = if rng.gen_bool(0.5) {
            let mut acc = Polynomial::zero(&r);
            for f in &gens {
                let df = f.total_degree().unwrap();
                if df <= d {
                    acc = &acc + &(&random_homogeneous(&mut rng, &r, d - df, 3) * f);
                }
            }
            acc
        } else {
            random_homogeneous(&mut rng, &r, d, 4)
        };
        let engine = Ideal::new(&r, gens.clone())?.contains(&eng, &g)?;
        let oracle = degree_oracle(p, nvars, &gens, &g, d);
        ensure!(
            engine == oracle,
            "membership of {g} in {:?} over F{p}: engine {engine}, oracle {oracle}",
            gens
        );
        pairs += 1;
        members += usize::from(engine);
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    ensure!(
        members > 100 && pairs - members > 100,
        "unbalanced sample: {members} of {pairs} are members"
    );
    Ok(format!("{pairs} pairs, {members} members, exact agreement"))
}

// ---------------------------------------------------------------- AC2

fn ac2() -> Outcome {
    let eng = Engine::default();
    let mut rng = rng(0xA2);
    let mut nontrivial = 0;
    for case in 0..50 {
        let r = match case % 3 {
            0 => ring(Field::Prime(2), &["x", "y"]),
            1 => ring(Field::Prime(3), &["x", "y"]),
            _ => ring(Field::Rationals, &["x"]),
        };
        let deg = if r.nvars() == 1 { 3 } else { 2 };
        let f = random_nonconstant_poly(&mut rng, &r, 2, 3);
        let u =
            FractionPresentation::free(&eng, &CoordinateRing::polynomial(&r), &[("f", f.clone())])?;
        let mut gens = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let p = random_poly(&mut rng, &r, deg, 3);
            let k = rng.gen_range(0..=2);
            gens.push(u.element(&eng, &p, &MultiExponent::single(0, k))?);
        }
        let c = u.extend_contract(&eng, &gens)?;
        let ext = c
            .ideal
            .generators()
            .iter()
            .map(|g| u.from_base(&eng, g))
            .collect::<hilbloc::Result<Vec<_>>>()?;
        let original = u.rabinowitsch_ideal(&gens)?.reduced(&eng)?;
        let roundtrip = u.rabinowitsch_ideal(&ext)?.reduced(&eng)?;
        ensure!(
            original.generators() == roundtrip.generators(),
            "case {case}: f = {f}, J = {:?}: bases differ ({original} vs {roundtrip})",
            gens.iter()
                .map(|g| u.display_element(g))
                .collect::<Vec<_>>()
        );
        if !original.is_unit(&eng)? && !original.is_zero() {
            nontrivial += 1;
        }
    }
    ensure!(
        nontrivial >= 10,
        "only {nontrivial} proper nonzero ideals sampled"
    );
    Ok(format!("50 roundtrips, {nontrivial} proper nonzero"))
}

// ---------------------------------------------------------------- AC3

fn ac3() -> Outcome {
    let eng = Engine::default();
    let mut rng = rng(0xA3);
    let mut presentations = Vec::new();
    {
        let r = ring(Field::Rationals, &["x"]);
        let base = CoordinateRing::polynomial(&r);
        presentations.push((
            "Q[x] at x, x-1",
            FractionPresentation::free(
                &eng,
                &base,
                &[("x", poly(&r, "x")), ("x1", poly(&r, "x - 1"))],
            )?,
        ));
    }
    {
        let r = ring(Field::Prime(3), &["x", "y"]);
        let base = CoordinateRing::new(Ideal::new(&r, vec![poly(&r, "x*y")])?);
        presentations.push((
            "F3[x,y]/(xy) at x",
            FractionPresentation::free(&eng, &base, &[("x", poly(&r, "x"))])?,
        ));
    }
    {
        let r = ring(Field::Rationals, &["x", "y"]);
        let base = CoordinateRing::new(Ideal::new(&r, vec![poly(&r, "y^2 - x^3 + x")])?);
        let m = InvertibleModule::fractional(
            &eng,
            &base,
            &[poly(&r, "x"), poly(&r, "y")],
            &poly(&r, "1"),
        )?;
        ensure!(!m.is_free(), "(x, y) on the curve should not be principal");
        let pair = SectionPair::new(&eng, "y", poly(&r, "y"), m)?;
        presentations.push((
            "curve at y in (x, y)",
            FractionPresentation::new(&base, vec![pair])?,
        ));
    }
    let mut equal_pairs = 0;
    for (name, u) in &presentations {
        for i in 0..u.pairs().len() {
            ensure!(
                u.fraction_eq(&eng, &u.section_ratio(i), &u.one())?,
                "{name}: s/s != 1 for section {i}"
            );
        }
        for t in 0..200 {
            let a = random_element(&mut rng, &eng, u)?;
            let b = if rng.gen_bool(0.5) {
                rewrite(&mut rng, &eng, u, &a)?
            } else {
                random_element(&mut rng, &eng, u)?
            };
            let c = if rng.gen_bool(0.5) {
                rewrite(&mut rng, &eng, u, &b)?
            } else {
                random_element(&mut rng, &eng, u)?
            };
            let show = |e: &FractionElement| u.display_element(e);
            ensure!(
                u.fraction_eq(&eng, &a, &a)?,
                "{name} #{t}: {} not equal to itself",
                show(&a)
            );
            let ab = u.fraction_eq(&eng, &a, &b)?;
            let bc = u.fraction_eq(&eng, &b, &c)?;
            ensure!(
                ab == u.fraction_eq(&eng, &b, &a)?,
                "{name} #{t}: symmetry fails for {} and {}",
                show(&a),
                show(&b)
            );
            ensure!(
                bc == u.fraction_eq(&eng, &c, &b)?,
                "{name} #{t}: symmetry fails for {} and {}",
                show(&b),
                show(&c)
            );
            if ab && bc {
                ensure!(
                    u.fraction_eq(&eng, &a, &c)?,
                    "{name} #{t}: transitivity fails for {}, {}, {}",
                    show(&a),
                    show(&b),
                    show(&c)
                );
            }
            let r = rewrite(&mut rng, &eng, u, &a)?;
            ensure!(
                u.fraction_eq(&eng, &a, &r)?,
                "{name} #{t}: {} differs from its rewrite {}",
                show(&a),
                show(&r)
            );
            equal_pairs += usize::from(ab) + usize::from(bc);
        }
    }
    ensure!(equal_pairs >= 300, "only {equal_pairs} equal pairs sampled");
    Ok(format!("3 rings x 200 triples, {equal_pairs} equal pairs"))
}

// ---------------------------------------------------------------- AC4

/// `A[x]/(m)` over a coefficient ring with no variables, `m` monic in `x`.
fn constant_base_algebra(
    eng: &Engine,
    field: Field,
    m: &[i64],
) -> hilbloc::Result<FiniteFlatAlgebra> {
    let k = Ring::new(field, Vec::<String>::new())?;
    let coeffs: Vec<Polynomial> = m[..m.len() - 1]
        .iter()
        .map(|&c| Polynomial::from_i64(&k, c))
        .collect();
    FiniteFlatAlgebra::from_monic(eng, &CoordinateRing::polynomial(&k), "x", &coeffs)
}

fn univariate(r: &Ring, coeffs: &[i64]) -> Polynomial {
    let x = Polynomial::var(r, 0);
    coeffs
        .iter()
        .enumerate()
        .fold(Polynomial::zero(r), |acc, (i, &c)| {
            &acc + &x.pow(i as u32).scale(&r.field().from_i64(c))
        })
}

fn norm_matches_resultant(
    eng: &Engine,
    field: Field,
    m: &[i64],
    f: &[i64],
) -> hilbloc::Result<Option<String>> {
    let e = constant_base_algebra(eng, field, m)?;
    let amb = e.ambient_ring().expect("quotient presentation").clone();
    let (mp, fp) = (univariate(&amb, m), univariate(&amb, f));
    let det = e.det_section(eng, &e.section(eng, &fp)?)?;
    let res = sylvester_resultant(&mp, &fp, 0)?;
    let res = res
        .restrict(e.base().ring(), &[])
        .expect("resultant is a constant");
    Ok((det != res).then(|| format!("m = {mp}, f = {fp}: det {det}, resultant {res}")))
}

fn ac4() -> Outcome {
    let eng = Engine::default();
    let mut rng = rng(0xA4);
    let f3 = Field::Prime(3);
    let mut checked = 0;
    for d in 1..=4usize {
        for idx in 0..3usize.pow(d as u32) {
            let mut m: Vec<i64> = (0..d)
                .map(|i| ((idx / 3usize.pow(i as u32)) % 3) as i64)
                .collect();
            m.push(1);
            let mut fs = vec![vec![0, 1]];
            while fs.len() < 4 {
                let f: Vec<i64> = (0..=rng.gen_range(0..=3))
                    .map(|_| rng.gen_range(0..3))
                    .collect();
                if f.iter().any(|&c| c != 0) {
                    fs.push(f);
                }
            }
            for f in fs {
                if let Some(msg) = norm_matches_resultant(&eng, f3, &m, &f)? {
                    return Err(msg.into());
                }
                checked += 1;
            }
        }
    }
    let fam = UnivFamilyA1::new(&eng, 2, Field::Rationals)?;
    for _ in 0..20 {
        let f: Vec<i64> = loop {
            let f: Vec<i64> = (0..=rng.gen_range(0..=3))
                .map(|_| rng.gen_range(-3..=3))
                .collect();
            if f.iter().any(|&c| c != 0) {
                break f;
            }
        };
        let mut m: Vec<i64> = (0..rng.gen_range(1..=4))
            .map(|_| rng.gen_range(-3..=3))
            .collect();
        m.push(1);
        if let Some(msg) = norm_matches_resultant(&eng, Field::Rationals, &m, &f)? {
            return Err(msg.into());
        }
        let section = univariate(fam.line(), &f);
        let det = fam.norm_of_section(&eng, &section)?;
        let lifted = section.embed(fam.ambient(), &[0]);
        let keep: Vec<usize> = (1..=2).collect();
        let res = sylvester_resultant(fam.monic(), &lifted, 0)?
            .restrict(fam.base_ring(), &keep)
            .expect("free of x");
        ensure!(
            det == res,
            "universal quadratic, f = {section}: det {det}, resultant {res}"
        );
        checked += 2;
    }
    Ok(format!("{checked} (m, f) pairs"))
}

// ---------------------------------------------------------------- AC5

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let inv = (1..p)
        .find(|&i| b[b.len() - 1] * i % p == 1)
        .expect("nonzero lead");
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r[r.len() - 1] * inv % p;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bc % p) % p;
        }
        r = trim(r);
    }
    r
}

fn coprime_mod_p(a: &[u64], b: &[u64], p: u64) -> bool {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem_mod_p(&a, &b, p);
        a = b;
        b = r;
    }
    a.len() == 1
}

/// Monic polynomials of degree `n` over `F_q` coprime to every section.
fn coprime_count(n: usize, q: u64, sections: &[Vec<u64>]) -> usize {
    let mut count = 0;
    for idx in 0..q.pow(n as u32) {
        let mut m: Vec<u64> = (0..n).map(|i| (idx / q.pow(i as u32)) % q).collect();
        m.push(1);
        if sections.iter().all(|s| coprime_mod_p(&m, s, q)) {
            count += 1;
        }
    }
    count
}

fn ac5() -> Outcome {
    let eng = Engine::default();
    let section_sets: [&[(&str, [i64; 3])]; 5] = [
        &[],
        &[("x", [0, 1, 0])],
        &[("x - 1", [-1, 1, 0])],
        &[("x", [0, 1, 0]), ("x - 1", [-1, 1, 0])],
        &[("x^2 + x + 1", [1, 1, 1])],
    ];
    let mut cases = 0;
    for n in 1..=3 {
        for q in [2u64, 3] {
            let line = ring(Field::Prime(q), &["x"]);
            for set in section_sets {
                let sections: Vec<Polynomial> = set.iter().map(|(s, _)| poly(&line, s)).collect();
                let dense: Vec<Vec<u64>> = set
                    .iter()
                    .map(|(_, c)| c.iter().map(|&v| v.rem_euclid(q as i64) as u64).collect())
                    .collect();
                let report = verify_localized_count(&eng, n, &sections, q)?;
                let oracle = coprime_count(n, q, &dense);
                let names: Vec<&str> = set.iter().map(|(s, _)| *s).collect();
                ensure!(
                    report.holds() && report.count_ideal == oracle,
                    "n={n} q={q} S={names:?}: ideals {}, norms {}, oracle {oracle}, consistent {}, closed {}",
                    report.count_ideal,
                    report.count_norm,
                    report.norm_consistent,
                    report.closed
                );
                if n == 2 && q == 3 && names == ["x"] {
                    ensure!(
                        report.count_ideal == 6 && report.count_norm == 6,
                        "anchor n=2 q=3 S={{x}} gave {report:?}"
                    );
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} grid cases, anchor 6 = 6"))
}

// ---------------------------------------------------------------- AC6

fn ac6() -> Outcome {
    let eng = Engine::default();
    for n in 1..=3 {
        for q in [2u64, 3] {
            let s = stalk_hilb(&eng, n, q)?;
            ensure!(
                s.holds(),
                "n={n} q={q}: ideal route {}, norm route {}",
                s.count_ideal,
                s.count_norm
            );
            ensure!(s.test_sections > 0, "n={n} q={q}: no test sections");
        }
    }
    Ok("6 cases, both routes give 1".into())
}

// ---------------------------------------------------------------- AC7

/// Colength-2 ideals of `F_q[x,y]` counted as triples `(X, Y, v)` of commuting
/// 2x2 matrices with a cyclic vector, modulo `GL_2`; also those with `X` invertible.
fn plane_oracle(q: u64) -> (u64, u64) {
    let mats: Vec<[u64; 4]> = (0..q.pow(4))
        .map(|i| [i % q, (i / q) % q, (i / q / q) % q, (i / q / q / q) % q])
        .collect();
    let mul = |a: &[u64; 4], b: &[u64; 4]| {
        [
            (a[0] * b[0] + a[1] * b[2]) % q,
            (a[0] * b[1] + a[1] * b[3]) % q,
            (a[2] * b[0] + a[3] * b[2]) % q,
            (a[2] * b[1] + a[3] * b[3]) % q,
        ]
    };
    let apply = |a: &[u64; 4], v: (u64, u64)| {
        ((a[0] * v.0 + a[1] * v.1) % q, (a[2] * v.0 + a[3] * v.1) % q)
    };
    let det2 = |u: (u64, u64), w: (u64, u64)| (u.0 * w.1 % q + q - u.1 * w.0 % q) % q;
    let vectors: Vec<(u64, u64)> = (0..q * q).map(|i| (i % q, i / q)).collect();
    let (mut total, mut x_unit) = (0u64, 0u64);
    for x in &mats {
        let x_invertible = !(x[0] * x[3] % q + q - x[1] * x[2] % q).is_multiple_of(q);
        for y in &mats {
            if mul(x, y) != mul(y, x) {
                continue;
            }
            for &v in &vectors {
                if det2(v, apply(x, v)) != 0 || det2(v, apply(y, v)) != 0 {
                    total += 1;
                    x_unit += u64::from(x_invertible);
                }
            }
        }
    }
    let gl2 = (q * q - 1) * (q * q - q);
    assert!(
        total % gl2 == 0 && x_unit % gl2 == 0,
        "orbit counts must be divisible by |GL_2|"
    );
    (total / gl2, x_unit / gl2)
}

fn ac7() -> Outcome {
    let eng = Engine::default();
    let mut detail = Vec::new();
    for q in [2u64, 3] {
        let field = Field::Prime(q);
        let plane = AffineSpace::Plane.ring(field);
        let all = enumerate_points(&eng, AffineSpace::Plane, field, 2, &[])?.len() as u64;
        let with_x = enumerate_points(&eng, AffineSpace::Plane, field, 2, &[poly(&plane, "x")])?
            .len() as u64;
        let (oracle_all, oracle_x) = plane_oracle(q);
        let closed = q.pow(4) + q.pow(3);
        if q == 2 {
            ensure!(all == 24, "enumeration over F2 gave {all}, expected 24");
        }
        ensure!(
            all == oracle_all && all == closed,
            "q={q}: enumeration {all}, oracle {oracle_all}, q^4+q^3 = {closed}"
        );
        ensure!(
            with_x == oracle_x,
            "q={q}, S={{x}}: enumeration {with_x}, oracle {oracle_x}"
        );
        detail.push(format!("q={q}: {all} points, {with_x} with x invertible"));
    }
    Ok(detail.join(", "))
}

// ---------------------------------------------------------------- AC8

fn ac8() -> Outcome {
    let eng = Engine::default();
    let qa = ring(Field::Rationals, &["a"]);
    let a_base = CoordinateRing::polynomial(&qa);
    let pa = |s: &str| poly(&qa, s);
    let quotient = |r: &Ring, rels: &[&str]| -> hilbloc::Result<CoordinateRing> {
        Ok(CoordinateRing::new(Ideal::new(
            r,
            rels.iter().map(|s| poly(r, s)).collect(),
        )?))
    };

    // x^2 - a over Q[a]
    let e1 = FiniteFlatAlgebra::from_monic(&eng, &a_base, "x", &[pa("-a"), pa("0")])?;
    let e1_amb = e1.ambient_ring().unwrap().clone();
    let s_x = e1.section(&eng, &poly(&e1_amb, "x"))?;
    let s_x1 = e1.section(&eng, &poly(&e1_amb, "x - 1"))?;

    // A x A with idempotent basis and the section (1, a)
    let one = pa("1");
    let zero = pa("0");
    let mut table = vec![vec![vec![zero.clone(); 2]; 2]; 2];
    table[0][0][0] = one.clone();
    table[1][1][1] = one.clone();
    let e2 = FiniteFlatAlgebra::from_table(
        &eng,
        &a_base,
        vec!["e1".into(), "e2".into()],
        table,
        vec![one.clone(), one.clone()],
    )?;
    let s_pair = e2.section_from_coords(vec![pa("1"), pa("a")])?;

    // universal quadratic over Q[e1, e2]
    let fam = UnivFamilyA1::new(&eng, 2, Field::Rationals)?;
    let quad = fam.algebra();
    let quad_base = quad.base().clone();
    let fx = fam.section(&eng, &poly(fam.line(), "x"))?;
    let fx1 = fam.section(&eng, &poly(fam.line(), "x - 1"))?;
    let q0 = Ring::new(Field::Rationals, Vec::<String>::new())?;
    let to_point = |e: [i64; 2]| {
        RingMap::new(
            &eng,
            quad_base.clone(),
            CoordinateRing::polynomial(&q0),
            e.iter().map(|&v| Polynomial::from_i64(&q0, v)).collect(),
        )
    };

    // x^2 + x + a over F2[a]
    let fa = ring(Field::Prime(2), &["a"]);
    let fa_base = CoordinateRing::polynomial(&fa);
    let e3 = FiniteFlatAlgebra::from_monic(&eng, &fa_base, "x", &[poly(&fa, "a"), poly(&fa, "1")])?;
    let s3 = e3.section(&eng, &poly(e3.ambient_ring().unwrap(), "x"))?;
    let f2 = Ring::new(Field::Prime(2), Vec::<String>::new())?;
    let to_f2 = |v: i64| {
        RingMap::new(
            &eng,
            fa_base.clone(),
            CoordinateRing::polynomial(&f2),
            vec![Polynomial::from_i64(&f2, v)],
        )
    };

    let qab = ring(Field::Rationals, &["a", "b"]);
    let along = |target: CoordinateRing| {
        let image = Polynomial::var(target.ring(), 0);
        RingMap::new(&eng, a_base.clone(), target, vec![image])
    };

    let cases: Vec<(&str, &FiniteFlatAlgebra, Vec<_>, RingMap, bool)> = vec![
        (
            "x^2-a, {x}, a=1",
            &e1,
            vec![s_x.clone()],
            along(quotient(&qa, &["a - 1"])?)?,
            true,
        ),
        (
            "x^2-a, {x}, a=0",
            &e1,
            vec![s_x.clone()],
            along(quotient(&qa, &["a"])?)?,
            false,
        ),
        (
            "x^2-a, {x}, zero ring",
            &e1,
            vec![s_x.clone()],
            along(quotient(&qa, &["1"])?)?,
            true,
        ),
        (
            "x^2-a, {x}, a inverted",
            &e1,
            vec![s_x.clone()],
            along(quotient(&qab, &["a*b - 1"])?)?,
            true,
        ),
        (
            "x^2-a, {x-1}, a=1",
            &e1,
            vec![s_x1.clone()],
            along(quotient(&qa, &["a - 1"])?)?,
            false,
        ),
        (
            "AxA, {(1,a)}, identity",
            &e2,
            vec![s_pair.clone()],
            along(a_base.clone())?,
            false,
        ),
        (
            "quadratic, {x, x-1}, (x-1)(x-2)",
            quad,
            vec![fx.clone(), fx1.clone()],
            to_point([3, 2])?,
            false,
        ),
        (
            "quadratic, {x, x-1}, x^2+1",
            quad,
            vec![fx.clone(), fx1.clone()],
            to_point([0, 1])?,
            true,
        ),
        (
            "x^2+x+a over F2, {x}, a=1",
            &e3,
            vec![s3.clone()],
            to_f2(1)?,
            true,
        ),
        (
            "x^2+x+a over F2, {x}, a=0",
            &e3,
            vec![s3.clone()],
            to_f2(0)?,
            false,
        ),
    ];
    let mut factoring = 0;
    for (name, e, sections, phi, expected) in &cases {
        let v = sigma_inverting_equiv(&eng, e, sections, phi)?;
        ensure!(
            v.agree(),
            "{name}: norms {} but operators {}",
            v.norms_invertible,
            v.operators_invertible
        );
        ensure!(
            v.norms_invertible == *expected,
            "{name}: expected {expected}, got {}",
            v.norms_invertible
        );
        factoring += usize::from(*expected);
    }
    Ok(format!(
        "{} cases, {factoring} factoring, {} not",
        cases.len(),
        cases.len() - factoring
    ))
}

// ---------------------------------------------------------------- AC9

/// Independent membership test for a reduced fraction with denominator `D`:
/// with `(D') = (D) : f^∞`, membership needs `(D') ∩ k[x] ≠ 0` on the `S` side,
/// `(D') ∩ k[y] ≠ 0` on the `T` side and `D'` a unit for `f` alone.
fn ideal_oracle(
    eng: &Engine,
    g: &FactoredFraction,
    f: &Polynomial,
    side: Side,
) -> hilbloc::Result<bool> {
    let mut d = Polynomial::one(f.ring());
    for (h, k) in g.factors() {
        d = &d * &h.pow(*k);
    }
    let saturated = Ideal::principal(&d).saturate(eng, f)?;
    match side {
        Side::FOnly => saturated.is_unit(eng),
        Side::S => Ok(!saturated.eliminate(eng, &[1])?.reduced(eng)?.is_zero()),
        Side::T => Ok(!saturated.eliminate(eng, &[0])?.reduced(eng)?.is_zero()),
    }
}

fn ac9() -> Outcome {
    let eng = Engine::default();
    let mut rng = rng(0xA9);
    let r = ring(Field::Rationals, &["x", "y"]);
    let x = poly(&r, "x");
    let pool: Vec<Polynomial> = [
        "x",
        "x - 1",
        "x + 2",
        "x^2 + 1",
        "y",
        "y + 1",
        "y^2 - 2",
        "x + y",
        "x*y - 1",
        "x + y^2",
        "x^2 + y + 1",
    ]
    .iter()
    .map(|s| poly(&r, s))
    .collect();
    let mut samples = Vec::new();
    while samples.len() < 100 {
        let count = rng.gen_range(1..=3);
        let mut idx: Vec<usize> = (0..pool.len()).collect();
        let mut factors = Vec::new();
        if rng.gen_bool(0.25) {
            // denominators that are powers of f alone
            factors.push((x.clone(), rng.gen_range(1..=3)));
            idx.clear();
        }
        for _ in 0..count.min(idx.len()) {
            let i = idx.remove(rng.gen_range(0..idx.len()));
            factors.push((pool[i].clone(), rng.gen_range(1..=3)));
        }
        let numerator = random_nonzero_poly(&mut rng, &r, 2, 3);
        if let Ok(g) = FactoredFraction::new(numerator, factors) {
            samples.push(g);
        }
    }
    let report = intersection_is_fraction_ring(&x, &samples)?;
    ensure!(
        report.holds(),
        "biconditional fails on {:?}",
        report.violations()
    );
    let (mut in_s, mut in_t, mut in_f) = (0, 0, 0);
    for (g, verdict) in samples.iter().zip(&report.samples) {
        for (side, got) in [
            (Side::S, verdict.in_s),
            (Side::T, verdict.in_t),
            (Side::FOnly, verdict.in_f),
        ] {
            let oracle = ideal_oracle(&eng, g, &x, side)?;
            ensure!(
                got == oracle,
                "{g} on side {side:?}: factor test {got}, ideal oracle {oracle}"
            );
            ensure!(
                member_partial_localization(g, &x, side)? == got,
                "report disagrees with direct membership for {g}"
            );
        }
        in_s += usize::from(verdict.in_s);
        in_t += usize::from(verdict.in_t);
        in_f += usize::from(verdict.in_f);
    }
    ensure!(
        in_s > in_f && in_t > in_f && in_f > 0,
        "degenerate sample: S {in_s}, T {in_t}, f {in_f}"
    );

    let fixed = intersection_is_fraction_ring(&x, &standard_samples(&r)?)?;
    let s: Vec<bool> = fixed.samples.iter().map(|v| v.in_s).collect();
    let t: Vec<bool> = fixed.samples.iter().map(|v| v.in_t).collect();
    let both: Vec<&str> = fixed
        .samples
        .iter()
        .filter(|v| v.in_s && v.in_t)
        .map(|v| v.fraction.as_str())
        .collect();
    ensure!(
        s == [true, false, true, true, false],
        "fixed sample S-membership {s:?}"
    );
    ensure!(
        t == [false, true, true, true, true],
        "fixed sample T-membership {t:?}"
    );
    ensure!(
        both == ["1 / [x]", "x + y / [x]^2"],
        "fixed sample intersection {both:?}"
    );
    ensure!(fixed.holds(), "fixed sample violates the biconditional");
    Ok(format!(
        "100 random fractions (S {in_s}, T {in_t}, f {in_f}), fixed sample classified"
    ))
}

// ---------------------------------------------------------------- AC10

fn ac10() -> Outcome {
    let eng = Engine::default();
    let mut rng = rng(0xA10);
    let (mut grew, mut kept) = (0, 0);
    for case in 0..25 {
        let (r, mut gens) = if case % 2 == 0 {
            let p = [2u64, 3, 5][(case / 2) % 3];
            let r = ring(Field::Prime(p), &["x", "y"]);
            let (da, db) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
            let a = random_monic(&mut rng, &ring(Field::Prime(p), &["x"]), da).embed(&r, &[0]);
            let b = random_monic(&mut rng, &ring(Field::Prime(p), &["y"]), db).embed(&r, &[1]);
            let gens = vec![a, b];
            (r, gens)
        } else {
            let r = ring(Field::Rationals, &["x"]);
            let mut a = Polynomial::one(&r);
            for _ in 0..rng.gen_range(1..=3) {
                let root = Polynomial::from_i64(&r, rng.gen_range(-2..=2));
                a = &a * &(&poly(&r, "x") - &root);
            }
            (r, vec![a])
        };
        if rng.gen_bool(0.3) {
            gens.push(random_poly(&mut rng, &r, 2, 2));
        }
        let nsections = rng.gen_range(1..=2);
        let mut sections = Vec::new();
        for i in 0..nsections {
            let s = if rng.gen_bool(0.5) {
                poly(&r, ["x", "x - 1", "x + 1"][rng.gen_range(0..3)])
            } else {
                random_nonzero_poly(&mut rng, &r, 1, 2)
            };
            sections.push((format!("s{i}"), s));
        }
        let pairs: Vec<(&str, Polynomial)> = sections
            .iter()
            .map(|(l, s)| (l.as_str(), s.clone()))
            .collect();
        let u = FractionPresentation::free(&eng, &CoordinateRing::polynomial(&r), &pairs)?;
        let elems = gens
            .iter()
            .map(|g| u.from_base(&eng, g))
            .collect::<hilbloc::Result<Vec<_>>>()?;
        let c = u.extend_contract(&eng, &elems)?;
        let dim_r = c.ideal.colength(&eng)?.dimension();
        let dim_local = u.rabinowitsch_ideal(&elems)?.colength(&eng)?.dimension();
        let (Some(dim_r), Some(dim_local)) = (dim_r, dim_local) else {
            return Err(format!(
                "case {case}: expected finite colength, got {dim_r:?} and {dim_local:?}"
            )
            .into());
        };
        let dims_agree = dim_r == dim_local;
        let dim_start = Ideal::new(&r, gens.clone())?.colength(&eng)?.dimension();
        ensure!(
            dim_start.is_some_and(|d| d >= dim_r),
            "case {case}: starting ideal has colength {dim_start:?}, contraction {dim_r}"
        );
        ensure!(
            c.is_isomorphism() == dims_agree,
            "case {case}: I = {}, sections {:?}: verdict {}, dim R/I = {dim_r}, dim R_U/I_U = {dim_local}",
            c.ideal,
            sections,
            c.is_isomorphism()
        );
        if dim_start == Some(dim_r) {
            kept += 1;
        } else {
            grew += 1;
        }
    }
    // Over a field a finite-colength contraction is saturated, so every
    // section is a unit modulo it; the sample must still include cases where
    // contracting enlarges the starting ideal.
    ensure!(
        grew > 0 && kept > 0,
        "contraction enlarged {grew} ideals and kept {kept}"
    );
    Ok(format!(
        "25 cases, contraction enlarged {grew} starting ideals"
    ))
}
