//! Randomized algebraic laws. Each case draws a seed and builds its inputs
//! from a seeded generator, so failures replay from the printed seed.

mod common;

use common::*;
use hilbloc::flat::FiniteFlatAlgebra;
use hilbloc::fraction::Factorization;
use hilbloc::hilb::{verify_open_subscheme, UnivFamilyA1};
use hilbloc::nonscheme::{member_partial_localization, FactoredFraction, Side};
use hilbloc::{
    parse_poly, Colength, CoordinateRing, Engine, Field, FractionPresentation, Ideal,
    InvertibleModule, Monomial, MonomialOrder, MultiExponent, Polynomial, Rational, Ring, RingMap,
    SectionPair,
};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn ring(field: Field, vars: &[&str]) -> Ring {
    Ring::new(field, vars.iter().copied()).unwrap()
}

fn poly(r: &Ring, s: &str) -> Polynomial {
    parse_poly(r, s).unwrap()
}

fn staircase(eng: &Engine, ideal: &Ideal) -> Vec<Monomial> {
    match ideal.colength(eng).unwrap() {
        Colength::Finite(q) => q.staircase,
        Colength::Infinite => panic!("expected finite colength for {ideal}"),
    }
}

/// Matrix over F_p of multiplication by `g` from `R/I` (staircase of `source`)
/// to `R/J` (staircase of `target`), one row per source basis element.
fn mult_matrix(
    eng: &Engine,
    g: &Polynomial,
    source: &Ideal,
    target: &Ideal,
) -> (Vec<Vec<u64>>, usize) {
    let src = staircase(eng, source);
    let tgt = staircase(eng, target);
    let one = g.ring().field().one();
    let rows = src
        .iter()
        .map(|b| {
            let image = target.normal_form(eng, &g.mul_monomial(b, &one)).unwrap();
            tgt.iter()
                .map(|m| fp_value(&image.coefficient(m)))
                .collect()
        })
        .collect();
    (rows, tgt.len())
}

/// A finite-colength ideal `(a(x), b(y), extra)` of `F_p[x, y]`.
fn finite_ideal(rng: &mut ChaCha8Rng, r: &Ring) -> Ideal {
    let p = r.field();
    let (da, db) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let a = random_monic(rng, &ring(p, &["x"]), da).embed(r, &[0]);
    let b = random_monic(rng, &ring(p, &["y"]), db).embed(r, &[1]);
    let mut gens = vec![a, b];
    if rng.gen_bool(0.5) {
        gens.push(random_poly(rng, r, 2, 2));
    }
    Ideal::new(r, gens).unwrap()
}

fn small_prime(rng: &mut ChaCha8Rng) -> Field {
    Field::Prime([2, 3, 5][rng.gen_range(0..3)])
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

// ------------------------------------------------------------ scalars and orders

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn rationals_are_normalized(n in -500i64..500, d in 1i64..500, neg in any::<bool>()) {
        let d = if neg { -d } else { d };
        let q: Rational = format!("{n}/{d}").parse().unwrap();
        let num: i64 = q.numer().to_string().parse().unwrap();
        let den: i64 = q.denom().to_string().parse().unwrap();
        prop_assert!(den > 0);
        let gcd = |mut a: i64, mut b: i64| { while b != 0 { (a, b) = (b, a % b); } a.abs() };
        prop_assert_eq!(gcd(num, den), 1);
        prop_assert_eq!(num * d, n * den);
        if n == 0 {
            prop_assert_eq!((num, den), (0, 1));
        }
    }

    #[test]
    fn orders_refine_divisibility(a in prop::collection::vec(0u32..4, 3), b in prop::collection::vec(0u32..4, 3),
                                  c in prop::collection::vec(0u32..4, 3), k in 0usize..=3) {
        let (ma, mb, mc) = (Monomial::from_exponents(a), Monomial::from_exponents(b), Monomial::from_exponents(c));
        for order in [MonomialOrder::Lex, MonomialOrder::GrevLex, MonomialOrder::Block(k)] {
            prop_assert!(order.cmp(&ma, &ma.mul(&mc)).is_le());
            prop_assert_eq!(order.cmp(&ma, &mb), order.cmp(&ma.mul(&mc), &mb.mul(&mc)));
            prop_assert_eq!(order.cmp(&ma, &mb) == std::cmp::Ordering::Equal, ma == mb);
        }
    }
}

// ------------------------------------------------------------ ideal engine

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn reduced_bases_are_reduced(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let r = ring(small_prime(&mut rng), &["x", "y", "z"]);
        let gens: Vec<Polynomial> = (0..rng.gen_range(1..=3)).map(|_| random_poly(&mut rng, &r, 2, 3)).collect();
        let ideal = Ideal::new(&r, gens.clone()).unwrap();
        let gb = ideal.groebner(&eng).unwrap();
        let order = gb.order();
        let leads: Vec<Monomial> = gb.leading_monomials();
        for (i, g) in gb.polys().iter().enumerate() {
            prop_assert!(g.leading_term(order).unwrap().1.is_one());
            for (m, _) in g.terms() {
                for (j, l) in leads.iter().enumerate() {
                    prop_assert!(i == j || !l.divides(m), "{} has a term divisible by the lead of another element", g);
                }
            }
        }
        for g in &gens {
            prop_assert!(gb.normal_form(g).is_zero());
        }
        // the basis generates no more than the generators: each element is a
        // combination, checked by membership in the ideal recomputed from scratch
        let again = Engine::without_cache();
        let from_basis = Ideal::new(&r, gb.polys().to_vec()).unwrap();
        prop_assert!(from_basis.same_ideal(&again, &ideal).unwrap());
    }

    #[test]
    fn saturation_routes_agree(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let r = ring(small_prime(&mut rng), &["x", "y"]);
        let f = random_nonconstant_poly(&mut rng, &r, 1, 2);
        let gens: Vec<Polynomial> = (0..rng.gen_range(1..=3))
            .map(|_| &random_poly(&mut rng, &r, 2, 3) * &f.pow(rng.gen_range(0..=2)))
            .collect();
        let ideal = Ideal::new(&r, gens).unwrap();
        let a = ideal.saturate(&eng, &f).unwrap();
        let b = ideal.saturate_by_chain(&eng, &f).unwrap();
        prop_assert!(a.same_ideal(&eng, &b).unwrap());
        prop_assert!(a.contains_ideal(&eng, &ideal).unwrap());
    }

    #[test]
    fn staircases_are_order_ideals(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let r = ring(small_prime(&mut rng), &["x", "y"]);
        let ideal = finite_ideal(&mut rng, &r);
        let stairs = staircase(&eng, &ideal);
        for m in &stairs {
            for v in 0..2 {
                if let Some(d) = m.div(&Monomial::var(2, v, 1)) {
                    prop_assert!(stairs.contains(&d), "staircase not closed under division at {:?}", m);
                }
            }
        }
        // normal forms of all low-degree monomials are supported on the staircase
        for m in monomials_up_to(2, 4) {
            let nf = ideal.normal_form(&eng, &Polynomial::term(&r, m, r.field().one())).unwrap();
            prop_assert!(nf.terms().all(|(t, _)| stairs.contains(t)));
        }
    }

    #[test]
    fn intersection_and_elimination(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let r = ring(small_prime(&mut rng), &["x", "y"]);
        let i = Ideal::new(&r, vec![random_nonzero_poly(&mut rng, &r, 2, 2)]).unwrap();
        let j = Ideal::new(&r, vec![random_nonzero_poly(&mut rng, &r, 2, 2), random_poly(&mut rng, &r, 1, 2)]).unwrap();
        let meet = i.intersect(&eng, &j).unwrap();
        prop_assert!(i.contains_ideal(&eng, &meet).unwrap() && j.contains_ideal(&eng, &meet).unwrap());
        prop_assert!(meet.contains_ideal(&eng, &i.product(&j).unwrap()).unwrap());
        let elim = j.eliminate(&eng, &[0]).unwrap();
        for g in elim.generators() {
            prop_assert_eq!(g.ring().nvars(), 1);
            prop_assert!(j.contains(&eng, &g.embed(&r, &[1])).unwrap());
        }
    }
}

// ------------------------------------------------------------ fraction rings

fn presentations(eng: &Engine) -> Vec<FractionPresentation> {
    let q = ring(Field::Rationals, &["x"]);
    let f3 = ring(Field::Prime(3), &["x", "y"]);
    let curve = ring(Field::Rationals, &["x", "y"]);
    let curve_base =
        CoordinateRing::new(Ideal::new(&curve, vec![poly(&curve, "y^2 - x^3 + x")]).unwrap());
    let m = InvertibleModule::fractional(
        eng,
        &curve_base,
        &[poly(&curve, "x"), poly(&curve, "y")],
        &poly(&curve, "1"),
    )
    .unwrap();
    vec![
        FractionPresentation::free(
            eng,
            &CoordinateRing::polynomial(&q),
            &[("x", poly(&q, "x")), ("x1", poly(&q, "x - 1"))],
        )
        .unwrap(),
        FractionPresentation::free(
            eng,
            &CoordinateRing::new(Ideal::new(&f3, vec![poly(&f3, "x*y")]).unwrap()),
            &[("x", poly(&f3, "x"))],
        )
        .unwrap(),
        FractionPresentation::new(
            &curve_base,
            vec![SectionPair::new(eng, "y", poly(&curve, "y"), m).unwrap()],
        )
        .unwrap(),
    ]
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn arithmetic_respects_equality(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        for u in presentations(&eng) {
            let a = random_element(&mut rng, &eng, &u).unwrap();
            let a2 = rewrite(&mut rng, &eng, &u, &a).unwrap();
            let b = random_element(&mut rng, &eng, &u).unwrap();
            prop_assert!(u.fraction_eq(&eng, &u.add(&eng, &a, &b).unwrap(), &u.add(&eng, &a2, &b).unwrap()).unwrap());
            prop_assert!(u.fraction_eq(&eng, &u.mul(&eng, &a, &b).unwrap(), &u.mul(&eng, &a2, &b).unwrap()).unwrap());
            prop_assert!(u.fraction_eq(&eng, &u.sub(&eng, &a, &a2).unwrap(), &u.zero()).unwrap());
            prop_assert!(u.fraction_eq(&eng, &u.mul(&eng, &a, &u.one()).unwrap(), &a).unwrap());
            let ab = u.add(&eng, &a, &b).unwrap();
            prop_assert!(u.fraction_eq(&eng, &ab, &u.add(&eng, &b, &a).unwrap()).unwrap());
        }
    }

    /// Images under the factored map agree with direct inversion in the target.
    #[test]
    fn factorization_is_unique(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let field = small_prime(&mut rng);
        let r = ring(field, &["x"]);
        let s = random_nonconstant_poly(&mut rng, &r, 2, 3);
        let u = FractionPresentation::free(&eng, &CoordinateRing::polynomial(&r), &[("s", s.clone())]).unwrap();
        let deg = rng.gen_range(1..=3);
        let m = random_monic(&mut rng, &r, deg);
        let b = CoordinateRing::new(Ideal::principal(&m));
        let phi = RingMap::new(&eng, CoordinateRing::polynomial(&r), b.clone(), vec![poly(&r, "x")]).unwrap();
        let inverse = b.inverse(&eng, &s).unwrap();
        match u.universal_factorization(&eng, &phi).unwrap() {
            Factorization::Factors(map) => {
                let inv = inverse.expect("factoring map makes s a unit");
                for _ in 0..4 {
                    let k = rng.gen_range(0..=2);
                    let p = random_poly(&mut rng, &r, 3, 3);
                    let e = u.element(&eng, &p, &MultiExponent::single(0, k)).unwrap();
                    let direct = b.reduce(&eng, &(&p * &inv.pow(k))).unwrap();
                    prop_assert_eq!(map.apply(&eng, &e).unwrap(), direct);
                }
            }
            Factorization::DoesNotFactor { failing } => {
                prop_assert!(inverse.is_none());
                prop_assert_eq!(failing, vec!["s".to_string()]);
            }
        }
    }

    #[test]
    fn equality_commutes_with_base_change(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let r = ring(Field::Prime(5), &["x", "y"]);
        let t = ring(Field::Prime(5), &["y"]);
        let base = CoordinateRing::polynomial(&r);
        let u = FractionPresentation::free(&eng, &base, &[("s", random_nonconstant_poly(&mut rng, &r, 1, 2))]).unwrap();
        let c = random_scalar(&mut rng, Field::Prime(5));
        let phi = RingMap::new(&eng, base, CoordinateRing::polynomial(&t), vec![Polynomial::constant(&t, c), poly(&t, "y")]).unwrap();
        let ub = u.base_change(&eng, &phi).unwrap();
        for _ in 0..4 {
            let a = random_element(&mut rng, &eng, &u).unwrap();
            let b = if rng.gen_bool(0.5) { rewrite(&mut rng, &eng, &u, &a).unwrap() } else { random_element(&mut rng, &eng, &u).unwrap() };
            if u.fraction_eq(&eng, &a, &b).unwrap() {
                let (ma, mb) = (u.map_element(&eng, &phi, &a).unwrap(), u.map_element(&eng, &phi, &b).unwrap());
                prop_assert!(ub.fraction_eq(&eng, &ma, &mb).unwrap());
            }
        }
    }

    /// An injective map `R/(J:g) -> R/J`, multiplication by `g`, stays injective
    /// after inverting `s`: `(J:s^∞):g = (J:g):s^∞`.
    #[test]
    fn localization_preserves_injectivity(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let r = ring(small_prime(&mut rng), &["x", "y"]);
        let j = finite_ideal(&mut rng, &r);
        let g = random_nonzero_poly(&mut rng, &r, 2, 2);
        let s = random_nonconstant_poly(&mut rng, &r, 1, 2);
        let source = j.quotient_by(&eng, &g).unwrap();
        let lhs = j.saturate(&eng, &s).unwrap().quotient_by(&eng, &g).unwrap();
        let rhs = source.saturate(&eng, &s).unwrap();
        prop_assert!(lhs.same_ideal(&eng, &rhs).unwrap());
    }

    /// If `R/I -> (R/I)_s` is bijective then multiplication by `s^a` is
    /// bijective on the staircase basis, and conversely.
    #[test]
    fn bijective_localization_means_invertible_multiplication(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let field = small_prime(&mut rng);
        let r = ring(field, &["x", "y"]);
        let ideal = finite_ideal(&mut rng, &r);
        let s = random_nonconstant_poly(&mut rng, &r, 1, 2);
        let u = FractionPresentation::free(&eng, &CoordinateRing::polynomial(&r), &[("s", s.clone())]).unwrap();
        let gens: Vec<_> = ideal.generators().iter().map(|g| u.from_base(&eng, g).unwrap()).collect();
        let local = u.rabinowitsch_ideal(&gens).unwrap().colength(&eng).unwrap().dimension().unwrap();
        let dim = staircase(&eng, &ideal).len();
        let a = rng.gen_range(1..=2);
        let (rows, cols) = mult_matrix(&eng, &s.pow(a), &ideal, &ideal);
        let full = rank_mod_p(rows, field.characteristic()) == cols;
        prop_assert_eq!(local == dim, full);
    }

    /// For `M = R/I -> N = R/J` (multiplication by `g`) with `s` a unit on `N`,
    /// surjectivity after inverting `s` implies surjectivity.
    #[test]
    fn surjectivity_descends_to_inert_targets(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let field = small_prime(&mut rng);
        let p = field.characteristic();
        let r = ring(field, &["x", "y"]);
        let j = finite_ideal(&mut rng, &r);
        let s = random_nonconstant_poly(&mut rng, &r, 1, 2);
        prop_assume!(j.with(std::slice::from_ref(&s)).unwrap().is_unit(&eng).unwrap());
        let g = if rng.gen_bool(0.5) { Polynomial::one(&r) } else { random_nonzero_poly(&mut rng, &r, 1, 2) };
        let k = finite_ideal(&mut rng, &r);
        let i = j.quotient_by(&eng, &g).unwrap().product(&k).unwrap();
        let i_local = i.saturate(&eng, &s).unwrap();
        let (rows, dim_n) = mult_matrix(&eng, &g, &i, &j);
        let (rows_local, _) = mult_matrix(&eng, &g, &i_local, &j);
        if rank_mod_p(rows_local, p) == dim_n {
            prop_assert_eq!(rank_mod_p(rows, p), dim_n);
        }
    }
}

// ------------------------------------------------------------ finite flat algebras

fn random_section(rng: &mut ChaCha8Rng, e: &FiniteFlatAlgebra) -> hilbloc::flat::ModuleSection {
    let coords = (0..e.rank())
        .map(|_| random_poly(rng, e.base().ring(), 1, 2))
        .collect();
    e.section_from_coords(coords).unwrap()
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn norm_is_multiplicative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let field = if rng.gen_bool(0.5) { Field::Rationals } else { Field::Prime(3) };
        let fam = UnivFamilyA1::new(&eng, rng.gen_range(1..=3), field).unwrap();
        let e = fam.algebra();
        let (s, t) = (random_section(&mut rng, e), random_section(&mut rng, e));
        let st = e.multiply(&eng, &s, &t).unwrap();
        let lhs = e.det_section(&eng, &st).unwrap();
        let rhs = &e.det_section(&eng, &s).unwrap() * &e.det_section(&eng, &t).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn norm_scales_by_unit_power(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let fam = UnivFamilyA1::new(&eng, rng.gen_range(1..=3), Field::Prime(5)).unwrap();
        let e = fam.algebra();
        let s = random_section(&mut rng, e);
        let c = nonzero_scalar(&mut rng, Field::Prime(5));
        let scaled = e.section_from_coords(s.coords.iter().map(|p| p.scale(&c)).collect()).unwrap();
        let expected = e.det_section(&eng, &s).unwrap().scale(&c.pow(e.rank() as u32));
        prop_assert_eq!(e.det_section(&eng, &scaled).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn base_change_square_commutes(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let field = small_prime(&mut rng);
        let fam = UnivFamilyA1::new(&eng, 2, field).unwrap();
        let e = fam.algebra();
        let t = ring(field, &["t"]);
        let target = if rng.gen_bool(0.5) {
            CoordinateRing::polynomial(&t)
        } else {
            CoordinateRing::new(Ideal::principal(&random_monic(&mut rng, &t, 2)))
        };
        let images = (0..2).map(|_| random_poly(&mut rng, &t, 2, 2)).collect();
        let phi = RingMap::new(&eng, e.base().clone(), target.clone(), images).unwrap();
        let s = random_section(&mut rng, e);
        let after = e.base_change_det(&eng, &s, &phi).unwrap();
        let before = phi.apply(&eng, &e.det_section(&eng, &s).unwrap()).unwrap();
        prop_assert!(target.equal(&eng, &after, &before).unwrap());
    }
}

// ------------------------------------------------------------ points and fractions

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn adding_sections_shrinks_the_open(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let eng = Engine::default();
        let q = [2u64, 3][rng.gen_range(0..2)];
        let line = ring(Field::Prime(q), &["x"]);
        let pool = ["x", "x - 1", "x + 1", "x^2 + 1", "x^2 + x + 1"];
        let sections: Vec<Polynomial> = pool.iter().filter(|_| rng.gen_bool(0.4)).map(|s| poly(&line, s)).collect();
        let report = verify_open_subscheme(&eng, rng.gen_range(1..=3), &sections, q).unwrap();
        prop_assert!(report.holds(), "{:?}", report);
    }

    #[test]
    fn membership_is_multiplicative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let r = ring(Field::Rationals, &["x", "y"]);
        let x = poly(&r, "x");
        let mut pool: Vec<Polynomial> = ["x", "x - 1", "x^2 + 1", "y", "y + 1", "x + y", "x*y - 1"].iter().map(|s| poly(&r, s)).collect();
        let draw = |rng: &mut ChaCha8Rng, pool: &mut Vec<Polynomial>| -> Option<FactoredFraction> {
            let mut factors = Vec::new();
            for _ in 0..rng.gen_range(0..=2) {
                if !pool.is_empty() {
                    factors.push((pool.remove(rng.gen_range(0..pool.len())), rng.gen_range(1..=2)));
                }
            }
            FactoredFraction::new(random_nonzero_poly(rng, &r, 1, 2), factors).ok()
        };
        let g = draw(&mut rng, &mut pool);
        let h = draw(&mut rng, &mut pool);
        let (Some(g), Some(h)) = (g, h) else { return Ok(()) };
        let Ok(gh) = g.mul_disjoint(&h) else { return Ok(()) };
        for side in [Side::S, Side::T, Side::FOnly] {
            let both = member_partial_localization(&g, &x, side).unwrap() && member_partial_localization(&h, &x, side).unwrap();
            prop_assert_eq!(member_partial_localization(&gh, &x, side).unwrap(), both);
        }
    }
}
