//! Timings for the main computational kernels. Every engine is built without
//! a cache so each iteration recomputes from scratch.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hilbloc::hilb::enumerate_points;
use hilbloc::{
    parse_poly, AffineSpace, Bounds, Engine, Field, Ideal, MonomialOrder, Polynomial, Ring,
    UnivFamilyA1,
};

fn engine() -> Engine {
    Engine::new(Bounds::default(), None)
}

fn polys(ring: &Ring, texts: &[&str]) -> Vec<Polynomial> {
    texts.iter().map(|t| parse_poly(ring, t).unwrap()).collect()
}

fn groebner(c: &mut Criterion) {
    let r: Ring = "Q[x,y,z]".parse().unwrap();
    let twisted_cubic = polys(&r, &["x^2 - y*z", "y^2 - x*z", "z^2 - x*y"]);
    let cyclic3 = polys(&r, &["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"]);
    let mut g = c.benchmark_group("groebner");
    for (name, gens) in [
        ("twisted_cubic_grevlex", &twisted_cubic),
        ("cyclic3_grevlex", &cyclic3),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| {
                engine()
                    .groebner(&r, black_box(gens), MonomialOrder::GrevLex)
                    .unwrap()
            })
        });
    }
    g.bench_function("cyclic3_lex", |b| {
        b.iter(|| {
            engine()
                .groebner(&r, black_box(&cyclic3), MonomialOrder::Lex)
                .unwrap()
        })
    });
    g.finish();
}

fn saturate(c: &mut Criterion) {
    let r: Ring = "Q[x,y,z]".parse().unwrap();
    let ideal = Ideal::new(
        &r,
        polys(&r, &["x^3 - y*z^2", "y^3 - x*z^2", "x*y*z - z^3"]),
    )
    .unwrap();
    let f = parse_poly(&r, "x*y*z").unwrap();
    c.bench_function("saturate/by_xyz", |b| {
        b.iter(|| ideal.saturate(&engine(), black_box(&f)).unwrap())
    });
}

fn norm(c: &mut Criterion) {
    let mut g = c.benchmark_group("norm_det");
    for n in [2usize, 3, 4] {
        let eng = engine();
        let family = UnivFamilyA1::new(&eng, n, Field::Rationals).unwrap();
        let f = parse_poly(family.line(), "x^2 + 1").unwrap();
        g.bench_function(format!("universal_n{n}"), |b| {
            b.iter(|| {
                let s = family.section(&eng, black_box(&f)).unwrap();
                family.algebra().det_section(&eng, &s).unwrap()
            })
        });
    }
    g.finish();
}

fn enumerate(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_points");
    g.sample_size(10);
    let line = AffineSpace::Line.ring(Field::Prime(3));
    let x = parse_poly(&line, "x").unwrap();
    g.bench_function("line_f3_n3_invert_x", |b| {
        b.iter(|| {
            enumerate_points(
                &engine(),
                AffineSpace::Line,
                Field::Prime(3),
                3,
                std::slice::from_ref(&x),
            )
            .unwrap()
        })
    });
    g.bench_function("plane_f2_n2", |b| {
        b.iter(|| enumerate_points(&engine(), AffineSpace::Plane, Field::Prime(2), 2, &[]).unwrap())
    });
    g.finish();
}

criterion_group!(benches, groebner, saturate, norm, enumerate);
criterion_main!(benches);
