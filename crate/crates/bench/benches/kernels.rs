use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use std::f64::consts::PI;
use wh_embed::halfplane::{self, HalfPlaneSolution, NUMERIC_THETA_I};
use wh_embed::strip::{BieOperator, StripConfig};
use wh_embed::wedge;

fn strip(c: &mut Criterion) {
    let cfg = StripConfig::from_ka(10.0).unwrap();
    c.bench_function("strip assemble ka=10 n=40", |b| b.iter(|| BieOperator::new(black_box(&cfg), 40).unwrap()));
    let op = BieOperator::new(&cfg, 40).unwrap();
    c.bench_function("strip solve ka=10 n=40", |b| b.iter(|| op.solve(black_box(PI / 3.0)).unwrap()));
}

fn halfplane_numeric(c: &mut Criterion) {
    let h = HalfPlaneSolution::new(halfplane::default_medium());
    let contour = h.default_contour(NUMERIC_THETA_I, 2000);
    c.bench_function("half-plane numeric solve 2000 nodes", |b| {
        b.iter(|| h.solve_numeric(black_box(NUMERIC_THETA_I), wh_embed::C64::i(), &contour).unwrap())
    });
}

fn wedge_closed_form(c: &mut Criterion) {
    c.bench_function("wedge closed-form 271x3 grid", |b| {
        b.iter(|| wedge::directivity_grid(271, black_box(&[1.0, 2.0, 3.0])))
    });
    let t = wedge::NormalMatrixTilde::new(wedge::default_medium());
    c.bench_function("wedge canonical directivity", |b| {
        b.iter(|| t.canonical_directivity(black_box(1.1), black_box(2.3)))
    });
}

criterion_group!(benches, strip, halfplane_numeric, wedge_closed_form);
criterion_main!(benches);
