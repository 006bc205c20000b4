use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use superint_bench::fixture;
use superint_core::dynamics::{integrate, midpoint_step, IntegratorConfig, NewtonConfig};
use superint_core::poisson::{certify_involution, scaled_bracket, BRACKET_TOL};
use superint_core::SystemId;

fn brackets(c: &mut Criterion) {
    let (sys, pts) = fixture(SystemId::DefD, 0.3, 64);
    let (f, h) = (&sys.integrals[1], &sys.hamiltonian);
    c.bench_function("bracket def_d J_d2 with H", |b| {
        b.iter(|| {
            for p in &pts {
                black_box(scaled_bracket(f, h, p).unwrap());
            }
        })
    });
    let (ttw, tp) = fixture(SystemId::TtwDef, 0.2, 64);
    let k = ttw.integral("ReK").unwrap();
    c.bench_function("bracket ttw ReK with H", |b| {
        b.iter(|| {
            for p in &tp {
                black_box(scaled_bracket(k, &ttw.hamiltonian, p).unwrap());
            }
        })
    });
}

fn certification(c: &mut Criterion) {
    let (sys, _) = fixture(SystemId::DefC, 0.4, 1);
    c.bench_function("certify def_c 200 points", |b| {
        b.iter(|| black_box(certify_involution(&sys, 7, 200, BRACKET_TOL).unwrap()))
    });
}

fn integration(c: &mut Criterion) {
    let (sys, pts) = fixture(SystemId::DefA, 0.2, 1);
    let z = pts[0].as_array();
    let newton = NewtonConfig::default();
    c.bench_function("midpoint step def_a", |b| {
        b.iter(|| black_box(midpoint_step(&sys.hamiltonian, &z, 1e-3, &newton, 0.0).unwrap()))
    });
    let cfg = IntegratorConfig::adaptive(1e-10, 1e-10);
    c.bench_function("adaptive def_a t=1", |b| {
        b.iter(|| black_box(integrate(&sys, &pts[0], 1.0, &cfg).unwrap()))
    });
}

criterion_group!(benches, brackets, certification, integration);
criterion_main!(benches);
