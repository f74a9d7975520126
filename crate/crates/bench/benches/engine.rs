use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use vbracket::bracket::{self, p_operator, p_operator_direct};
use vbracket::lattice::ii11;
use vbracket::oracle::Oracle;
use vbracket::VoaBackend;
use vbracket_bench::{e8x3, pair, primaries};

fn bench_polynomials(c: &mut Criterion) {
    let (g, d) = (ii11::vector(1, -1), ii11::vector(3, -2));
    c.bench_function("p_operator recursion n=8", |b| {
        b.iter(|| p_operator(black_box(&g), &d, 8).unwrap())
    });
    c.bench_function("p_operator compositions n=8", |b| {
        b.iter(|| p_operator_direct(black_box(&g), &d, 8).unwrap())
    });
}

fn bench_modes(c: &mut Criterion) {
    let voa = e8x3();
    let a = ii11::vector(1, -1);
    let (v, w) = pair(&voa, &a, &a, 1);
    c.bench_function("mode product weight 2", |b| {
        b.iter(|| {
            voa.clear_caches();
            VoaBackend::mode_product(&voa, black_box(&v), -1, &w)
        })
    });
}

fn bench_brackets(c: &mut Criterion) {
    let voa = e8x3();
    let a = ii11::vector(1, -1);
    let b2 = ii11::vector(2, -1);
    let (p, q) = primaries(&voa, 2);
    let (v, w) = pair(&voa, &a, &b2, 3);
    let mut g = c.benchmark_group("bracket");
    g.sample_size(10);
    g.bench_function("formula primaries e-f", |b| {
        b.iter(|| bracket::bracket(&voa, &a, &a, black_box(&p), &q).unwrap())
    });
    g.bench_function("closed form primaries e-f", |b| {
        b.iter(|| bracket::weight_two_closed_form(&voa, black_box(&p), &q))
    });
    g.bench_function("oracle primaries e-f", |b| {
        b.iter(|| {
            let o = Oracle::new(&voa).unwrap();
            o.bracket(&a, &a, black_box(&p), &q).unwrap()
        })
    });
    g.bench_function("formula e-f x 2e-f", |b| {
        b.iter(|| bracket::bracket(&voa, &a, &b2, black_box(&v), &w).unwrap())
    });
    g.bench_function("oracle e-f x 2e-f", |b| {
        b.iter(|| {
            let o = Oracle::new(&voa).unwrap();
            o.bracket(&a, &b2, black_box(&v), &w).unwrap()
        })
    });
    g.finish();
}

criterion_group!(polynomials, bench_polynomials);
criterion_group!(modes, bench_modes);
criterion_group!(brackets, bench_brackets);
criterion_main!(polynomials, modes, brackets);
