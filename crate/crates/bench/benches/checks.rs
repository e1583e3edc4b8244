use std::hint::black_box;

use clusterq::affine::{builtin_suite, verify_phase};
use clusterq::explorer::explore;
use clusterq::format::builtin_feed;
use clusterq::qdilog::{phi_eval, DilogConfig};
use clusterq::series::{check_pentagon, PentagonMiddle, SeriesOrder};
use clusterq::twisted::check_rank1_quantum;
use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

fn phases(c: &mut Criterion) {
    let suite = builtin_suite();
    c.bench_function("phase suite", |b| {
        b.iter(|| {
            for case in &suite {
                black_box(verify_phase(case.relation, &case.feed, case.i, case.j).unwrap());
            }
        })
    });
}

fn series(c: &mut Criterion) {
    let mut g = c.benchmark_group("pentagon");
    g.sample_size(10);
    for z in [3, 4, 6] {
        g.bench_function(format!("z-order {z}"), |b| {
            b.iter(|| check_pentagon(PentagonMiddle::QInvXY, SeriesOrder::new(z, 60)).unwrap())
        });
    }
    g.finish();
}

fn rank1(c: &mut Criterion) {
    let g2 = builtin_feed("g2").unwrap();
    c.bench_function("quantum rank-1 g2", |b| b.iter(|| check_rank1_quantum(&g2, 0).unwrap()));
}

fn dilog(c: &mut Criterion) {
    let cfg = DilogConfig::default();
    let z = Complex64::new(0.7, -1.2);
    c.bench_function("phi eval", |b| b.iter(|| phi_eval(&cfg, black_box(z)).unwrap()));
}

fn explorer(c: &mut Criterion) {
    let a3 = builtin_feed("a3").unwrap();
    c.bench_function("explore a3", |b| b.iter(|| explore(&a3, 10).unwrap()));
}

criterion_group!(benches, phases, series, rank1, dilog, explorer);
criterion_main!(benches);
