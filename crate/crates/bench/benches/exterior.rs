use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mhd_forms::{contract, wedge, Blade, Multivector};

/// Dense form of one grade with deterministic coefficients.
fn dense(dim: usize, grade: usize) -> Multivector<f64> {
    let terms = Blade::all(dim, grade).into_iter().enumerate().map(|(i, b)| (b, 1.0 + 0.25 * i as f64));
    Multivector::from_terms(dim, terms).unwrap()
}

fn exterior(c: &mut Criterion) {
    for dim in [3, 6] {
        let a = dense(dim, 2);
        let b = dense(dim, 2);
        let x = dense(dim, 1);
        c.bench_function(&format!("wedge 2x2 n={dim}"), |bench| bench.iter(|| wedge(black_box(&a), black_box(&b))));
        c.bench_function(&format!("contract 1 into 2 n={dim}"), |bench| {
            bench.iter(|| contract(black_box(&x), black_box(&a)))
        });
    }
    let mut group = c.benchmark_group("symbolic");
    group.sample_size(10);
    group.bench_function("verify_magic n=3 degree=2 trials=5", |bench| {
        bench.iter(|| mhd_forms::verify_magic(3, 2, 5, black_box(1)))
    });
    group.finish();
}

criterion_group!(benches, exterior);
criterion_main!(benches);
