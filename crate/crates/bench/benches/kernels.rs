use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use logder_bench::{
    affine_conic, column_matrix, gcd_pair, reflection_basis, reflection_polynomial,
};
use logder_core::{saito_classic, solve, SearchMode, SearchProblem};

fn determinants(c: &mut Criterion) {
    let mut group = c.benchmark_group("reflection_det");
    for n in [1u32, 3, 5] {
        let m = column_matrix(&reflection_basis(n));
        group.bench_with_input(BenchmarkId::new("bareiss", n), &m, |b, m| {
            b.iter(|| m.determinant_bareiss().unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cofactor", n), &m, |b, m| {
            b.iter(|| m.determinant_cofactor().unwrap())
        });
    }
    group.finish();
}

fn criterion_check(c: &mut Criterion) {
    let f = reflection_polynomial(4);
    let basis = reflection_basis(4);
    c.bench_function("saito_classic_reflection_4", |b| {
        b.iter(|| saito_classic(black_box(&f), black_box(&basis)))
    });
}

fn gcd(c: &mut Criterion) {
    let (a, b) = gcd_pair();
    c.bench_function("gcd_trivariate", |bench| {
        bench.iter(|| black_box(&a).gcd(black_box(&b)).unwrap())
    });
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_tangent_conic");
    group.sample_size(10);
    for d in [1u32, 3, 5] {
        let problem = SearchProblem::new(SearchMode::Tangent(affine_conic()), d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &problem, |b, p| {
            b.iter(|| solve(p).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, determinants, criterion_check, gcd, search);
criterion_main!(benches);
