use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pendulum_bench::{grid, hermitian, reference_configs};
use pendulum_core::{
    build_curve, hermitian_eig, integrate_scalar, solve_matrix_pendulum, wp, Complex, HermitianMatrix,
    IntegratorSettings,
};

fn curve_construction(c: &mut Criterion) {
    let configs = reference_configs();
    c.bench_function("build_curve/six reference configs", |b| {
        b.iter(|| {
            for cfg in &configs {
                black_box(build_curve(black_box(cfg)).unwrap());
            }
        })
    });
}

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_state");
    for cfg in reference_configs() {
        let curve = build_curve(&cfg).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(cfg.omega0), &curve, |b, curve| {
            b.iter(|| curve.eval_state(black_box(123.456)).unwrap())
        });
    }
    group.finish();

    let lat = build_curve(&reference_configs()[0]).unwrap().lattice().unwrap().clone();
    c.bench_function("wp/generic point", |b| b.iter(|| wp(black_box(Complex::new(0.7, 0.9)), &lat).unwrap()));
}

// same 200-sample grid over [0, 100], closed form against the oracle
fn against_oracle(c: &mut Criterion) {
    let cfg = reference_configs()[0];
    let times = grid(100.0, 200);
    let mut group = c.benchmark_group("trajectory 0..100");
    group.bench_function("closed form", |b| {
        b.iter(|| {
            let curve = build_curve(&cfg).unwrap();
            times.iter().map(|&t| curve.eval_state(t).unwrap().0).sum::<f64>()
        })
    });
    group.sample_size(20);
    group.bench_function("oracle rtol 1e-10", |b| {
        b.iter(|| integrate_scalar(&cfg, 100.0, &IntegratorSettings::validation(), &times).unwrap())
    });
    group.finish();
}

fn matrices(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eig");
    for n in [2, 4, 8, 16] {
        let a = hermitian(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| hermitian_eig(a).unwrap())
        });
    }
    group.finish();

    let a = hermitian(4);
    let (u, _) = hermitian_eig(&a).unwrap();
    let theta0 = HermitianMatrix::from_eigen(&u, &[0.1, -0.3, 0.5, 0.0]);
    let omega0 = HermitianMatrix::from_eigen(&u, &[1.0, 2.0, 3.0, 0.5]);
    let sol = solve_matrix_pendulum(&theta0, &omega0, -1.0, 1e-10).unwrap();
    c.bench_function("matrix theta_at/n=4", |b| b.iter(|| sol.theta_at(black_box(7.5)).unwrap()));
}

criterion_group!(benches, curve_construction, evaluation, against_oracle, matrices);
criterion_main!(benches);
