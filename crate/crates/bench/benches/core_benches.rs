use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use voldens::deconv::{estimate_direct, estimate_ecf, gamma0, uniform_grid, DeconvKernel};
use voldens::kernels::KernelSpec;
use voldens::simmodel::{simulate_path, ModelSpec};
use voldens::specfun::{log_gamma_complex, phi_k};
use voldens_bench::synthetic_observations;

fn bench_specfun(c: &mut Criterion) {
    c.bench_function("log_gamma_complex(0.5 + 7i)", |b| {
        let z = voldens::Complex64::new(0.5, 7.0);
        b.iter(|| log_gamma_complex(black_box(z)).unwrap())
    });
    c.bench_function("phi_k sweep 64 points", |b| {
        b.iter(|| {
            let mut acc = voldens::Complex64::new(0.0, 0.0);
            for i in 0..64 {
                acc += phi_k(black_box(0.25 * i as f64));
            }
            acc
        })
    });
}

fn bench_v_h(c: &mut Criterion) {
    let spec = KernelSpec::default_kernel();
    let kernel = DeconvKernel::new(spec.clone(), 0.5).unwrap();
    kernel.eval(0.0); // warm the node table
    let mut group = c.benchmark_group("v_h eval");
    for x in [0.5, 8.0, 60.0] {
        kernel.eval(x);
        group.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| kernel.eval(black_box(x)))
        });
    }
    group.finish();
    c.bench_function("gamma0 at h = 0.35", |b| {
        b.iter(|| gamma0(black_box(&spec), black_box(0.35)).unwrap())
    });
}

fn bench_estimators(c: &mut Criterion) {
    let data = synthetic_observations(500, 1);
    let grid = uniform_grid(-4.0, 4.0, 21).unwrap();
    let kernel = DeconvKernel::new(KernelSpec::default_kernel(), 0.8).unwrap();
    let mut group = c.benchmark_group("estimator n=500 grid=21");
    group.sample_size(20);
    group.bench_function("direct", |b| {
        b.iter(|| estimate_direct(black_box(&data), &kernel, &grid).unwrap())
    });
    group.bench_function("ecf", |b| {
        b.iter(|| estimate_ecf(black_box(&data), &kernel, &grid).unwrap())
    });
    group.finish();
}

fn bench_simulation(c: &mut Criterion) {
    let model = ModelSpec::by_name("expou", &Default::default()).unwrap();
    c.bench_function("simulate 100k euler steps", |b| {
        b.iter(|| simulate_path(black_box(&model), 100.0, 1e-3, 3).unwrap())
    });
}

criterion_group!(
    benches,
    bench_specfun,
    bench_v_h,
    bench_estimators,
    bench_simulation
);
criterion_main!(benches);
