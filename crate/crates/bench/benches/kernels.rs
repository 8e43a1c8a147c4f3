use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use besselidx::kernel::{
    phi_contour, phi_derivative_x_multi, psi_direct, psi_fourier, psi_mellin_barnes,
};
use besselidx::specfun::{bessel_j_imag_order, log_gamma, macdonald_imag_order};
use besselidx::transforms::{adjoint_g, canonical_f, canonical_g, forward_f};
use besselidx::ContourSpec;

fn specfun(c: &mut Criterion) {
    let mut g = c.benchmark_group("specfun");
    g.bench_function("log_gamma", |b| {
        b.iter(|| log_gamma(black_box(Complex64::new(0.3, 7.5))))
    });
    for z in [0.5, 5.0, 50.0] {
        g.bench_with_input(BenchmarkId::new("macdonald_imag_order", z), &z, |b, &z| {
            b.iter(|| macdonald_imag_order(black_box(3.0), z))
        });
        g.bench_with_input(BenchmarkId::new("bessel_j_imag_order", z), &z, |b, &z| {
            b.iter(|| bessel_j_imag_order(black_box(3.0), z))
        });
    }
    g.finish();
}

fn psi_routes(c: &mut Criterion) {
    let mut g = c.benchmark_group("psi");
    let contour = ContourSpec::default();
    for (tau, x) in [(0.5, 0.25), (4.0, 4.0)] {
        let id = format!("tau={tau},x={x}");
        g.bench_function(BenchmarkId::new("direct", &id), |b| {
            b.iter(|| psi_direct(black_box(tau), black_box(x)))
        });
        g.bench_function(BenchmarkId::new("fourier", &id), |b| {
            b.iter(|| psi_fourier(black_box(tau), black_box(x)))
        });
        g.bench_function(BenchmarkId::new("mellin_barnes", &id), |b| {
            b.iter(|| psi_mellin_barnes(black_box(tau), black_box(x), &contour))
        });
    }
    g.finish();
}

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("transforms");
    g.sample_size(10);
    let (f, gg) = (canonical_f(), canonical_g());
    g.bench_function("forward_f tau=1", |b| {
        b.iter(|| forward_f(&f, black_box(1.0)))
    });
    g.bench_function("adjoint_g x=1", |b| {
        b.iter(|| adjoint_g(&gg, black_box(1.0)))
    });
    let xs = [0.5, 1.0, 2.0];
    g.bench_function("phi_derivative_x_multi 3 points", |b| {
        b.iter(|| phi_derivative_x_multi(black_box(2.0), &xs, &phi_contour()))
    });
    g.finish();
}

criterion_group!(benches, specfun, psi_routes, transforms);
criterion_main!(benches);
