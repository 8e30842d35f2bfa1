use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use orthoplanar::analytic::{interior_charfn_noref, prob_boundary, side_density, t_density};
use orthoplanar::bessel::{bessel_i0_scaled, i1_over_x_scaled};
use orthoplanar::mc::{estimate_event, replication_rng};
use orthoplanar::quad::integrate;
use orthoplanar::{simulate, ModelParams};

fn params(lambda: f64, c: f64, p: f64, q: f64) -> ModelParams {
    ModelParams::new(lambda, c, p, q).unwrap()
}

fn bench_bessel(c: &mut Criterion) {
    let mut g = c.benchmark_group("bessel");
    g.bench_function("i0_scaled_series", |b| {
        b.iter(|| bessel_i0_scaled(black_box(7.5)).unwrap())
    });
    g.bench_function("i0_scaled_asymptotic", |b| {
        b.iter(|| bessel_i0_scaled(black_box(40.0)).unwrap())
    });
    g.bench_function("i1_over_x_scaled", |b| {
        b.iter(|| i1_over_x_scaled(black_box(7.5)).unwrap())
    });
    g.finish();
}

fn bench_analytic(c: &mut Criterion) {
    let pr = params(1.0, 1.0, 0.3, 0.5);
    let noref = params(1.0, 1.0, 0.5, 0.5);
    let mut g = c.benchmark_group("analytic");
    g.bench_function("boundary_mass", |b| b.iter(|| prob_boundary(&pr, black_box(1.0))));
    g.bench_function("side_density", |b| {
        b.iter(|| side_density(&pr, 1.0, black_box(0.4)).unwrap())
    });
    g.bench_function("occupation_density", |b| {
        b.iter(|| t_density(&pr, 1.0, black_box(0.35)).unwrap())
    });
    g.bench_function("interior_charfn", |b| {
        b.iter(|| interior_charfn_noref(&noref, 1.0, black_box(1.0), black_box(0.5)).unwrap())
    });
    // (2, 1) sits on the root-collision manifold, so this one pays for the
    // displaced-stencil average.
    g.bench_function("interior_charfn_collision", |b| {
        b.iter(|| interior_charfn_noref(&noref, 1.0, black_box(2.0), black_box(1.0)).unwrap())
    });
    g.finish();
}

fn bench_quadrature(c: &mut Criterion) {
    let pr = params(1.0, 1.0, 0.3, 0.5);
    c.bench_function("occupation_mass_quadrature", |b| {
        b.iter(|| {
            integrate(
                |s| t_density(&pr, 1.0, s).unwrap(),
                black_box(0.0),
                black_box(1.0),
                1e-10,
            )
        })
    });
}

fn bench_simulate(c: &mut Criterion) {
    let sparse = params(1.0, 1.0, 0.3, 0.5);
    let dense = params(50.0, 1.0, 0.3, 0.5);
    let mut g = c.benchmark_group("simulate");
    g.bench_function("one_event_per_horizon", |b| {
        let mut i = 0u64;
        b.iter(|| {
            i += 1;
            simulate(&sparse, 1.0, &mut replication_rng(7, i))
        })
    });
    g.bench_function("fifty_events_per_horizon", |b| {
        let mut i = 0u64;
        b.iter(|| {
            i += 1;
            simulate(&dense, 1.0, &mut replication_rng(7, i))
        })
    });
    g.finish();
}

fn bench_mc(c: &mut Criterion) {
    let pr = params(1.0, 1.0, 0.3, 0.5);
    let mut g = c.benchmark_group("mc");
    g.sample_size(10);
    g.bench_function("event_frequency_10k_paths", |b| {
        b.iter(|| estimate_event(&pr, 1.0, 10_000, black_box(11), |o| o.final_state.n_events == 0))
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_bessel,
    bench_analytic,
    bench_quadrature,
    bench_simulate,
    bench_mc
);
criterion_main!(benches);
