use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use eprwmr_core::gaussian::{inference_variance_optimal, SqueezeParams};
use eprwmr_core::phase_space::{q_density, sample_q, PhasePoint};
use eprwmr_core::schrodinger::absolute_error_xi;
use eprwmr_core::sim::{classify_bands, simulate, simulate_superposition, write_trajectory_csv, SuperpositionConfig};
use eprwmr_core::wmr::{incompleteness_check, sigma_inf_conditional, upper_bound_ub};
use eprwmr_core::{MethodTag, RngStream, Sector, Setting, SimConfig};

fn analytics(c: &mut Criterion) {
    let p = SqueezeParams::new(2.0).unwrap();
    let pt = PhasePoint::new(0.3, -0.2, 0.25, 0.1);
    c.bench_function("criterion_product", |b| {
        b.iter(|| {
            let s = black_box(&p);
            incompleteness_check(s.sigma(), inference_variance_optimal(s).sqrt(), 4.0, MethodTag::TwoRegion).unwrap()
        })
    });
    c.bench_function("absolute_error_xi", |b| b.iter(|| absolute_error_xi(black_box(&p), black_box(1.7))));
    c.bench_function("q_density", |b| b.iter(|| q_density(black_box(&pt), black_box(&p))));
    c.bench_function("upper_bound_ub", |b| b.iter(|| upper_bound_ub(black_box(&p), black_box(0.5 * p.sigma())).unwrap()));
}

fn ensembles(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for setting in [Setting::XX, Setting::XP] {
        let mut cfg = SimConfig::new(SqueezeParams::new(2.0).unwrap(), 1.0, 2.0, 1_000, 7, setting).unwrap();
        cfg.record_stride = 20;
        group.bench_with_input(BenchmarkId::new("epr", format!("{setting:?}")), &cfg, |b, cfg| b.iter(|| simulate(cfg).unwrap()));
    }
    let mut sup = SuperpositionConfig::new(5.0, -5.0, 1.0, 2.0, 1_000, 7).unwrap();
    sup.record_stride = 20;
    group.bench_function("superposition", |b| b.iter(|| simulate_superposition(&sup).unwrap()));
    group.finish();

    let e = simulate_superposition(&sup).unwrap();
    c.bench_function("classify_bands", |b| b.iter(|| classify_bands(&e, black_box(1.0), &[5.0, -5.0]).unwrap()));
    c.bench_function("write_trajectory_csv", |b| {
        b.iter(|| {
            let mut buf = Vec::with_capacity(1 << 20);
            write_trajectory_csv(&e, &mut buf).unwrap();
            buf
        })
    });

    let p = SqueezeParams::new(1.0).unwrap();
    let pairs = sample_q(&p, 0.0, Sector::X, 20_000, &mut RngStream::new(3, 0)).unwrap();
    c.bench_function("sigma_inf_conditional", |b| b.iter(|| sigma_inf_conditional(black_box(&pairs), 0.2).unwrap()));
}

criterion_group!(benches, analytics, ensembles);
criterion_main!(benches);
