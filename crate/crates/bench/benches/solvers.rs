use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hypgas_core::bounds::quad_integrals;
use hypgas_core::manifolds::{certify_bec, ManifoldFamily, ManifoldModel};
use hypgas_core::oracles::discrete_minimizer;
use hypgas_core::scattering::{minimizer_profile, scattering_length, Potential, ScatteringParams};
use hypgas_core::Dimension;

fn bench_scattering(c: &mut Criterion) {
    let v = Potential::piecewise(vec![(0.4, 10.0), (1.0, 2.0)]).unwrap();
    for d in [Dimension::Two, Dimension::Three] {
        let params = ScatteringParams::new(d, 1.0).unwrap();
        c.bench_function(&format!("scattering_length step d={d}"), |b| {
            b.iter(|| scattering_length(black_box(&v), black_box(&params)).unwrap())
        });
    }
}

fn bench_oracle(c: &mut Criterion) {
    let v = Potential::hardcore(0.5).unwrap();
    let params = ScatteringParams::new(Dimension::Three, 1.0).unwrap();
    c.bench_function("discrete_minimizer hardcore h=1e-3", |b| {
        b.iter(|| discrete_minimizer(black_box(&v), black_box(&params), 2.0, 1e-3).unwrap())
    });
}

fn bench_quadrature(c: &mut Criterion) {
    let v = Potential::piecewise(vec![(0.4, 10.0), (1.0, 2.0)]).unwrap();
    let params = ScatteringParams::new(Dimension::Two, 1.0).unwrap();
    let profile = minimizer_profile(&v, &params, 2.0).unwrap();
    c.bench_function("quad_integrals 4096 cells", |b| {
        b.iter(|| quad_integrals(black_box(&profile), black_box(&v), 1.0, Dimension::Two).unwrap())
    });
}

fn bench_certificate(c: &mut Criterion) {
    let model = ManifoldModel::with_default_policy(ManifoldFamily::ModularSurface { level: 50 }).unwrap();
    let v = Potential::hardcore(0.01).unwrap();
    c.bench_function("certify_bec modular L=50", |b| {
        b.iter(|| certify_bec(black_box(&model), 235, black_box(&v), 1.0, 0.1).unwrap())
    });
}

criterion_group!(benches, bench_scattering, bench_oracle, bench_quadrature, bench_certificate);
criterion_main!(benches);
