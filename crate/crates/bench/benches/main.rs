use criterion::{criterion_group, criterion_main, Criterion};
use squash7_core::dirac::{self, Twist};
use squash7_core::geometry::{self, flow};
use squash7_core::instanton::{InstantonProfile, Y0};
use squash7_core::reptheory::{build_carrier, hom_block_with_cutoff, IrrepLabelG};

fn bench_solve(c: &mut Criterion) {
    c.bench_function("nearly_g2_solve", |b| {
        b.iter(|| geometry::solve_nearly_g2().unwrap())
    });
}

fn bench_flow(c: &mut Criterion) {
    c.bench_function("bs_flow_r100", |b| {
        b.iter(|| flow::bs_flow(1.0, 100.0, 1e-8).unwrap())
    });
}

fn bench_profile(c: &mut Criterion) {
    c.bench_function("instanton_profile_r50", |b| {
        b.iter(|| InstantonProfile::compute(Y0::Finite(1.0), 1.0, 50.0).unwrap())
    });
}

fn bench_hom_solve(c: &mut Criterion) {
    let carrier = build_carrier(IrrepLabelG::new(0, 1, 1)).unwrap();
    let target = dirac::target_module(Twist::Adjoint);
    c.bench_function("hom_block_011_adjoint", |b| {
        b.iter(|| hom_block_with_cutoff(&carrier, &target, 1e-6).unwrap())
    });
}

fn bench_block_spectrum(c: &mut Criterion) {
    let block = dirac::dirac_block(IrrepLabelG::new(0, 1, 1), Twist::Adjoint).unwrap();
    c.bench_function("block_spectrum_011", |b| {
        b.iter(|| dirac::block_spectrum(&block, 0.0).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bench_solve, bench_flow, bench_profile, bench_hom_solve, bench_block_spectrum
}
criterion_main!(benches);
