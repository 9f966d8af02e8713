use criterion::{criterion_group, criterion_main, Criterion};
use phasetomo_core::factor::scan_two_qubit_products;
use phasetomo_core::field::build_field;
use phasetomo_core::tomo::{sample_and_estimate, TomographyScheme};
use phasetomo_core::wigner::{canonical_wigner_family, verify_acceptability};
use phasetomo_core::DensityMatrix;

fn bench_field_tables(c: &mut Criterion) {
    c.bench_function("build_field gf256", |b| {
        b.iter(|| build_field(2, 8, None).unwrap())
    });
    c.bench_function("build_field gf81", |b| {
        b.iter(|| build_field(3, 4, None).unwrap())
    });
}

fn bench_wigner(c: &mut Criterion) {
    let f8 = build_field(2, 3, None).unwrap();
    c.bench_function("canonical_wigner_family d8", |b| {
        b.iter(|| canonical_wigner_family(&f8).unwrap())
    });
    let fam = canonical_wigner_family(&f8).unwrap();
    c.bench_function("verify_acceptability d8", |b| {
        b.iter(|| verify_acceptability(&fam))
    });
}

fn bench_factor_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("factor");
    group.sample_size(10);
    group.bench_function("scan_two_qubit_products", |b| {
        b.iter(scan_two_qubit_products)
    });
    group.finish();
}

fn bench_sampling(c: &mut Criterion) {
    let rho = DensityMatrix::maximally_mixed(2);
    c.bench_function("sic sampling 100k shots", |b| {
        b.iter(|| sample_and_estimate(&rho, &TomographyScheme::SicQubit, 100_000, 1).unwrap())
    });
}

criterion_group!(
    benches,
    bench_field_tables,
    bench_wigner,
    bench_factor_scan,
    bench_sampling
);
criterion_main!(benches);
