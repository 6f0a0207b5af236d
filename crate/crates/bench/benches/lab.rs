//! Hot paths: sieve segment construction, the Δ window scan over a range,
//! brute-force congruence counting, and the sharded V-count aggregation.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use powersum_core::budget::Budget;
use powersum_core::congruence::{rho_plus, RhoMethod};
use powersum_core::factor::{self, FactorTable};
use powersum_core::mean::{delta_mean_sums, DeltaAlgorithm};
use powersum_core::poly::MultiPoly;
use powersum_core::powersum::{v_counts, PowerSystem};

fn bench_factor_table(c: &mut Criterion) {
    let budget = Budget::medium();
    c.bench_function("factor_table_build_1e6", |b| {
        b.iter(|| FactorTable::build(black_box(1), black_box(1 << 20), &budget).unwrap())
    });
}

fn bench_delta_scan(c: &mut Criterion) {
    let budget = Budget::medium();
    c.bench_function("delta_mean_sums_1e5_window", |b| {
        b.iter(|| delta_mean_sums(black_box(100_000), DeltaAlgorithm::WindowScan, &budget).unwrap())
    });
    c.bench_function("delta_single_726180", |b| {
        b.iter(|| powersum_core::delta::delta(black_box(720_720)).unwrap())
    });
}

fn bench_rho(c: &mut Criterion) {
    let budget = Budget::medium();
    let q = MultiPoly::parse("x1^2 - x2^2 + x1 - 3").unwrap();
    c.bench_function("rho_plus_2vars_mod_729", |b| {
        b.iter(|| rho_plus(&q, black_box(729), RhoMethod::BruteForce, &budget).unwrap())
    });
}

fn bench_vcounts(c: &mut Criterion) {
    let budget = Budget::medium();
    let sys = PowerSystem::new(vec![1, 1, 1], vec![2, 4, 4]).unwrap();
    c.bench_function("v_counts_244_1e6", |b| {
        b.iter(|| v_counts(black_box(1_000_000), &sys, &budget).unwrap())
    });
}

fn bench_primes(c: &mut Criterion) {
    c.bench_function("primes_up_to_1e6", |b| {
        b.iter(|| factor::primes_up_to(black_box(1_000_000)))
    });
}

criterion_group!(
    benches,
    bench_factor_table,
    bench_delta_scan,
    bench_rho,
    bench_vcounts,
    bench_primes
);
criterion_main!(benches);
