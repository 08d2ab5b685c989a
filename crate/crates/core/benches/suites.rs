use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use seqlab_core::quadratic::p_coeffs_closed;
use seqlab_core::recurrences::{full_history_chains, order2_closed_kron};
use seqlab_core::suites::instances::{case_rng, random_full_history, random_order2};
use seqlab_core::suites::{run_suite, Suite, SuiteConfig};
use seqlab_core::{Exec, Guards};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        let mut cfg = SuiteConfig::new(Suite::Thm1);
        cfg.n_max = 14;
        cfg.cases = 20;
        cfg.exec = exec;
        group.bench_with_input(BenchmarkId::new("thm1", name), &cfg, |b, cfg| b.iter(|| run_suite(cfg).unwrap()));
        cfg.suite = Suite::Vectorlaws;
        cfg.cases = 200;
        group.bench_with_input(BenchmarkId::new("vectorlaws", name), &cfg, |b, cfg| b.iter(|| run_suite(cfg).unwrap()));
    }
    group.finish();
}

fn closed_forms(c: &mut Criterion) {
    let guards = Guards::default();
    let p = random_order2(&mut case_rng(1, 0, "bench"), 16, false);
    let w = random_full_history(&mut case_rng(1, 0, "bench"), 14, false);
    let mut group = c.benchmark_group("closed");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("order2_kron_n16", name), |b| {
            b.iter(|| order2_closed_kron(&p, 16, exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("chains_n14", name), |b| {
            b.iter(|| full_history_chains(&w, 14, exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("p_coeffs_n5", name), |b| {
            b.iter(|| p_coeffs_closed(5, exec, &guards).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, suites, closed_forms);
criterion_main!(benches);
