use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use eop_lab::ladder::verify_pha;
use eop_lab::quadrature::gram_matrix;
use eop_lab::superintegrable::{build_case2, compare_solvers, spectrum_report};
use eop_lab::Execution;

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn spectrum(c: &mut Criterion) {
    let sys = build_case2(4, 4).unwrap();
    let mut g = c.benchmark_group("spectrum_case2_m4_m4_n60");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| spectrum_report(&sys, 60, None, exec).unwrap())
        });
    }
    g.finish();
}

fn solvers(c: &mut Criterion) {
    let sys = build_case2(2, 2).unwrap();
    let mut g = c.benchmark_group("compare_solvers_case2_m2_m2_n40");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| compare_solvers(&sys, 40, None, exec).unwrap())
        });
    }
    g.finish();
}

fn pha(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_pha_m4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_pha(4, 15, exec).unwrap())
        });
    }
    g.finish();
}

fn gram(c: &mut Criterion) {
    let mut g = c.benchmark_group("gram_matrix_m4_10");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| gram_matrix(4, 10, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, spectrum, solvers, pha, gram);
criterion_main!(benches);
