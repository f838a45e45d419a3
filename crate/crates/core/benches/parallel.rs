use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dirac_pairings::elliptic::verify_dirac_equals_elliptic;
use dirac_pairings::exec::Execution;
use dirac_pairings::fredholm::suite::{run_suite, SuiteKind};
use dirac_pairings::lab::lab_conjecture;
use dirac_pairings::spin::{HCParameter, ParamKind};
use dirac_pairings::weights::{RootDatum, WeylKind};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn su21_params(d: &RootDatum, count: i64) -> Vec<HCParameter> {
    let mut out = Vec::new();
    for n in 1..=count {
        let chi = d.reference_rho().rho.scaled(n);
        for w in d.weyl_group(WeylKind::Full) {
            let c = w.apply(&chi);
            let chamber = d.chamber_containing(&c).expect("regular");
            out.push(HCParameter { chi: c, chamber, kind: ParamKind::DiscreteSeries });
        }
    }
    out
}

fn fredholm_suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("fredholm_euler_40");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(run_suite(SuiteKind::Euler, 1, 40, &[], exec)));
        });
    }
    g.finish();
}

fn lab_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("lab_conjecture_sl2_max4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(lab_conjecture("sl2R", 4, exec).unwrap()));
        });
    }
    g.finish();
}

fn gram_fill(c: &mut Criterion) {
    let d = RootDatum::preset("su21").unwrap();
    let params = su21_params(&d, 4);
    let mut g = c.benchmark_group("elliptic_gram_su21_24");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(verify_dirac_equals_elliptic(&d, &params, exec).unwrap()));
        });
    }
    g.finish();
}

criterion_group!(benches, fredholm_suites, lab_table, gram_fill);
criterion_main!(benches);
