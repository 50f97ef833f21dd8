use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use spectra_core::compiler::{compile, Construction};
use spectra_core::ground::{satisfiable_cdcl, to_cnf};
use spectra_core::text::{parse_sentence, parse_tm};
use spectra_core::turing::{run_binary, BoundKind, DEFAULT_CONFIGURATION_CAP};
use spectra_core::{ground, normalize, satisfiable};

const SENTENCE: &str = "rel E 2; rel F 2; rel P 1;
forall x forall y forall z ((E(x,y) & F(y,z)) -> P(z)) & exists x !P(x)";

const PARITY: &str = include_str!("../../core/fixtures/parity.tm");
const COPY: &str = include_str!("../../core/fixtures/copy_two_tape.tm");

fn grounding(c: &mut Criterion) {
    let doc = parse_sentence(SENTENCE).unwrap();
    let ns = normalize(&doc.formula, 3).unwrap();
    let mut group = c.benchmark_group("ground");
    for n in [4, 8, 16] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| ground(black_box(&ns), n))
        });
    }
    group.finish();

    let g = ground(&ns, 8);
    c.bench_function("backtracker/n8", |b| b.iter(|| satisfiable(black_box(&g))));
    c.bench_function("cdcl/n8", |b| b.iter(|| satisfiable_cdcl(black_box(&g))));
    c.bench_function("cnf/n8", |b| b.iter(|| to_cnf(black_box(&g))));
}

fn compilation(c: &mut Criterion) {
    let parity = parse_tm(PARITY).unwrap();
    let copy = parse_tm(COPY).unwrap();
    c.bench_function("compile/parity/three-var", |b| {
        b.iter(|| compile(black_box(&parity), Construction::ThreeVar).unwrap())
    });
    c.bench_function("compile/copy/two-k-plus-2", |b| {
        b.iter(|| compile(black_box(&copy), Construction::TwoKPlus2(2)).unwrap())
    });

    let report = compile(&parity, Construction::ThreeVar).unwrap();
    let ns = normalize(&report.sentence, 3).unwrap();
    let mut group = c.benchmark_group("compiled-sat");
    group.sample_size(10);
    group.bench_function("parity/n6", |b| {
        b.iter(|| satisfiable_cdcl(&ground(black_box(&ns), 6)))
    });
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let copy = parse_tm(COPY).unwrap();
    c.bench_function("simulate/copy/n1000", |b| {
        b.iter(|| {
            run_binary(
                black_box(&copy),
                1000,
                BoundKind::Linear,
                DEFAULT_CONFIGURATION_CAP,
            )
        })
    });
}

criterion_group!(benches, grounding, compilation, simulation);
criterion_main!(benches);
