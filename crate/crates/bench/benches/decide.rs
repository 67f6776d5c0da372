use bfoml_core::gen::{corpus, GenConfig, GenFragment};
use bfoml_core::kripke::{check, enumerate_sat, DEFAULT_ORACLE_BUDGET};
use bfoml_core::reduction::{build_witness_model, fo_enumerate_sat, parse_fo, translate_sentence};
use bfoml_core::tableau::{decide_constant_eb, decide_increasing, TableauOptions};
use bfoml_core::{Assignment, Formula, Semantics};
use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};

const SAMPLES: &[&str] = &[
    "(E x [] P(x) & A y <> !P(y))",
    "(E x [] E y [] Q(x,y) & A u <> A v <> !Q(u,v))",
    "((A x [] A y [] !P(x) & A z [] E w <> P(w)) & E s <> T)",
];

fn fuzz(fragment: GenFragment) -> Vec<Formula> {
    corpus(
        11,
        100,
        &GenConfig {
            fragment,
            ..Default::default()
        },
    )
}

fn tableaux(c: &mut Criterion) {
    let mut group = c.benchmark_group("tableau");
    for text in SAMPLES {
        let phi: Formula = text.parse().unwrap();
        group.bench_function(format!("increasing {text}"), |b| {
            b.iter(|| decide_increasing(black_box(&phi), TableauOptions::default()).unwrap())
        });
    }
    let full = fuzz(GenFragment::Full);
    group.bench_function("increasing fuzz x100", |b| {
        b.iter(|| {
            for phi in &full {
                decide_increasing(phi, TableauOptions::default()).unwrap();
            }
        })
    });
    let eb = fuzz(GenFragment::ExistsBox);
    group.bench_function("constant fuzz x100", |b| {
        b.iter(|| {
            for phi in &eb {
                decide_constant_eb(phi, TableauOptions::default()).unwrap();
            }
        })
    });
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for text in SAMPLES {
        let phi: Formula = text.parse().unwrap();
        for semantics in [Semantics::Increasing, Semantics::Constant] {
            group.bench_function(format!("{semantics} {text}"), |b| {
                b.iter(|| enumerate_sat(black_box(&phi), 4, 3, semantics, DEFAULT_ORACLE_BUDGET).unwrap())
            });
        }
    }
    group.finish();
}

fn model_checking(c: &mut Criterion) {
    let alpha = parse_fo("ALL x . EX y . EX z . (R(x,y) & !R(x,z))").unwrap();
    let m = fo_enumerate_sat(&alpha, 3).unwrap();
    let psi = translate_sentence(&alpha);
    c.bench_function("check translated sentence on witness model", |b| {
        b.iter_batched(
            || build_witness_model(&m, &alpha),
            |k| check(&k, "v1", &Assignment::new(), &psi).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, tableaux, oracle, model_checking);
criterion_main!(benches);
