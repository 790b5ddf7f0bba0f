use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hered3_core::{pattern, solve, Graph, SolveOptions};
use hered3_testkit::generate::{batch, generate, Directed, GeneratorKind, GeneratorSpec};

fn composite(n: usize) -> Graph {
    generate(&GeneratorSpec {
        kind: GeneratorKind::CographComposite { n },
        seed: n as u64,
    })
    .unwrap()
}

fn gadgets(kind: GeneratorKind, count: usize) -> Vec<Graph> {
    batch(&kind, 7, count).iter().map(|s| generate(s).unwrap()).collect()
}

fn composite_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("composite_solve");
    group.sample_size(20);
    for n in [100, 200, 500, 1000] {
        let g = composite(n);
        let opts = SolveOptions {
            witness: true,
            assume_class: true,
            ..SolveOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| solve(black_box(g), &opts).unwrap()));
    }
    group.finish();
}

fn gadget_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("gadget_solve");
    let kinds = [
        ("c7_plain", GeneratorKind::C7Gadget { extra: 10, p: 0.3, directed: None }),
        ("c7_ri_branch", GeneratorKind::C7Gadget { extra: 10, p: 0.3, directed: Some(Directed::RiBranch) }),
        ("c7_s_pair", GeneratorKind::C7Gadget { extra: 10, p: 0.3, directed: Some(Directed::SPair) }),
        ("c9", GeneratorKind::C9Gadget { extra: 8, p: 0.3 }),
    ];
    for (name, kind) in kinds {
        let gs = gadgets(kind, 32);
        let opts = SolveOptions {
            witness: true,
            ..SolveOptions::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| {
                for g in &gs {
                    black_box(solve(g, &opts).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn class_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("class_check");
    group.sample_size(10);
    for n in [50, 100, 200] {
        let g = composite(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| pattern::check_class(black_box(g))));
    }
    group.finish();
}

criterion_group!(benches, composite_solve, gadget_solve, class_check);
criterion_main!(benches);
