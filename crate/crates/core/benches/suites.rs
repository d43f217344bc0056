use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lsubpi::par::Exec;
use lsubpi::suite::{run_suite, Bounds, SuiteName};

fn suites(c: &mut Criterion) {
    let cases = [
        (
            SuiteName::BisimCbn,
            Bounds {
                size: 7,
                ..Bounds::for_suite(SuiteName::BisimCbn)
            },
        ),
        (
            SuiteName::Diamond,
            Bounds {
                size: 7,
                ..Bounds::for_suite(SuiteName::Diamond)
            },
        ),
        (
            SuiteName::Harmony,
            Bounds {
                size: 6,
                samples: 300,
                ..Bounds::for_suite(SuiteName::Harmony)
            },
        ),
    ];
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    for (name, bounds) in cases {
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            g.bench_with_input(BenchmarkId::new(name.as_str(), label), &bounds, |b, bounds| {
                b.iter(|| assert!(run_suite(name, bounds, exec).passed))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
