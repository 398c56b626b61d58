use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nhpoly::analysis::build_delta_with;
use nhpoly::equation::WeierstrassEquation;
use nhpoly::exec::Strategy;
use nhpoly::field::Field;
use nhpoly::hull::PolytopeContext;

/// Dense supports in two and three X variables.
const INPUTS: &[(&str, &str)] = &[
    ("plane-14", "Z^4+(Y-X)^4*Z^2+(Y+3*X)^8"),
    ("plane-21", "Z^6+(X+Y)^5*Z+(X-2*Y)^7+X^3*Y^3*Z^3+(X+Y)^4*Z^2"),
    ("space-18", "Z^5+(X1+X2+X3)^3*Z^2+X1^3*X2^2*X3+X2^5*Z+X3^6+X1^2*X3^4*Z+X1^4*X2*Z^3+X2^2*X3^3*Z^4"),
];

fn hull_strategies(c: &mut Criterion) {
    let mut group = c.benchmark_group("hull");
    group.sample_size(20);
    for (name, text) in INPUTS {
        let f = WeierstrassEquation::parse(text, Field::Rational, None).unwrap();
        for ctx in [PolytopeContext::Classical, PolytopeContext::infinitesimal()] {
            for (label, strategy) in [("parallel", Strategy::Parallel), ("sequential", Strategy::Sequential)] {
                let id = BenchmarkId::new(format!("{label}/{ctx}"), name);
                group.bench_with_input(id, &f, |b, f| {
                    b.iter(|| build_delta_with(black_box(f), &ctx, strategy).unwrap())
                });
            }
        }
    }
    group.finish();
}

criterion_group!(benches, hull_strategies);
criterion_main!(benches);
