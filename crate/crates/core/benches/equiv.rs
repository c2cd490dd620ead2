use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sill::domain::ValueRegistry;
use sill::equiv::{check_equiv, Interface, Strategy, FLIP_SOURCE};
use sill::semantics::{proc_denotation, Fuel};
use sill::syntax::{parse_program, SessionType};
use sill::typecheck::check_program;

/// `flipflip` against `copy` over every bit stream up to each depth.
fn flip_equiv(c: &mut Criterion) {
    let program = check_program(&parse_program(FLIP_SOURCE).unwrap()).unwrap();
    let bits = SessionType::bits();
    let iface = Interface::new(vec![("a", bits.clone())], ("b", bits));
    let reg = ValueRegistry::new();
    let mut group = c.benchmark_group("flipflip vs copy");
    group.sample_size(20);
    for depth in [4, 6, 8] {
        let fuel = Fuel::new(depth);
        let left = proc_denotation(&program, "flipflip", &fuel).unwrap();
        let right = proc_denotation(&program, "copy", &fuel).unwrap();
        for (label, strategy) in [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, depth), &depth, |b, &d| {
                b.iter(|| check_equiv(&left, &right, &iface, d, &reg, strategy).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, flip_equiv);
criterion_main!(benches);
