use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pltl2dra::{parse, translate, DEFAULT_MAX_STATES};
use pltl2dra_bench::FORMULAS;

fn translation(c: &mut Criterion) {
    let mut group = c.benchmark_group("translate");
    for src in FORMULAS {
        let phi = parse(src).expect("fixture parses");
        group.bench_function(*src, |b| {
            b.iter(|| translate(black_box(&phi), DEFAULT_MAX_STATES).expect("within limit"))
        });
    }
    group.finish();
}

criterion_group!(benches, translation);
criterion_main!(benches);
