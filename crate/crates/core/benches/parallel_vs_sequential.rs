//! Sequential vs parallel timings for the three data-parallel kernels:
//! language enumeration, staged generation, and independence-set search.
//! Both strategies produce identical output, so the comparison is pure
//! scheduling overhead vs speedup.

use criterion::{criterion_group, criterion_main, Criterion};

use shiftlab::exec::Strategy;
use shiftlab::independence::{independence_sets, BlockFamily};
use shiftlab::shiftspace::{blocks_of_length, golden_mean};
use shiftlab::weiss::{WeissLanguage, WeissSpec};
use shiftlab::Config;

fn with_strategy(strategy: Strategy) -> Config {
    Config {
        strategy,
        ..Config::default()
    }
}

const STRATEGIES: [(&str, Strategy); 2] = [
    ("sequential", Strategy::Sequential),
    ("parallel", Strategy::Parallel),
];

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("blocks_of_length/golden-mean-22");
    let spec = golden_mean();
    for (name, strategy) in STRATEGIES {
        let cfg = with_strategy(strategy);
        group.bench_function(name, |b| {
            b.iter(|| blocks_of_length(&spec, 22, &cfg).unwrap().count)
        });
    }
    group.finish();
}

fn bench_weiss_generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("weiss_generate/step-2-horizon-36");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        let cfg = with_strategy(strategy);
        group.bench_function(name, |b| {
            b.iter(|| {
                WeissLanguage::generate(WeissSpec::new(2, 36).unwrap(), &cfg).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_independence_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("independence_sets/golden-mean-12");
    group.sample_size(10);
    let blocks = blocks_of_length(&golden_mean(), 12, &Config::default())
        .unwrap()
        .blocks;
    let family = BlockFamily::new(12, blocks).unwrap();
    for (name, strategy) in STRATEGIES {
        let cfg = with_strategy(strategy);
        group.bench_function(name, |b| {
            b.iter(|| independence_sets(&family, &cfg).unwrap().len())
        });
    }
    group.finish();
}

criterion_group!(
    kernels,
    bench_enumeration,
    bench_weiss_generation,
    bench_independence_search
);
criterion_main!(kernels);
