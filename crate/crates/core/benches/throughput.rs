//! Sequential against parallel execution for the batch-heavy operations.
//!
//! Without the `parallel` feature both arms run on the calling thread.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use semunit::fairness::{granular_fairness_with, Aggregation};
use semunit::fixtures::{self, fixture};
use semunit::granularity::check_partial_order_with;
use semunit::model::{CompoundKind, LogicalFramework, Member};
use semunit::par::Execution;
use semunit::partition::{partition_with, PartitionConfig};
use semunit::store::CompoundOptions;
use semunit::{Gupri, UnitStore};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_partition(c: &mut Criterion) {
    let f = fixture();
    let patterns = fixtures::partition_patterns();
    let mut group = c.benchmark_group("partition");
    group.sample_size(10);
    for (name, input) in [
        ("graph-1900", fixtures::large_graph_input(1900, 500)),
        ("table-5000", fixtures::large_tabular_input(5000)),
    ] {
        for (mode, execution) in MODES {
            let config = PartitionConfig {
                execution,
                ..PartitionConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(mode, name), &input, |b, input| {
                b.iter(|| partition_with(black_box(input), &patterns, &f.store, &config).unwrap())
            });
        }
    }
    group.finish();
}

/// The fixture store plus one item group over every statement a large
/// tabular partition produces.
fn wide_store(rows: usize) -> (UnitStore, Gupri) {
    let mut store = fixture().store;
    let input = fixtures::large_tabular_input(rows);
    let r = partition_with(
        &input,
        &fixtures::partition_patterns(),
        &store,
        &PartitionConfig::default(),
    )
    .unwrap();
    let mut members = Vec::with_capacity(r.units.len());
    for u in r.units {
        members.push(Member::plain(store.insert(u).unwrap()));
    }
    let meta = fixtures::meta(None, LogicalFramework::None, None);
    let group = store
        .make_compound_unit(
            CompoundKind::ItemGroup,
            None,
            members,
            CompoundOptions::default(),
            meta,
        )
        .unwrap();
    let g = store.insert(group).unwrap();
    (store, g)
}

fn bench_compounds(c: &mut Criterion) {
    let (store, root) = wide_store(2000);
    let compound = store.compound(&root).unwrap().clone();
    let mut group = c.benchmark_group("compound-2000");
    group.sample_size(10);
    for (mode, execution) in MODES {
        group.bench_function(BenchmarkId::new("fairness", mode), |b| {
            b.iter(|| {
                granular_fairness_with(black_box(&root), &store, Aggregation::Mean, execution)
                    .unwrap()
            })
        });
        group.bench_function(BenchmarkId::new("merge", mode), |b| {
            b.iter(|| {
                store
                    .merge_content_graphs_with(black_box(&compound), execution)
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_partial_order(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(7);
    let n = 300u32;
    let pairs: Vec<(u32, u32)> = (0..n * 8)
        .map(|_| {
            let a = rng.random_range(0..n);
            (a, rng.random_range(a..n))
        })
        .collect();
    let mut group = c.benchmark_group("partial-order-300");
    group.sample_size(10);
    for (mode, execution) in MODES {
        group.bench_function(mode, |b| {
            b.iter(|| check_partial_order_with(black_box(&pairs), execution))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_partition,
    bench_compounds,
    bench_partial_order
);
criterion_main!(benches);
