use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use debranges::frames::FrameSystem;
use debranges::nodes::solve_nodes;
use debranges::presets;
use debranges::space::{self, QuadratureSpec};
use debranges::verify::real_grid;
use debranges::{Complex64, HermiteBiehlerFunction, KernelCombination};

/// Thread pools to compare: the global pool and a single worker.
/// Without the `parallel` feature everything runs inline and only one entry remains.
#[cfg(feature = "parallel")]
fn pools() -> Vec<(&'static str, Option<rayon::ThreadPool>)> {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
    vec![("rayon", None), ("one-thread", Some(single))]
}

#[cfg(not(feature = "parallel"))]
fn pools() -> Vec<(&'static str, Option<()>)> {
    vec![("sequential", None)]
}

#[cfg(feature = "parallel")]
fn within<R: Send>(pool: &Option<rayon::ThreadPool>, f: impl FnOnce() -> R + Send) -> R {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn within<R: Send>(_: &Option<()>, f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn bench(c: &mut Criterion) {
    let preset = presets::non_paley_wiener();
    let (e, f) = (&preset.e, &preset.f);
    let ef = e.product(f);
    let sys = FrameSystem::solve(e, f, 0.0, -2000, 2000).unwrap();
    let signal = KernelCombination::new(
        e.clone(),
        vec![Complex64::new(0.3, 0.2), Complex64::new(-1.1, -0.4)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(-0.5, 0.5)],
    )
    .unwrap();
    let samples = signal.sample(sys.nodes());
    let grid = real_grid(-3.0, 3.0, 0.25);
    let small = sys.restrict(-100, 100).unwrap();
    let pw = HermiteBiehlerFunction::exponential(PI).unwrap();
    let k = KernelCombination::single(pw.clone(), Complex64::new(0.4, 0.0));
    let spec = QuadratureSpec::default();

    for (name, pool) in pools() {
        let mut group = c.benchmark_group("series");
        group.sample_size(10);
        group.bench_function(BenchmarkId::new("reconstruct_grid_4001", name), |b| {
            b.iter(|| {
                within(&pool, || {
                    grid.iter()
                        .map(|&z| sys.reconstruct_in_e(black_box(&samples), z).unwrap())
                        .sum::<Complex64>()
                })
            })
        });
        group.bench_function(BenchmarkId::new("naimark_gram_201", name), |b| {
            b.iter(|| within(&pool, || black_box(small.naimark_gram())))
        });
        group.bench_function(BenchmarkId::new("quadrature_norm", name), |b| {
            b.iter(|| within(&pool, || space::inner_product(&k, &k, &pw, black_box(&spec)).value))
        });
        group.bench_function(BenchmarkId::new("solve_nodes_4001", name), |b| {
            b.iter(|| within(&pool, || solve_nodes(black_box(&ef), 0.3, -2000, 2000).unwrap().len()))
        });
        group.finish();
    }
}

criterion_group!(benches, bench);
criterion_main!(benches);
