use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use localizer::par::ExecPolicy;
use localizer::pseudospectra::{Evaluator, Which};
use localizer::scan::{grid_scan_embedded, Embedding, Region, ScanOptions};
use localizer::zoo::hemisphere;

fn scan_policies(c: &mut Criterion) {
    let mut group = c.benchmark_group("hemisphere_plane_scan");
    group.sample_size(10);
    for n in [64, 256] {
        let tuple = hemisphere(1.0, n).unwrap();
        let ev = Evaluator::new(&tuple).unwrap();
        let region = Region::new(vec![0.0, -0.4], vec![1.2, 1.2], vec![25, 33]).unwrap();
        let plane = Embedding::coordinate_plane(3, 0, 2);
        for (label, policy) in [
            ("sequential", ExecPolicy::Sequential),
            ("parallel", ExecPolicy::Parallel { workers: 0 }),
        ] {
            let opts = ScanOptions {
                which: Which::CQ,
                policy,
                ..ScanOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(label, n), &n, |b, _| {
                b.iter(|| black_box(grid_scan_embedded(&ev, &region, &plane, &opts).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, scan_policies);
criterion_main!(benches);
