use alexinv::{alexander_matrix, compute_invariants, det_poly, factor, normalize_delta, Policy};
use alexinv_bench::with_crossings;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn by_crossings(c: &mut Criterion) {
    let mut group = c.benchmark_group("invariants");
    group.sample_size(10);
    for n in [8, 10, 12] {
        let mats: Vec<_> = with_crossings(n).iter().map(alexander_matrix).collect();
        group.throughput(Throughput::Elements(mats.len() as u64));
        for policy in [Policy::Fast, Policy::OracleOnly] {
            group.bench_with_input(BenchmarkId::new(policy.to_string(), n), &mats, |b, mats| {
                b.iter(|| {
                    for m in mats {
                        compute_invariants(m, policy).unwrap();
                    }
                })
            });
        }
    }
    group.finish();
}

fn stages(c: &mut Criterion) {
    let mats: Vec<_> = with_crossings(12).iter().map(alexander_matrix).collect();
    let dets: Vec<_> = mats.iter().map(|m| normalize_delta(&det_poly(&m.matrix)).unwrap()).collect();
    c.bench_function("det_poly/12", |b| {
        b.iter(|| {
            for m in &mats {
                det_poly(&m.matrix);
            }
        })
    });
    c.bench_function("factor/12", |b| {
        b.iter(|| {
            for d in &dets {
                factor(d).unwrap();
            }
        })
    });
}

criterion_group!(benches, by_crossings, stages);
criterion_main!(benches);
