use cmzv_bench::record;
use cmzv_core::contour::eval_integral;
use cmzv_core::PrecisionContext;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("integral");
    g.sample_size(10);
    for id in ["sun-2k8-Hk2", "sun-2k16-H2k2", "sun-3k27-Hk", "zr18-Hk"] {
        let spec = record(id).integral.expect("record has an integral");
        for d in [30, 50] {
            let ctx = PrecisionContext::with_target(d);
            g.bench_with_input(BenchmarkId::new(id, d), &spec, |b, s| {
                b.iter(|| eval_integral(s, &ctx).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, quadrature);
criterion_main!(benches);
