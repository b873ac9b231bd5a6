use criterion::{criterion_group, criterion_main, Criterion};
use polrot::pulse::synthesize_field;
use polrot::{FieldGridRequest, QuadratureOptions, UniformAxis};
use polrot_bench::{faraday_interface, reference_pulse};

fn synthesis(c: &mut Criterion) {
    let spec = reference_pulse();
    let opts = QuadratureOptions::default();
    let mut group = c.benchmark_group("synthesize_field");
    group.sample_size(10);
    for chi12 in [2e-4, 0.08, 1.2] {
        let sol = faraday_interface(&spec, chi12);
        let t = UniformAxis::new(2.4e-12, 20e-15, 20).unwrap();
        let req = FieldGridRequest::medium(&spec, &sol, t).unwrap();
        group.bench_function(format!("chi12={chi12}"), |b| {
            b.iter(|| synthesize_field(&spec, &sol, &req, &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, synthesis);
criterion_main!(benches);
