use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use loopalg::commutator_checker::analyze;
use loopalg_bench::{element, enveloping, reversed_word};

fn normal_ordering(c: &mut Criterion) {
    let mut g = c.benchmark_group("normal_order");
    for (rank, k, len) in [(1, 2, 4), (1, 2, 6), (2, 2, 4), (2, 3, 5)] {
        let word = reversed_word(&enveloping(rank, k), len);
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("A{rank}_k{k}_len{len}")),
            &word,
            |b, w| {
                // fresh algebra per iteration so the bracket memo starts cold
                b.iter(|| enveloping(rank, k).normal_order(black_box(w)).unwrap())
            },
        );
    }
    g.finish();
}

fn certificate(c: &mut Criterion) {
    let u = enveloping(2, 2);
    let z = element(&u, 4);
    c.bench_function("analyze_and_verify_A2_k2", |b| {
        b.iter(|| {
            let cert = analyze(&u, black_box(&z)).unwrap();
            loopalg::commutator_checker::verify(&u, &z, &cert, cert.p0..=cert.p0 + 5).unwrap()
        })
    });
}

criterion_group!(benches, normal_ordering, certificate);
criterion_main!(benches);
