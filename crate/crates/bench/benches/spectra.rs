use criterion::{criterion_group, criterion_main, Criterion};
use norton_core::trees::DEFAULT_EVALUATION_BUDGET;
use norton_core::{make_family, FamilyKind};
use std::hint::black_box;

fn spectra(c: &mut Criterion) {
    let mut g = c.benchmark_group("cayley spectrum");
    g.sample_size(10);
    for (name, kind) in [
        ("H(3,3)", FamilyKind::Hamming { n: 3, e: 3 }),
        ("Q_6", FamilyKind::Hypercube { n: 6 }),
        ("folded Q_7", FamilyKind::FoldedCube { n: 7 }),
        ("H_2(2,2)", FamilyKind::Bilinear { q: 2, d: 2, e: 2 }),
    ] {
        let f = make_family(kind).unwrap();
        g.bench_function(name, |bch| {
            bch.iter(|| {
                let graph = f.cayley_graph(DEFAULT_EVALUATION_BUDGET).unwrap();
                black_box(graph.spectrum().unwrap())
            })
        });
    }
    g.finish();
}

criterion_group!(benches, spectra);
criterion_main!(benches);
