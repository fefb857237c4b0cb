use criterion::{criterion_group, criterion_main, Criterion};
use rmcensus_core::epi::{enumerate_skes, Signature};
use rmcensus_core::{automorphisms, build_group, derive_params, FamilyTag, UvPair};
use std::hint::black_box;

fn multiplication(c: &mut Criterion) {
    let g = build_group(&derive_params(11).unwrap(), FamilyTag::HatGss2).unwrap();
    let xs: Vec<_> = g.elements().step_by(7).collect();
    c.bench_function("mul HatG_s_s2 p=11", |b| {
        b.iter(|| {
            let mut acc = xs[0];
            for x in &xs {
                acc = g.mul(&acc, black_box(x));
            }
            acc
        })
    });
}

fn skes(c: &mut Criterion) {
    let g = build_group(&derive_params(11).unwrap(), FamilyTag::Guv(UvPair::SS4)).unwrap();
    let sig = Signature::triangle([5, 5, 5]);
    c.bench_function("enumerate_skes G_s_s4 p=11", |b| {
        b.iter(|| enumerate_skes(black_box(&g), &sig).unwrap().len())
    });
}

fn auts(c: &mut Criterion) {
    let mut group = c.benchmark_group("automorphisms p=11");
    group.sample_size(10);
    for f in [FamilyTag::G1, FamilyTag::Guv(UvPair::SS4), FamilyTag::HatG1] {
        let g = build_group(&derive_params(11).unwrap(), f).unwrap();
        group.bench_function(f.to_string(), |b| {
            b.iter(|| automorphisms(black_box(&g)).unwrap().len())
        });
    }
    group.finish();
}

criterion_group!(benches, multiplication, skes, auts);
criterion_main!(benches);
