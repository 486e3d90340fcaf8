use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use relmon_core::alg::build_algebra_category;
use relmon_core::colim::{is_dense, Mode};
use relmon_core::corpus::{builtin_corpus, small_categories, Instance, ShapeBounds};
use relmon_core::monadicity::{creation_audit, decide_monadicity, AuditOptions, ShapeFamily};
use relmon_core::relmon::enumerate_relative_monads;
use relmon_core::Budget;

fn instance(name: &str) -> Instance {
    builtin_corpus().into_iter().find(|i| i.name == name).expect("built-in instance")
}

fn shapes(c: &mut Criterion) {
    c.bench_function("small_categories/2x6", |b| {
        b.iter(|| small_categories(black_box(ShapeBounds::default()), &Budget::unlimited()).unwrap())
    });
    c.bench_function("conical_family/2x4", |b| {
        let bounds = ShapeBounds { max_objects: 2, max_morphisms: 4 };
        b.iter(|| ShapeFamily::conical(black_box(bounds), 2, &Budget::unlimited()).unwrap())
    });
}

fn searches(c: &mut Criterion) {
    let split = instance("split");
    let j = split.root().unwrap().clone();
    c.bench_function("density/split", |b| b.iter(|| is_dense(black_box(&j), &Budget::unlimited()).unwrap()));
    c.bench_function("monads/split", |b| {
        b.iter(|| enumerate_relative_monads(black_box(&j), &Budget::unlimited()).unwrap())
    });
    let bt2 = instance("point-bt2");
    let monad = bt2.monads["T"].monad.clone();
    c.bench_function("algebras/point-bt2", |b| {
        b.iter(|| build_algebra_category(black_box(&monad), &Budget::unlimited()).unwrap())
    });
}

fn monadicity(c: &mut Criterion) {
    for name in ["square", "indisc2-empty-root", "arrow-involution"] {
        let inst = instance(name);
        let (j, r) = (inst.root().unwrap().clone(), inst.right().unwrap().clone());
        c.bench_function(&format!("decide/{name}"), |b| {
            b.iter(|| decide_monadicity(black_box(&j), black_box(&r), Mode::Strict, false, &Budget::unlimited()).unwrap())
        });
    }
    let family = ShapeFamily::conical(ShapeBounds { max_objects: 2, max_morphisms: 3 }, 2, &Budget::unlimited()).unwrap();
    let inst = instance("interval");
    let (j, r) = (inst.root().unwrap().clone(), inst.right().unwrap().clone());
    let mut group = c.benchmark_group("audit");
    group.sample_size(10);
    group.bench_function("interval/2x3", |b| {
        b.iter(|| creation_audit(&j, &r, black_box(&family), AuditOptions::default(), &Budget::unlimited()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, shapes, searches, monadicity);
criterion_main!(benches);
