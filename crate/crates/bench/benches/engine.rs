use criterion::{criterion_group, criterion_main, Criterion};
use ontoforms_bench::{fixture, synthetic, wine_model};
use ontoforms_core::{extract_model, generate_form, parse_turtle, FormConfig, InlinePair, Iri};
use std::hint::black_box;

const FOOD: &str = "http://www.w3.org/TR/2003/PR-owl-guide-20031209/food#";

fn parsing(c: &mut Criterion) {
    let wine = fixture("wine-food.ttl");
    let big = synthetic(4, 5);
    c.bench_function("parse wine-food", |b| b.iter(|| parse_turtle(black_box(&wine)).unwrap()));
    c.bench_function("parse synthetic 780 classes", |b| b.iter(|| parse_turtle(black_box(&big)).unwrap()));
    let graph = parse_turtle(&big).unwrap();
    c.bench_function("extract synthetic 780 classes", |b| {
        b.iter(|| extract_model(black_box(graph.clone())).unwrap())
    });
}

fn frames(c: &mut Criterion) {
    let model = wine_model();
    let classes: Vec<Iri> = model.classes.keys().cloned().collect();
    c.bench_function("applicable_properties all wine classes", |b| {
        b.iter(|| {
            for class in &classes {
                black_box(model.applicable_properties(class).unwrap());
            }
        })
    });
}

fn forms(c: &mut Criterion) {
    let model = wine_model();
    let meal = Iri::new(format!("{FOOD}Meal"));
    let config = FormConfig {
        inline_pairs: [InlinePair::new(meal.clone(), Iri::new(format!("{FOOD}MealCourse")))].into(),
        ..FormConfig::default()
    };
    c.bench_function("generate_form Meal inline", |b| {
        b.iter(|| generate_form(&model, black_box(&meal), &config).unwrap())
    });
}

criterion_group!(benches, parsing, frames, forms);
criterion_main!(benches);
