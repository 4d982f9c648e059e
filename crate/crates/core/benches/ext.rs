use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tormod::examples::{klein_ring, s3_ring};
use tormod::ring::o2_ring;
use tormod::{ext_table, DegreeWindow, GradedModulePresentation};

fn cases() -> Vec<(
    &'static str,
    GradedModulePresentation,
    GradedModulePresentation,
    DegreeWindow,
)> {
    let o2 = o2_ring();
    let klein = klein_ring();
    let s3 = s3_ring();
    let cyclic = GradedModulePresentation::parse(
        klein.clone(),
        vec![("u".into(), 0)],
        &["x1^3*u".into(), "x2^2*u".into()],
    )
    .unwrap();
    vec![
        (
            "o2 QW,R[W]",
            GradedModulePresentation::residue_regular(o2.clone()),
            GradedModulePresentation::free(o2, 0),
            DegreeWindow::new(-30, 10, 4).unwrap(),
        ),
        (
            "klein QW,cyclic",
            GradedModulePresentation::residue_regular(klein),
            cyclic,
            DegreeWindow::new(-12, 12, 6).unwrap(),
        ),
        (
            "s3 QW,R[W]",
            GradedModulePresentation::residue_regular(s3.clone()),
            GradedModulePresentation::free(s3, 0),
            DegreeWindow::new(-12, 6, 4).unwrap(),
        ),
    ]
}

fn ext(c: &mut Criterion) {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut group = c.benchmark_group("ext_table");
    group.sample_size(10);
    for (name, m, n, w) in cases() {
        group.bench_function(format!("{name}/parallel"), |b| {
            b.iter(|| ext_table(black_box(&m), black_box(&n), &w).unwrap())
        });
        group.bench_function(format!("{name}/1-thread"), |b| {
            b.iter(|| single.install(|| ext_table(black_box(&m), black_box(&n), &w).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, ext);
criterion_main!(benches);
