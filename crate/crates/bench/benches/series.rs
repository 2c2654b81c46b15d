use criterion::{criterion_group, criterion_main, Criterion};
use latcoh_bench::{e8_tail, star_2_3_7};
use latcoh_core::series::{default_coefficient_count, default_periods, h_series_direct, periodic_constant, z_series};
use latcoh_core::Rational;

fn series(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    let g = star_2_3_7();
    let n = default_coefficient_count(&g, 0).unwrap();
    group.bench_function("star_2_3_7/h_series_direct", |b| b.iter(|| h_series_direct(&g, 0, 0, n).unwrap()));
    let h = h_series_direct(&g, 0, 0, n).unwrap();
    let periods = default_periods(&h);
    group.bench_function("star_2_3_7/periodic_constant", |b| {
        b.iter(|| periodic_constant(&h, &periods).unwrap())
    });
    let g = e8_tail();
    let bounds = vec![Some(Rational::from(2)); g.len()];
    group.bench_function("e8_tail/z_series", |b| b.iter(|| z_series(&g, &bounds).unwrap()));
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = series
}
criterion_main!(benches);
