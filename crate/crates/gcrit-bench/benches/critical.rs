use criterion::{black_box, criterion_group, criterion_main, Criterion};
use gcrit_core::classic_bounds;
use gcrit_core::kernel::BsOperator;
use gcrit_core::oracle::{self, ShootingConfig};
use gcrit_core::{
    build_grid, make_exponential, make_square_well, reduce_to_s_wave, sequences, AngularMomentum,
    QuadratureScheme,
};

fn bench_grids(c: &mut Criterion) {
    let scheme = QuadratureScheme::default();
    let e = make_exponential();
    c.bench_function("grid_build_exponential", |b| {
        b.iter(|| build_grid(black_box(&e), AngularMomentum::new(0), &scheme).unwrap())
    });
    let w5 = reduce_to_s_wave(&make_square_well(), AngularMomentum::new(5));
    c.bench_function("grid_build_reduced_sw_l5", |b| {
        b.iter(|| build_grid(black_box(&w5), AngularMomentum::new(0), &scheme).unwrap())
    });
}

fn bench_operator(c: &mut Criterion) {
    let scheme = QuadratureScheme::default();
    let e = make_exponential();
    let op = BsOperator::for_shape(&e, AngularMomentum::new(0), &scheme).unwrap();
    let u0 = op.initial_iterate();
    c.bench_function("kernel_apply_exponential", |b| {
        b.iter(|| op.apply(black_box(&u0)).unwrap())
    });
}

fn bench_sequences(c: &mut Criterion) {
    let scheme = QuadratureScheme::default();
    let e = make_exponential();
    c.bench_function("kellogg_ladder_n4_exponential", |b| {
        b.iter(|| sequences::kellogg_sequence(&e, AngularMomentum::new(0), 4, &scheme).unwrap())
    });
    let sw = make_square_well();
    c.bench_function("alpha_omega_n4_sw_l5", |b| {
        b.iter(|| sequences::alpha_omega(&sw, AngularMomentum::new(5), 4, &scheme).unwrap())
    });
}

fn bench_bounds(c: &mut Criterion) {
    let scheme = QuadratureScheme::default();
    let sw = make_square_well();
    c.bench_function("glaser_lower_sw", |b| {
        b.iter(|| {
            classic_bounds::glaser_lower(&sw, AngularMomentum::new(0), None, &scheme).unwrap()
        })
    });
}

fn bench_oracle(c: &mut Criterion) {
    let scheme = QuadratureScheme::default();
    let cfg = ShootingConfig::default();
    let sw = make_square_well();
    c.bench_function("oracle_critical_g_sw", |b| {
        b.iter(|| oracle::critical_g(&sw, AngularMomentum::new(0), &cfg, &scheme).unwrap())
    });
}

criterion_group!(
    benches,
    bench_grids,
    bench_operator,
    bench_sequences,
    bench_bounds,
    bench_oracle
);
criterion_main!(benches);
