use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use equideform_core::node::{lift_first_order, verify_lift, CyclicNodeAction};
use equideform_core::oracle::{default_window, h1_dimension_bruteforce, OracleInput};
use equideform_core::smooth::{trace_zero_basis_construct, CyclicSmoothAction};
use equideform_core::{TruncatedSeries, VectorField};

fn series_ops(c: &mut Criterion) {
    let prec = 256;
    let a = CyclicSmoothAction::standard_action(3, 2, prec).unwrap();
    let s = a.generator().series().clone();
    c.bench_function("series_mul_256", |b| {
        b.iter(|| s.mul(&s).unwrap());
    });
    c.bench_function("series_compose_256", |b| {
        b.iter(|| s.compose(&s).unwrap());
    });
    c.bench_function("series_reversion_256", |b| {
        b.iter(|| s.reversion().unwrap());
    });
}

fn action_ops(c: &mut Criterion) {
    let prec = 128;
    c.bench_function("standard_action_p3_m2", |b| {
        b.iter(|| CyclicSmoothAction::standard_action(3, 2, prec).unwrap());
    });
    let a = CyclicSmoothAction::standard_action(3, 2, prec).unwrap();
    c.bench_function("ramification_profile_p3_m2", |b| {
        b.iter(|| a.ramification_profile().unwrap());
    });
    let phi = VectorField::new(TruncatedSeries::monomial(3, 1, 1, prec).unwrap());
    c.bench_function("trace_p3_m2", |b| {
        b.iter(|| a.trace(&phi).unwrap());
    });
    c.bench_function("trace_zero_witness_p3_m1", |b| {
        let a = CyclicSmoothAction::standard_action(3, 1, prec).unwrap();
        b.iter(|| trace_zero_basis_construct(&a).unwrap());
    });
}

fn cohomology_ops(c: &mut Criterion) {
    let (window, ambient) = default_window(6, 2, 3);
    let a = CyclicSmoothAction::standard_action(3, 2, ambient + 16).unwrap();
    c.bench_function("h1_bruteforce_smooth_p3_m2", |b| {
        b.iter(|| h1_dimension_bruteforce(&OracleInput::Smooth(&a), window, ambient).unwrap());
    });
    let node = CyclicNodeAction::standard_node_action(3, Some(2), Some(2), ambient + 16).unwrap();
    c.bench_function("h1_bruteforce_node_p3_m2", |b| {
        b.iter(|| h1_dimension_bruteforce(&OracleInput::Node(&node), window, ambient).unwrap());
    });
}

fn lifting_ops(c: &mut Criterion) {
    let a = CyclicNodeAction::standard_node_action(3, Some(2), Some(1), 80).unwrap();
    c.bench_function("lift_first_order_p3_m2_m1", |b| {
        b.iter(|| lift_first_order(&a).unwrap());
    });
    c.bench_function("verify_lift_p3_m2_m1", |b| {
        b.iter_batched(
            || lift_first_order(&a).unwrap(),
            |l| assert!(verify_lift(&a, &l).unwrap()),
            BatchSize::SmallInput,
        );
    });
}

criterion_group!(benches, series_ops, action_ops, cohomology_ops, lifting_ops);
criterion_main!(benches);
