use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use swc_core::conic::{optimize_tau, TauScheme};
use swc_core::linalg::partial_transpose;
use swc_core::swc::{contract, effective_tau_moment, three_copy_witness};
use swc_core::zoo::{bell, isotropic, random_density, random_hermitian, seeded_rng};

fn moments(c: &mut Criterion) {
    let factors = three_copy_witness();
    let mut group = c.benchmark_group("three_copy_moment");
    for d in [3usize, 6] {
        let rho = isotropic(0.5, d).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &rho, |b, rho| {
            b.iter(|| effective_tau_moment(&factors, &[black_box(rho), rho]).unwrap())
        });
    }
    group.finish();
}

fn dense_contraction(c: &mut Criterion) {
    let recipe = three_copy_witness().to_recipe(3, 3).unwrap();
    let tau = bell(3).unwrap();
    c.bench_function("contract_three_copy_d3", |b| b.iter(|| contract(&recipe, black_box(&tau)).unwrap()));
}

fn transpose(c: &mut Criterion) {
    let mut rng = seeded_rng(1);
    let a = random_hermitian(&[3, 3, 3, 3], false, &mut rng).unwrap();
    c.bench_function("partial_transpose_4x3", |b| b.iter(|| partial_transpose(black_box(&a), &[1, 3]).unwrap()));
}

fn small_sdp(c: &mut Criterion) {
    let mut rng = seeded_rng(2);
    let rho = random_density(&[3, 3], &mut rng).unwrap();
    let e = effective_tau_moment(&three_copy_witness(), &[&rho, &rho]).unwrap();
    let scheme = TauScheme::Decomposable(vec![vec![0], vec![1]]);
    c.bench_function("decomposable_tau_3x3", |b| b.iter(|| optimize_tau(black_box(&e), &scheme).unwrap()));
}

criterion_group!(benches, moments, dense_contraction, transpose, small_sdp);
criterion_main!(benches);
