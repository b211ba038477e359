use criterion::{black_box, criterion_group, criterion_main, Criterion};

use symcl_bench::{ccl_workload, ls_workload};
use symcl_core::rewrite::{check_sn, explore, normalize, CclSystem, Limits, LsSystem, Strategy};
use symcl_core::translate::{phi, psi};

fn reduction(c: &mut Criterion) {
    let (cctx, ct) = ccl_workload();
    let csys = CclSystem::new(cctx.clone());
    let (lctx, lt) = ls_workload();
    let lsys = LsSystem::new(lctx.clone());

    c.bench_function("ccl normalize lo", |b| {
        b.iter(|| normalize(&csys, black_box(&ct), Strategy::LeftmostOutermost, 1000).unwrap())
    });
    c.bench_function("ccl explore", |b| {
        b.iter(|| explore(&csys, black_box(&ct), Limits::default()))
    });
    c.bench_function("ls explore", |b| {
        b.iter(|| explore(&lsys, black_box(&lt), Limits::default()))
    });
    c.bench_function("ls check_sn", |b| b.iter(|| check_sn(&lsys, black_box(&lt), 100_000)));
    c.bench_function("phi", |b| b.iter(|| phi(&lctx, black_box(&lt)).unwrap()));
    c.bench_function("psi", |b| b.iter(|| psi(&cctx, black_box(&ct)).unwrap()));
}

criterion_group!(benches, reduction);
criterion_main!(benches);
