use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qsphere::cg::{cg_direct, cg_factorized};
use qsphere::equivariant_triple::build_z_star_cg_with;
use qsphere::operators::{IndexSet, TruncatedSpace};
use qsphere::par::map_slice;
use qsphere::tableaux::{apply_move, enumerate_moves, enumerate_patterns, lambda_nk};
use qsphere::{Execution, QContext};

const POLICIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn z_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("z_star_assembly");
    group.sample_size(10);
    for cutoff in [4usize, 6] {
        let sp = TruncatedSpace::new(QContext::new(0.5, 2, cutoff).unwrap(), IndexSet::sigma(2));
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, cutoff), &cutoff, |b, _| {
                b.iter(|| build_z_star_cg_with(black_box(3), &sp, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn compose(c: &mut Criterion) {
    let mut group = c.benchmark_group("compose_z_zstar");
    group.sample_size(10);
    let sp = TruncatedSpace::new(QContext::new(0.5, 2, 6).unwrap(), IndexSet::sigma(2));
    let zs = build_z_star_cg_with(2, &sp, Execution::Parallel).unwrap();
    let z = zs.adjoint();
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| b.iter(|| z.compose_with(black_box(&zs), exec).unwrap()));
    }
    group.finish();
}

fn cg_exhaustive(c: &mut Criterion) {
    let mut group = c.benchmark_group("cg_dual_form_sweep");
    group.sample_size(10);
    let ell = 3;
    let ctx = QContext::new(0.7, ell, 4).unwrap();
    let mut patterns = Vec::new();
    for n in 0..=3 {
        for k in 0..=3 {
            patterns.extend(enumerate_patterns(&lambda_nk(ell, n, k)).unwrap());
        }
    }
    let moves: Vec<_> = (1..=ell + 1).flat_map(|j| enumerate_moves(j, ell).unwrap()).collect();
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| {
            b.iter(|| {
                let worst = map_slice(&patterns, exec, |r| {
                    let mut w: f64 = 0.0;
                    for m in &moves {
                        if apply_move(r, m).unwrap().is_some() {
                            let j = m.level();
                            let d = cg_direct(j, r, m, &ctx).unwrap();
                            w = w.max((d - cg_factorized(j, r, m, &ctx).unwrap().value).abs());
                        }
                    }
                    w
                });
                black_box(worst.into_iter().fold(0.0, f64::max))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, z_assembly, compose, cg_exhaustive);
criterion_main!(benches);
