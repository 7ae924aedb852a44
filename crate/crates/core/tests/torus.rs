use std::sync::Arc;

use qsphere::operators::{dirac_torus, projection_op, shift_op, smoothing_seminorm, IndexSet, SparseOperator, TruncatedSpace};
use qsphere::torus_triple::{
    build_generators, build_y, canonical_seminorm, canonical_to_operator, f0_commutator_structure, p0_tensor, Block,
    CanonicalElement,
};
use qsphere::QContext;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn torus(q: f64, ell: usize, cutoff: usize) -> Arc<TruncatedSpace> {
    TruncatedSpace::new(QContext::new(q, ell.max(1), cutoff).unwrap(), IndexSet::torus(ell))
}

#[test]
fn generator_relations_at_cutoff_twelve() {
    for ell in 1..=2 {
        for q in [0.0, 0.3, 0.5, 0.8] {
            let sp = torus(q, ell, 12);
            let dev = qsphere::torus_triple::verify_sphere_relations(&build_generators(&sp).unwrap(), &sp.ctx).unwrap();
            assert!(dev <= 1e-12, "ell = {ell}, q = {q}: {dev}");
        }
    }
}

#[test]
fn generators_are_homogeneous() {
    let sp = torus(0.4, 2, 5);
    for j in 1..=3 {
        let mut expected = vec![0; 3];
        expected[j - 1] = 1;
        assert_eq!(build_y(j, &sp).unwrap().homogeneous_degree().unwrap(), Some(expected));
    }
    let d = dirac_torus(&sp).unwrap();
    assert_eq!(d.d.homogeneous_degree().unwrap(), Some(vec![0; 3]));
}

#[test]
fn y1_polar_part_is_the_q0_generator() {
    let q = 0.6;
    let sp = torus(q, 1, 10);
    let y1 = build_y(1, &sp).unwrap();
    let modulus = y1.adjoint().compose(&y1).unwrap();
    let inv_abs = SparseOperator::diagonal(&sp, |g| {
        let v = 1.0 - q.powi(2 * (g[0] as i32 + 1));
        1.0 / v.sqrt()
    });
    assert!(modulus.compress(1).is_diagonal());
    let polar = y1.compose(&inv_abs).unwrap();
    let raise = shift_op(&sp, 1).unwrap().adjoint();
    assert!(polar.compress(1).max_abs_diff(&raise.compress(1)).unwrap() <= 1e-12);

    // q^N (x) I = sum_n q^n Y_{1,0}^n (p_0 (x) I) Y_{1,0}^{*n}
    let p0 = projection_op(&sp, 1, 0).unwrap();
    let mut series = SparseOperator::zero(&sp);
    let mut up = SparseOperator::identity(&sp);
    for n in 0..=sp.cutoff() {
        let term = up.compose(&p0).unwrap().compose(&up.adjoint()).unwrap();
        series = series.axpby(1.0, &term, q.powi(n as i32)).unwrap();
        up = raise.compose(&up).unwrap();
    }
    let qn = SparseOperator::diagonal(&sp, |g| q.powi(g[0] as i32));
    assert!(series.max_abs_diff(&qn).unwrap() <= 1e-12);
}

#[test]
fn higher_generators_unfold_along_the_first_coordinate() {
    let q = 0.45;
    let c = 7;
    let outer = torus(q, 2, c);
    let inner = torus(q, 1, c);
    let alpha = shift_op(&outer, 1).unwrap();
    for i in 2..=3 {
        let core = p0_tensor(&build_y(i - 1, &inner).unwrap(), &outer).unwrap();
        let mut series = SparseOperator::zero(&outer);
        let mut down = SparseOperator::identity(&outer);
        for n in 0..=c {
            let term = down.adjoint().compose(&core).unwrap().compose(&down).unwrap();
            series = series.axpby(1.0, &term, q.powi(n as i32)).unwrap();
            down = alpha.compose(&down).unwrap();
        }
        let y = build_y(i, &outer).unwrap();
        assert!(series.compress(1).max_abs_diff(&y.compress(1)).unwrap() <= 1e-12, "i = {i}");
    }
}

#[test]
fn derivation_of_alpha1() {
    for ell in 1..=2 {
        let sp = torus(0.5, ell, 6);
        let abs = dirac_torus(&sp).unwrap().abs;
        let alpha = shift_op(&sp, 1).unwrap();
        let delta = SparseOperator::commutator(&abs, &alpha).unwrap();
        assert_eq!(delta.add(&alpha).unwrap().compress(1).max_abs(), 0.0);
    }
}

#[test]
fn dirac_commutators_are_bounded_uniformly() {
    let q = 0.3;
    for ell in 1..=2 {
        for j in 1..=ell + 1 {
            let norms: Vec<f64> = [8, 12, 16]
                .iter()
                .map(|&c| {
                    let sp = torus(q, ell, c);
                    let d = dirac_torus(&sp).unwrap().d;
                    SparseOperator::commutator(&d, &build_y(j, &sp).unwrap()).unwrap().op_norm()
                })
                .collect();
            for w in norms.windows(2) {
                assert!((w[0] - w[1]).abs() < 1e-6, "ell = {ell}, j = {j}: {norms:?}");
            }
        }
    }
}

#[test]
fn rank_zero_commutators() {
    let sp = torus(0.5, 0, 12);
    let abs = dirac_torus(&sp).unwrap().abs;
    for n in -6i64..=6 {
        let c = f0_commutator_structure(n, &sp).unwrap();
        assert_eq!(c.nnz(), n.unsigned_abs() as usize);
        for r in 0..=4u32 {
            for s in 0..=4 - r {
                let bound = 2.0 * (1.0 + n.abs() as f64).powi((r + s + 1) as i32);
                let v = smoothing_seminorm(&c, r, s, &abs).unwrap();
                assert!(v <= bound, "n = {n}, r = {r}, s = {s}: {v} > {bound}");
            }
        }
    }
}

fn random_element(rng: &mut ChaCha8Rng, ell: usize) -> CanonicalElement {
    let mut a = CanonicalElement::zero(ell);
    for _ in 0..rng.gen_range(0..4) {
        a.lambda.insert(rng.gen_range(-3..=3), rng.gen_range(-1.0..1.0));
    }
    if ell > 0 {
        for _ in 0..rng.gen_range(0..3) {
            let inner = random_element(rng, ell - 1);
            a.blocks.push(Block { j: rng.gen_range(0..3), k: rng.gen_range(0..3), a: inner });
        }
    }
    a
}

#[test]
fn seminorm_contract_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for ell in 0..=2 {
        let sp = torus(0.5, ell, 6);
        for _ in 0..50 {
            let a = random_element(&mut rng, ell);
            let norms: Vec<f64> = (0..=4).map(|m| canonical_seminorm(&a, m)).collect();
            let op = canonical_to_operator(&a, &sp).unwrap();
            assert!(op.op_norm() <= norms[0] * (1.0 + 1e-9) + 1e-12, "{a:?}");
            for m in 0..=4 {
                let adj = canonical_seminorm(&a.adjoint(), m);
                assert!((adj - norms[m as usize]).abs() <= 1e-12 * norms[m as usize].max(1.0));
            }
            assert!(norms.windows(2).all(|w| w[0] <= w[1]));
            let adj_op = canonical_to_operator(&a.adjoint(), &sp).unwrap();
            assert!(adj_op.compress(3).max_abs_diff(&op.adjoint().compress(3)).unwrap() <= 1e-15);
        }
    }
}
