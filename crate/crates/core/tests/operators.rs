use std::sync::Arc;

use proptest::prelude::*;
use qsphere::equivariant_triple::build_z_star_cg_with;
use qsphere::operators::{IndexSet, SparseOperator, TruncatedSpace};
use qsphere::{Execution, QContext};

fn space(set: IndexSet, cutoff: usize) -> Arc<TruncatedSpace> {
    TruncatedSpace::new(QContext::new(0.5, 2, cutoff).unwrap(), set)
}

#[test]
fn assembly_is_independent_of_execution_policy() {
    let sp = space(IndexSet::sigma(2), 4);
    for j in 1..=3 {
        let a = build_z_star_cg_with(j, &sp, Execution::Sequential).unwrap();
        let b = build_z_star_cg_with(j, &sp, Execution::Parallel).unwrap();
        assert_eq!(a.triplets(), b.triplets());
        let ca = a.compose_with(&a.adjoint(), Execution::Sequential).unwrap();
        let cb = b.compose_with(&b.adjoint(), Execution::Parallel).unwrap();
        assert_eq!(ca.triplets(), cb.triplets());
    }
}

fn random_operator(sp: &Arc<TruncatedSpace>, seeds: &[(usize, usize, i32)]) -> SparseOperator {
    let dim = sp.dim();
    let seeds = seeds.to_vec();
    SparseOperator::from_column_fn(sp, move |g| {
        let c = sp_index(g);
        seeds
            .iter()
            .filter(|s| s.1 % dim == c)
            .map(|s| (decode(s.0 % dim), s.2 as f64))
            .collect()
    })
}

// torus(1) at cutoff 3: N x Z with radix (4, 7)
fn sp_index(g: &[i64]) -> usize {
    (g[0] * 7 + g[1] + 3) as usize
}

fn decode(idx: usize) -> Vec<i64> {
    vec![(idx / 7) as i64, (idx % 7) as i64 - 3]
}

proptest! {
    #[test]
    fn adjoint_reverses_products(
        a in prop::collection::vec((0usize..28, 0usize..28, -3i32..=3), 0..20),
        b in prop::collection::vec((0usize..28, 0usize..28, -3i32..=3), 0..20),
    ) {
        let sp = space(IndexSet::torus(1), 3);
        prop_assert_eq!(sp.dim(), 28);
        let x = random_operator(&sp, &a);
        let y = random_operator(&sp, &b);
        let lhs = x.compose(&y).unwrap().adjoint();
        let rhs = y.adjoint().compose(&x.adjoint()).unwrap();
        prop_assert_eq!(lhs.max_abs_diff(&rhs).unwrap(), 0.0);
        prop_assert_eq!(x.adjoint().adjoint().triplets(), x.triplets());
        let norm = x.op_norm();
        prop_assert!(norm + 1e-9 >= x.max_abs());
        let fro: f64 = x.entries().map(|e| e.2 * e.2).sum::<f64>().sqrt();
        prop_assert!(norm <= fro + 1e-9);
    }
}
