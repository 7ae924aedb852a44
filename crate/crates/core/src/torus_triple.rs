//! The torus-equivariant triple: generators `Y_{j,q}`, the sphere relations,
//! the `F_0` commutator structure on `l2(Z)`, canonical elements of the
//! smooth algebra with their seminorms, and degree-zero extraction.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operators::{dirac_torus, IndexSet, SparseOperator, TruncatedSpace};
use crate::qcore::{q_factor_unchecked, qpow, QContext};

/// Rank `l` of the torus block `Sigma_l` carried by the leading coordinates
/// of `space` (the whole space for `Sigma_l`, the first `l+1` for `Sigma`).
fn torus_block(space: &TruncatedSpace) -> Result<usize> {
    space
        .index_set
        .torus_rank()
        .or_else(|| space.index_set.sigma_rank())
        .ok_or_else(|| Error::Dimension("space carries no torus block".into()))
}

/// `Y_{j,q}` acting on the torus block of `space` (tensored with the identity
/// on any remaining coordinates). `q = 0` uses `p_0` for `q^N`.
pub fn build_y(j: usize, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    let ell = torus_block(space)?;
    if j == 0 || j > ell + 1 {
        return Err(Error::Index(format!("generator index {j} outside 1..={}", ell + 1)));
    }
    let q = space.ctx.q;
    Ok(SparseOperator::from_column_fn(space, move |g| {
        let weight: i64 = g[..j - 1].iter().sum();
        let mut coeff = qpow(q, weight);
        if j <= ell {
            coeff *= q_factor_unchecked(g[j - 1] as u64 + 1, q);
        }
        let mut h = g.to_vec();
        h[j - 1] += 1;
        vec![(h, coeff)]
    }))
}

/// All generators `Y_{1,q}, ..., Y_{l+1,q}`.
pub fn build_generators(space: &Arc<TruncatedSpace>) -> Result<Vec<SparseOperator>> {
    let ell = torus_block(space)?;
    (1..=ell + 1).map(|j| build_y(j, space)).collect()
}

/// Largest defect of the four sphere relation families for `z_i = ops[i-1]`,
/// compressed to the margin-2 interior.
pub fn verify_sphere_relations(ops: &[SparseOperator], ctx: &QContext) -> Result<f64> {
    let first = ops
        .first()
        .ok_or_else(|| Error::Dimension("no generators supplied".into()))?;
    let space = first.space().clone();
    let q = ctx.q;
    let adj: Vec<SparseOperator> = ops.iter().map(|z| z.adjoint()).collect();
    let mut worst: f64 = 0.0;
    let mut record = |t: SparseOperator| worst = worst.max(t.compress(2).max_abs());
    let n = ops.len();
    for i in 0..n {
        for j in 0..n {
            if j < i {
                record(ops[i].compose(&ops[j])?.axpby(1.0, &ops[j].compose(&ops[i])?, -q)?);
            }
            if i != j {
                record(adj[i].compose(&ops[j])?.axpby(1.0, &ops[j].compose(&adj[i])?, -q)?);
            }
        }
        let mut defect = ops[i].compose(&adj[i])?.sub(&adj[i].compose(&ops[i])?)?;
        for k in i + 1..n {
            defect = defect.axpby(1.0, &ops[k].compose(&adj[k])?, 1.0 - q * q)?;
        }
        record(defect);
    }
    let mut total = SparseOperator::identity(&space).scale(-1.0);
    for i in 0..n {
        total = total.add(&ops[i].compose(&adj[i])?)?;
    }
    record(total);
    Ok(worst)
}

/// `z^n` on `l2(Z)`, with `z e_m = e_{m+1}` and negative powers meaning `z*`.
pub fn z_power(space: &Arc<TruncatedSpace>, n: i64) -> Result<SparseOperator> {
    if space.index_set != IndexSet::torus(0) {
        return Err(Error::Dimension("z acts on l2(Z) only".into()));
    }
    Ok(SparseOperator::from_column_fn(space, move |g| vec![(vec![g[0] + n], 1.0)]))
}

/// `[F_0, z^n]`, checked entrywise against `2 sum_{k=0}^{n-1} p_k z^n p_{k-n}`
/// and against the adjoint relation with `z^{-n}`.
pub fn f0_commutator_structure(n: i64, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    if 2 * n.abs() > space.cutoff() {
        return Err(Error::Domain(format!("|n| = {} exceeds cutoff / 2", n.abs())));
    }
    let f0 = dirac_torus(space)?.sign;
    let direct = SparseOperator::commutator(&f0, &z_power(space, n)?)?;
    let predicted = finite_rank_form(space, n);
    if direct.max_abs_diff(&predicted)? != 0.0 {
        return Err(Error::Internal(format!("[F_0, z^{n}] differs from its finite-rank form")));
    }
    let mirror = SparseOperator::commutator(&f0, &z_power(space, -n)?)?;
    if mirror.adjoint().add(&direct)?.max_abs() != 0.0 {
        return Err(Error::Internal(format!("[F_0, z^{}]* != -[F_0, z^{n}]", -n)));
    }
    Ok(direct)
}

fn finite_rank_form(space: &Arc<TruncatedSpace>, n: i64) -> SparseOperator {
    // for n < 0 the sum is the negative adjoint of the n > 0 case
    SparseOperator::from_column_fn(space, move |g| {
        let m = g[0];
        if n > 0 && m < 0 && m + n >= 0 {
            vec![(vec![m + n], 2.0)]
        } else if n < 0 && m >= 0 && m + n < 0 {
            vec![(vec![m + n], -2.0)]
        } else {
            Vec::new()
        }
    })
}

/// A block `alpha_1*^j (p_0 (x) a) alpha_1^k` of a canonical element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub j: usize,
    pub k: usize,
    pub a: CanonicalElement,
}

/// A truncated element of the smooth algebra of rank `ell`, in canonical
/// form: corner blocks plus shift coefficients `lambda_k` (powers of
/// `alpha_1` for `k >= 0`, of `alpha_1*` for `k < 0`). At rank 0 only the
/// Fourier coefficients are used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalElement {
    pub ell: usize,
    #[serde(default)]
    pub lambda: BTreeMap<i64, f64>,
    #[serde(default)]
    pub blocks: Vec<Block>,
}

impl CanonicalElement {
    pub fn zero(ell: usize) -> Self {
        CanonicalElement { ell, lambda: BTreeMap::new(), blocks: Vec::new() }
    }

    pub fn unit(ell: usize) -> Self {
        let mut a = Self::zero(ell);
        a.lambda.insert(0, 1.0);
        a
    }

    /// Checks ranks of all nested blocks.
    pub fn validate(&self) -> Result<()> {
        if self.ell == 0 && !self.blocks.is_empty() {
            return Err(Error::RankMismatch { expected: 1, got: 0 });
        }
        for b in &self.blocks {
            if b.a.ell + 1 != self.ell {
                return Err(Error::RankMismatch { expected: self.ell - 1, got: b.a.ell });
            }
            b.a.validate()?;
        }
        Ok(())
    }

    /// The adjoint, again in canonical form.
    pub fn adjoint(&self) -> Self {
        CanonicalElement {
            ell: self.ell,
            lambda: self.lambda.iter().map(|(&k, &v)| (-k, v)).collect(),
            blocks: self
                .blocks
                .iter()
                .map(|b| Block { j: b.k, k: b.j, a: b.a.adjoint() })
                .collect(),
        }
    }

    /// Image of `e_gamma` as a list of `(gamma', value)`.
    fn apply(&self, g: &[i64]) -> Vec<(Vec<i64>, f64)> {
        let mut out = Vec::new();
        if self.ell == 0 {
            for (&k, &v) in &self.lambda {
                out.push((vec![g[0] + k], v));
            }
            return out;
        }
        for (&k, &v) in &self.lambda {
            // alpha_1 lowers the first coordinate, alpha_1* raises it
            let h0 = g[0] - k;
            if h0 >= 0 {
                let mut h = g.to_vec();
                h[0] = h0;
                out.push((h, v));
            }
        }
        for b in &self.blocks {
            if g[0] == b.k as i64 {
                for (tail, v) in b.a.apply(&g[1..]) {
                    let mut h = Vec::with_capacity(g.len());
                    h.push(b.j as i64);
                    h.extend(tail);
                    out.push((h, v));
                }
            }
        }
        out
    }
}

/// Assembles the operator of a canonical element on `Sigma_l`.
pub fn canonical_to_operator(a: &CanonicalElement, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    a.validate()?;
    let rank = space
        .index_set
        .torus_rank()
        .ok_or_else(|| Error::Dimension("canonical elements act on Sigma_l".into()))?;
    if rank != a.ell {
        return Err(Error::RankMismatch { expected: rank, got: a.ell });
    }
    Ok(SparseOperator::from_column_fn(space, |g| a.apply(g)))
}

/// The recursive seminorm `||a||_m` of the truncated element.
pub fn canonical_seminorm(a: &CanonicalElement, m: u32) -> f64 {
    let shifts: f64 = a
        .lambda
        .iter()
        .map(|(&k, v)| (1.0 + k.unsigned_abs() as f64).powi(m as i32) * v.abs())
        .sum();
    if a.ell == 0 || a.blocks.is_empty() {
        return shifts;
    }
    let mut best: f64 = 0.0;
    for s in 0..=m {
        let inner: Vec<f64> = a.blocks.iter().map(|b| canonical_seminorm(&b.a, s)).collect();
        for r in 0..=m {
            let total: f64 = a
                .blocks
                .iter()
                .zip(&inner)
                .map(|(b, n)| (1.0 + (b.j + b.k) as f64).powi(r as i32) * n)
                .sum();
            best = best.max(total);
        }
    }
    best + shifts
}

/// Diagonal part of `T`: the only part seen by traces against functions of `|D|`.
pub fn degree_zero_part(t: &SparseOperator) -> SparseOperator {
    t.diagonal_part()
}

/// `sum_gamma <e_gamma, T e_gamma> |D|'(gamma)^{-z}` over the truncation.
pub fn weighted_partial_trace(t: &SparseOperator, d_abs: &SparseOperator, z: f64) -> f64 {
    t.diagonal_values()
        .iter()
        .zip(d_abs.diagonal_values())
        .map(|(v, d)| if d == 0.0 { *v } else { v * d.powf(-z) })
        .sum()
}

/// `p_0 (x) a` on `Sigma_{l}` for `a` acting on `Sigma_{l-1}`.
pub fn p0_tensor(a: &SparseOperator, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    let rank = space
        .index_set
        .torus_rank()
        .ok_or_else(|| Error::Dimension("p0_tensor targets Sigma_l".into()))?;
    if rank == 0 || a.space().index_set != IndexSet::torus(rank - 1) || a.space().cutoff() != space.cutoff() {
        return Err(Error::Dimension("inner operator must act on Sigma_{l-1} at the same cutoff".into()));
    }
    let inner = a.space().clone();
    Ok(SparseOperator::from_column_fn(space, |g| {
        if g[0] != 0 {
            return Vec::new();
        }
        let c = inner.index_of(&g[1..]).expect("tail lies in the inner box");
        a.column(c)
            .iter()
            .map(|&(r, v)| {
                let mut h = vec![0];
                h.extend(inner.gamma(r));
                (h, v)
            })
            .collect()
    }))
}
