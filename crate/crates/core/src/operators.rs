//! Truncated Hilbert spaces `l2(Gamma_A)` over boxes `|gamma_i| <= cutoff`,
//! column-compressed sparse operators, and the standard building blocks:
//! shifts, number operators, projections, Dirac operators, commutators,
//! norms and smoothing seminorms.
//!
//! Every builder drops images that leave the box, so identities are only
//! expected to hold after compression to an interior (see
//! [`InteriorProjector`]).

use serde::Serialize;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::par::{map_range, Execution};
use crate::qcore::QContext;
use crate::tableaux::{gamma_to_label, GammaIndex};

/// Kind of a lattice coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoordKind {
    /// `N`, truncated to `0..=cutoff`.
    Nat,
    /// `Z`, truncated to `-cutoff..=cutoff`.
    Int,
}

/// An ordered family of coordinates, a subset of `Sigma = {1, ..., 2l+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IndexSet {
    pub kinds: Vec<CoordKind>,
}

impl IndexSet {
    /// `Sigma`: `l` natural coordinates, one integer coordinate, `l` natural.
    pub fn sigma(ell: usize) -> Self {
        let mut kinds = vec![CoordKind::Nat; 2 * ell + 1];
        kinds[ell] = CoordKind::Int;
        IndexSet { kinds }
    }

    /// `Sigma_l = {1, ..., l+1}`: `l` natural coordinates then the integer one.
    /// For `l = 0` this is `Z` alone.
    pub fn torus(ell: usize) -> Self {
        let mut kinds = vec![CoordKind::Nat; ell + 1];
        kinds[ell] = CoordKind::Int;
        IndexSet { kinds }
    }

    /// `N^r`.
    pub fn naturals(r: usize) -> Self {
        IndexSet { kinds: vec![CoordKind::Nat; r] }
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    /// `Some(l)` when this is `Sigma_l`.
    pub fn torus_rank(&self) -> Option<usize> {
        let l = self.kinds.len().checked_sub(1)?;
        (*self == IndexSet::torus(l)).then_some(l)
    }

    /// `Some(l)` when this is the full `Sigma` of rank `l`.
    pub fn sigma_rank(&self) -> Option<usize> {
        if self.kinds.len().is_multiple_of(2) {
            return None;
        }
        let l = self.kinds.len() / 2;
        (*self == IndexSet::sigma(l)).then_some(l)
    }
}

/// The span of `{e_gamma : gamma in Gamma_A, |gamma_i| <= cutoff}`.
///
/// Basis order is lexicographic in `gamma` with the first coordinate most
/// significant; integer coordinates run from `-cutoff` to `cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSpace {
    pub ctx: QContext,
    pub index_set: IndexSet,
    radix: Vec<usize>,
    stride: Vec<usize>,
    dim: usize,
}

impl TruncatedSpace {
    pub fn new(ctx: QContext, index_set: IndexSet) -> Arc<Self> {
        let c = ctx.cutoff;
        let radix: Vec<usize> = index_set
            .kinds
            .iter()
            .map(|k| match k {
                CoordKind::Nat => c + 1,
                CoordKind::Int => 2 * c + 1,
            })
            .collect();
        let mut stride = vec![1; radix.len()];
        for i in (0..radix.len().saturating_sub(1)).rev() {
            stride[i] = stride[i + 1] * radix[i + 1];
        }
        let dim = radix.iter().product();
        Arc::new(TruncatedSpace { ctx, index_set, radix, stride, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> i64 {
        self.ctx.cutoff as i64
    }

    pub fn coords(&self) -> usize {
        self.radix.len()
    }

    fn offset(&self, i: usize) -> i64 {
        match self.index_set.kinds[i] {
            CoordKind::Nat => 0,
            CoordKind::Int => self.cutoff(),
        }
    }

    /// Basis position of `gamma`, or `None` outside the box or off-lattice.
    pub fn index_of(&self, gamma: &[i64]) -> Option<usize> {
        if gamma.len() != self.radix.len() {
            return None;
        }
        let mut idx = 0;
        for (i, &g) in gamma.iter().enumerate() {
            let v = g + self.offset(i);
            if v < 0 || v as usize >= self.radix[i] {
                return None;
            }
            idx += v as usize * self.stride[i];
        }
        Some(idx)
    }

    /// The lattice point at basis position `idx`.
    pub fn gamma(&self, idx: usize) -> Vec<i64> {
        (0..self.radix.len())
            .map(|i| ((idx / self.stride[i]) % self.radix[i]) as i64 - self.offset(i))
            .collect()
    }

    /// True when every `|gamma_i| <= cutoff - margin`.
    pub fn in_interior(&self, gamma: &[i64], margin: usize) -> bool {
        let bound = self.cutoff() - margin as i64;
        gamma.iter().all(|g| g.abs() <= bound)
    }

    pub fn same_as(&self, other: &TruncatedSpace) -> bool {
        self.index_set == other.index_set && self.ctx.cutoff == other.ctx.cutoff
    }
}

/// Compression to `{gamma : |gamma_i| <= cutoff - margin}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteriorProjector {
    pub margin: usize,
}

impl InteriorProjector {
    pub fn new(margin: usize) -> Self {
        InteriorProjector { margin }
    }

    /// `P T P`.
    pub fn compress(&self, t: &SparseOperator) -> SparseOperator {
        t.compress(self.margin)
    }

    /// `P` itself as a diagonal 0/1 operator.
    pub fn as_operator(&self, space: &Arc<TruncatedSpace>) -> SparseOperator {
        let m = self.margin;
        SparseOperator::diagonal(space, |g| if space.in_interior(g, m) { 1.0 } else { 0.0 })
    }
}

/// A finitely supported real matrix over a truncated basis, stored by
/// columns; each column lists `(row, value)` sorted by row with no zeros.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    space: Arc<TruncatedSpace>,
    cols: Vec<Vec<(usize, f64)>>,
}

fn merge_column(mut col: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    col.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|e| e.1 != 0.0);
    out
}

impl SparseOperator {
    pub fn space(&self) -> &Arc<TruncatedSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn zero(space: &Arc<TruncatedSpace>) -> Self {
        SparseOperator { space: space.clone(), cols: vec![Vec::new(); space.dim()] }
    }

    pub fn identity(space: &Arc<TruncatedSpace>) -> Self {
        Self::diagonal(space, |_| 1.0)
    }

    /// Diagonal operator `e_gamma -> f(gamma) e_gamma`.
    pub fn diagonal<F>(space: &Arc<TruncatedSpace>, f: F) -> Self
    where
        F: Fn(&[i64]) -> f64 + Sync + Send,
    {
        Self::from_column_fn(space, |g| vec![(g.to_vec(), f(g))])
    }

    /// Builds column `gamma` from the images `f(gamma) = [(gamma', value)]`;
    /// images outside the box are dropped and repeated rows summed.
    pub fn from_column_fn<F>(space: &Arc<TruncatedSpace>, f: F) -> Self
    where
        F: Fn(&[i64]) -> Vec<(Vec<i64>, f64)> + Sync + Send,
    {
        Self::from_column_fn_with(space, Execution::default(), f)
    }

    pub fn from_column_fn_with<F>(space: &Arc<TruncatedSpace>, exec: Execution, f: F) -> Self
    where
        F: Fn(&[i64]) -> Vec<(Vec<i64>, f64)> + Sync + Send,
    {
        let cols = map_range(space.dim(), exec, |c| {
            let g = space.gamma(c);
            let col = f(&g)
                .into_iter()
                .filter_map(|(h, v)| space.index_of(&h).map(|r| (r, v)))
                .collect();
            merge_column(col)
        });
        SparseOperator { space: space.clone(), cols }
    }

    /// Fallible variant of [`SparseOperator::from_column_fn`]; the first
    /// error in column order is returned.
    pub fn try_from_column_fn<F>(space: &Arc<TruncatedSpace>, exec: Execution, f: F) -> Result<Self>
    where
        F: Fn(&[i64]) -> Result<Vec<(Vec<i64>, f64)>> + Sync + Send,
    {
        let cols = map_range(space.dim(), exec, |c| {
            let g = space.gamma(c);
            f(&g).map(|imgs| {
                merge_column(
                    imgs.into_iter()
                        .filter_map(|(h, v)| space.index_of(&h).map(|r| (r, v)))
                        .collect(),
                )
            })
        });
        let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(SparseOperator { space: space.clone(), cols })
    }

    pub fn column(&self, c: usize) -> &[(usize, f64)] {
        &self.cols[c]
    }

    /// Entry `<e_row, T e_col>` by basis position.
    pub fn get_idx(&self, row: usize, col: usize) -> f64 {
        self.cols[col]
            .binary_search_by_key(&row, |e| e.0)
            .map(|p| self.cols[col][p].1)
            .unwrap_or(0.0)
    }

    /// Entry `<e_row, T e_col>` by lattice point; 0 outside the box.
    pub fn get(&self, row: &[i64], col: &[i64]) -> f64 {
        match (self.space.index_of(row), self.space.index_of(col)) {
            (Some(r), Some(c)) => self.get_idx(r, c),
            _ => 0.0,
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// `(row, col, value)` triples, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    fn check_same(&self, other: &SparseOperator) -> Result<()> {
        if self.space.same_as(&other.space) {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "operators live on different spaces (dims {} and {})",
                self.dim(),
                other.dim()
            )))
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.dim()];
        for (r, c, v) in self.entries() {
            cols[r].push((c, v));
        }
        // columns are visited in increasing order, so each row list is sorted
        SparseOperator { space: self.space.clone(), cols }
    }

    /// `self * other`.
    pub fn compose(&self, other: &SparseOperator) -> Result<Self> {
        self.compose_with(other, Execution::default())
    }

    pub fn compose_with(&self, other: &SparseOperator, exec: Execution) -> Result<Self> {
        self.check_same(other)?;
        let cols = map_range(self.dim(), exec, |c| {
            let mut acc = Vec::new();
            for &(mid, v) in &other.cols[c] {
                for &(r, w) in &self.cols[mid] {
                    acc.push((r, w * v));
                }
            }
            merge_column(acc)
        });
        Ok(SparseOperator { space: self.space.clone(), cols })
    }

    /// `a * self + b * other`.
    pub fn axpby(&self, a: f64, other: &SparseOperator, b: f64) -> Result<Self> {
        self.check_same(other)?;
        let cols = map_range(self.dim(), Execution::default(), |c| {
            let mut acc: Vec<(usize, f64)> = self.cols[c].iter().map(|&(r, v)| (r, a * v)).collect();
            acc.extend(other.cols[c].iter().map(|&(r, v)| (r, b * v)));
            merge_column(acc)
        });
        Ok(SparseOperator { space: self.space.clone(), cols })
    }

    pub fn add(&self, other: &SparseOperator) -> Result<Self> {
        self.axpby(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<Self> {
        self.axpby(1.0, other, -1.0)
    }

    pub fn scale(&self, a: f64) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|col| merge_column(col.iter().map(|&(r, v)| (r, a * v)).collect()))
            .collect();
        SparseOperator { space: self.space.clone(), cols }
    }

    /// Keeps entries whose row and column both lie in the interior.
    pub fn compress(&self, margin: usize) -> Self {
        let inside: Vec<bool> = (0..self.dim())
            .map(|i| self.space.in_interior(&self.space.gamma(i), margin))
            .collect();
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(c, col)| {
                if inside[c] {
                    col.iter().copied().filter(|e| inside[e.0]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        SparseOperator { space: self.space.clone(), cols }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().fold(0.0, |m, (_, _, v)| m.max(v.abs()))
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &SparseOperator) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn is_diagonal(&self) -> bool {
        self.cols.iter().enumerate().all(|(c, col)| col.iter().all(|e| e.0 == c))
    }

    /// Diagonal entries by basis position.
    pub fn diagonal_values(&self) -> Vec<f64> {
        (0..self.dim()).map(|c| self.get_idx(c, c)).collect()
    }

    /// Zeroes every off-diagonal entry.
    pub fn diagonal_part(&self) -> Self {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(c, col)| col.iter().copied().filter(|e| e.0 == c).collect())
            .collect();
        SparseOperator { space: self.space.clone(), cols }
    }

    /// `T x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for (c, col) in self.cols.iter().enumerate() {
            let xc = x[c];
            if xc != 0.0 {
                for &(r, v) in col {
                    y[r] += v * xc;
                }
            }
        }
        y
    }

    /// The common degree `gamma' - gamma` of all entries, if there is one.
    /// `Ok(None)` for the zero operator, `Err` when entries disagree.
    pub fn homogeneous_degree(&self) -> Result<Option<Vec<i64>>> {
        let mut degree: Option<Vec<i64>> = None;
        for (r, c, _) in self.entries() {
            let (gr, gc) = (self.space.gamma(r), self.space.gamma(c));
            let d: Vec<i64> = gr.iter().zip(&gc).map(|(a, b)| a - b).collect();
            match &degree {
                None => degree = Some(d),
                Some(prev) if *prev != d => {
                    return Err(Error::Internal(format!(
                        "entry at {gr:?} <- {gc:?} has degree {d:?}, expected {prev:?}"
                    )))
                }
                _ => {}
            }
        }
        Ok(degree)
    }

    /// True when every column and every row holds at most one entry.
    fn is_monomial(&self) -> bool {
        let mut seen = vec![false; self.dim()];
        for col in &self.cols {
            if col.len() > 1 {
                return false;
            }
            if let Some(&(r, _)) = col.first() {
                if seen[r] {
                    return false;
                }
                seen[r] = true;
            }
        }
        true
    }

    /// Operator norm: exact for monomial (weighted permutation) matrices,
    /// which include diagonals; otherwise power iteration on `T^T T`
    /// converged to relative `1e-10` in the eigenvalue.
    pub fn op_norm(&self) -> f64 {
        if self.is_monomial() {
            return self.max_abs();
        }
        let adj = self.adjoint();
        let n = self.dim();
        // deterministic start with no special alignment
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).fract()).collect();
        normalize(&mut x);
        let mut lambda = 0.0;
        for _ in 0..20_000 {
            let y = adj.apply(&self.apply(&x));
            let next = dot(&x, &y);
            let norm = dot(&y, &y).sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            x = y.into_iter().map(|v| v / norm).collect();
            if (next - lambda).abs() <= 1e-12 * next.abs() {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda.max(0.0).sqrt()
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(a: &SparseOperator, b: &SparseOperator) -> Result<Self> {
        a.compose(b)?.sub(&b.compose(a)?)
    }

    /// Column-major triples with lattice points, for export.
    pub fn triplets(&self) -> Vec<(Vec<i64>, Vec<i64>, f64)> {
        self.entries()
            .map(|(r, c, v)| (self.space.gamma(r), self.space.gamma(c), v))
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let n = dot(x, x).sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

fn check_coordinate(space: &TruncatedSpace, i: usize) -> Result<()> {
    if i == 0 || i > space.coords() {
        return Err(Error::Index(format!(
            "coordinate {i} outside 1..={}",
            space.coords()
        )));
    }
    Ok(())
}

/// The left shift `S e_n = e_{n-1}` on coordinate `i` (1-based).
pub fn shift_op(space: &Arc<TruncatedSpace>, i: usize) -> Result<SparseOperator> {
    check_coordinate(space, i)?;
    let nat = space.index_set.kinds[i - 1] == CoordKind::Nat;
    Ok(SparseOperator::from_column_fn(space, |g| {
        if nat && g[i - 1] == 0 {
            return Vec::new();
        }
        let mut h = g.to_vec();
        h[i - 1] -= 1;
        vec![(h, 1.0)]
    }))
}

/// The number operator `N e_n = n e_n` on coordinate `i`.
pub fn number_op(space: &Arc<TruncatedSpace>, i: usize) -> Result<SparseOperator> {
    check_coordinate(space, i)?;
    Ok(SparseOperator::diagonal(space, |g| g[i - 1] as f64))
}

/// The projection `p_k` onto `e_k` in coordinate `i`.
pub fn projection_op(space: &Arc<TruncatedSpace>, i: usize, k: i64) -> Result<SparseOperator> {
    check_coordinate(space, i)?;
    let c = space.cutoff();
    let lo = match space.index_set.kinds[i - 1] {
        CoordKind::Nat => 0,
        CoordKind::Int => -c,
    };
    if k < lo || k > c {
        return Err(Error::Index(format!("p_{k} outside the truncation")));
    }
    Ok(SparseOperator::diagonal(space, |g| if g[i - 1] == k { 1.0 } else { 0.0 }))
}

/// A Dirac operator with its modulus and sign.
#[derive(Debug, Clone)]
pub struct DiracTriple {
    pub d: SparseOperator,
    pub abs: SparseOperator,
    pub sign: SparseOperator,
}

impl DiracTriple {
    fn from_eigenvalue<F>(space: &Arc<TruncatedSpace>, f: F) -> Self
    where
        F: Fn(&[i64]) -> i64 + Sync + Send,
    {
        DiracTriple {
            d: SparseOperator::diagonal(space, |g| f(g) as f64),
            abs: SparseOperator::diagonal(space, |g| f(g).abs() as f64),
            sign: SparseOperator::diagonal(space, |g| if f(g) < 0 { -1.0 } else { 1.0 }),
        }
    }
}

/// Eigenvalue of `D_l`: `+-(gamma_1 + ... + gamma_l + |gamma_{l+1}|)`, negative
/// iff `gamma_{l+1} < 0`.
pub fn torus_eigenvalue(gamma: &[i64]) -> i64 {
    let l = gamma.len() - 1;
    let m = gamma[..l].iter().sum::<i64>() + gamma[l].abs();
    if gamma[l] < 0 {
        -m
    } else {
        m
    }
}

/// `(D_l, |D_l|, F_l)` on `l2(Gamma_{Sigma_l})`.
pub fn dirac_torus(space: &Arc<TruncatedSpace>) -> Result<DiracTriple> {
    if space.index_set.torus_rank().is_none() {
        return Err(Error::Dimension("dirac_torus needs the index set Sigma_l".into()));
    }
    Ok(DiracTriple::from_eigenvalue(space, torus_eigenvalue))
}

/// Eigenvalue of the equivariant Dirac operator read off the label:
/// `k` when `n = 0`, `-(n + k)` otherwise.
pub fn equivariant_eigenvalue_label(ell: usize, gamma: &[i64]) -> Result<i64> {
    let lab = gamma_to_label(&GammaIndex::new(ell, gamma.to_vec())?)?;
    Ok(if lab.n == 0 { lab.k } else { -(lab.n + lab.k) })
}

/// The same eigenvalue from `D_l (x) P - |D_l| (x) (I - P) - I (x) N~`, where `P`
/// projects the last `l` coordinates to zero and `N~` sums them.
pub fn equivariant_eigenvalue_decomposed(ell: usize, gamma: &[i64]) -> i64 {
    let head = &gamma[..=ell];
    let tail: i64 = gamma[ell + 1..].iter().sum();
    let d = torus_eigenvalue(head);
    if tail == 0 {
        d
    } else {
        -d.abs() - tail
    }
}

/// `(D_eq, |D_eq|, F_eq)` on `l2(Gamma_Sigma)`, checked to agree between the
/// label form and the decomposed form on every basis vector.
pub fn dirac_equivariant(space: &Arc<TruncatedSpace>) -> Result<DiracTriple> {
    let ell = space
        .index_set
        .sigma_rank()
        .ok_or_else(|| Error::Dimension("dirac_equivariant needs the full index set Sigma".into()))?;
    if ell < 2 {
        return Err(Error::UnsupportedRank(ell));
    }
    for c in 0..space.dim() {
        let g = space.gamma(c);
        let a = equivariant_eigenvalue_label(ell, &g)?;
        let b = equivariant_eigenvalue_decomposed(ell, &g);
        if a != b {
            return Err(Error::Internal(format!(
                "D_eq at {g:?}: label form {a}, decomposed form {b}"
            )));
        }
    }
    Ok(DiracTriple::from_eigenvalue(space, move |g| {
        equivariant_eigenvalue_decomposed(ell, g)
    }))
}

/// `|| |D|'^r T |D|'^s ||` on the truncation, where `|D|'` replaces the
/// eigenvalue 0 by 1. A truncated seminorm: a lower bound for the full one.
pub fn smoothing_seminorm(t: &SparseOperator, r: u32, s: u32, d_abs: &SparseOperator) -> Result<f64> {
    t.check_same(d_abs)?;
    if !d_abs.is_diagonal() {
        return Err(Error::Domain("|D| must be diagonal".into()));
    }
    let w: Vec<f64> = d_abs
        .diagonal_values()
        .into_iter()
        .map(|v| if v == 0.0 { 1.0 } else { v.abs() })
        .collect();
    let cols = t
        .cols
        .iter()
        .enumerate()
        .map(|(c, col)| {
            col.iter()
                .map(|&(row, v)| (row, w[row].powi(r as i32) * v * w[c].powi(s as i32)))
                .collect()
        })
        .collect();
    Ok(SparseOperator { space: t.space.clone(), cols }.op_norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(set: IndexSet, cutoff: usize) -> Arc<TruncatedSpace> {
        TruncatedSpace::new(QContext::new(0.5, 2, cutoff).unwrap(), set)
    }

    #[test]
    fn space_indexing_roundtrip() {
        let sp = space(IndexSet::sigma(2), 3);
        assert_eq!(sp.dim(), 4 * 4 * 7 * 4 * 4);
        for idx in [0, 17, sp.dim() - 1] {
            assert_eq!(sp.index_of(&sp.gamma(idx)), Some(idx));
        }
        assert_eq!(sp.gamma(0), vec![0, 0, -3, 0, 0]);
        assert_eq!(sp.index_of(&[0, 0, 4, 0, 0]), None);
        assert_eq!(sp.index_of(&[-1, 0, 0, 0, 0]), None);
    }

    #[test]
    fn shift_examples() {
        let sp = space(IndexSet::naturals(1), 6);
        let s = shift_op(&sp, 1).unwrap();
        assert_eq!(s.column(sp.index_of(&[0]).unwrap()).len(), 0);
        let sts = s.adjoint().compose(&s).unwrap();
        let p0 = projection_op(&sp, 1, 0).unwrap();
        let expected = SparseOperator::identity(&sp).sub(&p0).unwrap();
        assert_eq!(sts.compress(1).max_abs_diff(&expected.compress(1)).unwrap(), 0.0);
        let n = number_op(&sp, 1).unwrap();
        assert_eq!(n.get(&[3], &[3]), 3.0);
        let comm = SparseOperator::commutator(&n, &s).unwrap();
        assert_eq!(comm.add(&s).unwrap().compress(1).max_abs(), 0.0);
    }

    #[test]
    fn norms() {
        let sp = space(IndexSet::naturals(2), 4);
        let p0 = projection_op(&sp, 1, 0).unwrap();
        assert_eq!(p0.op_norm(), 1.0);
        // [[1,1],[0,1]] block has norm (1 + sqrt 5) / 2
        let t = SparseOperator::from_column_fn(&sp, |g| match g {
            [0, 0] => vec![(vec![0, 0], 1.0)],
            [0, 1] => vec![(vec![0, 0], 1.0), (vec![0, 1], 1.0)],
            _ => Vec::new(),
        });
        assert!((t.op_norm() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-6);
    }

    #[test]
    fn torus_dirac_examples() {
        let sp1 = TruncatedSpace::new(QContext::new(0.5, 1, 4).unwrap(), IndexSet::torus(1));
        let d = dirac_torus(&sp1).unwrap();
        assert_eq!(d.d.get(&[2, -3], &[2, -3]), -5.0);
        assert_eq!(d.sign.get(&[0, 0], &[0, 0]), 1.0);
        let sp2 = space(IndexSet::torus(2), 6);
        let d = dirac_torus(&sp2).unwrap();
        assert_eq!(d.d.get(&[1, 1, 4], &[1, 1, 4]), 6.0);
        let prod = d.sign.compose(&d.abs).unwrap();
        assert_eq!(prod.max_abs_diff(&d.d).unwrap(), 0.0);
    }

    #[test]
    fn equivariant_dirac_examples() {
        let sp = space(IndexSet::sigma(2), 2);
        let d = dirac_equivariant(&sp).unwrap();
        assert_eq!(d.d.get(&[0; 5], &[0; 5]), 0.0);
        assert_eq!(d.d.get(&[1, 0, 0, 0, 0], &[1, 0, 0, 0, 0]), 1.0);
        assert_eq!(d.d.get(&[0, 0, -1, 0, 0], &[0, 0, -1, 0, 0]), -1.0);
    }

    #[test]
    fn seminorm_examples() {
        let sp = space(IndexSet::naturals(2), 4);
        let abs = SparseOperator::diagonal(&sp, |g| (g[0] + g[1]) as f64);
        let p = SparseOperator::diagonal(&sp, |g| if g == [1, 2] { 1.0 } else { 0.0 });
        assert!((smoothing_seminorm(&p, 2, 1, &abs).unwrap() - 27.0).abs() < 1e-12);
        let z = SparseOperator::zero(&sp);
        assert_eq!(smoothing_seminorm(&z, 3, 3, &abs).unwrap(), 0.0);
    }

    #[test]
    fn homogeneity() {
        let sp = space(IndexSet::torus(1), 3);
        let s = shift_op(&sp, 2).unwrap();
        assert_eq!(s.homogeneous_degree().unwrap(), Some(vec![0, -1]));
    }
}
