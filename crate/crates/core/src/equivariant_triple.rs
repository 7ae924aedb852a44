//! The `SU_q(l+1)`-equivariant triple realised on `l2(Gamma_Sigma)` through the
//! label bijection: generators `Z_{j,q}` assembled from Clebsch-Gordan data,
//! the `q = 0` operators, the sign unitary `U`, the `X_j` operators and the
//! `S`/`T` factorisation, plus the decay diagnostics behind the
//! "equal modulo smoothing operators" statements.
//!
//! Operators are indexed by `gamma`; the vector at `gamma` is the sphere basis
//! vector `e_{r^{n,k}, s}` with `(n, k, s) = gamma_to_label(gamma)`. Every
//! builder needs `l >= 2`.

use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cg::{cg_direct, cg_factorized, kappa_exact, kappa_n01, kappa_n11};
use crate::error::{Error, Result};
use crate::operators::{SparseOperator, TruncatedSpace};
use crate::par::Execution;
use crate::qcore::{fit_decay_exponent, q_factor_unchecked, qpow, qpow_rational, Rational};
use crate::tableaux::{
    apply_move, eta, gamma_to_label, label_to_gamma, moves_minus, moves_plus, GTTableau, GammaIndex,
    Move, SphereBasisLabel,
};
use crate::torus_triple::build_y;

/// Entries at or below this magnitude are treated as rounding residue by
/// [`decay_report`].
pub const NOISE_FLOOR: f64 = 1e-13;

fn sigma_rank(space: &TruncatedSpace) -> Result<usize> {
    let ell = space
        .index_set
        .sigma_rank()
        .ok_or_else(|| Error::Dimension("equivariant operators act on the full Sigma".into()))?;
    if ell < 2 {
        return Err(Error::UnsupportedRank(ell));
    }
    Ok(ell)
}

fn check_level(j: usize, ell: usize) -> Result<()> {
    if j == 0 || j > ell + 1 {
        return Err(Error::Index(format!("generator index {j} outside 1..={}", ell + 1)));
    }
    Ok(())
}

fn check_positive_q(space: &TruncatedSpace) -> Result<()> {
    let q = space.ctx.q;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("CG assembly needs q in (0,1), got {q}")));
    }
    Ok(())
}

fn label(ell: usize, g: &[i64]) -> Result<SphereBasisLabel> {
    gamma_to_label(&GammaIndex::new(ell, g.to_vec())?)
}

fn gamma_of(n: i64, k: i64, s: GTTableau) -> Result<Vec<i64>> {
    Ok(label_to_gamma(&SphereBasisLabel { n, k, s })?.gamma)
}

fn qf(x: i64, q: f64) -> Result<f64> {
    if x < 0 {
        return Err(Error::Internal(format!("Q({x}) with negative argument")));
    }
    Ok(q_factor_unchecked(x as u64, q))
}

/// Where an operator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    CgBuilt,
    Q0Direct,
    ModelYTensorI,
}

/// The generators `Z_1, ..., Z_{l+1}` on a truncation of `Gamma_Sigma`.
#[derive(Debug, Clone)]
pub struct EquivariantGenerators {
    pub space: Arc<TruncatedSpace>,
    pub z: Vec<SparseOperator>,
    pub provenance: Vec<Provenance>,
}

impl EquivariantGenerators {
    /// CG-assembled generators (`0 < q < 1`).
    pub fn cg(space: &Arc<TruncatedSpace>) -> Result<Self> {
        Self::cg_with(space, Execution::default())
    }

    pub fn cg_with(space: &Arc<TruncatedSpace>, exec: Execution) -> Result<Self> {
        let ell = sigma_rank(space)?;
        let z = (1..=ell + 1)
            .map(|j| Ok(build_z_star_cg_with(j, space, exec)?.adjoint()))
            .collect::<Result<Vec<_>>>()?;
        Ok(EquivariantGenerators { space: space.clone(), z, provenance: vec![Provenance::CgBuilt; ell + 1] })
    }

    /// The `q = 0` generators.
    pub fn q0(space: &Arc<TruncatedSpace>) -> Result<Self> {
        let ell = sigma_rank(space)?;
        let z = (1..=ell + 1)
            .map(|j| Ok(build_z_star_q0(j, space)?.adjoint()))
            .collect::<Result<Vec<_>>>()?;
        Ok(EquivariantGenerators { space: space.clone(), z, provenance: vec![Provenance::Q0Direct; ell + 1] })
    }

    /// The model `Y_{j,q} (x) I`.
    pub fn model(space: &Arc<TruncatedSpace>) -> Result<Self> {
        let ell = sigma_rank(space)?;
        let z = (1..=ell + 1).map(|j| build_y(j, space)).collect::<Result<Vec<_>>>()?;
        Ok(EquivariantGenerators {
            space: space.clone(),
            z,
            provenance: vec![Provenance::ModelYTensorI; ell + 1],
        })
    }
}

/// `Z_{j,q}^*` assembled move by move from `C_q(1, r^{n,k}, N) kappa(r^{n,k}, N)
/// C_q(j, s, M)` with `N = N_{1,1}` over `M_j^+` and `N = N_{0,1}` over `M_j^-`.
pub fn build_z_star_cg(j: usize, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    build_z_star_cg_with(j, space, Execution::default())
}

pub fn build_z_star_cg_with(j: usize, space: &Arc<TruncatedSpace>, exec: Execution) -> Result<SparseOperator> {
    let ell = sigma_rank(space)?;
    check_level(j, ell)?;
    check_positive_q(space)?;
    let ctx = space.ctx;
    let plus = moves_plus(j, ell)?;
    let minus = moves_minus(j, ell)?;
    let n11 = Move::n_ij(ell, 1, 1)?;
    let n01 = Move::n_ij(ell, 0, 1)?;
    let prefactor = qpow(ctx.q, 1 - j as i64);
    SparseOperator::try_from_column_fn(space, exec, |g| {
        let lab = label(ell, g)?;
        let r = GTTableau::r_nk(ell, lab.n, lab.k);
        let mut out = Vec::new();
        let up = prefactor * cg_direct(1, &r, &n11, &ctx)? * kappa_exact(&r, &n11, &ctx)?;
        for m in &plus {
            if let Some(s2) = apply_move(&lab.s, m)? {
                let c = cg_direct(j, &lab.s, m, &ctx)?;
                out.push((gamma_of(lab.n + 1, lab.k, s2)?, up * c));
            }
        }
        if lab.k > 0 {
            let down = prefactor * cg_direct(1, &r, &n01, &ctx)? * kappa_exact(&r, &n01, &ctx)?;
            for m in &minus {
                if let Some(s2) = apply_move(&lab.s, m)? {
                    let c = cg_direct(j, &lab.s, m, &ctx)?;
                    out.push((gamma_of(lab.n, lab.k - 1, s2)?, down * c));
                }
            }
        }
        Ok(out)
    })
}

/// `Z_{j,q} = (Z_{j,q}^*)^*`.
pub fn build_z_cg(j: usize, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    Ok(build_z_star_cg(j, space)?.adjoint())
}

/// `Z_{j,0}^*` from the surviving leading terms at `q = 0`.
pub fn build_z_star_q0(j: usize, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    let ell = sigma_rank(space)?;
    check_level(j, ell)?;
    if space.ctx.q != 0.0 {
        return Err(Error::Domain(format!("q = 0 operators requested at q = {}", space.ctx.q)));
    }
    let lower = if j <= ell { Move::n_ij(ell, 0, j)? } else { Move::n_i(ell, 0)? };
    let top = Move::n_i(ell, ell)?;
    let sign = if (j - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    SparseOperator::try_from_column_fn(space, Execution::default(), |g| {
        let lab = label(ell, g)?;
        if j == ell + 1 && lab.k == 0 {
            let s2 = apply_move(&lab.s, &top)?
                .ok_or_else(|| Error::Internal(format!("N_l invalid on {}", lab.s)))?;
            return Ok(vec![(gamma_of(lab.n + 1, 0, s2)?, 1.0)]);
        }
        if lab.k == 0 || lab.d(j) != 0 {
            return Ok(Vec::new());
        }
        Ok(match apply_move(&lab.s, &lower)? {
            Some(s2) => vec![(gamma_of(lab.n, lab.k - 1, s2)?, sign)],
            None => Vec::new(),
        })
    })
}

/// The sign unitary `U xi'_gamma = e_gamma`, diagonal `(-1)^{eta(gamma)}` in the
/// `gamma`-indexed basis.
pub fn build_u(space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    let ell = sigma_rank(space)?;
    Ok(SparseOperator::diagonal(space, move |g| {
        let e = eta(&GammaIndex { ell, gamma: g.to_vec() });
        if e % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }))
}

/// `U T U^*`.
pub fn conjugate(u: &SparseOperator, t: &SparseOperator) -> Result<SparseOperator> {
    u.compose(t)?.compose(&u.adjoint())
}

/// `X_j`, `1 <= j <= l`: the leading `N_{0,j}` part of `Z_{j,q}^*`.
pub fn build_x(j: usize, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    let ell = sigma_rank(space)?;
    if j == 0 || j > ell {
        return Err(Error::Index(format!("X_j needs 1 <= j <= {ell}, got {j}")));
    }
    let q = space.ctx.q;
    let mv = Move::n_ij(ell, 0, j)?;
    let sign = if (j - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    SparseOperator::try_from_column_fn(space, Execution::default(), |g| {
        let lab = label(ell, g)?;
        if lab.k == 0 {
            return Ok(Vec::new());
        }
        let (dj, dj1) = (lab.d(j), lab.d(j + 1));
        let mut c = sign * qpow(q, dj) * qf(dj1 - dj, q)?;
        if j == ell {
            c *= qf(lab.k - dj, q)?;
        }
        Ok(match apply_move(&lab.s, &mv)? {
            Some(s2) if c != 0.0 => vec![(gamma_of(lab.n, lab.k - 1, s2)?, c)],
            _ => Vec::new(),
        })
    })
}

/// `Y_{j,q}^* (x) I` on `Gamma_Sigma`.
pub fn build_y_star_tensor(j: usize, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    sigma_rank(space)?;
    Ok(build_y(j, space)?.adjoint())
}

/// The weight `sum_{i<=l} gamma_i + |gamma_{l+1}|`.
pub fn torus_weight(ell: usize, g: &[i64]) -> i64 {
    g[..ell].iter().sum::<i64>() + g[ell].abs()
}

/// Summary of how fast the entries of an operator decay against a weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    /// Entries above [`NOISE_FLOOR`].
    pub entries: usize,
    /// `max |entry| / q^weight`.
    pub c_fit: f64,
    /// Least-squares exponent of the per-weight envelope; `None` when vacuous.
    pub alpha_fit: Option<f64>,
    /// `(weight, max |entry|)` pairs.
    pub envelope: Vec<(i64, f64)>,
}

/// Fits `|entry| ~ C q^(alpha * weight(column))` over all entries of `r`
/// above [`NOISE_FLOOR`]. The exponent is fitted to the envelope (largest
/// entry per weight, weights >= 1) so that many small entries cannot mask a
/// slow tail.
pub fn decay_report<W>(r: &SparseOperator, weight: W, q: f64) -> Result<DecayReport>
where
    W: Fn(&[i64]) -> i64,
{
    let space = r.space();
    let mut env: BTreeMap<i64, f64> = BTreeMap::new();
    let mut c_fit: f64 = 0.0;
    let mut entries = 0;
    for (_, c, v) in r.entries() {
        let a = v.abs();
        if a <= NOISE_FLOOR {
            continue;
        }
        entries += 1;
        let w = weight(&space.gamma(c));
        c_fit = c_fit.max(a / qpow(q, w));
        let slot = env.entry(w).or_insert(0.0);
        *slot = slot.max(a);
    }
    let envelope: Vec<(i64, f64)> = env.into_iter().collect();
    // weight 0 carries no decay information and only skews the slope
    let samples: Vec<(u64, f64)> = envelope
        .iter()
        .filter(|e| e.0 > 0)
        .map(|&(w, m)| (w as u64, m))
        .collect();
    let alpha_fit = if envelope.is_empty() { None } else { Some(fit_decay_exponent(&samples, q)?) };
    Ok(DecayReport { entries, c_fit, alpha_fit, envelope })
}

/// The residual `U Z_j^* U^* - U X_j U^*` (`j <= l`) or
/// `U Z_{l+1}^* U^* - Y_{l+1}^* (x) I` (`j = l+1`).
pub fn decay_residual(j: usize, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    let ell = sigma_rank(space)?;
    check_level(j, ell)?;
    let u = build_u(space)?;
    let z = conjugate(&u, &build_z_star_cg(j, space)?)?;
    let model = if j <= ell { conjugate(&u, &build_x(j, space)?)? } else { build_y_star_tensor(j, space)? };
    z.sub(&model)
}

/// Label shift `S_M^+ : (n, k, s) -> (n+1, k, M(s))`.
pub fn build_s_plus(m: &Move, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    let ell = sigma_rank(space)?;
    SparseOperator::try_from_column_fn(space, Execution::default(), |g| {
        let lab = label(ell, g)?;
        Ok(match apply_move(&lab.s, m)? {
            Some(s2) => vec![(gamma_of(lab.n + 1, lab.k, s2)?, 1.0)],
            None => Vec::new(),
        })
    })
}

/// Label shift `S_M^- : (n, k, s) -> (n, k-1, M(s))`, zero at `k = 0`.
pub fn build_s_minus(m: &Move, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    let ell = sigma_rank(space)?;
    SparseOperator::try_from_column_fn(space, Execution::default(), |g| {
        let lab = label(ell, g)?;
        if lab.k == 0 {
            return Ok(Vec::new());
        }
        Ok(match apply_move(&lab.s, m)? {
            Some(s2) => vec![(gamma_of(lab.n, lab.k - 1, s2)?, 1.0)],
            None => Vec::new(),
        })
    })
}

/// Diagonal `T_M^+` (`plus = true`) or `T_M^-`, evaluated from the factorized
/// coefficients with the `q^{1-j}` prefactor folded into the exact exponent.
pub fn build_t(m: &Move, plus: bool, space: &Arc<TruncatedSpace>) -> Result<SparseOperator> {
    let ell = sigma_rank(space)?;
    check_positive_q(space)?;
    let ctx = space.ctx;
    let j = m.level();
    let left = if plus { Move::n_ij(ell, 1, 1)? } else { Move::n_ij(ell, 0, 1)? };
    SparseOperator::try_from_column_fn(space, Execution::default(), |g| {
        let lab = label(ell, g)?;
        if !plus && lab.k == 0 {
            return Ok(Vec::new());
        }
        let r = GTTableau::r_nk(ell, lab.n, lab.k);
        let f1 = cg_factorized(1, &r, &left, &ctx)?;
        let f2 = cg_factorized(j, &lab.s, m, &ctx)?;
        if f1.value == 0.0 || f2.value == 0.0 {
            return Ok(Vec::new());
        }
        let e = Rational::from_integer(1 - j as i128) + f1.q_exponent + f2.q_exponent;
        let kappa = if plus { kappa_n11(lab.n, lab.k, ell, &ctx) } else { kappa_n01(lab.n, lab.k, ell, &ctx) };
        let v = (f1.sign * f2.sign) as f64 * qpow_rational(ctx.q, e) * f1.l_product * f2.l_product * kappa;
        Ok(vec![(g.to_vec(), v)])
    })
}

/// The closed product for `U T_{N_{0,j}}^- U^*` at a label, `j <= l-1`.
pub fn tmminus_closed(lab: &SphereBasisLabel, j: usize, q: f64) -> Result<f64> {
    let l = lab.ell() as i64;
    let (n, k) = (lab.n, lab.k);
    let c = |a: usize| lab.c(a);
    let d = |a: usize| lab.d(a);
    let sign = if (j - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut v = sign * qpow(q, d(j)) * qf(d(j + 1) - d(j), q)? / qf(n + k + l - 1, q)?;
    for a in 1..j {
        let a_ = a as i64;
        v *= qf(c(a) - d(a + 1) + l - a_, q)? / qf(c(a + 1) - d(a + 1) + l - a_ - 1, q)?;
    }
    for a in 1..=j {
        let a_ = a as i64;
        v *= qf(c(a + 1) - d(a) + l - a_, q)? / qf(c(a) - d(a) + l + 1 - a_, q)?;
    }
    Ok(v)
}

/// Outcome of [`st_decomposition_check`].
#[derive(Debug, Clone, Serialize)]
pub struct StReport {
    pub j: usize,
    /// `max |sum S T - Z_j^*|` on the margin-1 interior.
    pub max_deviation: f64,
    /// `max |T_{N_{0,j}}^- - closed form|` (`j <= l-1` only).
    pub tmminus_deviation: Option<f64>,
    /// Decay of `diag(T_{N_l}^+) - q^k` (`j = l+1` only).
    pub tplus: Option<DecayReport>,
}

/// Rebuilds `Z_j^*` as `sum_M S_M T_M` and compares with [`build_z_star_cg`];
/// spot-checks the closed forms of the two leading diagonals.
pub fn st_decomposition_check(j: usize, space: &Arc<TruncatedSpace>) -> Result<StReport> {
    let ell = sigma_rank(space)?;
    check_level(j, ell)?;
    let q = space.ctx.q;
    let mut sum = SparseOperator::zero(space);
    for m in moves_plus(j, ell)? {
        sum = sum.add(&build_s_plus(&m, space)?.compose(&build_t(&m, true, space)?)?)?;
    }
    for m in moves_minus(j, ell)? {
        sum = sum.add(&build_s_minus(&m, space)?.compose(&build_t(&m, false, space)?)?)?;
    }
    let z = build_z_star_cg(j, space)?;
    let max_deviation = sum.sub(&z)?.compress(1).max_abs();

    let tmminus_deviation = if j < ell {
        let t = build_t(&Move::n_ij(ell, 0, j)?, false, space)?;
        let mut worst: f64 = 0.0;
        for c in 0..space.dim() {
            let g = space.gamma(c);
            let lab = label(ell, &g)?;
            if lab.k == 0 {
                continue;
            }
            worst = worst.max((t.get_idx(c, c) - tmminus_closed(&lab, j, q)?).abs());
        }
        Some(worst)
    } else {
        None
    };

    let tplus = if j == ell + 1 {
        let t = build_t(&Move::n_i(ell, ell)?, true, space)?;
        let resid = SparseOperator::try_from_column_fn(space, Execution::default(), |g| {
            let lab = label(ell, g)?;
            let c = space.index_of(g).expect("basis point");
            Ok(vec![(g.to_vec(), t.get_idx(c, c) - qpow(q, lab.k))])
        })?;
        Some(decay_report(&resid, |g| torus_weight(ell, g), q)?)
    } else {
        None
    };
    Ok(StReport { j, max_deviation, tmminus_deviation, tplus })
}

/// Second differences of the row sums of `s` (with an empty row below):
/// the `l` components of the weight, invariant under the shift-down
/// normalisation, so a move of level `j` changes it by a fixed vector.
pub fn label_weight(lab: &SphereBasisLabel) -> Vec<i64> {
    let mut sums: Vec<i64> = lab.s.rows.iter().map(|r| r.iter().sum()).collect();
    sums.push(0);
    sums.windows(3).map(|w| w[0] - 2 * w[1] + w[2]).collect()
}

/// The common change of [`label_weight`] across all entries of `t`.
pub fn weight_degree(t: &SparseOperator) -> Result<Option<Vec<i64>>> {
    let space = t.space();
    let ell = sigma_rank(space)?;
    let mut degree: Option<Vec<i64>> = None;
    for (r, c, _) in t.entries() {
        let wr = label_weight(&label(ell, &space.gamma(r))?);
        let wc = label_weight(&label(ell, &space.gamma(c))?);
        let d: Vec<i64> = wr.iter().zip(&wc).map(|(a, b)| a - b).collect();
        match &degree {
            None => degree = Some(d),
            Some(prev) if *prev != d => {
                return Err(Error::Internal(format!("weight degree {d:?} differs from {prev:?}")))
            }
            _ => {}
        }
    }
    Ok(degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::IndexSet;
    use crate::qcore::QContext;

    fn sigma(q: f64, ell: usize, cutoff: usize) -> Arc<TruncatedSpace> {
        TruncatedSpace::new(QContext::new(q, ell, cutoff).unwrap(), IndexSet::sigma(ell))
    }

    #[test]
    fn rank_one_is_unsupported() {
        let sp = sigma(0.5, 1, 3);
        assert_eq!(build_z_star_cg(1, &sp).unwrap_err(), Error::UnsupportedRank(1));
        assert_eq!(build_u(&sp).unwrap_err(), Error::UnsupportedRank(1));
    }

    #[test]
    fn u_is_signed_identity() {
        let sp = sigma(0.5, 2, 2);
        let u = build_u(&sp).unwrap();
        assert_eq!(u.get(&[0; 5], &[0; 5]), 1.0);
        let uu = u.compose(&u.adjoint()).unwrap();
        assert_eq!(uu.max_abs_diff(&SparseOperator::identity(&sp)).unwrap(), 0.0);
    }

    #[test]
    fn q0_examples() {
        let sp = sigma(0.0, 2, 3);
        let u = build_u(&sp).unwrap();
        for j in 1..=3 {
            let z = conjugate(&u, &build_z_star_q0(j, &sp).unwrap()).unwrap();
            let y = build_y_star_tensor(j, &sp).unwrap();
            assert_eq!(z.compress(1).max_abs_diff(&y.compress(1)).unwrap(), 0.0, "j = {j}");
        }
        // j = l+1 at k = 0 raises n
        let z3 = build_z_star_q0(3, &sp).unwrap();
        let col = z3.column(sp.index_of(&[0; 5]).unwrap());
        assert_eq!(col.len(), 1);
        let target = label(2, &sp.gamma(col[0].0)).unwrap();
        assert_eq!((target.n, target.k), (1, 0));
        // j <= l vanishes when d_j > 0
        let lab = label(2, &[1, 0, 0, 0, 0]).unwrap();
        assert!(lab.k > 0 && lab.d(2) > 0);
        assert!(build_z_star_q0(2, &sp).unwrap().column(sp.index_of(&[1, 0, 0, 0, 0]).unwrap()).is_empty());
    }

    #[test]
    fn small_relations_and_st() {
        let sp = sigma(0.5, 2, 4);
        let gens = EquivariantGenerators::cg(&sp).unwrap();
        let dev = crate::torus_triple::verify_sphere_relations(&gens.z, &sp.ctx).unwrap();
        assert!(dev < 1e-9, "{dev}");
        for j in 1..=3 {
            let rep = st_decomposition_check(j, &sp).unwrap();
            assert!(rep.max_deviation < 1e-13, "{rep:?}");
            if let Some(d) = rep.tmminus_deviation {
                assert!(d < 1e-12, "{d}");
            }
        }
    }
}
