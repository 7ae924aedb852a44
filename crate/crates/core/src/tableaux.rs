//! Gelfand-Tsetlin tableaux, moves, the weight functional `psi`, quantum
//! dimensions, and the bijection between the sphere basis and the lattice
//! `Gamma = N^l x Z x N^l`.
//!
//! Storage is 0-based; every accessor that takes `(i, j)` is 1-based and so
//! are all indices carried by errors.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::qcore::{q_factor_unchecked, qpow, QContext, Rational};

/// Patterns above this count are refused by the brute-force enumerator.
pub const PATTERN_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Deserialize)]
struct RawTableau {
    ell: usize,
    rows: Vec<Vec<i64>>,
}

/// A validated Gelfand-Tsetlin pattern of rank `ell` (`ell + 1` rows, row
/// `i` holding `ell + 2 - i` entries) with top-right entry zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTableau")]
pub struct GTTableau {
    pub ell: usize,
    pub rows: Vec<Vec<i64>>,
}

impl TryFrom<RawTableau> for GTTableau {
    type Error = Error;
    fn try_from(raw: RawTableau) -> Result<Self> {
        let t = validate_tableau(raw.rows)?;
        if t.ell != raw.ell {
            return Err(Error::RankMismatch { expected: raw.ell, got: t.ell });
        }
        Ok(t)
    }
}

impl GTTableau {
    /// Entry `r_{ij}`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i - 1][j - 1]
    }

    pub fn top_row(&self) -> &[i64] {
        &self.rows[0]
    }

    pub fn zero(ell: usize) -> Self {
        GTTableau {
            ell,
            rows: (0..=ell).map(|i| vec![0; ell + 1 - i]).collect(),
        }
    }

    /// The highest-weight pattern `r^{n,k}` with top row `(n+k, k, ..., k, 0)`
    /// and every lower entry equal to `k`.
    pub fn r_nk(ell: usize, n: i64, k: i64) -> Self {
        let mut rows = vec![lambda_nk(ell, n, k)];
        for i in 1..=ell {
            rows.push(vec![k; ell + 1 - i]);
        }
        GTTableau { ell, rows }
    }

    /// Twice the weight functional, an exact integer.
    pub fn two_psi(&self) -> i64 {
        let top: i64 = self.rows[0].iter().sum();
        let rest: i64 = self.rows[1..].iter().flatten().sum();
        -(self.ell as i64) * top + 2 * rest
    }
}

impl fmt::Display for GTTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let inner: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(","))
            })
            .collect();
        write!(f, "({})", rows.join(","))
    }
}

/// Top row `lambda_{n,k} = (n+k, k, ..., k, 0)` of length `ell + 1`.
pub fn lambda_nk(ell: usize, n: i64, k: i64) -> Vec<i64> {
    let mut row = vec![k; ell + 1];
    row[0] = n + k;
    row[ell] = 0;
    row
}

/// Checks shape, interlacing and the zero top-right corner.
pub fn validate_tableau(rows: Vec<Vec<i64>>) -> Result<GTTableau> {
    if rows.len() < 2 {
        return Err(Error::Shape(format!("{} rows; need at least 2", rows.len())));
    }
    let ell = rows.len() - 1;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ell + 1 - i {
            return Err(Error::Shape(format!(
                "row {} has {} entries, expected {}",
                i + 1,
                row.len(),
                ell + 1 - i
            )));
        }
    }
    if rows[0][ell] != 0 {
        return Err(Error::Tableau {
            i: 1,
            j: ell + 1,
            reason: format!("top-right entry is {}, must be 0", rows[0][ell]),
        });
    }
    check_interlacing(&rows)?;
    Ok(GTTableau { ell, rows })
}

fn check_interlacing(rows: &[Vec<i64>]) -> Result<()> {
    for i in 0..rows.len() - 1 {
        for j in 0..rows[i + 1].len() {
            let (a, b, c) = (rows[i][j], rows[i + 1][j], rows[i][j + 1]);
            if a < b {
                return Err(Error::Tableau {
                    i: i + 2,
                    j: j + 1,
                    reason: format!("r[{},{}] = {a} < r[{},{}] = {b}", i + 1, j + 1, i + 2, j + 1),
                });
            }
            if b < c {
                return Err(Error::Tableau {
                    i: i + 1,
                    j: j + 2,
                    reason: format!("r[{},{}] = {b} < r[{},{}] = {c}", i + 2, j + 1, i + 1, j + 2),
                });
            }
            if c < 0 {
                return Err(Error::Tableau {
                    i: i + 1,
                    j: j + 2,
                    reason: format!("negative entry {c}"),
                });
            }
        }
    }
    Ok(())
}

fn is_valid_pattern(rows: &[Vec<i64>]) -> bool {
    rows[0].last() == Some(&0) && check_interlacing(rows).is_ok()
}

/// The weight functional `psi(r) = -(l/2) sum_j r_{1j} + sum_{i>=2} sum_j r_{ij}`.
pub fn psi(r: &GTTableau) -> Rational {
    Rational::new(r.two_psi() as i128, 2)
}

/// `(H_{ab}, V_{ab}) = (r_{a+1,b} - r_{a,b+1}, r_{ab} - r_{a+1,b})`.
pub fn hv_differences(r: &GTTableau, a: usize, b: usize) -> Result<(i64, i64)> {
    if a == 0 || a > r.ell || b == 0 || b > r.ell + 1 - a {
        return Err(Error::Index(format!(
            "(a, b) = ({a}, {b}) out of range for ell = {}",
            r.ell
        )));
    }
    Ok((
        r.entry(a + 1, b) - r.entry(a, b + 1),
        r.entry(a, b) - r.entry(a + 1, b),
    ))
}

/// A move `(m_1, ..., m_j)` with `1 <= m_i <= ell + 2 - i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub ell: usize,
    pub entries: Vec<usize>,
}

impl Move {
    pub fn new(ell: usize, entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() || entries.len() > ell + 1 {
            return Err(Error::Index(format!(
                "move level {} outside 1..={}",
                entries.len(),
                ell + 1
            )));
        }
        for (idx, &m) in entries.iter().enumerate() {
            let i = idx + 1;
            if m == 0 || m > ell + 2 - i {
                return Err(Error::Index(format!(
                    "m_{i} = {m} outside 1..={}",
                    ell + 2 - i
                )));
            }
        }
        Ok(Move { ell, entries })
    }

    /// Level `j`, the number of rows touched.
    pub fn level(&self) -> usize {
        self.entries.len()
    }

    /// `m_i`, 1-based.
    pub fn m(&self, i: usize) -> usize {
        self.entries[i - 1]
    }

    /// `N_{i,j} = (1, ..., 1, l+1-i, l-i, ..., l+2-j)` with `i` leading ones.
    pub fn n_ij(ell: usize, i: usize, j: usize) -> Result<Self> {
        if i > j || j == 0 || j > ell + 1 {
            return Err(Error::Index(format!("N_({i},{j}) undefined for ell = {ell}")));
        }
        let entries = (1..=j).map(|a| if a <= i { 1 } else { ell + 2 - a }).collect();
        Move::new(ell, entries)
    }

    /// `N_i = N_{i, l+1}`.
    pub fn n_i(ell: usize, i: usize) -> Result<Self> {
        Move::n_ij(ell, i, ell + 1)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.entries.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", inner.join(","))
    }
}

/// Increments entry `m_a` of row `a` for every `a <= j`.
///
/// A result whose top-right entry became 1 is shifted down by one in every
/// entry (the pattern then labels the same irreducible representation of
/// the special unitary group); `None` if that or the interlacing fails.
pub fn apply_move(r: &GTTableau, m: &Move) -> Result<Option<GTTableau>> {
    if m.ell != r.ell {
        return Err(Error::RankMismatch { expected: r.ell, got: m.ell });
    }
    let mut rows = r.rows.clone();
    for (a, &col) in m.entries.iter().enumerate() {
        rows[a][col - 1] += 1;
    }
    if rows[0][r.ell] == 1 {
        for x in rows.iter_mut().flatten() {
            *x -= 1;
        }
    }
    if is_valid_pattern(&rows) {
        Ok(Some(GTTableau { ell: r.ell, rows }))
    } else {
        Ok(None)
    }
}

/// All of `M_j` in lexicographic order.
pub fn enumerate_moves(j: usize, ell: usize) -> Result<Vec<Move>> {
    if j == 0 || j > ell + 1 {
        return Err(Error::Index(format!("level j = {j} outside 1..={}", ell + 1)));
    }
    let choices: Vec<Vec<usize>> = (1..=j).map(|i| (1..=ell + 2 - i).collect()).collect();
    Ok(cartesian(&choices)
        .into_iter()
        .map(|entries| Move { ell, entries })
        .collect())
}

fn boundary_moves(j: usize, ell: usize, first: usize) -> Result<Vec<Move>> {
    if j == 0 || j > ell + 1 {
        return Err(Error::Index(format!("level j = {j} outside 1..={}", ell + 1)));
    }
    let mut choices: Vec<Vec<usize>> = (1..=j)
        .map(|i| {
            let mut v = vec![1, ell + 2 - i];
            v.dedup();
            v
        })
        .collect();
    choices[0] = vec![first];
    Ok(cartesian(&choices)
        .into_iter()
        .map(|entries| Move { ell, entries })
        .collect())
}

/// `M_j^+`: entries in `{1, l+2-i}` with `m_1 = 1`.
pub fn moves_plus(j: usize, ell: usize) -> Result<Vec<Move>> {
    boundary_moves(j, ell, 1)
}

/// `M_j^-`: entries in `{1, l+2-i}` with `m_1 = l+1`.
pub fn moves_minus(j: usize, ell: usize) -> Result<Vec<Move>> {
    boundary_moves(j, ell, ell + 1)
}

fn cartesian(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for &x in c {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Every pattern with the given top row, in lexicographic row order.
pub fn enumerate_patterns(top: &[i64]) -> Result<Vec<GTTableau>> {
    if top.len() < 2 {
        return Err(Error::Shape("top row needs at least 2 entries".into()));
    }
    let ell = top.len() - 1;
    if top[ell] != 0 {
        return Err(Error::Tableau {
            i: 1,
            j: ell + 1,
            reason: "top-right entry must be 0".into(),
        });
    }
    if top.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Domain("top row must be weakly decreasing".into()));
    }
    let mut out = Vec::new();
    let mut rows = vec![top.to_vec()];
    fill_patterns(&mut rows, ell, &mut out)?;
    Ok(out)
}

fn fill_patterns(rows: &mut Vec<Vec<i64>>, ell: usize, out: &mut Vec<GTTableau>) -> Result<()> {
    let prev = rows.last().unwrap().clone();
    if prev.len() == 1 {
        if out.len() >= PATTERN_LIMIT {
            return Err(Error::Size(format!("more than {PATTERN_LIMIT} patterns")));
        }
        out.push(GTTableau { ell, rows: rows.clone() });
        return Ok(());
    }
    let len = prev.len() - 1;
    let mut cur: Vec<i64> = (0..len).map(|j| prev[j + 1]).collect();
    loop {
        rows.push(cur.clone());
        fill_patterns(rows, ell, out)?;
        rows.pop();
        // odometer over prev[j+1] <= x_j <= prev[j], last position fastest
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            if cur[pos] < prev[pos] {
                cur[pos] += 1;
                for (j, slot) in cur.iter_mut().enumerate().skip(pos + 1) {
                    *slot = prev[j + 1];
                }
                break;
            }
        }
    }
}

/// `d_lambda = sum over patterns with top row lambda of q^{2 psi}`.
pub fn d_lambda_bruteforce(lambda: &[i64], ctx: &QContext) -> Result<f64> {
    if !(ctx.q > 0.0) {
        return Err(Error::Domain("quantum dimension needs q > 0".into()));
    }
    let patterns = enumerate_patterns(lambda)?;
    Ok(patterns.iter().map(|p| qpow(ctx.q, p.two_psi())).sum())
}

/// The closed product form of `d_lambda` for `lambda = lambda_{n,k}`.
pub fn d_lambda_closed(n: i64, k: i64, ell: usize, ctx: &QContext) -> Result<f64> {
    if n < 0 || k < 0 {
        return Err(Error::Domain("n and k must be nonnegative".into()));
    }
    if !(ctx.q > 0.0) {
        return Err(Error::Domain("quantum dimension needs q > 0".into()));
    }
    let q = ctx.q;
    let qf = |m: i64| q_factor_unchecked(m as u64, q);
    let l = ell as i64;
    let mut root = q.powf(-(l * (n + k)) as f64 / 2.0);
    for i in 1..l {
        root *= qf(n + i) / qf(i) * (qf(k + i) / qf(i));
    }
    root *= qf(n + k + l) / qf(l);
    Ok(root * root)
}

/// A point of `Gamma_Sigma = N^l x Z x N^l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaIndex {
    pub ell: usize,
    pub gamma: Vec<i64>,
}

impl GammaIndex {
    pub fn new(ell: usize, gamma: Vec<i64>) -> Result<Self> {
        if gamma.len() != 2 * ell + 1 {
            return Err(Error::Dimension(format!(
                "gamma has {} entries, expected {}",
                gamma.len(),
                2 * ell + 1
            )));
        }
        for (idx, &g) in gamma.iter().enumerate() {
            if idx != ell && g < 0 {
                return Err(Error::Domain(format!("gamma_{} = {g} must be >= 0", idx + 1)));
            }
        }
        Ok(GammaIndex { ell, gamma })
    }

    /// `gamma_i`, 1-based.
    pub fn g(&self, i: usize) -> i64 {
        self.gamma[i - 1]
    }

    /// `|gamma| = sum |gamma_i|`.
    pub fn abs_sum(&self) -> i64 {
        self.gamma.iter().map(|x| x.abs()).sum()
    }

    /// `(gamma_{l+1})_+`.
    pub fn mid_pos(&self) -> i64 {
        self.gamma[self.ell].max(0)
    }

    /// `(gamma_{l+1})_-`.
    pub fn mid_neg(&self) -> i64 {
        (-self.gamma[self.ell]).max(0)
    }

    /// `sum_{i<=l} gamma_i + |gamma_{l+1}|`, the decay weight.
    pub fn torus_weight(&self) -> i64 {
        self.gamma[..self.ell].iter().sum::<i64>() + self.gamma[self.ell].abs()
    }
}

/// A sphere basis vector `e_{r^{n,k}, s}`: `s` has top row `lambda_{n,k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SphereBasisLabel {
    pub n: i64,
    pub k: i64,
    pub s: GTTableau,
}

impl SphereBasisLabel {
    pub fn new(n: i64, k: i64, s: GTTableau) -> Result<Self> {
        if s.ell < 2 {
            return Err(Error::UnsupportedRank(s.ell));
        }
        if n < 0 || k < 0 {
            return Err(Error::Domain("n and k must be nonnegative".into()));
        }
        let expected = lambda_nk(s.ell, n, k);
        if s.top_row() != expected.as_slice() {
            return Err(Error::Tableau {
                i: 1,
                j: 1,
                reason: format!("top row {:?} is not lambda_(n,k) = {:?}", s.top_row(), expected),
            });
        }
        Ok(SphereBasisLabel { n, k, s })
    }

    pub fn ell(&self) -> usize {
        self.s.ell
    }

    /// `c_m`: first entry of row `m` (for `m = l+1` the lone entry).
    pub fn c(&self, m: usize) -> i64 {
        self.s.entry(m, 1)
    }

    /// `d_m`: last entry of row `m`.
    pub fn d(&self, m: usize) -> i64 {
        self.s.entry(m, self.ell() + 2 - m)
    }
}

/// Decodes `gamma` into `(n, k, s)`.
pub fn gamma_to_label(gamma: &GammaIndex) -> Result<SphereBasisLabel> {
    let l = gamma.ell;
    if l < 2 {
        return Err(Error::UnsupportedRank(l));
    }
    let g = &gamma.gamma;
    let head: i64 = g[..l].iter().sum();
    let tail: i64 = g[l + 1..].iter().sum();
    let n = gamma.mid_neg() + tail;
    let k = head + gamma.mid_pos();
    let mut rows = Vec::with_capacity(l + 1);
    for m in 1..=l {
        let d_m: i64 = g[..m - 1].iter().sum();
        // c_m = head + |gamma_{l+1}| + sum_{i=l+2}^{2l+2-m} gamma_i
        let c_m = head + g[l].abs() + g[l + 1..2 * l + 2 - m].iter().sum::<i64>();
        let mut row = vec![k; l + 2 - m];
        row[0] = c_m;
        row[l + 1 - m] = d_m;
        rows.push(row);
    }
    rows.push(vec![head + gamma.mid_neg()]);
    let s = GTTableau { ell: l, rows };
    debug_assert!(is_valid_pattern(&s.rows), "decoded pattern {s} invalid");
    Ok(SphereBasisLabel { n, k, s })
}

/// Inverse of [`gamma_to_label`].
pub fn label_to_gamma(label: &SphereBasisLabel) -> Result<GammaIndex> {
    let l = label.ell();
    if l < 2 {
        return Err(Error::UnsupportedRank(l));
    }
    let s = validate_tableau(label.s.rows.clone())?;
    let checked = SphereBasisLabel::new(label.n, label.k, s)?;
    let (k, dl1) = (checked.k, checked.c(l + 1));
    let mut g = vec![0i64; 2 * l + 1];
    for i in 1..l {
        g[i - 1] = checked.d(i + 1) - checked.d(i);
    }
    for i in l + 3..=2 * l + 1 {
        g[i - 1] = checked.c(2 * l + 2 - i) - checked.c(2 * l + 3 - i);
    }
    if k > dl1 {
        g[l - 1] = dl1 - checked.d(l);
        g[l] = k - dl1;
        g[l + 1] = checked.c(l) - k;
    } else {
        g[l - 1] = k - checked.d(l);
        g[l] = k - dl1;
        g[l + 1] = checked.c(l) - dl1;
    }
    GammaIndex::new(l, g)
}

/// Sign exponent `eta(gamma) = sum_{i<=l} (i-1) gamma_i + l (gamma_{l+1})_+`.
pub fn eta(gamma: &GammaIndex) -> i64 {
    let l = gamma.ell;
    (1..=l).map(|i| (i as i64 - 1) * gamma.g(i)).sum::<i64>() + l as i64 * gamma.mid_pos()
}

/// `psi(M(r)) - psi(r)` predicted for a move of level `i`.
pub fn psi_shift(ell: usize, level: usize) -> Rational {
    Rational::new(-(ell as i128), 2) + Rational::from_integer(level as i128 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab(rows: &[&[i64]]) -> Result<GTTableau> {
        validate_tableau(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn validation_examples() {
        assert!(tab(&[&[0, 0, 0], &[0, 0], &[0]]).is_ok());
        assert!(tab(&[&[2, 1, 0], &[2, 1], &[1]]).is_ok());
        let err = tab(&[&[1, 2, 0], &[1, 1], &[1]]).unwrap_err();
        assert!(matches!(err, Error::Tableau { i: 1, j: 2, .. }), "{err}");
        assert!(matches!(tab(&[&[1, 1], &[1]]), Err(Error::Tableau { i: 1, j: 2, .. })));
        assert!(matches!(tab(&[&[1, 0], &[0, 0]]), Err(Error::Shape(_))));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&GTTableau::zero(3)), Rational::from_integer(0));
        for ell in 1..=3 {
            for (n, k) in [(0, 0), (2, 1), (1, 4)] {
                let expected = Rational::new(-(ell as i128) * (n - k) as i128, 2);
                assert_eq!(psi(&GTTableau::r_nk(ell, n, k)), expected);
            }
        }
        assert_eq!(psi(&tab(&[&[3, 0], &[1]]).unwrap()), Rational::new(-1, 2));
    }

    #[test]
    fn hv_examples() {
        assert_eq!(hv_differences(&GTTableau::zero(2), 1, 1).unwrap(), (0, 0));
        assert_eq!(hv_differences(&GTTableau::r_nk(3, 4, 2), 1, 1).unwrap(), (0, 4));
        let r = tab(&[&[2, 1, 0], &[2, 1], &[1]]).unwrap();
        assert_eq!(hv_differences(&r, 1, 1).unwrap(), (1, 0));
        assert!(hv_differences(&r, 2, 2).is_err());
    }

    #[test]
    fn move_examples() {
        let z = GTTableau::zero(2);
        assert_eq!(apply_move(&z, &Move::n_ij(2, 0, 1).unwrap()).unwrap(), None);
        let r = GTTableau::r_nk(2, 1, 2);
        assert_eq!(
            apply_move(&r, &Move::n_ij(2, 1, 1).unwrap()).unwrap(),
            Some(GTTableau::r_nk(2, 2, 2))
        );
        assert_eq!(
            apply_move(&r, &Move::n_ij(2, 0, 1).unwrap()).unwrap(),
            Some(GTTableau::r_nk(2, 1, 1))
        );
        let m = Move::new(2, vec![1, 1, 1]).unwrap();
        assert_eq!(
            apply_move(&z, &m).unwrap().unwrap(),
            tab(&[&[1, 0, 0], &[1, 0], &[1]]).unwrap()
        );
        assert!(apply_move(&z, &Move::new(3, vec![1]).unwrap()).is_err());
    }

    #[test]
    fn special_moves() {
        assert_eq!(Move::n_ij(3, 0, 3).unwrap().entries, vec![4, 3, 2]);
        assert_eq!(Move::n_i(3, 3).unwrap().entries, vec![1, 1, 1, 1]);
        assert_eq!(Move::n_i(3, 0).unwrap().entries, vec![4, 3, 2, 1]);
        assert_eq!(Move::n_ij(3, 2, 3).unwrap().entries, vec![1, 1, 2]);
    }

    #[test]
    fn move_enumeration() {
        let m = enumerate_moves(1, 1).unwrap();
        assert_eq!(m.iter().map(|x| x.entries.clone()).collect::<Vec<_>>(), vec![vec![1], vec![2]]);
        assert_eq!(enumerate_moves(2, 2).unwrap().len(), 6);
        let plus = moves_plus(3, 2).unwrap();
        let got: Vec<_> = plus.iter().map(|x| x.entries.clone()).collect();
        assert_eq!(got, vec![vec![1, 1, 1], vec![1, 2, 1]]);
        assert!(moves_minus(3, 2).unwrap().iter().all(|m| m.m(1) == 3));
        assert!(enumerate_moves(4, 2).is_err());
    }

    #[test]
    fn quantum_dimension_examples() {
        let c = QContext::new(0.5, 2, 4).unwrap();
        assert!((d_lambda_bruteforce(&[0, 0, 0], &c).unwrap() - 1.0).abs() < 1e-15);
        assert!((d_lambda_bruteforce(&[1, 0], &c).unwrap() - 2.5).abs() < 1e-14);
        assert!((d_lambda_bruteforce(&[1, 0, 0], &c).unwrap() - 5.25).abs() < 1e-13);
        assert!((d_lambda_closed(0, 0, 2, &c).unwrap() - 1.0).abs() < 1e-15);
        assert!((d_lambda_closed(1, 0, 1, &c).unwrap() - 2.5).abs() < 1e-14);
        let c3 = QContext::new(0.3, 2, 4).unwrap();
        let brute = d_lambda_bruteforce(&[2, 1, 0], &c3).unwrap();
        let closed = d_lambda_closed(1, 1, 2, &c3).unwrap();
        assert!((brute - closed).abs() <= 1e-12 * brute);
    }

    #[test]
    fn bijection_examples() {
        let g = GammaIndex::new(2, vec![1, 0, 0, 0, 0]).unwrap();
        let lab = gamma_to_label(&g).unwrap();
        assert_eq!((lab.n, lab.k), (0, 1));
        assert_eq!(lab.s, tab(&[&[1, 1, 0], &[1, 1], &[1]]).unwrap());
        assert_eq!(label_to_gamma(&lab).unwrap(), g);

        let g = GammaIndex::new(2, vec![0, 0, -1, 0, 0]).unwrap();
        let lab = gamma_to_label(&g).unwrap();
        assert_eq!((lab.n, lab.k), (1, 0));
        assert_eq!(lab.s, tab(&[&[1, 0, 0], &[1, 0], &[1]]).unwrap());
        assert_eq!(label_to_gamma(&lab).unwrap(), g);

        let zero = GammaIndex::new(2, vec![0; 5]).unwrap();
        let lab = gamma_to_label(&zero).unwrap();
        assert_eq!(lab.s, GTTableau::zero(2));
        assert!(gamma_to_label(&GammaIndex::new(1, vec![0, 0, 0]).unwrap()).is_err());
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(&GammaIndex::new(2, vec![0; 5]).unwrap()), 0);
        assert_eq!(eta(&GammaIndex::new(2, vec![0, 1, 0, 0, 0]).unwrap()), 1);
        assert_eq!(eta(&GammaIndex::new(2, vec![0, 0, 3, 0, 0]).unwrap()), 6);
    }

    #[test]
    fn tableau_json_roundtrip() {
        let t = tab(&[&[2, 1, 0], &[2, 1], &[1]]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"ell":2,"rows":[[2,1,0],[2,1],[1]]}"#);
        let back: GTTableau = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<GTTableau>(r#"{"ell":2,"rows":[[1,2,0],[1,1],[1]]}"#).is_err());
    }
}
