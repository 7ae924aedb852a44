//! Clebsch-Gordan coefficients of the fundamental representation against
//! a Gelfand-Tsetlin basis vector, in two independently coded forms:
//!
//! - the *direct* form, a literal product of signed q-number ratios under a
//!   square root;
//! - the *factorized* form `sign * q^e * L`, where `e` is an exact integer
//!   built from the differences `H_ab`, `V_ab` and `L` is a product of
//!   `Q(|.|)` ratios.
//!
//! The two agree to rounding and serve as each other's oracle. Neither is
//! meaningful at `q = 0`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{q_factor_unchecked, q_number, qpow_rational, QContext, Rational};
use crate::tableaux::{
    apply_move, d_lambda_bruteforce, d_lambda_closed, hv_differences, GTTableau, Move,
};

fn check_q(ctx: &QContext) -> Result<()> {
    if ctx.q > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain("Clebsch-Gordan formulas need q > 0".into()))
    }
}

fn check_r_indices(r: &GTTableau, a: usize, j: usize, k: usize) -> Result<()> {
    let l = r.ell;
    if a == 0 || a > l || j == 0 || j > l + 2 - a || k == 0 || k > l + 1 - a {
        return Err(Error::Index(format!(
            "R(a = {a}, j = {j}, k = {k}) out of range for ell = {l}"
        )));
    }
    Ok(())
}

fn check_rp_indices(r: &GTTableau, a: usize, j: usize) -> Result<()> {
    let l = r.ell;
    if a == 0 || a > l + 1 || j == 0 || j > l + 2 - a {
        return Err(Error::Index(format!(
            "R'(a = {a}, j = {j}) out of range for ell = {l}"
        )));
    }
    Ok(())
}

/// One `[num]/[den]` factor: the integer arguments of both q-numbers.
#[derive(Debug, Clone, Copy)]
struct Ratio {
    num: i64,
    den: i64,
    at: usize,
}

/// Arguments of the q-number ratios in the row-`a` factor `R(r, a, j, k)`.
fn r_ratios(r: &GTTableau, a: usize, j: usize, k: usize) -> Vec<Ratio> {
    let l = r.ell;
    let mut out = Vec::new();
    for i in (1..=l + 2 - a).filter(|&i| i != j) {
        let (i_, j_, k_) = (i as i64, j as i64, k as i64);
        out.push(Ratio {
            num: r.entry(a, i) - r.entry(a + 1, k) - i_ + k_,
            den: r.entry(a, i) - r.entry(a, j) - i_ + j_,
            at: i,
        });
    }
    for i in (1..=l + 1 - a).filter(|&i| i != k) {
        let (i_, j_, k_) = (i as i64, j as i64, k as i64);
        out.push(Ratio {
            num: r.entry(a + 1, i) - r.entry(a, j) - i_ + j_ - 1,
            den: r.entry(a + 1, i) - r.entry(a + 1, k) - i_ + k_ - 1,
            at: i,
        });
    }
    out
}

/// Numerator and denominator q-number arguments of `R'(r, a, j)`.
fn rp_arguments(r: &GTTableau, a: usize, j: usize) -> (Vec<i64>, Vec<(i64, usize)>) {
    let l = r.ell;
    let j_ = j as i64;
    let num = (1..=l + 1 - a)
        .map(|i| r.entry(a + 1, i) - r.entry(a, j) - i as i64 + j_ - 1)
        .collect();
    let den = (1..=l + 2 - a)
        .filter(|&i| i != j)
        .map(|i| (r.entry(a, i) - r.entry(a, j) - i as i64 + j_, i))
        .collect();
    (num, den)
}

fn signed_root(prod: f64, a: usize) -> Result<f64> {
    if prod < 0.0 {
        if prod > -1e-300 {
            return Ok(0.0);
        }
        return Err(Error::Radicand { a, value: prod });
    }
    Ok(prod.sqrt())
}

/// `R(r, a, j, k)` evaluated literally as a signed q-number product.
pub fn r_direct(r: &GTTableau, a: usize, j: usize, k: usize, ctx: &QContext) -> Result<f64> {
    check_q(ctx)?;
    check_r_indices(r, a, j, k)?;
    let sign = if k >= j { 1.0 } else { -1.0 };
    let e2 = -r.entry(a, j) + r.entry(a + 1, k) - k as i64 + j as i64;
    let mut prod = 1.0;
    for f in r_ratios(r, a, j, k) {
        if f.den == 0 {
            return Err(Error::Singularity { a, i: f.at, j, k });
        }
        prod *= q_number(f.num, ctx)? / q_number(f.den, ctx)?;
    }
    Ok(sign * ctx.q.powf(e2 as f64 / 2.0) * signed_root(prod, a)?)
}

/// `R'(r, a, j)` evaluated literally.
pub fn r_prime_direct(r: &GTTableau, a: usize, j: usize, ctx: &QContext) -> Result<f64> {
    check_q(ctx)?;
    check_rp_indices(r, a, j)?;
    let l = r.ell;
    let lower: i64 = (1..=l + 1 - a).map(|i| r.entry(a + 1, i)).sum();
    let upper: i64 = (1..=l + 2 - a).filter(|&i| i != j).map(|i| r.entry(a, i)).sum();
    let e2 = 1 - j as i64 + lower - upper;
    let (num, den) = rp_arguments(r, a, j);
    let mut n = 1.0;
    for x in num {
        n *= q_number(x, ctx)?;
    }
    let mut d = 1.0;
    for (x, i) in den {
        if x == 0 {
            return Err(Error::Singularity { a, i, j, k: 0 });
        }
        d *= q_number(x, ctx)?;
    }
    Ok(ctx.q.powf(e2 as f64 / 2.0) * signed_root(n / d, a)?)
}

/// `C_q(i, r, M(r))` as the product `prod_{a<i} R(r, a, m_a, m_{a+1}) R'(r, i, m_i)`;
/// zero when `M(r)` is not a valid pattern.
pub fn cg_direct(i: usize, r: &GTTableau, m: &Move, ctx: &QContext) -> Result<f64> {
    check_level(i, m)?;
    if apply_move(r, m)?.is_none() {
        return Ok(0.0);
    }
    let mut v = 1.0;
    for a in 1..i {
        v *= r_direct(r, a, m.m(a), m.m(a + 1), ctx)?;
    }
    Ok(v * r_prime_direct(r, i, m.m(i), ctx)?)
}

fn check_level(i: usize, m: &Move) -> Result<()> {
    if m.level() != i {
        return Err(Error::Index(format!(
            "move {m} has level {}, expected {i}",
            m.level()
        )));
    }
    Ok(())
}

/// `sign * q^{q_exponent} * l_product`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CGFactorization {
    pub sign: i8,
    #[serde(serialize_with = "serialize_rational")]
    pub q_exponent: Rational,
    pub l_product: f64,
    pub value: f64,
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl CGFactorization {
    fn vanishing(sign: i8) -> Self {
        CGFactorization {
            sign,
            q_exponent: Rational::zero(),
            l_product: 0.0,
            value: 0.0,
        }
    }
}

/// Multiplies `Q(|n|)` over numerators and `1/Q(|d|)` over denominators,
/// paired positionally into ratios and applied largest first.
fn q_ratio_product(nums: &[i64], dens: &[i64], q: f64) -> f64 {
    let qf = |x: i64| q_factor_unchecked(x.unsigned_abs(), q);
    let len = nums.len().max(dens.len());
    let mut ratios: Vec<f64> = (0..len)
        .map(|t| {
            let n = nums.get(t).map_or(1.0, |&x| qf(x));
            let d = dens.get(t).map_or(1.0, |&x| qf(x));
            n / d
        })
        .collect();
    ratios.sort_by(|x, y| y.abs().total_cmp(&x.abs()));
    ratios.iter().product()
}

/// Factorized `R(r, a, j, k) = sign(k-j) q^{P+S} L`.
pub fn r_factorized(
    r: &GTTableau,
    a: usize,
    j: usize,
    k: usize,
    ctx: &QContext,
) -> Result<CGFactorization> {
    check_q(ctx)?;
    check_r_indices(r, a, j, k)?;
    let sign: i8 = if k >= j { 1 } else { -1 };
    let (mut nums, mut dens) = (Vec::new(), Vec::new());
    push_row_ratios(r, a, j, k, &mut nums, &mut dens)?;
    let e = row_exponent(r, a, j, k)?;
    let l_product = q_ratio_product(&nums, &dens, ctx.q);
    Ok(CGFactorization {
        sign,
        q_exponent: Rational::from_integer(e as i128),
        l_product,
        value: sign as f64 * qpow_rational(ctx.q, Rational::from_integer(e as i128)) * l_product,
    })
}

/// `P + S` for the row-`a` factor.
fn row_exponent(r: &GTTableau, a: usize, j: usize, k: usize) -> Result<i64> {
    let (lo, hi) = (j.min(k), j.max(k));
    let mut e = 0;
    for b in lo..hi {
        e += hv_differences(r, a, b)?.0;
    }
    for b in k + 1..j {
        e += 2 * hv_differences(r, a, b)?.1;
    }
    if j > k {
        e += 2 * (j as i64 - k as i64 - 1) + 1;
    }
    Ok(e)
}

/// `P' = sum_{j <= b < l+2-a} H_ab` for the closing factor.
fn closing_exponent(r: &GTTableau, a: usize, j: usize) -> Result<i64> {
    let mut e = 0;
    for b in j..r.ell + 2 - a {
        e += hv_differences(r, a, b)?.0;
    }
    Ok(e)
}

/// Factorized `R'(r, a, j) = q^{P'} L'`.
pub fn r_prime_factorized(r: &GTTableau, a: usize, j: usize, ctx: &QContext) -> Result<CGFactorization> {
    check_q(ctx)?;
    check_rp_indices(r, a, j)?;
    let (mut nums, mut dens) = (Vec::new(), Vec::new());
    push_closing(r, a, j, &mut nums, &mut dens)?;
    let e = closing_exponent(r, a, j)?;
    let l_product = q_ratio_product(&nums, &dens, ctx.q);
    Ok(CGFactorization {
        sign: 1,
        q_exponent: Rational::from_integer(e as i128),
        l_product,
        value: qpow_rational(ctx.q, Rational::from_integer(e as i128)) * l_product,
    })
}

fn push_row_ratios(
    r: &GTTableau,
    a: usize,
    j: usize,
    k: usize,
    nums: &mut Vec<i64>,
    dens: &mut Vec<i64>,
) -> Result<()> {
    for f in r_ratios(r, a, j, k) {
        if f.den == 0 {
            return Err(Error::Singularity { a, i: f.at, j, k });
        }
        nums.push(f.num);
        dens.push(f.den);
    }
    Ok(())
}

fn push_closing(r: &GTTableau, a: usize, j: usize, nums: &mut Vec<i64>, dens: &mut Vec<i64>) -> Result<()> {
    let (num, den) = rp_arguments(r, a, j);
    for (x, i) in den {
        if x == 0 {
            return Err(Error::Singularity { a, i, j, k: 0 });
        }
        dens.push(x);
    }
    nums.extend(num);
    Ok(())
}

/// `sign(M) = prod_{a<i} sign(m_{a+1} - m_a)`.
pub fn move_sign(m: &Move) -> i8 {
    let descents = m.entries.windows(2).filter(|w| w[1] < w[0]).count();
    if descents % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `B(M) = sum over descents m_a > m_{a+1} of 2(m_a - m_{a+1} - 1) + 1`.
pub fn b_exponent(m: &Move) -> i64 {
    m.entries
        .windows(2)
        .filter(|w| w[0] > w[1])
        .map(|w| 2 * (w[0] as i64 - w[1] as i64 - 1) + 1)
        .sum()
}

/// The pattern-dependent part `C(r, M)` of the q-exponent.
pub fn c_exponent(r: &GTTableau, m: &Move) -> Result<i64> {
    let i = m.level();
    let mut e = 0;
    for a in 1..i {
        let (j, k) = (m.m(a), m.m(a + 1));
        for b in j.min(k)..j.max(k) {
            e += hv_differences(r, a, b)?.0;
        }
        for b in k + 1..j {
            e += 2 * hv_differences(r, a, b)?.1;
        }
    }
    e += closing_exponent(r, i, m.m(i))?;
    Ok(e)
}

/// Factorized Clebsch-Gordan coefficient with exposed sign, exponent
/// `B(M) + C(r, M)` and `L`-product.
pub fn cg_factorized(i: usize, r: &GTTableau, m: &Move, ctx: &QContext) -> Result<CGFactorization> {
    check_q(ctx)?;
    check_level(i, m)?;
    let sign = move_sign(m);
    if apply_move(r, m)?.is_none() {
        return Ok(CGFactorization::vanishing(sign));
    }
    let (mut nums, mut dens) = (Vec::new(), Vec::new());
    for a in 1..i {
        push_row_ratios(r, a, m.m(a), m.m(a + 1), &mut nums, &mut dens)?;
    }
    push_closing(r, i, m.m(i), &mut nums, &mut dens)?;
    let e = Rational::from_integer((b_exponent(m) + c_exponent(r, m)?) as i128);
    let l_product = q_ratio_product(&nums, &dens, ctx.q);
    Ok(CGFactorization {
        sign,
        q_exponent: e,
        l_product,
        value: sign as f64 * qpow_rational(ctx.q, e) * l_product,
    })
}

/// `(A(M), K(M))`: `A = sum |m_a - m_{a+1}| - #descents`, `K = l+2-i-m_i`.
pub fn a_k_decomposition(m: &Move) -> (i64, i64) {
    let i = m.level();
    let a = m
        .entries
        .windows(2)
        .map(|w| (w[0] as i64 - w[1] as i64).abs() - i64::from(w[0] > w[1]))
        .sum();
    let k = m.ell as i64 + 2 - i as i64 - m.m(i) as i64;
    (a, k)
}

/// Leading small-q order of `kappa(r, M(r))`: `l + 2 - i - m_1`.
pub fn kappa_order(m: &Move) -> i64 {
    m.ell as i64 + 2 - m.level() as i64 - m.m(1) as i64
}

/// Recognises `lambda_{n,k}`-shaped top rows.
fn as_lambda_nk(top: &[i64]) -> Option<(i64, i64)> {
    let l = top.len() - 1;
    if l == 1 {
        return Some((top[0], 0));
    }
    let k = top[1];
    if top[1..l].iter().all(|&x| x == k) && top[l] == 0 {
        Some((top[0] - k, k))
    } else {
        None
    }
}

fn quantum_dimension(top: &[i64], ctx: &QContext) -> Result<f64> {
    match as_lambda_nk(top) {
        Some((n, k)) => d_lambda_closed(n, k, top.len() - 1, ctx),
        None => d_lambda_bruteforce(top, ctx),
    }
}

/// `kappa(r, M(r)) = d_lambda^{1/2} d_mu^{-1/2} q^{psi(r) - psi(M(r))}`.
pub fn kappa_exact(r: &GTTableau, m: &Move, ctx: &QContext) -> Result<f64> {
    check_q(ctx)?;
    let target = apply_move(r, m)?
        .ok_or_else(|| Error::Domain(format!("move {m} is invalid on {r}")))?;
    let d_l = quantum_dimension(r.top_row(), ctx)?;
    let d_m = quantum_dimension(target.top_row(), ctx)?;
    let e2 = r.two_psi() - target.two_psi();
    Ok((d_l / d_m).sqrt() * ctx.q.powf(e2 as f64 / 2.0))
}

/// `kappa(r^{n,k}, N_{1,1})` in closed form.
pub fn kappa_n11(n: i64, k: i64, ell: usize, ctx: &QContext) -> f64 {
    let qf = |x: i64| q_factor_unchecked(x as u64, ctx.q);
    let l = ell as i64;
    ctx.q.powi(ell as i32) * qf(n + 1) / qf(n + l) * (qf(n + k + l) / qf(n + k + l + 1))
}

/// `kappa(r^{n,k}, N_{0,1})` in closed form (needs `k >= 1`).
pub fn kappa_n01(n: i64, k: i64, ell: usize, ctx: &QContext) -> f64 {
    let qf = |x: i64| q_factor_unchecked(x as u64, ctx.q);
    let l = ell as i64;
    qf(k + l - 1) / qf(k) * (qf(n + k + l) / qf(n + k + l - 1))
}

/// One row of a Clebsch-Gordan table.
#[derive(Debug, Clone, Serialize)]
pub struct CGRow {
    pub i: usize,
    pub m: String,
    pub sign: i8,
    pub q_exponent: String,
    pub l_product: f64,
    pub value: f64,
}

/// `C_q(i, r, M)` for every `M` in `M_i`, lexicographic in `M`.
pub fn cg_table(i: usize, r: &GTTableau, ctx: &QContext) -> Result<Vec<CGRow>> {
    crate::tableaux::enumerate_moves(i, r.ell)?
        .iter()
        .map(|m| {
            let f = cg_factorized(i, r, m, ctx)?;
            Ok(CGRow {
                i,
                m: m.to_string(),
                sign: f.sign,
                q_exponent: format_rational(&f.q_exponent),
                l_product: f.l_product,
                value: f.value,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::validate_tableau;

    fn ctx(q: f64, ell: usize) -> QContext {
        QContext::new(q, ell, 4).unwrap()
    }

    #[test]
    fn r_prime_trivial_example() {
        let r = validate_tableau(vec![vec![1, 0], vec![0]]).unwrap();
        let v = r_prime_direct(&r, 1, 1, &ctx(0.4, 1)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_products_reduce_to_q_power() {
        // ell = 1, a = 1, k = 1: the lower-row product is empty and the
        // upper one keeps the single factor [2]_q / [4]_q
        let r = validate_tableau(vec![vec![3, 0], vec![1]]).unwrap();
        let c = ctx(0.6, 1);
        let v = r_direct(&r, 1, 2, 1, &c).unwrap();
        let e2 = -r.entry(1, 2) + r.entry(2, 1) - 1 + 2;
        let ratio = q_number(2, &c).unwrap() / q_number(4, &c).unwrap();
        assert!((v + c.q.powf(e2 as f64 / 2.0) * ratio.sqrt()).abs() < 1e-15);
        assert!(v < 0.0);
    }

    #[test]
    fn special_move_exponents() {
        for ell in 2..=3 {
            let s = GTTableau::r_nk(ell, 2, 3);
            for j in 1..=ell {
                let m = Move::n_ij(ell, 0, j).unwrap();
                assert_eq!(b_exponent(&m), j as i64 - 1);
                assert_eq!(move_sign(&m), if j % 2 == 1 { 1 } else { -1 });
            }
            let n_top = Move::n_i(ell, ell).unwrap();
            assert_eq!((b_exponent(&n_top), move_sign(&n_top)), (0, 1));
            assert_eq!(c_exponent(&s, &n_top).unwrap(), 0);
            let n0 = Move::n_i(ell, 0).unwrap();
            assert_eq!(b_exponent(&n0), ell as i64);
            assert_eq!(move_sign(&n0), if ell % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn a_k_examples() {
        let m = Move::n_i(3, 3).unwrap();
        assert_eq!(a_k_decomposition(&m), (0, 0));
        let m = Move::new(3, vec![2, 2, 2]).unwrap();
        assert_eq!(a_k_decomposition(&m).0, 0);
        let n0 = Move::n_i(3, 0).unwrap();
        let (a, k) = a_k_decomposition(&n0);
        assert_eq!(b_exponent(&n0) + kappa_order(&n0), a + k);
    }

    #[test]
    fn kappa_closed_forms() {
        for ell in 1..=3 {
            let c = ctx(0.45, ell);
            for (n, k) in [(0, 1), (2, 3), (1, 1)] {
                let r = GTTableau::r_nk(ell, n, k);
                let up = kappa_exact(&r, &Move::n_ij(ell, 1, 1).unwrap(), &c).unwrap();
                assert!((up - kappa_n11(n, k, ell, &c)).abs() < 1e-12 * up.abs().max(1.0));
                if ell >= 2 {
                    let down = kappa_exact(&r, &Move::n_ij(ell, 0, 1).unwrap(), &c).unwrap();
                    assert!((down - kappa_n01(n, k, ell, &c)).abs() < 1e-12 * down.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn lprime_on_highest_weight() {
        let (ell, n, k) = (3, 2, 4);
        let c = ctx(0.35, ell);
        let qf = |x: i64| q_factor_unchecked(x as u64, c.q);
        let r = GTTableau::r_nk(ell, n, k);
        let f = r_prime_factorized(&r, 1, ell + 1, &c).unwrap();
        assert!((f.l_product - qf(k) / qf(n + k + ell as i64)).abs() < 1e-14);
        let f = r_prime_factorized(&r, 1, 1, &c).unwrap();
        assert!((f.l_product - qf(n + ell as i64) / qf(n + k + ell as i64)).abs() < 1e-14);
    }

    #[test]
    fn table_has_one_row_per_move() {
        let c = ctx(0.5, 2);
        assert_eq!(cg_table(3, &GTTableau::r_nk(2, 1, 1), &c).unwrap().len(), 6);
        let c3 = ctx(0.5, 3);
        assert_eq!(cg_table(3, &GTTableau::r_nk(3, 2, 2), &c3).unwrap().len(), 24);
    }
}
