//! Zeta functions `Trace(b |D|^{-z})` of diagonal symbols, written exactly as
//! `sum_k a_k zeta(z - k)` plus a finitely supported Dirichlet remainder.
//!
//! Residues are read off the rational coefficients; [`numeric_residue`]
//! provides an independent floating-point estimate.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;

use crate::cg::format_rational;
use crate::error::{Error, Result};
use crate::operators::SparseOperator;
use crate::qcore::{binomial, binomial_polynomial, riemann_zeta, Rational};

fn rat(x: i128) -> Rational {
    Rational::from_integer(x)
}

fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// `sum_k a_k zeta(z - k) + sum_N h_N N^{-z}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZetaCombination {
    /// `k -> a_k`, zero coefficients omitted.
    pub terms: BTreeMap<usize, Rational>,
    /// `N -> h_N` for `N >= 1`, zero entries omitted.
    pub remainder: BTreeMap<u64, Rational>,
}

impl Serialize for ZetaCombination {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a BTreeMap<usize, Rational>);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    m.serialize_entry(&k.to_string(), &format_rational(v))?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("terms", &Terms(&self.terms))?;
        let rem: Vec<(u64, String)> = self.remainder.iter().map(|(n, h)| (*n, format_rational(h))).collect();
        m.serialize_entry("remainder", &rem)?;
        m.end()
    }
}

impl ZetaCombination {
    /// `zeta(z - k)` alone.
    pub fn zeta_shift(k: usize) -> Self {
        let mut zc = ZetaCombination::default();
        zc.terms.insert(k, rat(1));
        zc
    }

    fn add_term(&mut self, k: usize, a: Rational) {
        let e = self.terms.entry(k).or_insert_with(Rational::zero);
        *e += a;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn add_remainder(&mut self, n: u64, h: Rational) {
        let e = self.remainder.entry(n).or_insert_with(Rational::zero);
        *e += h;
        if e.is_zero() {
            self.remainder.remove(&n);
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&mut self, other: &ZetaCombination, c: Rational) {
        for (&k, &a) in &other.terms {
            self.add_term(k, c * a);
        }
        for (&n, &h) in &other.remainder {
            self.add_remainder(n, c * h);
        }
    }

    /// Poles `k + 1` with their residues `a_k`.
    pub fn residues(&self) -> BTreeMap<usize, Rational> {
        self.terms.iter().map(|(&k, &a)| (k + 1, a)).collect()
    }

    /// Value at `z`, away from the poles.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let mut total = Complex64::zero();
        for (&k, a) in &self.terms {
            let w = z - k as f64;
            if w == Complex64::new(1.0, 0.0) {
                return Err(Error::Pole(format!("z = {} is a pole", k + 1)));
            }
            total += to_f64(a) * riemann_zeta(w)?;
        }
        for (&n, h) in &self.remainder {
            total += to_f64(h) * (-z * (n as f64).ln()).exp();
        }
        Ok(total)
    }
}

/// Step sequence of [`numeric_residue`].
pub const RICHARDSON_STEPS: [f64; 3] = [0.1, 0.05, 0.025];

/// Residue at `p` from the symmetric quotient
/// `f(e) = e (F(p+e) - F(p-e)) / 2 = R + c_2 e^2 + c_4 e^4 + ...`, with two
/// Richardson steps over [`RICHARDSON_STEPS`].
pub fn numeric_residue(zc: &ZetaCombination, p: f64) -> Result<f64> {
    let f = |e: f64| -> Result<f64> {
        let hi = zc.evaluate(Complex64::new(p + e, 0.0))?.re;
        let lo = zc.evaluate(Complex64::new(p - e, 0.0))?.re;
        Ok(e * (hi - lo) / 2.0)
    };
    let [e0, e1, e2] = RICHARDSON_STEPS;
    let (f0, f1, f2) = (f(e0)?, f(e1)?, f(e2)?);
    let r01 = (4.0 * f1 - f0) / 3.0;
    let r12 = (4.0 * f2 - f1) / 3.0;
    Ok((16.0 * r12 - r01) / 15.0)
}

/// A finitely supported `a(n)`, `n in N^support_dims`, summed against
/// `support_dims + free_dims` total lattice directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RapidDecaySymbol {
    pub support_dims: usize,
    pub free_dims: usize,
    /// Entries `(n, a(n))`, values as exact rationals `"p/q"`.
    pub values: Vec<(Vec<u64>, String)>,
}

impl RapidDecaySymbol {
    pub fn new(support_dims: usize, free_dims: usize, values: Vec<(Vec<u64>, Rational)>) -> Result<Self> {
        let sym = RapidDecaySymbol {
            support_dims,
            free_dims,
            values: values.into_iter().map(|(n, v)| (n, format_rational(&v))).collect(),
        };
        sym.parsed()?;
        Ok(sym)
    }

    /// Values as `(|n|, a(n))` after validation.
    pub fn parsed(&self) -> Result<Vec<(Vec<u64>, Rational)>> {
        self.values
            .iter()
            .enumerate()
            .map(|(idx, (n, v))| {
                if n.len() != self.support_dims {
                    return Err(Error::Form(format!(
                        "value {idx}: index {n:?} has {} entries, expected {}",
                        n.len(),
                        self.support_dims
                    )));
                }
                Ok((n.clone(), parse_rational(v).map_err(|e| Error::Form(format!("value {idx}: {e}")))?))
            })
            .collect()
    }
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Form(format!("cannot read {s:?} as a rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let i: i128 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let f: i128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let scale = 10i128.pow(frac.len() as u32);
        let mag = Rational::new(i.abs() * scale + f, scale);
        return Ok(if neg { -mag } else { mag });
    }
    s.parse::<i128>().map(rat).map_err(|_| bad())
}

/// Coefficients `g_k(m)` of `N^k` in `C(N - m + s - 1, s - 1)`.
fn shifted_binomial(s: usize, m: i64) -> Vec<Rational> {
    let base = binomial_polynomial(s - 1);
    let mut g = vec![Rational::zero(); s];
    for (j, c) in base.coeffs.iter().enumerate() {
        // (N - m)^j = sum_k C(j,k) N^k (-m)^{j-k}
        for (k, slot) in g.iter_mut().enumerate().take(j + 1) {
            *slot += *c * rat(binomial(j as i64, k as i64)) * rat(-m as i128).pow((j - k) as i32);
        }
    }
    g
}

fn eval_poly(coeffs: &[Rational], x: i64) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * rat(x as i128) + c)
}

/// `xi(z) = sum_{|n|+|m| >= 1} a(n) / (|n| + |m|)^z` as an exact zeta
/// combination: `a_k = sum_n g_k(|n|) a(n)`, remainder
/// `h_N = -sum_{|n| > N} a(n) P_{|n|}(N)` for `1 <= N`, which corrects the
/// polynomial count where it differs from the true count.
pub fn lemma_dimension_decompose(sym: &RapidDecaySymbol) -> Result<ZetaCombination> {
    let vals = sym.parsed()?;
    let s = sym.free_dims;
    let mut zc = ZetaCombination::default();
    if s == 0 {
        for (n, a) in vals {
            let m: u64 = n.iter().sum();
            if m >= 1 {
                zc.add_remainder(m, a);
            }
        }
        return Ok(zc);
    }
    for (n, a) in vals {
        let m: u64 = n.iter().sum();
        let g = shifted_binomial(s, m as i64);
        for (k, gk) in g.iter().enumerate() {
            zc.add_term(k, *gk * a);
        }
        for big_n in 1..m {
            zc.add_remainder(big_n, -a * eval_poly(&g, big_n as i64));
        }
    }
    Ok(zc)
}

/// Degree-zero element `sum_i sum_n lambda^i_n (p_{n_1} (x) ... (x) p_{n_i} (x) 1)`
/// on `Sigma_l`; `parts[t]` has `support_dims = i` for some `0 <= i <= l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusSymbol {
    pub ell: usize,
    pub parts: Vec<RapidDecaySymbol>,
}

impl TorusSymbol {
    /// The identity `lambda^0 = 1`.
    pub fn identity(ell: usize) -> Self {
        TorusSymbol {
            ell,
            parts: vec![RapidDecaySymbol { support_dims: 0, free_dims: ell, values: vec![(vec![], "1".into())] }],
        }
    }

    fn validate(&self) -> Result<()> {
        for (t, p) in self.parts.iter().enumerate() {
            if p.support_dims > self.ell {
                return Err(Error::Form(format!(
                    "part {t} uses {} projection slots, rank is {}",
                    p.support_dims, self.ell
                )));
            }
            if p.free_dims != self.ell - p.support_dims {
                return Err(Error::Form(format!(
                    "part {t} has free_dims {}, expected {}",
                    p.free_dims,
                    self.ell - p.support_dims
                )));
            }
            p.parsed()?;
        }
        Ok(())
    }

    /// Diagonal value at `gamma in Gamma_{Sigma_l}`.
    pub fn value_at(&self, gamma: &[i64]) -> Result<f64> {
        let mut v = 0.0;
        for p in &self.parts {
            let i = p.support_dims;
            for (n, a) in p.parsed()? {
                if n.iter().zip(gamma).all(|(&x, &g)| g == x as i64) && gamma[..i].len() == i {
                    v += to_f64(&a);
                }
            }
        }
        Ok(v)
    }
}

/// `Trace(phi |D_l|^{-z})` over nonzero eigenvalues: each part contributes
/// `2 xi_{s = l-i+1} - xi_{s = l-i}` (the integer direction counted twice
/// except at 0).
pub fn trace_torus_symbolic(phi: &TorusSymbol) -> Result<ZetaCombination> {
    phi.validate()?;
    let mut zc = ZetaCombination::default();
    for p in &phi.parts {
        let with_t = RapidDecaySymbol { free_dims: p.free_dims + 1, ..p.clone() };
        zc.add_scaled(&lemma_dimension_decompose(&with_t)?, rat(2));
        zc.add_scaled(&lemma_dimension_decompose(p)?, rat(-1));
    }
    Ok(zc)
}

/// Number of lattice points of `N^a x Z` at 1-norm `N`, as a polynomial
/// in `N`: `2 C(N+a, a) - C(N+a-1, a-1)`. Valid for every `N >= 0` when
/// `a >= 1`, and for `N >= 1` when `a = 0`.
pub fn degeneracy_polynomial(a: usize) -> Vec<Rational> {
    let mut coeffs: Vec<Rational> = binomial_polynomial(a).coeffs.iter().map(|c| *c * rat(2)).collect();
    if a >= 1 {
        // C(N + a - 1, a - 1) = C((N - 1) + a, ... ) re-expanded about N
        let lower = binomial_polynomial(a - 1);
        for (j, c) in lower.coeffs.iter().enumerate() {
            coeffs[j] -= *c;
        }
    }
    coeffs
}

/// `Trace(|D_eq|^{-z}) = sum_{k=0}^{2l} (2 c_k^{2l} - c_k^{2l-1}) zeta(z - k)`.
pub fn trace_deq_symbolic(ell: usize) -> Result<ZetaCombination> {
    if ell == 0 {
        return Err(Error::UnsupportedRank(0));
    }
    let mut zc = ZetaCombination::default();
    for (k, a) in degeneracy_polynomial(2 * ell).into_iter().enumerate() {
        zc.add_term(k, a);
    }
    Ok(zc)
}

/// Evaluates a polynomial with rational coefficients.
pub fn eval_count(coeffs: &[Rational], n: i64) -> Rational {
    eval_poly(coeffs, n)
}

/// How the symbol behaves beyond the truncation, for the tail bound.
#[derive(Debug, Clone, PartialEq)]
pub enum TailModel {
    /// `|b(gamma)| <= bound` everywhere.
    Bounded { bound: f64 },
    /// `|b(gamma)| <= c q^{|gamma|}`.
    RapidDecay { c: f64, q: f64 },
}

/// A partial trace with a rigorous bound on the omitted part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialTrace {
    pub re: f64,
    pub im: f64,
    pub tail_bound: f64,
}

/// `sum_gamma b(gamma) |D|'(gamma)^{-z}` over the truncation (kernel replaced
/// by 1), plus a bound for the lattice points outside the box. `count`
/// is the degeneracy polynomial of the 1-norm on the full lattice.
pub fn trace_partial(
    b: &SparseOperator,
    z: Complex64,
    d_abs: &SparseOperator,
    count: &[Rational],
    model: &TailModel,
) -> Result<PartialTrace> {
    if !b.is_diagonal() || !d_abs.is_diagonal() {
        return Err(Error::Domain("trace_partial needs diagonal b and |D|".into()));
    }
    let abscissa = count.len() as f64;
    if matches!(model, TailModel::Bounded { .. }) && z.re <= abscissa {
        return Err(Error::Abscissa { re: z.re, abscissa });
    }
    let space = b.space();
    let mut total = Complex64::zero();
    for (v, d) in b.diagonal_values().into_iter().zip(d_abs.diagonal_values()) {
        if v != 0.0 {
            let w = if d == 0.0 { 1.0 } else { d.abs() };
            total += v * (-z * w.ln()).exp();
        }
    }
    let c = space.cutoff();
    let tail_bound = match model {
        TailModel::Bounded { bound } => {
            // sum_{N > c} count(N) N^{-s} <= sum_k |a_k| int_c^inf x^{k-s} dx
            let s = z.re;
            count
                .iter()
                .enumerate()
                .map(|(k, a)| to_f64(a).abs() * (c as f64).powf(k as f64 - s + 1.0) / (s - k as f64 - 1.0))
                .sum::<f64>()
                * bound
        }
        TailModel::RapidDecay { c: amp, q } => {
            if !(*q > 0.0 && *q < 1.0) {
                return Err(Error::Domain(format!("decay ratio {q} outside (0,1)")));
            }
            let abs_count: Vec<f64> = count.iter().map(|a| to_f64(a).abs()).collect();
            let degree = count.len() as f64 - 1.0 + (-z.re).max(0.0);
            let term = |n: f64| {
                let poly: f64 = abs_count.iter().enumerate().map(|(k, a)| a * n.powi(k as i32)).sum();
                poly * n.powf(-z.re) * q.powf(n)
            };
            let mut acc = 0.0;
            let mut n = c as f64 + 1.0;
            loop {
                let t = term(n);
                // consecutive ratios are below rho from here on
                let rho = q * ((n + 1.0) / n).powf(degree);
                if rho < 1.0 && t / (1.0 - rho) <= 1e-17 * (1.0 + acc) {
                    acc += t / (1.0 - rho);
                    break;
                }
                acc += t;
                n += 1.0;
            }
            amp * acc
        }
    };
    Ok(PartialTrace { re: total.re, im: total.im, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_alone() {
        let s = RapidDecaySymbol::new(0, 1, vec![(vec![], rat(1))]).unwrap();
        let zc = lemma_dimension_decompose(&s).unwrap();
        assert_eq!(zc, ZetaCombination::zeta_shift(0));
        assert_eq!(zc.residues(), BTreeMap::from([(1, rat(1))]));
    }

    #[test]
    fn two_free_directions() {
        let s = RapidDecaySymbol::new(0, 2, vec![(vec![], rat(1))]).unwrap();
        let zc = lemma_dimension_decompose(&s).unwrap();
        assert_eq!(zc.residues()[&2], rat(1));
        let z = 5.0;
        let direct: f64 = (1..4000).map(|n| (n as f64 + 1.0) * (n as f64).powf(-z)).sum();
        let v = zc.evaluate(Complex64::new(z, 0.0)).unwrap().re;
        assert!((v - direct).abs() < 1e-8);
    }

    #[test]
    fn shifted_support() {
        let s = RapidDecaySymbol::new(1, 1, vec![(vec![2], rat(1))]).unwrap();
        let zc = lemma_dimension_decompose(&s).unwrap();
        assert_eq!(zc.residues()[&1], rat(1));
        // xi(z) = sum_{N >= 2} N^{-z} = zeta(z) - 1
        assert_eq!(zc.remainder, BTreeMap::from([(1, rat(-1))]));
    }

    #[test]
    fn deq_rank_one() {
        let zc = trace_deq_symbolic(1).unwrap();
        assert_eq!(zc.residues(), BTreeMap::from([(1, rat(1)), (2, rat(2)), (3, rat(1))]));
        let v = zc.evaluate(Complex64::new(4.0, 0.0)).unwrap().re;
        let z = |x: f64| riemann_zeta(Complex64::new(x, 0.0)).unwrap().re;
        assert!((v - (z(2.0) + 2.0 * z(3.0) + z(4.0))).abs() < 1e-10);
        assert!(matches!(zc.evaluate(Complex64::new(3.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn torus_identity_residues() {
        for ell in 1..=3usize {
            let zc = trace_torus_symbolic(&TorusSymbol::identity(ell)).unwrap();
            let fact: i128 = (1..=ell as i128).product();
            assert_eq!(zc.residues()[&(ell + 1)], Rational::new(2, fact));
        }
    }

    #[test]
    fn json_shape() {
        let zc = trace_deq_symbolic(1).unwrap();
        let v = serde_json::to_value(&zc).unwrap();
        assert_eq!(v["terms"]["1"], "2");
        assert!(v["remainder"].as_array().unwrap().is_empty());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/6").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), Rational::new(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
