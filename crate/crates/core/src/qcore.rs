//! Scalar primitives: q-numbers, the factor `Q(n) = sqrt(1 - q^{2n})`,
//! binomial polynomials with exact coefficients, Riemann zeta, and a
//! log-linear decay fit.

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Exact rational scalar used for residues, weights and q-exponents.
pub type Rational = Ratio<i128>;

/// Working precision selector.
///
/// `Extended` switches the direct part of the zeta summation to
/// compensated (Neumaier) accumulation; everything else is unaffected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Standard,
    Extended,
}

/// Deformation parameter, rank, truncation and tolerances shared by all
/// computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QContext {
    pub q: f64,
    pub ell: usize,
    pub cutoff: usize,
    pub tol: f64,
    pub precision: Precision,
}

impl QContext {
    /// Validated constructor with default tolerance `1e-9`.
    pub fn new(q: f64, ell: usize, cutoff: usize) -> Result<Self> {
        let ctx = QContext {
            q,
            ell,
            cutoff,
            tol: 1e-9,
            precision: Precision::Standard,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        self.tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    /// Same rank and tolerances, different q.
    pub fn with_q(mut self, q: f64) -> Result<Self> {
        self.q = q;
        self.validate()?;
        Ok(self)
    }

    /// Same q and rank, different cutoff.
    pub fn with_cutoff(mut self, cutoff: usize) -> Result<Self> {
        self.cutoff = cutoff;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q >= 0.0 && self.q < 1.0) {
            return Err(Error::Context(format!("q = {} must lie in [0, 1)", self.q)));
        }
        if self.ell < 1 {
            return Err(Error::Context("ell must be at least 1".into()));
        }
        if self.cutoff < 2 {
            return Err(Error::Context(format!(
                "cutoff = {} is below the minimum 2",
                self.cutoff
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Context(format!("tol = {} must be positive", self.tol)));
        }
        Ok(())
    }
}

/// `q^e` with the convention `0^0 = 1`.
pub(crate) fn qpow(q: f64, e: i64) -> f64 {
    if e == 0 {
        1.0
    } else if q == 0.0 {
        if e > 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        q.powf(e as f64)
    }
}

/// `q^e` for an exact rational exponent, evaluated once.
pub(crate) fn qpow_rational(q: f64, e: Rational) -> f64 {
    if e.is_zero() {
        return 1.0;
    }
    if q == 0.0 {
        return if e > Rational::zero() { 0.0 } else { f64::INFINITY };
    }
    let x = *e.numer() as f64 / *e.denom() as f64;
    q.powf(x)
}

/// The q-number `[n]_q = (q^n - q^{-n}) / (q - q^{-1})`.
pub fn q_number(n: i64, ctx: &QContext) -> Result<f64> {
    let q = ctx.q;
    if q == 0.0 {
        return Err(Error::Domain("q-number undefined at q=0".into()));
    }
    let v = (q.powf(n as f64) - q.powf(-(n as f64))) / (q - 1.0 / q);
    if !v.is_finite() {
        return Err(Error::Domain(format!("q-number [{n}] overflows at q = {q}")));
    }
    Ok(v)
}

/// `Q(n) = sqrt(1 - q^{2n})` for `n >= 0`.
pub fn q_factor(n: i64, ctx: &QContext) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain(format!("Q({n}) needs a nonnegative argument")));
    }
    Ok(q_factor_unchecked(n as u64, ctx.q))
}

pub(crate) fn q_factor_unchecked(n: u64, q: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if q == 0.0 {
        return 1.0;
    }
    // 1 - q^{2n} computed as -expm1(2n ln q) to keep digits when q is near 1
    (-(2.0 * n as f64 * q.ln()).exp_m1()).sqrt()
}

/// Coefficients `c_k^r` of `N^k` in `C(N + r, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialPolynomial {
    pub r: usize,
    pub coeffs: Vec<Rational>,
}

impl BinomialPolynomial {
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).copied().unwrap_or_else(Rational::zero)
    }

    /// Exact value at an integer (possibly negative) argument.
    pub fn eval(&self, n: i64) -> Rational {
        let x = Rational::from_integer(n as i128);
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

/// Builds `c_k^r` from `r c_k^r = c_{k-1}^{r-1} + r c_k^{r-1}`, `c_0^0 = 1`.
pub fn binomial_polynomial(r: usize) -> BinomialPolynomial {
    let mut prev = vec![Rational::one()];
    for rr in 1..=r {
        let rq = Rational::from_integer(rr as i128);
        let mut next = vec![Rational::zero(); rr + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            let lower = if k >= 1 { prev.get(k - 1).copied().unwrap_or_default() } else { Rational::zero() };
            let same = prev.get(k).copied().unwrap_or_default();
            *slot = (lower + rq * same) / rq;
        }
        prev = next;
    }
    BinomialPolynomial { r, coeffs: prev }
}

/// Exact binomial coefficient `C(n, k)` for `0 <= k`, with `C(n, k) = 0`
/// when `n < k` and `n >= 0`.
pub fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Number of terms in the direct part of the Euler-Maclaurin sum.
pub const ZETA_DIRECT_TERMS: usize = 50;

// B_2, B_4, ..., B_12 used as corrections; B_14 estimates the error.
const BERNOULLI_EVEN: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Riemann zeta at standard precision.
pub fn riemann_zeta(z: Complex64) -> Result<Complex64> {
    riemann_zeta_with(z, Precision::Standard)
}

/// Riemann zeta by Euler-Maclaurin summation (direct sum to 50, Bernoulli
/// corrections through `B_12`) for `Re z > -1`. Real arguments `z <= -1`
/// go through the functional equation.
pub fn riemann_zeta_with(z: Complex64, precision: Precision) -> Result<Complex64> {
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("1".into()));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.re <= -1.0 {
        if z.im != 0.0 {
            return Err(Error::Accuracy(format!(
                "complex argument {z} with Re z <= -1 is outside the supported range"
            )));
        }
        return zeta_reflected(z.re, precision).map(|v| Complex64::new(v, 0.0));
    }
    let (value, err) = zeta_euler_maclaurin(z, precision);
    if err > 1e-10 * value.norm().max(1.0) {
        return Err(Error::Accuracy(format!(
            "Euler-Maclaurin error estimate {err:e} too large at z = {z}"
        )));
    }
    Ok(value)
}

fn zeta_euler_maclaurin(s: Complex64, precision: Precision) -> (Complex64, f64) {
    let n_big = ZETA_DIRECT_TERMS as f64;
    let mut direct = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for n in 1..ZETA_DIRECT_TERMS {
        let term = (-s * (n as f64).ln()).exp();
        match precision {
            Precision::Standard => direct += term,
            Precision::Extended => {
                let (re, cre) = neumaier(direct.re, comp.re, term.re);
                let (im, cim) = neumaier(direct.im, comp.im, term.im);
                direct = Complex64::new(re, im);
                comp = Complex64::new(cre, cim);
            }
        }
    }
    direct += comp;
    let ln_n = n_big.ln();
    let n_pow = |e: Complex64| (e * ln_n).exp();
    let mut total = direct + n_pow(1.0 - s) / (s - 1.0) + 0.5 * n_pow(-s);
    // rising factorial s (s+1) ... (s+2j-2) and (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut err = 0.0;
    for (idx, b) in BERNOULLI_EVEN.iter().enumerate() {
        let j = idx + 1;
        let term = *b / fact * rising * n_pow(-s - (2 * j - 1) as f64);
        if j == BERNOULLI_EVEN.len() {
            err = term.norm();
        } else {
            total += term;
        }
        let a = (2 * j - 1) as f64;
        rising = rising * (s + a) * (s + a + 1.0);
        fact *= (2 * j + 1) as f64 * (2 * j + 2) as f64;
    }
    (total, err)
}

fn neumaier(sum: f64, comp: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
    (t, comp + c)
}

fn zeta_reflected(x: f64, precision: Precision) -> Result<f64> {
    // zeta(x) = 2^x pi^(x-1) sin(pi x / 2) Gamma(1-x) zeta(1-x)
    if x == x.round() && (x as i64) % 2 == 0 {
        return Ok(0.0);
    }
    let other = riemann_zeta_with(Complex64::new(1.0 - x, 0.0), precision)?.re;
    let g = statrs::function::gamma::gamma(1.0 - x);
    let v = 2f64.powf(x) * PI.powf(x - 1.0) * (PI * x / 2.0).sin() * g * other;
    if !v.is_finite() {
        return Err(Error::Accuracy(format!("zeta({x}) overflows")));
    }
    Ok(v)
}

/// Least-squares slope of `ln(magnitude)` against `size * ln(q)`: the
/// exponent `alpha` in `magnitude ~ C q^(alpha size)`. Zero magnitudes are
/// ignored.
pub fn fit_decay_exponent(samples: &[(u64, f64)], q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("decay fit needs q in (0,1), got {q}")));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, m)| *m > 0.0 && m.is_finite())
        .map(|&(s, m)| (s as f64 * q.ln(), m.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} positive samples, need at least 4",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::InsufficientData("all samples share one size".into()));
    }
    Ok(sxy / sxx)
}
