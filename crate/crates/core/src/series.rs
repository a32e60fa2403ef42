//! Truncated power series with big-integer coefficients.
//!
//! All arithmetic is exact modulo `x^{cap+1}`, so generating-function
//! identities can be checked coefficient by coefficient with plain equality.
//! Division by `1 - x^k` is carried out as multiplication by the truncated
//! geometric series, which keeps every coefficient integral.
//!
//! Besides `g(x) = prod_k (1 - x^k)^{-1}` the module evaluates the two
//! expectation identities for the truncated part statistics in their usual
//! closed forms:
//!
//! - [`lemma1_coefficient`] reads the coefficient of `x^n` in
//!   `g(x) (sum_{j<=s} x^j/(1-x^j) - (d+1) sum_{j<=s} x^{j(d+1)}/(1-x^{j(d+1)})) prod_{j<=s} (1 - x^{j(d+1)})`.
//!   This is the total number of parts of size `<= s` over the partitions of
//!   `n` in which every size `<= s` has multiplicity at most `d`. It is *not*
//!   `p(n) E(Z_{d,s})`, which counts the truncated statistic over all
//!   partitions (see [`crate::expectations::expect_zds`]).
//! - [`lemma2_coefficient`] reads the coefficient of `x^n` in
//!   `g(x) sum_{k<=s} (x^{mk} - x^{(m+1)k})`, which equals `p(n) E(Y_{m,s})`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Power series truncated after degree `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(cap: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigInt::zero(); cap + 1],
        }
    }

    pub fn one(cap: usize) -> Self {
        let mut s = Self::zero(cap);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Series from explicit low-order coefficients, padded or cut to `cap`.
    pub fn from_coeffs<I, T>(cap: usize, coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut s = Self::zero(cap);
        for (i, c) in coeffs.into_iter().enumerate().take(cap + 1) {
            s.coeffs[i] = c.into();
        }
        s
    }

    /// `c * x^k`, or zero when `k > cap`.
    pub fn monomial(cap: usize, k: usize, c: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(cap);
        if k <= cap {
            s.coeffs[k] = c.into();
        }
        s
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^n`; fails when `n` exceeds the cap.
    pub fn coeff(&self, n: usize) -> Result<&BigInt> {
        self.coeffs.get(n).ok_or(Error::CapExceeded {
            what: "series degree",
            requested: n as u64,
            cap: self.cap() as u64,
        })
    }

    /// In-place multiplication by `1 - x^k`.
    pub fn mul_one_minus_xk(&mut self, k: usize) {
        assert!(k > 0);
        for i in (k..self.coeffs.len()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] -= &lo[i - k];
        }
    }

    /// In-place division by `1 - x^k`.
    pub fn div_one_minus_xk(&mut self, k: usize) {
        assert!(k > 0);
        for i in k..self.coeffs.len() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] += &lo[i - k];
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn assert_same_cap(&self, other: &Self) {
        assert_eq!(self.cap(), other.cap(), "series caps differ");
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.assert_same_cap(rhs);
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.assert_same_cap(rhs);
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.assert_same_cap(rhs);
        let cap = self.cap();
        let mut out = TruncatedSeries::zero(cap);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=cap - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

/// `g(x) = prod_{k>=1} (1 - x^k)^{-1}` truncated after degree `cap`; the
/// coefficient of `x^n` is `p(n)`.
pub fn euler_product(cap: usize) -> TruncatedSeries {
    let mut g = TruncatedSeries::one(cap);
    for k in 1..=cap {
        g.div_one_minus_xk(k);
    }
    g
}

/// `sum_{1<=j<=s} x^{j*step}/(1 - x^{j*step})`.
fn lambert_sum(cap: usize, s: usize, step: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(cap);
    for j in 1..=s {
        let k = j * step;
        if k > cap {
            break;
        }
        for i in (k..=cap).step_by(k) {
            out.coeffs[i] += 1;
        }
    }
    out
}

/// Integer part of a real parameter that must be at least one.
pub(crate) fn floor_param(name: &str, x: f64) -> Result<usize> {
    if !x.is_finite() || x < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "{name} must be a finite real >= 1, got {x}"
        )));
    }
    Ok(x.floor().min(usize::MAX as f64 / 4.0) as usize)
}

/// Right-hand side of the closed-form expectation identity for `Z_{d,s}`,
/// truncated after degree `cap`.
pub fn lemma1_series(cap: usize, d: f64, s: f64) -> Result<TruncatedSeries> {
    let d = floor_param("d", d)?;
    let s = floor_param("s", s)?;
    let g = euler_product(cap);
    let block = d.saturating_add(1);
    let s1 = lambert_sum(cap, s, 1);
    let s2 = lambert_sum(cap, s, block);
    let bracket = &s1 - &s2.scale(&BigInt::from(block));
    let mut rhs = &g * &bracket;
    for j in 1..=s {
        match j.checked_mul(block) {
            Some(k) if k <= cap => rhs.mul_one_minus_xk(k),
            _ => break,
        }
    }
    Ok(rhs)
}

/// Coefficient of `x^n` in [`lemma1_series`].
pub fn lemma1_coefficient(cap: usize, n: usize, d: f64, s: f64) -> Result<BigInt> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "series degree",
            requested: n as u64,
            cap: cap as u64,
        });
    }
    Ok(lemma1_series(cap, d, s)?.coeffs[n].clone())
}

/// `g(x) sum_{1<=k<=s} (x^{mk} - x^{(m+1)k})` truncated after degree `cap`.
pub fn lemma2_series(cap: usize, m: usize, s: f64) -> Result<TruncatedSeries> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "multiplicity m must be positive".into(),
        ));
    }
    let s = floor_param("s", s)?;
    let mut sum = TruncatedSeries::zero(cap);
    for k in 1..=s {
        let lo = m.saturating_mul(k);
        if lo > cap {
            break;
        }
        sum.coeffs[lo] += 1;
        let hi = (m + 1).saturating_mul(k);
        if hi <= cap {
            sum.coeffs[hi] -= 1;
        }
    }
    Ok(&euler_product(cap) * &sum)
}

/// Coefficient of `x^n` in [`lemma2_series`].
pub fn lemma2_coefficient(cap: usize, n: usize, m: usize, s: f64) -> Result<BigInt> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "series degree",
            requested: n as u64,
            cap: cap as u64,
        });
    }
    Ok(lemma2_series(cap, m, s)?.coeffs[n].clone())
}
