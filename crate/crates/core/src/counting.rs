//! Exact partition counts.
//!
//! [`CountTable`] holds `p(0..=N)` as arbitrary-precision integers, built with
//! Euler's pentagonal number recurrence in `O(N^{3/2})` big-integer additions:
//!
//! ```text
//! p(k) = sum_{i>=1} (-1)^{i+1} [ p(k - i(3i-1)/2) + p(k - i(3i+1)/2) ]
//! ```
//!
//! Negative arguments count zero partitions and `p(0) = 1`. Every exact
//! formula elsewhere in the crate reduces to ratios of these counts.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Largest table a caller may request unless it raises the cap explicitly.
pub const DEFAULT_TABLE_CAP: u64 = 1_000_000;

/// Immutable table of `p(0)..=p(limit)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    values: Vec<BigUint>,
}

impl CountTable {
    /// Builds `p(0..=limit)`, rejecting limits above [`DEFAULT_TABLE_CAP`].
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_cap(limit, DEFAULT_TABLE_CAP)
    }

    pub fn build_with_cap(limit: u64, cap: u64) -> Result<Self> {
        if limit > cap {
            return Err(Error::CapExceeded {
                what: "count table limit",
                requested: limit,
                cap,
            });
        }
        let limit = limit as usize;
        let mut values: Vec<BigUint> = Vec::with_capacity(limit + 1);
        values.push(BigUint::from(1u32));
        for k in 1..=limit {
            // Positive and negative terms are accumulated separately so the
            // arithmetic stays unsigned.
            let mut plus = BigUint::zero();
            let mut minus = BigUint::zero();
            for i in 1.. {
                let g1 = i * (3 * i - 1) / 2;
                if g1 > k {
                    break;
                }
                let acc = if i % 2 == 1 { &mut plus } else { &mut minus };
                *acc += &values[k - g1];
                let g2 = i * (3 * i + 1) / 2;
                if g2 <= k {
                    *acc += &values[k - g2];
                }
            }
            values.push(plus - minus);
        }
        Ok(CountTable { values })
    }

    /// Largest `n` for which `p(n)` is stored.
    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// `p(n)`; fails when `n` is beyond the table.
    pub fn p(&self, n: u64) -> Result<&BigUint> {
        self.values.get(n as usize).ok_or(Error::TableTooSmall {
            requested: n,
            limit: self.limit(),
        })
    }

    /// `p(k)` extended by zero to negative `k`. Caller guarantees `k <= limit`.
    pub(crate) fn p_ext(&self, k: i64) -> BigUint {
        if k < 0 {
            BigUint::zero()
        } else {
            self.values[k as usize].clone()
        }
    }

    pub(crate) fn check(&self, n: u64) -> Result<()> {
        if n > self.limit() {
            Err(Error::TableTooSmall {
                requested: n,
                limit: self.limit(),
            })
        } else {
            Ok(())
        }
    }

    /// Natural log of `p(n)`.
    pub fn ln_p(&self, n: u64) -> Result<f64> {
        Ok(ln_biguint(self.p(n)?))
    }

    /// `Pr(alpha_j = m)` for a uniform partition of `n`:
    /// `(p(n - jm) - p(n - j(m+1))) / p(n)`.
    pub fn prob_multiplicity(&self, n: u64, j: u64, m: u64) -> Result<Rational> {
        self.check(n)?;
        if j == 0 {
            return Err(Error::InvalidArgument(
                "part size j must be positive".into(),
            ));
        }
        let num = self.count_multiplicity(n, j, m);
        Ok(Rational::new(
            num.into(),
            self.values[n as usize].clone().into(),
        ))
    }

    /// Numerator of [`prob_multiplicity`](Self::prob_multiplicity): the number
    /// of partitions of `n` in which part `j` occurs exactly `m` times.
    pub(crate) fn count_multiplicity(&self, n: u64, j: u64, m: u64) -> BigUint {
        let n = n as i64;
        let lo = sub_part(n, j, m);
        let hi = sub_part(n, j, m.saturating_add(1));
        self.p_ext(lo) - self.p_ext(hi)
    }

    /// Number of partitions of `n` with no part equal to `k`: `p(n) - p(n - k)`.
    pub fn count_no_part_k(&self, n: u64, k: u64) -> Result<BigUint> {
        self.check(n)?;
        if k == 0 {
            return Err(Error::InvalidArgument(
                "part size k must be positive".into(),
            ));
        }
        Ok(&self.values[n as usize] - self.p_ext(sub_part(n as i64, k, 1)))
    }
}

/// `n - j*m` as a signed offset, clamped so huge products read as negative.
pub(crate) fn sub_part(n: i64, j: u64, m: u64) -> i64 {
    match j.checked_mul(m) {
        Some(jm) if jm <= n as u64 => n - jm as i64,
        _ => -1,
    }
}

/// Natural log of a positive big integer, exact to double precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Float value of a rational, exact to double precision even when numerator
/// and denominator overflow `f64` separately.
pub fn rational_to_f64(r: &Rational) -> f64 {
    let (num, den) = (r.numer(), r.denom());
    if num.is_zero() {
        return 0.0;
    }
    if let (Some(a), Some(b)) = (num.to_f64(), den.to_f64()) {
        if a.is_finite() && b.is_finite() && b != 0.0 {
            return a / b;
        }
    }
    let sign = if num.sign() == num_bigint::Sign::Minus {
        -1.0
    } else {
        1.0
    };
    let a = ln_biguint(num.magnitude());
    let b = ln_biguint(den.magnitude());
    sign * (a - b).exp()
}
