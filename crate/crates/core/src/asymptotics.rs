//! Saddle-point and large-`n` approximations.
//!
//! With `x = e^{-h}` and `g(x) = prod_k (1 - x^k)^{-1}`:
//!
//! ```text
//! a(h) = x g'(x)/g(x)      = sum_j j x^j / (1 - x^j)
//! b(h) = x d/dx a          = sum_j j^2 x^j / (1 - x^j)^2
//! log g(e^{-h})            = -sum_k log(1 - x^k)
//! ```
//!
//! The saddle point `h_n` solves `a(h_n) = n`, after which Hayman's formula
//! gives `p(n) ~ e^{n h_n} g(e^{-h_n}) / sqrt(2 pi b(h_n))`. All exponential
//! quantities are carried in log space because `p(n)` leaves the `f64` range
//! near `n = 76_000`.
//!
//! Every infinite series is cut at the first index `J` with `e^{-J h} < 1e-18`,
//! which puts the truncation error below double-precision rounding.

use std::f64::consts::PI;

use serde::Serialize;

use crate::counting::{rational_to_f64, CountTable};
use crate::error::{Error, Result};
use crate::expectations::expect_zds;
use crate::C;

pub const ZETA_2: f64 = PI * PI / 6.0;
pub const ZETA_0: f64 = -0.5;
/// `zeta'(0) = -log(2 pi) / 2`.
pub const ZETA_PRIME_0: f64 = -0.918_938_533_204_672_8;

/// Default relative tolerance for [`solve_saddle`].
pub const DEFAULT_TOL: f64 = 1e-12;

const TRUNCATION_LOG: f64 = 18.0 * std::f64::consts::LN_10;

fn truncation_index(h: f64) -> usize {
    (TRUNCATION_LOG / h).ceil() as usize + 1
}

/// `a(e^{-h}) = sum_j j e^{-jh} / (1 - e^{-jh})`.
pub fn a_of(h: f64) -> f64 {
    let jmax = truncation_index(h);
    (1..=jmax)
        .rev()
        .map(|j| {
            let jf = j as f64;
            jf / (jf * h).exp_m1()
        })
        .sum()
}

/// `b(e^{-h}) = sum_j j^2 e^{-jh} / (1 - e^{-jh})^2`, equal to `-da/dh`.
pub fn b_of(h: f64) -> f64 {
    let jmax = truncation_index(h);
    (1..=jmax)
        .rev()
        .map(|j| {
            let jf = j as f64;
            let em = (jf * h).exp_m1();
            jf * jf * (em + 1.0) / (em * em)
        })
        .sum()
}

/// `log g(e^{-h}) = -sum_k log(1 - e^{-kh})`.
pub fn log_g(h: f64) -> f64 {
    let kmax = truncation_index(h);
    (1..=kmax)
        .rev()
        .map(|k| -(-(-(k as f64) * h).exp()).ln_1p())
        .sum()
}

/// Meinardus expansion `zeta(2)/h - zeta(0) log h + zeta'(0)` of `log g(e^{-h})`.
pub fn log_g_meinardus(h: f64) -> f64 {
    ZETA_2 / h - ZETA_0 * h.ln() + ZETA_PRIME_0
}

/// Two-term expansion `pi/sqrt(6n) - 1/(4n)` of the saddle point.
pub fn saddle_expansion(n: u64) -> f64 {
    let n = n as f64;
    (ZETA_2 / n).sqrt() + ZETA_0 / (2.0 * n)
}

/// Saddle point of `g` for coefficient index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleState {
    pub n: u64,
    /// Root of `a(e^{-h}) = n`.
    pub h: f64,
    pub b: f64,
    pub log_g: f64,
    /// `|a(e^{-h}) - n|`.
    pub residual: f64,
}

impl SaddleState {
    /// Hayman's estimate of `log p(n)`.
    pub fn ln_hayman(&self) -> f64 {
        self.n as f64 * self.h + self.log_g - 0.5 * (2.0 * PI * self.b).ln()
    }
}

/// Solves `a(e^{-h}) = n` for `h`.
///
/// Bisection on the bracket `(0.2, 5) * pi/sqrt(6n)` narrows the root to a
/// relative width of `1e-3`, then Newton steps with `a' = -b` polish it until
/// `|a - n| <= tol * n`. Newton steps that leave the bracket fall back to
/// bisection.
pub fn solve_saddle(n: u64, tol: f64) -> Result<SaddleState> {
    if n == 0 {
        return Err(Error::InvalidArgument("saddle point needs n >= 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let target = n as f64;
    let scale = PI / (6.0 * target).sqrt();
    let (mut lo, mut hi) = (0.2 * scale, 5.0 * scale);
    // a is decreasing in h
    if !(a_of(lo) > target && a_of(hi) < target) {
        return Err(Error::BracketFailure { n });
    }
    while (hi - lo) > 1e-3 * lo {
        let mid = 0.5 * (lo + hi);
        if a_of(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut h = 0.5 * (lo + hi);
    let mut resid = a_of(h) - target;
    for _ in 0..100 {
        if resid.abs() <= tol * target {
            break;
        }
        if resid > 0.0 {
            lo = h;
        } else {
            hi = h;
        }
        let step = resid / b_of(h);
        let mut next = h + step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == h {
            break;
        }
        h = next;
        resid = a_of(h) - target;
    }
    if resid.abs() > tol * target.max(1.0) * 1e3 {
        return Err(Error::BracketFailure { n });
    }
    Ok(SaddleState {
        n,
        h,
        b: b_of(h),
        log_g: log_g(h),
        residual: resid.abs(),
    })
}

fn exponent(n: u64) -> f64 {
    PI * (2.0 * n as f64 / 3.0).sqrt()
}

/// `log` of the leading Hardy-Ramanujan term `exp(pi sqrt(2n/3)) / (4 n sqrt 3)`.
pub fn ln_hr_leading(n: u64) -> f64 {
    let nf = n as f64;
    exponent(n) - (4.0 * nf * 3f64.sqrt()).ln()
}

pub fn hr_leading(n: u64) -> f64 {
    ln_hr_leading(n).exp()
}

/// `log` of the leading term minus `exp(pi sqrt(2n/3)) / (4 pi sqrt 2 n^{3/2})`.
pub fn ln_rademacher_two_term(n: u64) -> f64 {
    let nf = n as f64;
    let lead = 1.0 / (4.0 * nf * 3f64.sqrt());
    let corr = 1.0 / (4.0 * PI * 2f64.sqrt() * nf.powf(1.5));
    exponent(n) + (lead - corr).ln()
}

pub fn rademacher_two_term(n: u64) -> f64 {
    ln_rademacher_two_term(n).exp()
}

/// Hayman's saddle-point estimate of `log p(n)`.
pub fn ln_hayman_pn(n: u64) -> Result<f64> {
    Ok(solve_saddle(n, DEFAULT_TOL)?.ln_hayman())
}

pub fn hayman_pn(n: u64) -> Result<f64> {
    Ok(ln_hayman_pn(n)?.exp())
}

/// Signed relative error of an approximation given both logs.
pub fn rel_err_ln(ln_approx: f64, ln_exact: f64) -> f64 {
    (ln_approx - ln_exact).exp_m1()
}

/// `sqrt(6n)/pi`, the leading behaviour of `E(Y_n)`.
pub fn asym_ey(n: u64) -> f64 {
    (6.0 * n as f64).sqrt() / PI
}

/// `(sqrt(6n)/(2 pi)) log n`, the leading behaviour of `E(Z_n)`.
pub fn asym_ez(n: u64) -> f64 {
    let nf = n as f64;
    (6.0 * nf).sqrt() / (2.0 * PI) * nf.ln()
}

/// The pieces of `phi_{d,s}(e^{-h}) = (S1 - (d+1) S2) * P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiComponents {
    /// `sum_{j<=s} x^j/(1-x^j)`
    pub s1: f64,
    /// `sum_{j<=s} x^{j(d+1)}/(1-x^{j(d+1)})`
    pub s2: f64,
    /// `prod_{j<=s} (1 - x^{j(d+1)})`
    pub product: f64,
    pub value: f64,
}

/// [`phi_ds`] with its components. `d` and `s` are floored like the exact
/// expectation.
pub fn phi_components(h: f64, d: f64, s: f64) -> Result<PhiComponents> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "h must be positive, got {h}"
        )));
    }
    let d = crate::series::floor_param("d", d)? as f64;
    let s = crate::series::floor_param("s", s)?;
    let block = (d + 1.0) * h;
    let jmax = s.min(truncation_index(h));
    let mut s1 = 0.0;
    for j in (1..=jmax).rev() {
        s1 += 1.0 / (j as f64 * h).exp_m1();
    }
    let mut s2 = 0.0;
    let mut log_prod = 0.0;
    let jmax2 = s.min(truncation_index(block));
    for j in (1..=jmax2).rev() {
        let t = j as f64 * block;
        s2 += 1.0 / t.exp_m1();
        log_prod += (-(-t).exp()).ln_1p();
    }
    let product = log_prod.exp();
    Ok(PhiComponents {
        s1,
        s2,
        product,
        value: (s1 - (d + 1.0) * s2) * product,
    })
}

/// `phi_{d,s}(e^{-h})`.
///
/// The product factor is the Boltzmann probability that every size `<= s`
/// has multiplicity `<= d`, so `phi` is the Boltzmann mean of `Z_{d,s}`
/// restricted to that ensemble rather than the mean of `Z_{d,s}` itself.
/// For the latter see [`zds_boltzmann`].
pub fn phi_ds(h: f64, d: f64, s: f64) -> Result<f64> {
    Ok(phi_components(h, d, s)?.value)
}

/// `sum_{j<=s} E(gamma_j [gamma_j <= d])` for independent geometric
/// `gamma_j` with ratio `e^{-jh}`: the Boltzmann estimate of `E(Z_{d,s})`.
pub fn zds_boltzmann(h: f64, d: f64, s: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "h must be positive, got {h}"
        )));
    }
    let d = crate::series::floor_param("d", d)?;
    let s = crate::series::floor_param("s", s)?;
    let jmax = s.min(truncation_index(h));
    let mut total = 0.0;
    for j in (1..=jmax).rev() {
        let t = j as f64 * h;
        total += if d <= 64 {
            // (1 - x) sum_{a<=d} a x^a
            let x = (-t).exp();
            let mut term = 0.0;
            let mut xa = 1.0;
            for a in 1..=d {
                xa *= x;
                term += a as f64 * xa;
            }
            term * -(-t).exp_m1()
        } else {
            // mean minus the tail a >= d + 1
            let mean = 1.0 / t.exp_m1();
            let big_d = (d + 1) as f64;
            mean - (-big_d * t).exp() * (big_d + mean)
        };
    }
    Ok(total)
}

/// `2c E(Z_{d,s}) / (sqrt(n) log n)` with `d = n^{u/2}`, `s = n^{v/2}`: the
/// finite-`n` counterpart of the procedure-1 limit law.
///
/// Uses the exact expectation when `table` covers `n`, and [`zds_boltzmann`]
/// at the saddle point otherwise.
pub fn approx_joint_proc1(table: Option<&CountTable>, n: u64, u: f64, v: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "approx_joint_proc1 needs n >= 2".into(),
        ));
    }
    let nf = n as f64;
    let d = nf.powf(u / 2.0);
    let s = nf.powf(v / 2.0);
    if !(d >= 1.0 && s >= 1.0) {
        return Ok(0.0);
    }
    let expectation = match table {
        Some(t) if n <= t.limit() => rational_to_f64(&expect_zds(t, n, d, s)?),
        _ => {
            let state = solve_saddle(n, DEFAULT_TOL)?;
            zds_boltzmann(state.h, d, s)?
        }
    };
    Ok(2.0 * C * expectation / (nf.sqrt() * nf.ln()))
}

/// `sum_{k<=s} (e^{-cmk/sqrt n} - e^{-c(m+1)k/sqrt n})`, the ratio
/// approximation of `E(Y_{m,s})`.
pub fn approx_yms(n: u64, m: u64, s: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "multiplicity m must be positive".into(),
        ));
    }
    let s = crate::series::floor_param("s", s)?.min(n as usize);
    let step = C / (n as f64).sqrt();
    let (a, b) = (m as f64 * step, (m + 1) as f64 * step);
    Ok((1..=s)
        .rev()
        .map(|k| {
            let k = k as f64;
            (-a * k).exp() - (-b * k).exp()
        })
        .sum())
}
