//! Limiting joint and marginal laws of `(mu, sigma)` as `n -> infinity`.
//!
//! - Procedure 1, on the log scale `2 log(mu)/log n <= u`, `2 log(sigma)/log n <= v`:
//!   [`f1`], piecewise linear.
//! - Procedure 2, with `t = c sigma / sqrt(n)`:
//!   `L2(m, t) = int_0^t e^{-my} (1 - e^{-y}) dy`.
//! - Procedure 3, same scaling:
//!   `L3(m, t) = (6m/pi^2) int_0^t y (1 - e^{-y}) e^{-my} dy`.
//!
//! `L2` and `L3` are evaluated in closed form; the `*_quadrature` variants
//! integrate the densities numerically and serve as an independent check.

use std::f64::consts::PI;

use serde::Serialize;

use crate::quadrature::integrate;

const QUAD_TOL: f64 = 1e-13;
/// `int_60^inf y/(e^y - 1) dy < 1e-24`, so integrals to infinity stop here.
const EFFECTIVE_INFINITY: f64 = 60.0;

/// Limit of `P(2 log mu_1 / log n <= u, 2 log sigma_1 / log n <= v)`.
pub fn f1(u: f64, v: f64) -> f64 {
    if u.min(v) <= 0.0 {
        0.0
    } else if u > 1.0 && v > 1.0 {
        1.0
    } else if u > 1.0 {
        v.min(1.0)
    } else if v > 1.0 {
        u.min(1.0)
    } else if u + v <= 1.0 {
        0.0
    } else {
        u + v - 1.0
    }
}

/// `1 - e^{-x}(1 + x) = int_0^x y e^{-y} dy`, finite at `x = inf`.
fn gamma2_lower(x: f64) -> f64 {
    if x.is_infinite() {
        return 1.0;
    }
    -(-x).exp_m1() - x * (-x).exp()
}

/// `L2(m, t) = (1 - e^{-mt})/m - (1 - e^{-(m+1)t})/(m+1)`.
pub fn l2(m: u64, t: f64) -> f64 {
    if !(t > 0.0) || m == 0 {
        return 0.0;
    }
    let (a, b) = (m as f64, (m + 1) as f64);
    -(-a * t).exp_m1() / a + (-b * t).exp_m1() / b
}

/// `L3(m, t) = (6m/pi^2) [G(mt)/m^2 - G((m+1)t)/(m+1)^2]` with
/// `G(x) = 1 - e^{-x}(1 + x)`.
pub fn l3(m: u64, t: f64) -> f64 {
    if !(t > 0.0) || m == 0 {
        return 0.0;
    }
    let (a, b) = (m as f64, (m + 1) as f64);
    6.0 * a / (PI * PI) * (gamma2_lower(a * t) / (a * a) - gamma2_lower(b * t) / (b * b))
}

pub fn l2_quadrature(m: u64, t: f64) -> f64 {
    if !(t > 0.0) {
        return 0.0;
    }
    let m = m as f64;
    let t = t.min(EFFECTIVE_INFINITY);
    integrate(|y| (-m * y).exp() * -(-y).exp_m1(), 0.0, t, QUAD_TOL)
}

pub fn l3_quadrature(m: u64, t: f64) -> f64 {
    if !(t > 0.0) {
        return 0.0;
    }
    let mf = m as f64;
    let t = t.min(EFFECTIVE_INFINITY);
    6.0 * mf / (PI * PI) * integrate(|y| y * -(-y).exp_m1() * (-mf * y).exp(), 0.0, t, QUAD_TOL)
}

/// Limit of `P(2 log mu_1 / log n <= t)`, and equally of the size marginal.
pub fn m1(t: f64) -> f64 {
    t.clamp(0.0, 1.0)
}

/// `P(mu_2 = m) -> 1/(m(m+1))`.
pub fn m2_mult(m: u64) -> f64 {
    let m = m as f64;
    1.0 / (m * (m + 1.0))
}

/// `P(c sigma_2 / sqrt n <= t) -> 1 - e^{-t}`.
pub fn m2_size(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -(-t).exp_m1()
    }
}

/// `P(mu_3 = m) -> 6(2m+1) / (pi^2 m (m+1)^2)`.
pub fn m3_mult(m: u64) -> f64 {
    let m = m as f64;
    6.0 * (2.0 * m + 1.0) / (PI * PI * m * (m + 1.0) * (m + 1.0))
}

/// `P(c sigma_3 / sqrt n <= t) -> (6/pi^2) int_0^t y/(e^y - 1) dy`, by
/// quadrature. The integrand tends to 1 at `y = 0`.
pub fn m3_size(t: f64) -> f64 {
    if !(t > 0.0) {
        return 0.0;
    }
    let t = t.min(EFFECTIVE_INFINITY);
    let f = |y: f64| if y == 0.0 { 1.0 } else { y / y.exp_m1() };
    6.0 / (PI * PI) * integrate(f, 0.0, t, 1e-14)
}

/// A point at which to evaluate one of the limiting joint laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "procedure")]
pub enum LimitQuery {
    #[serde(rename = "1")]
    Uniform { u: f64, v: f64 },
    #[serde(rename = "2")]
    Distinct { m: u64, t: f64 },
    #[serde(rename = "3")]
    Area { m: u64, t: f64 },
}

impl LimitQuery {
    pub fn eval(&self) -> f64 {
        match *self {
            LimitQuery::Uniform { u, v } => f1(u, v),
            LimitQuery::Distinct { m, t } => l2(m, t),
            LimitQuery::Area { m, t } => l3(m, t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f1_cases() {
        assert!((f1(0.6, 0.7) - 0.3).abs() < 1e-15);
        assert_eq!(f1(0.3, 0.4), 0.0);
        assert_eq!(f1(2.0, 0.5), 0.5);
        assert_eq!(f1(0.5, 2.0), 0.5);
        assert_eq!(f1(-1.0, 3.0), 0.0);
        assert_eq!(f1(3.0, 3.0), 1.0);
        assert_eq!(f1(1.0, 1.0), 1.0);
    }

    #[test]
    fn f1_is_a_cdf() {
        let grid: Vec<f64> = (-4..=30).map(|i| i as f64 * 0.1).collect();
        for &u in &grid {
            for w in grid.windows(2) {
                let (a, b) = (f1(u, w[0]), f1(u, w[1]));
                assert!(a <= b + 1e-15 && (0.0..=1.0).contains(&a));
                assert!(f1(w[0], u) <= f1(w[1], u) + 1e-15);
            }
        }
    }

    #[test]
    fn l2_values() {
        assert!((l2(1, f64::INFINITY) - 0.5).abs() < 1e-15);
        assert_eq!(l2(3, 0.0), 0.0);
        assert!((l2(1, 1.0) - l2_quadrature(1, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn l3_values() {
        let want = 18.0 / (4.0 * PI * PI);
        assert!((l3(1, f64::INFINITY) - want).abs() < 1e-15);
        assert!((want - 0.455_945).abs() < 1e-6);
        assert_eq!(l3(2, 0.0), 0.0);
        assert!((l3(2, 0.5) - l3_quadrature(2, 0.5)).abs() < 1e-12);
    }

    #[test]
    fn small_t_stays_accurate() {
        for &t in &[1e-6, 1e-4, 1e-2] {
            assert!((l3(1, t) - l3_quadrature(1, t)).abs() < 1e-14);
            assert!((l2(1, t) - l2_quadrature(1, t)).abs() < 1e-14);
        }
    }

    #[test]
    fn marginals() {
        assert!((m2_size(2f64.ln()) - 0.5).abs() < 1e-15);
        assert_eq!(m1(0.3), 0.3);
        assert_eq!(m1(1.5), 1.0);
        assert!((m3_size(f64::INFINITY) - 1.0).abs() < 1e-8);
        assert!((m3_mult(1) - l3(1, f64::INFINITY)).abs() < 1e-15);
    }

    #[test]
    fn m3_size_matches_series() {
        // (6/pi^2) [pi^2/6 - sum_k e^{-kt} (t/k + 1/k^2)]
        for &t in &[0.1, 1.0, 3.0] {
            let tail: f64 = (1..2000)
                .map(|k| {
                    let k = k as f64;
                    (-k * t).exp() * (t / k + 1.0 / (k * k))
                })
                .sum();
            let want = 1.0 - 6.0 / (PI * PI) * tail;
            assert!((m3_size(t) - want).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn l2_rows_telescope_to_size_marginal() {
        for &t in &[0.5, 1.0, 2.0] {
            let mm = 200u64;
            let sum: f64 = (1..=mm).map(|m| l2(m, t)).sum();
            let residual = -(-((mm + 1) as f64) * t).exp_m1() / (mm + 1) as f64;
            assert!((sum + residual - m2_size(t)).abs() < 1e-6);
        }
    }

    #[test]
    fn queries() {
        assert_eq!(LimitQuery::Uniform { u: 0.6, v: 0.7 }.eval(), f1(0.6, 0.7));
        assert_eq!(LimitQuery::Distinct { m: 2, t: 1.0 }.eval(), l2(2, 1.0));
        assert_eq!(LimitQuery::Area { m: 2, t: 1.0 }.eval(), l3(2, 1.0));
    }
}
