//! Exact finite-`n` expectations of the part statistics, computed from
//! partition counts alone.
//!
//! For a uniform partition of `n` with multiplicities `alpha_j`:
//!
//! | statistic   | definition                                   | expectation times `p(n)`                       |
//! |-------------|----------------------------------------------|-----------------------------------------------|
//! | `Z_n`       | `sum_j alpha_j`                              | `sum_{j,m>=1} p(n - jm)`                      |
//! | `Y_n`       | `sum_j [alpha_j > 0]`                        | `sum_{k=1}^n p(n - k)`                        |
//! | `Z_{d,s}`   | `sum_{j<=s} alpha_j [alpha_j <= d]`          | `sum_{j<=s} sum_{m<=d} m (p(n-jm) - p(n-j(m+1)))` |
//! | `Y_{m,s}`   | `sum_{j<=s} [alpha_j = m]`                   | `sum_{k<=s} (p(n-mk) - p(n-(m+1)k))`          |
//!
//! Real `d` and `s` are replaced by their integer parts.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::asymptotics;
use crate::counting::{rational_to_f64, sub_part, CountTable};
use crate::error::{Error, Result};
use crate::series::floor_param;
use crate::Rational;

fn over_pn(table: &CountTable, n: u64, num: BigUint) -> Rational {
    Rational::new(
        BigInt::from(num),
        BigInt::from(table.values()[n as usize].clone()),
    )
}

/// `E(Z_n)`, the mean number of parts.
pub fn expect_zn(table: &CountTable, n: u64) -> Result<Rational> {
    table.check(n)?;
    let mut num = BigUint::zero();
    for j in 1..=n {
        for m in 1..=n / j {
            num += &table.values()[(n - j * m) as usize];
        }
    }
    Ok(over_pn(table, n, num))
}

/// `E(Y_n)`, the mean number of distinct part sizes.
pub fn expect_yn(table: &CountTable, n: u64) -> Result<Rational> {
    table.check(n)?;
    let num: BigUint = (1..=n).map(|k| &table.values()[(n - k) as usize]).sum();
    Ok(over_pn(table, n, num))
}

/// `E(Z_{d,s})`: parts of size `<= s` whose size has multiplicity `<= d`.
pub fn expect_zds(table: &CountTable, n: u64, d: f64, s: f64) -> Result<Rational> {
    table.check(n)?;
    let d = floor_param("d", d)? as u64;
    let s = floor_param("s", s)? as u64;
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for j in 1..=s.min(n) {
        // sum_{m=1}^{D} m (p(n-jm) - p(n-j(m+1))) = sum_{m=1}^{D} p(n-jm) - D p(n-j(D+1))
        let top = d.min(n / j);
        for m in 1..=top {
            plus += &table.values()[(n - j * m) as usize];
        }
        let tail = sub_part(n as i64, j, top + 1);
        if tail >= 0 {
            minus += &table.values()[tail as usize] * top;
        }
    }
    Ok(over_pn(table, n, plus - minus))
}

/// `E(Y_{m,s})`: distinct sizes `<= s` occurring exactly `m` times.
pub fn expect_yms(table: &CountTable, n: u64, m: u64, s: f64) -> Result<Rational> {
    table.check(n)?;
    if m == 0 {
        return Err(Error::InvalidArgument(
            "multiplicity m must be positive".into(),
        ));
    }
    let s = floor_param("s", s)? as u64;
    let mut num = BigUint::zero();
    for k in 1..=s.min(n) {
        num += table.count_multiplicity(n, k, m);
    }
    Ok(over_pn(table, n, num))
}

/// Which statistic an [`ExpectationReport`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "stat", rename_all = "lowercase")]
pub enum Quantity {
    Zn,
    Yn,
    Zds { d: f64, s: f64 },
    Yms { m: u64, s: f64 },
}

/// Exact expectation next to its large-`n` approximation.
#[derive(Debug, Clone, Serialize)]
pub struct ExpectationReport {
    pub n: u64,
    pub quantity: Quantity,
    /// Reduced `num/den`.
    pub exact: String,
    pub exact_f64: f64,
    pub asymptotic: Option<f64>,
}

impl ExpectationReport {
    pub fn compute(table: &CountTable, n: u64, quantity: Quantity) -> Result<Self> {
        let exact = match quantity {
            Quantity::Zn => expect_zn(table, n)?,
            Quantity::Yn => expect_yn(table, n)?,
            Quantity::Zds { d, s } => expect_zds(table, n, d, s)?,
            Quantity::Yms { m, s } => expect_yms(table, n, m, s)?,
        };
        let asymptotic = if n < 2 {
            None
        } else {
            Some(match quantity {
                Quantity::Zn => asymptotics::asym_ez(n),
                Quantity::Yn => asymptotics::asym_ey(n),
                Quantity::Zds { d, s } => {
                    let state = asymptotics::solve_saddle(n, asymptotics::DEFAULT_TOL)?;
                    asymptotics::zds_boltzmann(state.h, d, s)?
                }
                Quantity::Yms { m, s } => asymptotics::approx_yms(n, m, s)?,
            })
        };
        Ok(ExpectationReport {
            n,
            quantity,
            exact: format!("{}/{}", exact.numer(), exact.denom()),
            exact_f64: rational_to_f64(&exact),
            asymptotic,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    fn table() -> CountTable {
        CountTable::build(60).unwrap()
    }

    #[test]
    fn zn_examples() {
        let t = table();
        assert_eq!(expect_zn(&t, 4).unwrap(), r(12, 5));
        assert_eq!(expect_zn(&t, 1).unwrap(), r(1, 1));
        assert_eq!(expect_zn(&t, 2).unwrap(), r(3, 2));
    }

    #[test]
    fn yn_examples() {
        let t = table();
        assert_eq!(expect_yn(&t, 4).unwrap(), r(7, 5));
        assert_eq!(expect_yn(&t, 1).unwrap(), r(1, 1));
        assert_eq!(expect_yn(&t, 3).unwrap(), r(4, 3));
    }

    #[test]
    fn zds_examples() {
        let t = table();
        assert_eq!(expect_zds(&t, 4, 1.0, 4.0).unwrap(), r(4, 5));
        assert_eq!(expect_zds(&t, 4, 4.0, 4.0).unwrap(), r(12, 5));
        assert_eq!(expect_zds(&t, 4, 1.0, 1.0).unwrap(), r(1, 5));
    }

    #[test]
    fn yms_examples() {
        let t = table();
        assert_eq!(expect_yms(&t, 4, 1, 4.0).unwrap(), r(4, 5));
        // no partition of 4 has a size repeated exactly three times
        assert_eq!(expect_yms(&t, 4, 3, 4.0).unwrap(), r(0, 1));
        assert_eq!(expect_yms(&t, 4, 5, 4.0).unwrap(), r(0, 1));
    }

    #[test]
    fn untruncated_limits() {
        let t = table();
        for n in 1..=60 {
            let big = n as f64;
            assert_eq!(
                expect_zds(&t, n, big, big).unwrap(),
                expect_zn(&t, n).unwrap()
            );
            let total: Rational = (1..=n).map(|m| expect_yms(&t, n, m, big).unwrap()).sum();
            assert_eq!(total, expect_yn(&t, n).unwrap());
        }
    }

    #[test]
    fn monotone_in_parameters() {
        let t = table();
        let n = 30;
        for s in 1..=n {
            for d in 1..n {
                let a = expect_zds(&t, n, d as f64, s as f64).unwrap();
                assert!(a <= expect_zds(&t, n, (d + 1) as f64, s as f64).unwrap());
                assert!(a <= expect_zds(&t, n, d as f64, (s + 1) as f64).unwrap());
            }
            for m in 1..=5 {
                assert!(
                    expect_yms(&t, n, m, s as f64).unwrap()
                        <= expect_yms(&t, n, m, (s + 1) as f64).unwrap()
                );
            }
        }
    }

    #[test]
    fn errors() {
        let t = table();
        assert!(expect_zn(&t, 61).is_err());
        assert!(expect_yms(&t, 4, 0, 1.0).is_err());
        assert!(expect_zds(&t, 4, 0.0, 1.0).is_err());
    }

    #[test]
    fn report_carries_both_values() {
        let t = CountTable::build(400).unwrap();
        let rep = ExpectationReport::compute(&t, 400, Quantity::Yn).unwrap();
        let asym = rep.asymptotic.unwrap();
        assert!((rep.exact_f64 / asym - 1.0).abs() < 0.05);
        let rep = ExpectationReport::compute(&t, 4, Quantity::Zds { d: 1.0, s: 4.0 }).unwrap();
        assert_eq!(rep.exact, "4/5");
    }
}
