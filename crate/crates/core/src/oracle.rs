//! Brute-force ground truth: enumeration of all partitions of `n` and the
//! exact joint laws of `(mu, sigma)` under each draw procedure.
//!
//! For a uniform partition `lambda` of `n`:
//!
//! - procedure 1: `P(mu <= d, sigma <= s) = E(Z_{d,s} / Z_n)`
//! - procedure 2: `P(mu = m, sigma <= s) = E(Y_{m,s} / Y_n)`
//! - procedure 3: `P(mu = m, sigma <= s) = (m/n) E(sum_{j<=s} j [alpha_j = m])`
//!
//! The ratios in procedures 1 and 2 are accumulated per denominator value and
//! combined once, so a whole `(row, s)` grid costs one pass over the
//! partitions.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::counting::{rational_to_f64, CountTable};
use crate::error::{Error, Result};
use crate::sampler::{Partition, Procedure};
use crate::Rational;

/// Default largest `n` the enumerator accepts; `p(45) = 89134`.
pub const DEFAULT_ENUMERATION_CAP: u64 = 45;

/// Iterator over the partitions of `n` in reverse lexicographic order of
/// their nonincreasing part lists, starting from `[n]`.
#[derive(Debug, Clone)]
pub struct Partitions {
    parts: Vec<u64>,
    done: bool,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_parts(&self.parts).expect("parts are positive");
        // Strip the trailing ones, lower the last part above one by one and
        // refill greedily with parts no larger than it.
        let mut freed = 0;
        while self.parts.last() == Some(&1) {
            self.parts.pop();
            freed += 1;
        }
        match self.parts.pop() {
            None => self.done = true,
            Some(x) => {
                let y = x - 1;
                self.parts.push(y);
                let mut rest = freed + 1;
                while rest >= y {
                    self.parts.push(y);
                    rest -= y;
                }
                if rest > 0 {
                    self.parts.push(rest);
                }
            }
        }
        Some(out)
    }
}

/// All partitions of `n`, refusing `n` above [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_partitions(n: u64) -> Result<Partitions> {
    enumerate_partitions_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_partitions_with_cap(n: u64, cap: u64) -> Result<Partitions> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "enumeration n",
            requested: n,
            cap,
        });
    }
    Ok(Partitions {
        parts: if n == 0 { Vec::new() } else { vec![n] },
        done: false,
    })
}

/// Exact joint distribution of `(mu, sigma)` on the integer grid
/// `1..=n x 1..=n`.
///
/// Rows are `d` (cumulative, procedure 1) or `m` (point mass, procedures 2
/// and 3); columns are the size bound `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    n: u64,
    procedure: Procedure,
    /// `entries[row - 1][s - 1]`
    entries: Vec<Vec<Rational>>,
}

impl JointTable {
    /// Builds the table by enumerating every partition of `n` (`1 <= n <= 45`).
    pub fn build(n: u64, procedure: Procedure) -> Result<Self> {
        Self::build_with_cap(n, procedure, DEFAULT_ENUMERATION_CAP)
    }

    pub fn build_with_cap(n: u64, procedure: Procedure, cap: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("joint tables need n >= 1".into()));
        }
        let parts = enumerate_partitions_with_cap(n, cap)?;
        let nu = n as usize;
        // grid[key][row][j]: integer numerators, key is the per-partition
        // denominator (Z_n or Y_n; unused for procedure 3)
        let keys = if procedure == Procedure::Area {
            1
        } else {
            nu + 1
        };
        let mut grid = vec![vec![vec![0u64; nu + 1]; nu + 1]; keys];
        let mut count = 0u64;
        for lambda in parts {
            count += 1;
            let alpha = lambda.multiplicities();
            match procedure {
                Procedure::Uniform => {
                    let g = &mut grid[lambda.num_parts() as usize];
                    for (&j, &a) in alpha {
                        g[a as usize][j as usize] += a;
                    }
                }
                Procedure::Distinct => {
                    let g = &mut grid[lambda.num_distinct() as usize];
                    for (&j, &a) in alpha {
                        g[a as usize][j as usize] += 1;
                    }
                }
                Procedure::Area => {
                    for (&j, &a) in alpha {
                        grid[0][a as usize][j as usize] += a * j;
                    }
                }
            }
        }
        // cumulate over s, and over d for procedure 1
        for g in grid.iter_mut() {
            for row in g.iter_mut() {
                for j in 1..=nu {
                    row[j] += row[j - 1];
                }
            }
            if procedure == Procedure::Uniform {
                for r in 1..=nu {
                    let (done, rest) = g.split_at_mut(r);
                    for (x, y) in rest[0].iter_mut().zip(&done[r - 1]) {
                        *x += y;
                    }
                }
            }
        }
        let pn = BigInt::from(count);
        let (weights, den) = match procedure {
            Procedure::Area => (vec![BigInt::one()], BigInt::from(n) * &pn),
            _ => {
                let lcm = (1..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)));
                let w = (0..=n)
                    .map(|k| {
                        if k == 0 {
                            BigInt::zero()
                        } else {
                            &lcm / BigInt::from(k)
                        }
                    })
                    .collect();
                (w, lcm * &pn)
            }
        };
        let mut entries = vec![vec![Rational::zero(); nu]; nu];
        for r in 1..=nu {
            for s in 1..=nu {
                let mut num = BigInt::zero();
                for (key, g) in grid.iter().enumerate() {
                    let c = g[r][s];
                    if c != 0 {
                        num += &weights[key] * BigInt::from(c);
                    }
                }
                entries[r - 1][s - 1] = Rational::new(num, den.clone());
            }
        }
        Ok(JointTable {
            n,
            procedure,
            entries,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn procedure(&self) -> Procedure {
        self.procedure
    }

    /// Entry at integer row (`d` or `m`) and real size bound `s`.
    ///
    /// `s` is floored onto the grid; rows and columns past `n` are clamped,
    /// since no part exceeds `n` and no multiplicity exceeds `n`.
    pub fn get(&self, row: u64, s: f64) -> Rational {
        let nu = self.n as usize;
        if row == 0 || !(s >= 1.0) {
            return Rational::zero();
        }
        let col = (s.floor().min(self.n as f64) as usize).min(nu);
        if row as usize > nu {
            return match self.procedure {
                Procedure::Uniform => self.entries[nu - 1][col - 1].clone(),
                _ => Rational::zero(),
            };
        }
        self.entries[row as usize - 1][col - 1].clone()
    }

    /// Rows `1..=n` of entries, each over `s = 1..=n`.
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    /// `P(sigma <= n)`, summed over `m` for procedures 2 and 3.
    pub fn total_mass(&self) -> Rational {
        let last = self.n as usize - 1;
        match self.procedure {
            Procedure::Uniform => self.entries[last][last].clone(),
            _ => self.entries.iter().map(|row| row[last].clone()).sum(),
        }
    }

    /// Writes `m_or_d,s,num,den,float` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "m_or_d,s,num,den,float")?;
        for (r, row) in self.entries.iter().enumerate() {
            for (s, v) in row.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{},{:.16e}",
                    r + 1,
                    s + 1,
                    v.numer(),
                    v.denom(),
                    rational_to_f64(v)
                )?;
            }
        }
        Ok(())
    }
}

fn grouped_ratio(n: u64, by_denominator: BTreeMap<u64, u64>, count: u64) -> Rational {
    let sum: Rational = by_denominator
        .into_iter()
        .filter(|&(k, _)| k > 0)
        .map(|(k, num)| Rational::new(num.into(), k.into()))
        .sum();
    debug_assert!(n > 0);
    sum / Rational::from_integer(count.into())
}

/// `P(mu_1 <= d, sigma_1 <= s) = E(Z_{d,s} / Z_n)` by enumeration.
pub fn exact_joint_proc1(n: u64, d: f64, s: f64) -> Result<Rational> {
    let mut sums = BTreeMap::new();
    let mut count = 0;
    for lambda in enumerate_partitions(n)? {
        count += 1;
        *sums.entry(lambda.num_parts()).or_insert(0) += lambda.z_ds(d, s);
    }
    Ok(grouped_ratio(n, sums, count))
}

/// `P(mu_2 = m, sigma_2 <= s) = E(Y_{m,s} / Y_n)` by enumeration.
pub fn exact_joint_proc2(n: u64, m: u64, s: f64) -> Result<Rational> {
    let mut sums = BTreeMap::new();
    let mut count = 0;
    for lambda in enumerate_partitions(n)? {
        count += 1;
        *sums.entry(lambda.num_distinct()).or_insert(0) += lambda.y_ms(m, s);
    }
    Ok(grouped_ratio(n, sums, count))
}

/// `P(mu_3 = m, sigma_3 <= s)` by enumeration of the per-partition weights
/// `(m/n) sum_{j<=s} j [alpha_j = m]`.
pub fn exact_joint_proc3(n: u64, m: u64, s: f64) -> Result<Rational> {
    let mut num = 0u64;
    let mut count = 0u64;
    for lambda in enumerate_partitions(n)? {
        count += 1;
        num += lambda
            .multiplicities()
            .iter()
            .take_while(|(&j, _)| j as f64 <= s)
            .filter(|(_, &a)| a == m)
            .map(|(&j, _)| j * m)
            .sum::<u64>();
    }
    Ok(Rational::new(num.into(), (BigUint::from(n) * count).into()))
}

/// `sum_lambda Z_{d,s}(lambda)` over all partitions of `n`.
pub fn total_z_ds(n: u64, d: f64, s: f64) -> Result<u64> {
    Ok(enumerate_partitions(n)?.map(|l| l.z_ds(d, s)).sum())
}

/// `sum_lambda Y_{m,s}(lambda)` over all partitions of `n`.
pub fn total_y_ms(n: u64, m: u64, s: f64) -> Result<u64> {
    Ok(enumerate_partitions(n)?.map(|l| l.y_ms(m, s)).sum())
}

/// Number of parts of size `<= s`, summed over the partitions of `n` in
/// which every size `<= s` occurs at most `d` times.
pub fn total_constrained_parts(n: u64, d: f64, s: f64) -> Result<u64> {
    Ok(enumerate_partitions(n)?
        .filter(|l| {
            l.multiplicities()
                .iter()
                .all(|(&j, &a)| j as f64 > s || a as f64 <= d)
        })
        .map(|l| {
            l.multiplicities()
                .iter()
                .take_while(|(&j, _)| j as f64 <= s)
                .map(|(_, &a)| a)
                .sum::<u64>()
        })
        .sum())
}

/// Procedure-3 law from counts alone: `(m/n) sum_{j<=s} j Pr(alpha_j = m)`.
pub fn exact_joint_proc3_counts(table: &CountTable, n: u64, m: u64, s: f64) -> Result<Rational> {
    table.check(n)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if !(s >= 1.0) || m == 0 {
        return Ok(Rational::zero());
    }
    let top = (s.floor() as u64).min(n);
    let mut num = BigUint::zero();
    for j in 1..=top {
        num += table.count_multiplicity(n, j, m) * (j * m);
    }
    let den = table.p(n)? * n;
    Ok(Rational::new(num.into(), den.into()))
}
