//! Uniform random partitions and the three part-draw procedures.
//!
//! Two uniform samplers are provided:
//!
//! - [`ExactSampler`] unranks a uniform integer in `[0, p(n))` through the
//!   table `P(m, k)` of partitions of `m` with largest part at most `k`.
//!   The table is built on demand for the requested `n` and stored as
//!   fixed-width limbs, `n(n+1)/2` entries in all.
//! - [`FristedtSampler`] draws independent geometric multiplicities
//!   `Pr(gamma_j = k) = (1 - q^j) q^{jk}` with `q = exp(-c/sqrt n)` and keeps
//!   the draw when `sum_j j gamma_j = n`. Conditioned on acceptance the
//!   multiplicities are exactly those of a uniform partition of `n`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counting::CountTable;
use crate::error::{Error, Result};
use crate::C;

/// Seeded, reproducible random stream.
///
/// The seed keys a ChaCha8 generator. Replica `r` keeps the key and selects
/// ChaCha stream `id ^ (r + 1)`, where `id` is the parent's stream (0 at the
/// root), so replicas of one seed never overlap and different seeds never
/// share replicas.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            stream: 0,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream
    }

    /// Independent stream for replica `r`.
    pub fn split(&self, r: u64) -> RngStream {
        let stream = self.stream ^ r.wrapping_add(1);
        let mut inner = ChaCha8Rng::seed_from_u64(self.seed);
        inner.set_stream(stream);
        RngStream {
            seed: self.seed,
            stream,
            inner,
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// A partition of `n` stored as its nonzero multiplicities `j -> alpha_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<u64, u64>", into = "BTreeMap<u64, u64>")]
pub struct Partition {
    n: u64,
    alpha: BTreeMap<u64, u64>,
}

impl Partition {
    /// Builds a partition from multiplicities; zero entries are dropped.
    pub fn from_multiplicities(alpha: BTreeMap<u64, u64>) -> Result<Self> {
        let mut n: u64 = 0;
        let mut clean = BTreeMap::new();
        for (j, a) in alpha {
            if j == 0 {
                return Err(Error::InvalidArgument("part sizes must be positive".into()));
            }
            if a == 0 {
                continue;
            }
            n = j
                .checked_mul(a)
                .and_then(|x| n.checked_add(x))
                .ok_or_else(|| Error::InvalidArgument("partition total overflows".into()))?;
            clean.insert(j, a);
        }
        Ok(Partition { n, alpha: clean })
    }

    /// Builds a partition from a list of parts in any order.
    pub fn from_parts(parts: &[u64]) -> Result<Self> {
        let mut alpha = BTreeMap::new();
        for &p in parts {
            *alpha.entry(p).or_insert(0) += 1;
        }
        Self::from_multiplicities(alpha)
    }

    pub fn empty() -> Self {
        Partition {
            n: 0,
            alpha: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn multiplicities(&self) -> &BTreeMap<u64, u64> {
        &self.alpha
    }

    /// `alpha_j`, zero when `j` is not a part.
    pub fn alpha(&self, j: u64) -> u64 {
        self.alpha.get(&j).copied().unwrap_or(0)
    }

    /// Parts in nonincreasing order.
    pub fn parts(&self) -> Vec<u64> {
        self.alpha
            .iter()
            .rev()
            .flat_map(|(&j, &a)| std::iter::repeat_n(j, a as usize))
            .collect()
    }

    /// `Z_n`: number of parts counted with multiplicity.
    pub fn num_parts(&self) -> u64 {
        self.alpha.values().sum()
    }

    /// `Y_n`: number of distinct part sizes.
    pub fn num_distinct(&self) -> u64 {
        self.alpha.len() as u64
    }

    /// `Z_{d,s}`: parts of size `<= s` whose size occurs at most `d` times.
    pub fn z_ds(&self, d: f64, s: f64) -> u64 {
        self.alpha
            .iter()
            .take_while(|(&j, _)| j as f64 <= s)
            .filter(|(_, &a)| a as f64 <= d)
            .map(|(_, &a)| a)
            .sum()
    }

    /// `Y_{m,s}`: distinct sizes `<= s` occurring exactly `m` times.
    pub fn y_ms(&self, m: u64, s: f64) -> u64 {
        self.alpha
            .iter()
            .take_while(|(&j, _)| j as f64 <= s)
            .filter(|(_, &a)| a == m)
            .count() as u64
    }
}

impl TryFrom<BTreeMap<u64, u64>> for Partition {
    type Error = Error;
    fn try_from(alpha: BTreeMap<u64, u64>) -> Result<Self> {
        Partition::from_multiplicities(alpha)
    }
}

impl From<Partition> for BTreeMap<u64, u64> {
    fn from(p: Partition) -> Self {
        p.alpha
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts().iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Rule for picking one part of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Procedure {
    /// Uniform over all parts counted with multiplicity.
    Uniform,
    /// Uniform over distinct part sizes.
    Distinct,
    /// Size `j` with probability `j alpha_j / n`.
    Area,
}

impl Procedure {
    pub const ALL: [Procedure; 3] = [Procedure::Uniform, Procedure::Distinct, Procedure::Area];

    pub fn id(self) -> u8 {
        match self {
            Procedure::Uniform => 1,
            Procedure::Distinct => 2,
            Procedure::Area => 3,
        }
    }
}

impl TryFrom<u8> for Procedure {
    type Error = Error;
    fn try_from(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Procedure::Uniform),
            2 => Ok(Procedure::Distinct),
            3 => Ok(Procedure::Area),
            _ => Err(Error::InvalidArgument(format!(
                "procedure must be 1, 2 or 3, got {id}"
            ))),
        }
    }
}

impl From<Procedure> for u8 {
    fn from(p: Procedure) -> u8 {
        p.id()
    }
}

/// Outcome of one draw: the multiplicity `mu` and the size `sigma` of the
/// selected part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartDraw {
    pub procedure: Procedure,
    pub mu: u64,
    pub sigma: u64,
}

/// Picks one part of `lambda` according to `procedure`.
///
/// Panics on the empty partition, which has no parts.
pub fn draw_part<R: Rng + ?Sized>(
    lambda: &Partition,
    procedure: Procedure,
    rng: &mut R,
) -> PartDraw {
    assert!(
        lambda.n() > 0,
        "cannot draw a part from the empty partition"
    );
    let alpha = lambda.multiplicities();
    let sigma = match procedure {
        Procedure::Uniform => {
            let mut u = rng.random_range(0..lambda.num_parts());
            pick_weighted(alpha, &mut u, |_, a| a)
        }
        Procedure::Distinct => {
            let idx = rng.random_range(0..alpha.len());
            *alpha.keys().nth(idx).expect("index within distinct sizes")
        }
        Procedure::Area => {
            let mut u = rng.random_range(0..lambda.n());
            pick_weighted(alpha, &mut u, |j, a| j * a)
        }
    };
    PartDraw {
        procedure,
        mu: alpha[&sigma],
        sigma,
    }
}

fn pick_weighted(alpha: &BTreeMap<u64, u64>, u: &mut u64, weight: impl Fn(u64, u64) -> u64) -> u64 {
    for (&j, &a) in alpha {
        let w = weight(j, a);
        if *u < w {
            return j;
        }
        *u -= w;
    }
    unreachable!("weights sum to the drawn range")
}

/// Little-endian fixed-width unsigned arithmetic for the unranking table.
mod limbs {
    use std::cmp::Ordering;

    pub fn add(dst: &mut [u64], a: &[u64], b: &[u64]) {
        let mut carry = false;
        for i in 0..dst.len() {
            let (s1, c1) = a[i].overflowing_add(b[i]);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            dst[i] = s2;
            carry = c1 || c2;
        }
        debug_assert!(!carry, "limb width too small");
    }

    pub fn sub_assign(a: &mut [u64], b: &[u64]) {
        let mut borrow = false;
        for i in 0..a.len() {
            let (d1, b1) = a[i].overflowing_sub(b[i]);
            let (d2, b2) = d1.overflowing_sub(borrow as u64);
            a[i] = d2;
            borrow = b1 || b2;
        }
        debug_assert!(!borrow, "negative limb difference");
    }

    pub fn cmp(a: &[u64], b: &[u64]) -> Ordering {
        for i in (0..a.len()).rev() {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn bits(a: &[u64]) -> u64 {
        for i in (0..a.len()).rev() {
            if a[i] != 0 {
                return 64 * i as u64 + (64 - a[i].leading_zeros() as u64);
            }
        }
        0
    }
}

/// Exactly uniform sampler for partitions of a fixed `n`, by unranking.
#[derive(Debug, Clone)]
pub struct ExactSampler {
    n: u64,
    width: usize,
    /// Row `m >= 1` holds `P(m, k)` for `k = 1..=m`, starting at entry `m(m-1)/2`.
    data: Vec<u64>,
    one: Vec<u64>,
}

impl ExactSampler {
    /// Builds the `P(m, k)` table for all `m, k <= n`.
    pub fn new(n: u64) -> Result<Self> {
        const CAP: u64 = 20_000;
        if n > CAP {
            return Err(Error::CapExceeded {
                what: "exact sampler n",
                requested: n,
                cap: CAP,
            });
        }
        let pn = CountTable::build(n)?.p(n)?.clone();
        let width = (pn.bits() as usize).div_ceil(64).max(1);
        let nu = n as usize;
        let mut one = vec![0u64; width];
        one[0] = 1;
        let mut s = ExactSampler {
            n,
            width,
            data: vec![0u64; nu * (nu + 1) / 2 * width],
            one,
        };
        let zeros = vec![0u64; width];
        let mut tmp = vec![0u64; width];
        for m in 1..=nu {
            for k in 1..=m {
                // P(m, k) = P(m, k-1) + P(m-k, k), with P(m, 0) = 0 for m >= 1
                let prev = if k == 1 {
                    &zeros[..]
                } else {
                    s.entry(m, k - 1)
                };
                limbs::add(&mut tmp, prev, s.get(m - k, k));
                let at = s.index(m, k);
                s.data[at..at + width].copy_from_slice(&tmp);
            }
        }
        Ok(s)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `P(n, n) = p(n)`, the size of the sampled population.
    pub fn population(&self) -> num_bigint::BigUint {
        let top = if self.n == 0 {
            &self.one[..]
        } else {
            self.get(self.n as usize, self.n as usize)
        };
        let digits: Vec<u32> = top
            .iter()
            .flat_map(|&w| [w as u32, (w >> 32) as u32])
            .collect();
        num_bigint::BigUint::new(digits)
    }

    fn index(&self, m: usize, k: usize) -> usize {
        (m * (m - 1) / 2 + (k - 1)) * self.width
    }

    fn entry(&self, m: usize, k: usize) -> &[u64] {
        let at = self.index(m, k);
        &self.data[at..at + self.width]
    }

    /// Partitions of `m` with largest part at most `k`.
    fn get(&self, m: usize, k: usize) -> &[u64] {
        if m == 0 {
            return &self.one;
        }
        self.entry(m, k.min(m))
    }

    /// Uniform integer in `[0, bound)` by rejection on the bit length.
    fn below<R: Rng + ?Sized>(&self, bound: &[u64], rng: &mut R) -> Vec<u64> {
        let bits = limbs::bits(bound);
        debug_assert!(bits > 0);
        let mut u = vec![0u64; self.width];
        loop {
            for (i, w) in u.iter_mut().enumerate() {
                let lo = 64 * i as u64;
                *w = if lo >= bits {
                    0
                } else if bits - lo >= 64 {
                    rng.next_u64()
                } else {
                    rng.next_u64() & ((1u64 << (bits - lo)) - 1)
                };
            }
            if limbs::cmp(&u, bound) == Ordering::Less {
                return u;
            }
        }
    }

    /// One uniformly random partition of `n`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Partition {
        let nu = self.n as usize;
        let mut alpha = BTreeMap::new();
        if nu == 0 {
            return Partition::empty();
        }
        let mut u = self.below(self.get(nu, nu), rng);
        let (mut m, mut k) = (nu, nu);
        while m > 0 {
            let mut j = k.min(m);
            loop {
                // partitions of m whose largest part is exactly j
                let c = self.get(m - j, j);
                if limbs::cmp(&u, c) == Ordering::Less {
                    break;
                }
                limbs::sub_assign(&mut u, c);
                j -= 1;
            }
            *alpha.entry(j as u64).or_insert(0) += 1;
            m -= j;
            k = j;
        }
        Partition { n: self.n, alpha }
    }
}

/// Uniform partition of `n` by unranking; `n` must be covered by `table`.
///
/// Builds an [`ExactSampler`] on every call, so repeated sampling should keep
/// the sampler instead.
pub fn sample_uniform_exact<R: Rng + ?Sized>(
    table: &CountTable,
    n: u64,
    rng: &mut R,
) -> Result<Partition> {
    table.check(n)?;
    Ok(ExactSampler::new(n)?.sample(rng))
}

/// Default cap on rejected trials per accepted Fristedt sample.
pub const DEFAULT_MAX_TRIALS: u64 = 10_000_000;

/// Rejection sampler through independent geometric multiplicities.
#[derive(Debug, Clone)]
pub struct FristedtSampler {
    n: u64,
    ln_q: f64,
    max_trials: u64,
    trials: u64,
    accepted: u64,
}

impl FristedtSampler {
    pub fn new(n: u64) -> Result<Self> {
        Self::with_max_trials(n, DEFAULT_MAX_TRIALS)
    }

    pub fn with_max_trials(n: u64, max_trials: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "Fristedt sampler needs n >= 1".into(),
            ));
        }
        Ok(FristedtSampler {
            n,
            ln_q: -C / (n as f64).sqrt(),
            max_trials,
            trials: 0,
            accepted: 0,
        })
    }

    /// `q = exp(-c / sqrt n)`.
    pub fn q(&self) -> f64 {
        self.ln_q.exp()
    }

    /// Trials run so far, accepted or not.
    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    /// Fraction of trials accepted so far.
    pub fn acceptance_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.accepted as f64 / self.trials as f64
        }
    }

    /// One trial: `Some` when the geometric draw sums to exactly `n`.
    ///
    /// Indices with `gamma_j > 0` are found by geometric skips under the
    /// bound `q^j` for the current `j`, thinned by `q^{j'-j}` at the landing
    /// index `j'`; the trial stops early once the total passes `n`.
    fn trial<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Partition> {
        let n = self.n;
        let mut alpha = BTreeMap::new();
        let mut total = 0u64;
        let mut j = 1u64;
        while j <= n {
            let bound = (j as f64 * self.ln_q).exp();
            let u: f64 = 1.0 - rng.random::<f64>();
            let skip = (u.ln() / (-bound).ln_1p()).floor();
            if !(skip < (n - j + 1) as f64) {
                break;
            }
            let cand = j + skip as u64;
            let thin: f64 = rng.random();
            if thin < (skip * self.ln_q).exp() {
                // gamma_cand >= 1; the excess is geometric with ratio q^cand
                let w: f64 = 1.0 - rng.random::<f64>();
                let extra = (w.ln() / (cand as f64 * self.ln_q)).floor();
                let count = 1 + extra.min(n as f64) as u64;
                total = total.saturating_add(cand.saturating_mul(count));
                if total > n {
                    return None;
                }
                alpha.insert(cand, count);
            }
            j = cand + 1;
        }
        (total == n).then_some(Partition { n, alpha })
    }

    /// Runs trials until one is accepted or the trial cap is reached.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Partition> {
        let start = self.trials;
        loop {
            if self.trials - start >= self.max_trials {
                return Err(Error::RetryLimitExceeded {
                    trials: self.trials,
                    accepted: self.accepted,
                });
            }
            self.trials += 1;
            if let Some(p) = self.trial(rng) {
                self.accepted += 1;
                return Ok(p);
            }
        }
    }
}

/// Uniform partition of `n` through the geometric conditioning device.
pub fn sample_uniform_fristedt<R: Rng + ?Sized>(n: u64, rng: &mut R) -> Result<Partition> {
    FristedtSampler::new(n)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn lam(parts: &[u64]) -> Partition {
        Partition::from_parts(parts).unwrap()
    }

    #[test]
    fn statistics() {
        let p = lam(&[2, 1, 1]);
        assert_eq!((p.num_parts(), p.num_distinct()), (3, 2));
        assert_eq!(p.z_ds(1.0, 4.0), 1);
        assert_eq!(lam(&[4]).y_ms(1, 4.0), 1);
        assert_eq!(p.y_ms(2, 1.0), 1);
        assert_eq!(p.y_ms(2, 0.5), 0);
        assert_eq!(p.to_string(), "2+1+1");
    }

    #[test]
    fn rejects_zero_part() {
        assert!(Partition::from_parts(&[0, 1]).is_err());
    }

    #[test]
    fn json_shape() {
        let p = lam(&[2, 1, 1]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"1":2,"2":1}"#);
        let back: Partition = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let d = PartDraw {
            procedure: Procedure::Area,
            mu: 2,
            sigma: 1,
        };
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"procedure":3,"mu":2,"sigma":1}"#
        );
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = RngStream::new(7);
        let mut b = RngStream::new(7);
        let xs: Vec<u64> = (0..10).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..10).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        let mut c = a.split(1);
        assert_ne!(c.next_u64(), RngStream::new(7).next_u64());
    }

    #[test]
    fn replicas_differ_across_seeds() {
        let first = |seed: u64, r: u64| RngStream::new(seed).split(r).next_u64();
        assert_eq!(first(3, 5), first(3, 5));
        assert_ne!(first(0, 1), first(1, 0));
        assert_ne!(first(3, 0), first(3, 1));
        assert_eq!(RngStream::new(3).split(4).stream_id(), 5);
    }

    #[test]
    fn exact_sampler_trivial_sizes() {
        let mut rng = RngStream::new(1);
        let s1 = ExactSampler::new(1).unwrap();
        for _ in 0..10 {
            assert_eq!(s1.sample(&mut rng), lam(&[1]));
        }
        assert_eq!(
            ExactSampler::new(0).unwrap().sample(&mut rng),
            Partition::empty()
        );
        let s2 = ExactSampler::new(2).unwrap();
        let ones = (0..20_000)
            .filter(|_| s2.sample(&mut rng) == lam(&[1, 1]))
            .count();
        assert!((ones as f64 / 20_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn exact_sampler_covers_all_partitions() {
        let mut rng = RngStream::new(3);
        let s = ExactSampler::new(7).unwrap();
        let mut seen = HashMap::new();
        for _ in 0..15_000 {
            let p = s.sample(&mut rng);
            assert_eq!(p.n(), 7);
            *seen.entry(p).or_insert(0u32) += 1;
        }
        assert_eq!(seen.len(), 15);
        for &c in seen.values() {
            assert!((c as f64 - 1000.0).abs() < 160.0, "{c}");
        }
    }

    #[test]
    fn unranking_table_matches_counts() {
        let t = CountTable::build(300).unwrap();
        for n in [0u64, 1, 2, 9, 40, 300] {
            assert_eq!(&ExactSampler::new(n).unwrap().population(), t.p(n).unwrap());
        }
    }

    #[test]
    fn exact_sampler_large_n_is_valid() {
        let mut rng = RngStream::new(5);
        let s = ExactSampler::new(600).unwrap();
        for _ in 0..50 {
            let p = s.sample(&mut rng);
            let total: u64 = p.multiplicities().iter().map(|(j, a)| j * a).sum();
            assert_eq!(total, 600);
        }
    }

    #[test]
    fn sample_uniform_exact_checks_table() {
        let t = CountTable::build(5).unwrap();
        let mut rng = RngStream::new(0);
        assert!(sample_uniform_exact(&t, 6, &mut rng).is_err());
        assert_eq!(sample_uniform_exact(&t, 5, &mut rng).unwrap().n(), 5);
    }

    #[test]
    fn fristedt_two() {
        let mut rng = RngStream::new(11);
        let mut s = FristedtSampler::new(2).unwrap();
        let ones = (0..20_000)
            .filter(|_| s.sample(&mut rng).unwrap() == lam(&[1, 1]))
            .count();
        assert!((ones as f64 / 20_000.0 - 0.5).abs() < 0.02);
        assert!(s.acceptance_rate() > 0.0 && s.acceptance_rate() <= 1.0);
    }

    #[test]
    fn fristedt_outputs_are_partitions_of_n() {
        let mut rng = RngStream::new(12);
        let mut s = FristedtSampler::new(200).unwrap();
        for _ in 0..100 {
            let p = s.sample(&mut rng).unwrap();
            let total: u64 = p.multiplicities().iter().map(|(j, a)| j * a).sum();
            assert_eq!(total, 200);
            assert_eq!(p.n(), 200);
        }
    }

    #[test]
    fn fristedt_retry_limit() {
        let mut rng = RngStream::new(13);
        let mut s = FristedtSampler::with_max_trials(400, 1).unwrap();
        let mut hit = false;
        for _ in 0..50 {
            if let Err(e) = s.sample(&mut rng) {
                assert!(matches!(e, Error::RetryLimitExceeded { .. }));
                hit = true;
                break;
            }
        }
        assert!(hit);
    }

    #[test]
    fn draw_conditional_laws() {
        let p = lam(&[2, 1, 1]);
        let mut rng = RngStream::new(21);
        let n = 100_000;
        // (procedure, P(sigma = 1))
        for (proc_, want) in [
            (Procedure::Uniform, 2.0 / 3.0),
            (Procedure::Distinct, 0.5),
            (Procedure::Area, 0.5),
        ] {
            let mut ones = 0;
            for _ in 0..n {
                let d = draw_part(&p, proc_, &mut rng);
                assert_eq!(d.mu, p.alpha(d.sigma));
                ones += (d.sigma == 1) as u32;
            }
            let freq = ones as f64 / n as f64;
            let sd = (want * (1.0 - want) / n as f64).sqrt();
            assert!((freq - want).abs() < 4.0 * sd, "{proc_:?}: {freq}");
        }
    }

    #[test]
    fn procedure_ids() {
        for p in Procedure::ALL {
            assert_eq!(Procedure::try_from(p.id()).unwrap(), p);
        }
        assert!(Procedure::try_from(4).is_err());
    }
}
