//! Monte Carlo experiments comparing empirical joint laws of `(mu, sigma)`
//! against the exact oracle or the limit laws.
//!
//! An experiment draws `samples` uniform partitions of `n`, picks one part of
//! each by the configured procedure and bins the `(mu, sigma)` pairs. The
//! work is split into a fixed number of replicas; replica `r` uses
//! `RngStream::new(seed).split(r)` and the histograms are merged in replica
//! order, so the report depends only on the configuration and never on
//! thread scheduling.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::rational_to_f64;
use crate::error::{Error, Result};
use crate::limitlaws;
use crate::oracle::{JointTable, DEFAULT_ENUMERATION_CAP};
use crate::sampler::{
    draw_part, ExactSampler, FristedtSampler, Partition, Procedure, RngStream, DEFAULT_MAX_TRIALS,
};
use crate::C;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerMethod {
    Exact,
    Fristedt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    OracleExact,
    LimitLaw,
}

/// Points at which the empirical and reference laws are compared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridSpec {
    /// Integer rows (`d` for procedure 1, `m` otherwise) times integer size
    /// bounds `s`. For limit-law references the size is rescaled to
    /// `t = c s / sqrt(n)`, whose lattice spacing `c/sqrt(n)` is the natural
    /// resolution of an integer-valued size.
    Lattice { rows: Vec<u64>, sizes: Vec<u64> },
    /// Procedure 1 only: `mu <= n^{u/2}`, `sigma <= n^{v/2}`.
    LogScale { u: Vec<f64>, v: Vec<f64> },
}

impl GridSpec {
    /// Every row and size bound from 1 to `n`.
    pub fn full(n: u64) -> Self {
        GridSpec::Lattice {
            rows: (1..=n).collect(),
            sizes: (1..=n).collect(),
        }
    }

    /// Rows `1..=max_row`, all sizes `1..=n`.
    pub fn rows_upto(n: u64, max_row: u64) -> Self {
        GridSpec::Lattice {
            rows: (1..=max_row).collect(),
            sizes: (1..=n).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: u64,
    pub procedure: Procedure,
    pub samples: u64,
    pub seed: u64,
    pub method: SamplerMethod,
    pub reference: ReferenceKind,
    pub grid: GridSpec,
    /// Independent streams the samples are split across.
    pub replicas: u32,
    /// Per-sample rejection cap for the Fristedt sampler.
    pub max_trials: u64,
}

impl ExperimentConfig {
    /// Exact sampler, oracle reference on the full grid, 16 replicas.
    pub fn new(n: u64, procedure: Procedure, samples: u64, seed: u64) -> Self {
        ExperimentConfig {
            n,
            procedure,
            samples,
            seed,
            method: SamplerMethod::Exact,
            reference: ReferenceKind::OracleExact,
            grid: GridSpec::full(n),
            replicas: 16,
            max_trials: DEFAULT_MAX_TRIALS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument(
                "sample count must be positive".into(),
            ));
        }
        if self.replicas == 0 {
            return Err(Error::InvalidArgument(
                "replica count must be positive".into(),
            ));
        }
        if self.reference == ReferenceKind::OracleExact && self.n > DEFAULT_ENUMERATION_CAP {
            return Err(Error::CapExceeded {
                what: "oracle reference n",
                requested: self.n,
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        match &self.grid {
            GridSpec::Lattice { rows, sizes } => {
                if rows.is_empty() || sizes.is_empty() {
                    return Err(Error::InvalidArgument("empty grid".into()));
                }
            }
            GridSpec::LogScale { u, v } => {
                if self.procedure != Procedure::Uniform {
                    return Err(Error::InvalidArgument(
                        "log-scale grids apply to procedure 1 only".into(),
                    ));
                }
                if u.is_empty() || v.is_empty() {
                    return Err(Error::InvalidArgument("empty grid".into()));
                }
            }
        }
        Ok(())
    }
}

/// One grid point of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    /// `d` or `m` on a lattice, `u` on a log-scale grid.
    pub row: f64,
    /// `s` on a lattice, `v` on a log-scale grid.
    pub col: f64,
    /// `c s / sqrt(n)` on a lattice.
    pub t: Option<f64>,
    /// Draws falling in the cell; the empirical value is `count / samples`.
    pub count: u64,
    pub empirical: f64,
    pub reference: f64,
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub config: ExperimentConfig,
    /// Fristedt sampler only: accepted over total trials.
    pub acceptance_rate: Option<f64>,
    /// Sum of the `(mu, sigma)` histogram; always equals `samples`.
    pub histogram_total: u64,
    pub cells: Vec<Cell>,
    /// Sup-norm distance over the grid.
    pub ks: f64,
}

impl ComparisonReport {
    /// Sup-norm distance restricted to one lattice row (one `m` or `d`).
    pub fn ks_for_row(&self, row: f64) -> f64 {
        self.cells
            .iter()
            .filter(|c| c.row == row)
            .map(|c| c.diff)
            .fold(0.0, f64::max)
    }

    /// Empirical value at the largest size bound of a row, i.e. the
    /// empirical `P(mu = m)` on a full-width lattice.
    pub fn row_endpoint(&self, row: f64) -> Option<f64> {
        self.cells
            .iter()
            .filter(|c| c.row == row)
            .max_by(|a, b| a.col.total_cmp(&b.col))
            .map(|c| c.empirical)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `row,col,t,count,empirical,reference,diff` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "row,col,t,count,empirical,reference,diff")?;
        for c in &self.cells {
            let t = c.t.map(fmt_f64).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                c.row,
                c.col,
                t,
                c.count,
                fmt_f64(c.empirical),
                fmt_f64(c.reference),
                fmt_f64(c.diff)
            )?;
        }
        Ok(())
    }
}

/// Float with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Histogram of `(mu, sigma)` pairs.
pub type DrawHistogram = BTreeMap<(u64, u64), u64>;

struct ReplicaOutput {
    histogram: DrawHistogram,
    trials: u64,
    accepted: u64,
}

fn replica_sizes(samples: u64, replicas: u32) -> Vec<u64> {
    let r = replicas as u64;
    (0..r)
        .map(|i| samples / r + u64::from(i < samples % r))
        .collect()
}

/// Draws the `(mu, sigma)` histogram for a configuration.
pub fn draw_histogram(cfg: &ExperimentConfig) -> Result<(DrawHistogram, Option<f64>)> {
    cfg.validate()?;
    let base = RngStream::new(cfg.seed);
    let exact = match cfg.method {
        SamplerMethod::Exact => Some(ExactSampler::new(cfg.n)?),
        SamplerMethod::Fristedt => None,
    };
    let sizes = replica_sizes(cfg.samples, cfg.replicas);
    let outputs: Vec<Result<ReplicaOutput>> = sizes
        .par_iter()
        .enumerate()
        .map(|(r, &count)| {
            let mut rng = base.split(r as u64);
            let mut histogram = DrawHistogram::new();
            let mut fristedt = match cfg.method {
                SamplerMethod::Fristedt => {
                    Some(FristedtSampler::with_max_trials(cfg.n, cfg.max_trials)?)
                }
                SamplerMethod::Exact => None,
            };
            for _ in 0..count {
                let lambda: Partition = match (&exact, fristedt.as_mut()) {
                    (Some(s), _) => s.sample(&mut rng),
                    (None, Some(f)) => f.sample(&mut rng)?,
                    (None, None) => unreachable!(),
                };
                let d = draw_part(&lambda, cfg.procedure, &mut rng);
                *histogram.entry((d.mu, d.sigma)).or_insert(0) += 1;
            }
            let (trials, accepted) = fristedt.map_or((0, 0), |f| (f.trials(), f.accepted()));
            Ok(ReplicaOutput {
                histogram,
                trials,
                accepted,
            })
        })
        .collect();
    let mut histogram = DrawHistogram::new();
    let (mut trials, mut accepted) = (0u64, 0u64);
    for out in outputs {
        let out = out?;
        for (k, v) in out.histogram {
            *histogram.entry(k).or_insert(0) += v;
        }
        trials += out.trials;
        accepted += out.accepted;
    }
    let rate = (cfg.method == SamplerMethod::Fristedt).then(|| accepted as f64 / trials as f64);
    Ok((histogram, rate))
}

/// Count of draws with `mu` in the row condition and `sigma <= s`, for each
/// `s` in `sizes` (which need not be sorted).
fn cumulative_counts(hist: &DrawHistogram, keep: impl Fn(u64) -> bool, sizes: &[f64]) -> Vec<u64> {
    let mut by_sigma: BTreeMap<u64, u64> = BTreeMap::new();
    for (&(mu, sigma), &c) in hist {
        if keep(mu) {
            *by_sigma.entry(sigma).or_insert(0) += c;
        }
    }
    let mut cum = Vec::with_capacity(by_sigma.len());
    let mut acc = 0;
    for (&sigma, &c) in &by_sigma {
        acc += c;
        cum.push((sigma, acc));
    }
    sizes
        .iter()
        .map(|&s| {
            // last sigma <= s
            let idx = cum.partition_point(|&(sigma, _)| (sigma as f64) <= s);
            if idx == 0 {
                0
            } else {
                cum[idx - 1].1
            }
        })
        .collect()
}

/// Runs the experiment and compares it with the configured reference.
pub fn run_monte_carlo(cfg: &ExperimentConfig) -> Result<ComparisonReport> {
    let (histogram, acceptance_rate) = draw_histogram(cfg)?;
    compare_histogram(cfg, &histogram, acceptance_rate)
}

/// Builds the comparison report for an already drawn histogram.
pub fn compare_histogram(
    cfg: &ExperimentConfig,
    histogram: &DrawHistogram,
    acceptance_rate: Option<f64>,
) -> Result<ComparisonReport> {
    cfg.validate()?;
    let total: u64 = histogram.values().sum();
    let nf = cfg.n as f64;
    let oracle = match cfg.reference {
        ReferenceKind::OracleExact => Some(JointTable::build(cfg.n, cfg.procedure)?),
        ReferenceKind::LimitLaw => None,
    };
    let cumulative_rows = cfg.procedure == Procedure::Uniform;
    let mut cells = Vec::new();
    match &cfg.grid {
        GridSpec::Lattice { rows, sizes } => {
            let sizes_f: Vec<f64> = sizes.iter().map(|&s| s as f64).collect();
            for &row in rows {
                let counts = if cumulative_rows {
                    cumulative_counts(histogram, |mu| mu <= row, &sizes_f)
                } else {
                    cumulative_counts(histogram, |mu| mu == row, &sizes_f)
                };
                for (&s, count) in sizes.iter().zip(counts) {
                    let t = C * s as f64 / nf.sqrt();
                    let reference = match (&oracle, cfg.procedure) {
                        (Some(tab), _) => rational_to_f64(&tab.get(row, s as f64)),
                        (None, Procedure::Uniform) => {
                            let scale = 2.0 / nf.ln();
                            limitlaws::f1(scale * (row as f64).ln(), scale * (s as f64).ln())
                        }
                        (None, Procedure::Distinct) => limitlaws::l2(row, t),
                        (None, Procedure::Area) => limitlaws::l3(row, t),
                    };
                    cells.push(cell(
                        row as f64,
                        s as f64,
                        Some(t),
                        count,
                        cfg.samples,
                        reference,
                    ));
                }
            }
        }
        GridSpec::LogScale { u, v } => {
            let v_sizes: Vec<f64> = v.iter().map(|&v| nf.powf(v / 2.0)).collect();
            for &uu in u {
                let d = nf.powf(uu / 2.0);
                let counts = cumulative_counts(histogram, |mu| mu as f64 <= d, &v_sizes);
                for ((&vv, &s), count) in v.iter().zip(&v_sizes).zip(counts) {
                    let reference = match &oracle {
                        Some(tab) => rational_to_f64(&tab.get(d.floor().max(0.0) as u64, s)),
                        None => limitlaws::f1(uu, vv),
                    };
                    cells.push(cell(uu, vv, None, count, cfg.samples, reference));
                }
            }
        }
    }
    let ks = cells.iter().map(|c| c.diff).fold(0.0, f64::max);
    Ok(ComparisonReport {
        config: cfg.clone(),
        acceptance_rate,
        histogram_total: total,
        cells,
        ks,
    })
}

fn cell(row: f64, col: f64, t: Option<f64>, count: u64, samples: u64, reference: f64) -> Cell {
    let empirical = count as f64 / samples as f64;
    Cell {
        row,
        col,
        t,
        count,
        empirical,
        reference,
        diff: (empirical - reference).abs(),
    }
}

/// A function sampled on a two-dimensional grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridFunction {
    pub points: Vec<(f64, f64)>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn push(&mut self, row: f64, col: f64, value: f64) {
        self.points.push((row, col));
        self.values.push(value);
    }

    /// Reads `row,col,value` CSV, skipping a header line if present.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(r);
        let mut out = GridFunction::default();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let parsed: std::result::Result<Vec<f64>, _> =
                record.iter().take(3).map(str::parse::<f64>).collect();
            match parsed {
                Ok(v) if v.len() == 3 => out.push(v[0], v[1], v[2]),
                _ if i == 0 => continue,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "record {}: expected row,col,value",
                        i + 1
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// Sup-norm distance between two functions on the same grid.
pub fn ks_distance(empirical: &GridFunction, reference: &GridFunction) -> Result<f64> {
    if empirical.points.len() != reference.points.len() {
        return Err(Error::GridMismatch(format!(
            "{} points vs {}",
            empirical.points.len(),
            reference.points.len()
        )));
    }
    if let Some(i) =
        (0..empirical.points.len()).find(|&i| empirical.points[i] != reference.points[i])
    {
        return Err(Error::GridMismatch(format!(
            "point {i}: {:?} vs {:?}",
            empirical.points[i], reference.points[i]
        )));
    }
    Ok(empirical
        .values
        .iter()
        .zip(&reference.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Writes one JSON document per line.
pub fn write_json_lines<W: Write, T: Serialize>(
    mut w: W,
    items: impl IntoIterator<Item = T>,
) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, &item)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
