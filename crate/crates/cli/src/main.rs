use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use partsample::asymptotics::{self, DEFAULT_TOL};
use partsample::counting::{rational_to_f64, CountTable};
use partsample::expectations::{expect_yms, expect_zds, ExpectationReport, Quantity};
use partsample::harness::{
    fmt_f64, ks_distance, run_monte_carlo, write_json_lines, ExperimentConfig, GridFunction,
    GridSpec, ReferenceKind, SamplerMethod,
};
use partsample::limitlaws;
use partsample::oracle::{
    total_constrained_parts, total_y_ms, total_z_ds, JointTable, DEFAULT_ENUMERATION_CAP,
};
use partsample::sampler::{draw_part, ExactSampler, FristedtSampler, DEFAULT_MAX_TRIALS};
use partsample::series::{lemma1_coefficient, lemma2_coefficient};
use partsample::{Error, Procedure, Rational, RngStream};

#[derive(Parser)]
#[command(
    name = "partsample",
    version,
    about = "Exact and asymptotic laws of a part sampled from a random integer partition"
)]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output format; commands default to plain text or CSV.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Partition numbers and multiplicity probabilities.
    Count(CountArgs),
    /// Check the generating-function identities against direct counts.
    Series(SeriesArgs),
    /// Exact expectations of part statistics.
    Expect(ExpectArgs),
    /// Uniform random partitions, one JSON object per line.
    Sample(SampleArgs),
    /// Sampled parts (procedure, multiplicity, size), one per line.
    Draw(DrawArgs),
    /// Exact joint law by enumeration.
    Oracle(OracleArgs),
    /// Limiting joint law on a grid.
    Limit(LimitArgs),
    /// Asymptotic approximations next to exact values.
    Asymp(AsympArgs),
    /// Monte Carlo comparison against the exact or limiting law.
    Simulate(SimulateArgs),
    /// Sup-norm distance between two `row,col,value` CSV files.
    Compare(CompareArgs),
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, required_unless_present = "prob")]
    n: Option<u64>,
    /// Refuse to build a table beyond this index.
    #[arg(long)]
    table_limit: Option<u64>,
    /// Print `P(alpha_j = m)` for a partition of `n` as `num/den`.
    #[arg(long, num_args = 3, value_names = ["N", "J", "M"], conflicts_with = "n")]
    prob: Option<Vec<u64>>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SeriesArgs {
    /// Identity for the number of parts `<= s` with multiplicity `<= d`.
    #[arg(long, num_args = 3, value_names = ["N", "D", "S"])]
    verify_lemma1: Option<Vec<f64>>,
    /// Identity for the number of sizes `<= s` with multiplicity exactly `m`.
    #[arg(long, num_args = 3, value_names = ["N", "M", "S"])]
    verify_lemma2: Option<Vec<f64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stat {
    Zn,
    Yn,
    Zds,
    Yms,
}

#[derive(Args)]
struct ExpectArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum)]
    stat: Stat,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    m: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Fristedt,
}

impl From<Method> for SamplerMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Exact => SamplerMethod::Exact,
            Method::Fristedt => SamplerMethod::Fristedt,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,
    /// Rejection cap per partition for the Fristedt sampler.
    #[arg(long, default_value_t = DEFAULT_MAX_TRIALS)]
    max_trials: u64,
}

#[derive(Args)]
struct DrawArgs {
    #[arg(long)]
    n: u64,
    #[arg(long = "proc", value_parser = parse_procedure)]
    procedure: Procedure,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,
    #[arg(long, default_value_t = DEFAULT_MAX_TRIALS)]
    max_trials: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: u64,
    #[arg(long = "proc", value_parser = parse_procedure)]
    procedure: Procedure,
    /// Restrict the rows and sizes, e.g. `m=1..3,s=1..10`.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long = "proc", value_parser = parse_procedure)]
    procedure: Procedure,
    /// `u=A:B:K,v=A:B:K` for procedure 1, `m=1..5,t=0:6:61` otherwise.
    #[arg(long)]
    grid: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Pn,
    Saddle,
    /// `phi_{d,s}` with its product factor, against the exact `E(Z_{d,s})`.
    Phi,
    /// Boltzmann estimate of `E(Z_{d,s})` against the exact value.
    Zds,
    Ez,
    Ey,
}

#[derive(Clone, Copy, ValueEnum)]
enum PnApprox {
    Hayman,
    HardyRamanujan,
    Rademacher,
}

#[derive(Args)]
struct AsympArgs {
    #[arg(long, value_enum)]
    what: What,
    /// One or more comma-separated indices.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    /// Approximation used for `pn`; values are natural logs.
    #[arg(long, value_enum, default_value_t = PnApprox::Hayman)]
    approx: PnApprox,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reference {
    Oracle,
    Limit,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: u64,
    #[arg(long = "proc", value_parser = parse_procedure)]
    procedure: Procedure,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Reference::Oracle)]
    reference: Reference,
    /// `d=..,s=..` or `m=..,s=..` lattice, or `u=..,v=..` for procedure 1.
    /// Defaults to every row and size up to `n`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = 16)]
    replicas: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_TRIALS)]
    max_trials: u64,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    empirical: PathBuf,
    #[arg(long)]
    reference: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

fn parse_procedure(s: &str) -> std::result::Result<Procedure, String> {
    let id: u8 = s
        .parse()
        .map_err(|_| format!("procedure must be 1, 2 or 3, got {s}"))?;
    Procedure::try_from(id).map_err(|e| e.to_string())
}

/// One grid axis: `a..b` (integers), `a:b:k` (k evenly spaced points),
/// `x;y;z` or a single value.
fn parse_axis(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("bad grid axis '{spec}'"));
    if let Some((a, b)) = spec.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).map(|x| x as f64).collect());
    }
    let fields: Vec<&str> = spec.split(':').collect();
    if fields.len() == 3 {
        let a: f64 = fields[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = fields[1].trim().parse().map_err(|_| bad())?;
        let k: usize = fields[2].trim().parse().map_err(|_| bad())?;
        return Ok(match k {
            0 => vec![],
            1 => vec![a],
            _ => (0..k)
                .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
                .collect(),
        });
    }
    spec.split(';')
        .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
        .collect()
}

/// `key=axis,key=axis` into the two named axes, in the order given by `keys`.
fn parse_grid(spec: &str, keys: &[(&str, &str)]) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let mut first = None;
    let mut second = None;
    for part in spec.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("grid entries look like key=axis, got '{part}'"))
        })?;
        let k = k.trim();
        if keys.iter().any(|&(a, _)| a == k) {
            first = Some(parse_axis(v)?);
        } else if keys.iter().any(|&(_, b)| b == k) {
            second = Some(parse_axis(v)?);
        } else {
            return Err(CliError::Usage(format!("unexpected grid key '{k}'")));
        }
    }
    match (first, second) {
        (Some(a), Some(b)) if !a.is_empty() && !b.is_empty() => Ok((a, b)),
        _ => Err(CliError::Usage(format!("grid '{spec}' needs both axes"))),
    }
}

fn integers(xs: &[f64], what: &str) -> CliResult<Vec<u64>> {
    xs.iter()
        .map(|&x| {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as u64)
            } else {
                Err(CliError::Usage(format!(
                    "{what} must be non-negative integers, got {x}"
                )))
            }
        })
        .collect()
}

fn row_key(p: Procedure) -> &'static str {
    if p == Procedure::Uniform {
        "d"
    } else {
        "m"
    }
}

fn frac(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

struct Ctx {
    seed: u64,
    format: Option<Format>,
    out: Box<dyn Write>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out: Box<dyn Write> = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut ctx = Ctx {
        seed: cli.seed,
        format: cli.format,
        out,
    };
    let result = run(cli.command, &mut ctx).and_then(|()| ctx.out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_cap() { 3 } else { 2 })
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command, ctx: &mut Ctx) -> CliResult {
    match cmd {
        Command::Count(a) => count(a, ctx),
        Command::Series(a) => series(a, ctx),
        Command::Expect(a) => expect(a, ctx),
        Command::Sample(a) => sample(a, ctx),
        Command::Draw(a) => draw(a, ctx),
        Command::Oracle(a) => oracle(a, ctx),
        Command::Limit(a) => limit(a, ctx),
        Command::Asymp(a) => asymp(a, ctx),
        Command::Simulate(a) => simulate(a, ctx),
        Command::Compare(a) => compare(a, ctx),
    }
}

fn table_for(n: u64, limit: Option<u64>) -> CliResult<CountTable> {
    Ok(match limit {
        Some(cap) => CountTable::build_with_cap(n, cap)?,
        None => CountTable::build(n)?,
    })
}

fn count(a: CountArgs, ctx: &mut Ctx) -> CliResult {
    if let Some(p) = a.prob {
        let (n, j, m) = (p[0], p[1], p[2]);
        let table = table_for(n, a.table_limit)?;
        let r = table.prob_multiplicity(n, j, m)?;
        match ctx.format {
            None => writeln!(ctx.out, "{}", frac(&r))?,
            Some(Format::Csv) => {
                writeln!(ctx.out, "n,j,m,exact,float")?;
                writeln!(
                    ctx.out,
                    "{n},{j},{m},{},{}",
                    frac(&r),
                    fmt_f64(rational_to_f64(&r))
                )?;
            }
            Some(Format::Json) => writeln!(
                ctx.out,
                "{}",
                json!({"n": n, "j": j, "m": m, "exact": frac(&r), "float": rational_to_f64(&r)})
            )?,
        }
        return Ok(());
    }
    let n = a.n.expect("clap requires n without --prob");
    let table = table_for(n, a.table_limit)?;
    let p = table.p(n)?;
    match ctx.format {
        None => writeln!(ctx.out, "{p}")?,
        Some(Format::Csv) => writeln!(ctx.out, "n,p\n{n},{p}")?,
        Some(Format::Json) => writeln!(ctx.out, "{}", json!({"n": n, "p": p.to_string()}))?,
    }
    Ok(())
}

fn whole(x: f64, what: &str) -> CliResult<u64> {
    integers(&[x], what).map(|v| v[0])
}

fn series(a: SeriesArgs, ctx: &mut Ctx) -> CliResult {
    // All three columns are totals over the partitions of n.
    let (header, row) = if let Some(v) = a.verify_lemma1 {
        let (n, d, s) = (whole(v[0], "n")?, v[1], v[2]);
        let table = CountTable::build(n)?;
        let identity = lemma1_coefficient(n as usize, n as usize, d, s)?;
        let direct =
            expect_zds(&table, n, d, s)? * Rational::from_integer(table.p(n)?.clone().into());
        let (enumerated, constrained) = if n <= DEFAULT_ENUMERATION_CAP {
            (
                total_z_ds(n, d, s)?.to_string(),
                total_constrained_parts(n, d, s)?.to_string(),
            )
        } else {
            ("NA".into(), "NA".into())
        };
        (
            "n,d,s,identity,direct,enumeration,constrained_enumeration",
            vec![
                n.to_string(),
                d.to_string(),
                s.to_string(),
                identity.to_string(),
                direct.to_string(),
                enumerated,
                constrained,
            ],
        )
    } else {
        let v = a.verify_lemma2.expect("clap requires one identity");
        let (n, m, s) = (whole(v[0], "n")?, whole(v[1], "m")?, v[2]);
        let table = CountTable::build(n)?;
        let identity = lemma2_coefficient(n as usize, n as usize, m as usize, s)?;
        let direct =
            expect_yms(&table, n, m, s)? * Rational::from_integer(table.p(n)?.clone().into());
        let enumerated = if n <= DEFAULT_ENUMERATION_CAP {
            total_y_ms(n, m, s)?.to_string()
        } else {
            "NA".into()
        };
        (
            "n,m,s,identity,direct,enumeration",
            vec![
                n.to_string(),
                m.to_string(),
                s.to_string(),
                identity.to_string(),
                direct.to_string(),
                enumerated,
            ],
        )
    };
    write_rows(ctx, header, &[row])
}

/// CSV by default, or a JSON array of objects keyed by the header.
fn write_rows(ctx: &mut Ctx, header: &str, rows: &[Vec<String>]) -> CliResult {
    if ctx.format == Some(Format::Json) {
        let keys: Vec<&str> = header.split(',').collect();
        let items: Vec<serde_json::Value> = rows
            .iter()
            .map(|r| {
                let map: serde_json::Map<String, serde_json::Value> = keys
                    .iter()
                    .zip(r)
                    .map(|(k, v)| {
                        let val = v
                            .parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite() && !v.contains('/') && v.len() < 16)
                            .map(|x| json!(x))
                            .unwrap_or_else(|| json!(v));
                        (k.to_string(), val)
                    })
                    .collect();
                serde_json::Value::Object(map)
            })
            .collect();
        writeln!(
            ctx.out,
            "{}",
            serde_json::to_string_pretty(&items).expect("rows serialize")
        )?;
    } else {
        writeln!(ctx.out, "{header}")?;
        for r in rows {
            writeln!(ctx.out, "{}", r.join(","))?;
        }
    }
    Ok(())
}

fn expect(a: ExpectArgs, ctx: &mut Ctx) -> CliResult {
    let need = |x: Option<f64>, name: &str| {
        x.ok_or_else(|| CliError::Usage(format!("--{name} is required for this statistic")))
    };
    let quantity = match a.stat {
        Stat::Zn => Quantity::Zn,
        Stat::Yn => Quantity::Yn,
        Stat::Zds => Quantity::Zds {
            d: need(a.d, "d")?,
            s: need(a.s, "s")?,
        },
        Stat::Yms => Quantity::Yms {
            m: a.m
                .ok_or_else(|| CliError::Usage("--m is required for this statistic".into()))?,
            s: need(a.s, "s")?,
        },
    };
    let table = CountTable::build(a.n)?;
    let rep = ExpectationReport::compute(&table, a.n, quantity)?;
    match ctx.format {
        None => writeln!(ctx.out, "{} {}", rep.exact, fmt_f64(rep.exact_f64))?,
        Some(Format::Json) => writeln!(
            ctx.out,
            "{}",
            serde_json::to_string_pretty(&rep).expect("report serializes")
        )?,
        Some(Format::Csv) => {
            writeln!(ctx.out, "n,exact,float,asymptotic")?;
            let asym = rep.asymptotic.map(fmt_f64).unwrap_or_default();
            writeln!(
                ctx.out,
                "{},{},{},{}",
                rep.n,
                rep.exact,
                fmt_f64(rep.exact_f64),
                asym
            )?;
        }
    }
    Ok(())
}

enum AnySampler {
    Exact(ExactSampler),
    Fristedt(FristedtSampler),
}

impl AnySampler {
    fn new(n: u64, method: Method, max_trials: u64) -> CliResult<Self> {
        Ok(match method {
            Method::Exact => AnySampler::Exact(ExactSampler::new(n)?),
            Method::Fristedt => {
                AnySampler::Fristedt(FristedtSampler::with_max_trials(n, max_trials)?)
            }
        })
    }

    fn sample(&mut self, rng: &mut RngStream) -> CliResult<partsample::Partition> {
        Ok(match self {
            AnySampler::Exact(s) => s.sample(rng),
            AnySampler::Fristedt(s) => s.sample(rng)?,
        })
    }
}

fn sample(a: SampleArgs, ctx: &mut Ctx) -> CliResult {
    let mut sampler = AnySampler::new(a.n, a.method, a.max_trials)?;
    let mut rng = RngStream::new(ctx.seed);
    let csv = ctx.format == Some(Format::Csv);
    if csv {
        writeln!(ctx.out, "n,parts")?;
    }
    for _ in 0..a.count {
        let lambda = sampler.sample(&mut rng)?;
        if csv {
            writeln!(ctx.out, "{},{}", lambda.n(), lambda)?;
        } else {
            write_json_lines(&mut ctx.out, [&lambda])?;
        }
    }
    Ok(())
}

fn draw(a: DrawArgs, ctx: &mut Ctx) -> CliResult {
    if a.n == 0 {
        return Err(CliError::Usage(
            "cannot draw a part from a partition of 0".into(),
        ));
    }
    let mut sampler = AnySampler::new(a.n, a.method, a.max_trials)?;
    let mut rng = RngStream::new(ctx.seed);
    let csv = ctx.format == Some(Format::Csv);
    if csv {
        writeln!(ctx.out, "procedure,mu,sigma")?;
    }
    for _ in 0..a.count {
        let lambda = sampler.sample(&mut rng)?;
        let d = draw_part(&lambda, a.procedure, &mut rng);
        if csv {
            writeln!(ctx.out, "{},{},{}", d.procedure.id(), d.mu, d.sigma)?;
        } else {
            write_json_lines(&mut ctx.out, [&d])?;
        }
    }
    Ok(())
}

fn oracle(a: OracleArgs, ctx: &mut Ctx) -> CliResult {
    let table = JointTable::build(a.n, a.procedure)?;
    let (rows, sizes) = match &a.grid {
        Some(g) => {
            let (r, s) = parse_grid(g, &[(row_key(a.procedure), "s")])?;
            (integers(&r, "rows")?, integers(&s, "sizes")?)
        }
        None => ((1..=a.n).collect(), (1..=a.n).collect()),
    };
    if a.grid.is_none() && ctx.format != Some(Format::Json) {
        table.write_csv(&mut ctx.out)?;
        return Ok(());
    }
    let mut out = Vec::new();
    for &r in &rows {
        for &s in &sizes {
            let v = table.get(r, s as f64);
            out.push(vec![
                r.to_string(),
                s.to_string(),
                v.numer().to_string(),
                v.denom().to_string(),
                fmt_f64(rational_to_f64(&v)),
            ]);
        }
    }
    write_rows(ctx, "m_or_d,s,num,den,float", &out)
}

fn limit(a: LimitArgs, ctx: &mut Ctx) -> CliResult {
    let mut out = Vec::new();
    let header = if a.procedure == Procedure::Uniform {
        let (u, v) = parse_grid(&a.grid, &[("u", "v")])?;
        for &uu in &u {
            for &vv in &v {
                out.push(vec![
                    uu.to_string(),
                    vv.to_string(),
                    fmt_f64(limitlaws::f1(uu, vv)),
                ]);
            }
        }
        "u,v,value"
    } else {
        let (m, t) = parse_grid(&a.grid, &[("m", "t")])?;
        for m in integers(&m, "m")? {
            for &tt in &t {
                let value = if a.procedure == Procedure::Distinct {
                    limitlaws::l2(m, tt)
                } else {
                    limitlaws::l3(m, tt)
                };
                out.push(vec![m.to_string(), tt.to_string(), fmt_f64(value)]);
            }
        }
        "m,t,value"
    };
    write_rows(ctx, header, &out)
}

fn asymp(a: AsympArgs, ctx: &mut Ctx) -> CliResult {
    let max_n = a.n.iter().copied().max().unwrap_or(0);
    let table = CountTable::build(max_n)?;
    let mut rows = Vec::new();
    for &n in &a.n {
        if n < 2 {
            return Err(CliError::Usage("asymptotics need n >= 2".into()));
        }
        let (exact, approx, rel) = match a.what {
            What::Pn => {
                let exact = table.ln_p(n)?;
                let approx = match a.approx {
                    PnApprox::Hayman => asymptotics::ln_hayman_pn(n)?,
                    PnApprox::HardyRamanujan => asymptotics::ln_hr_leading(n),
                    PnApprox::Rademacher => asymptotics::ln_rademacher_two_term(n),
                };
                (exact, approx, asymptotics::rel_err_ln(approx, exact))
            }
            What::Saddle => {
                let exact = asymptotics::solve_saddle(n, DEFAULT_TOL)?.h;
                let approx = asymptotics::saddle_expansion(n);
                (exact, approx, approx / exact - 1.0)
            }
            What::Phi | What::Zds => {
                let d =
                    a.d.ok_or_else(|| CliError::Usage("--d is required".into()))?;
                let s =
                    a.s.ok_or_else(|| CliError::Usage("--s is required".into()))?;
                let exact = rational_to_f64(&expect_zds(&table, n, d, s)?);
                let h = asymptotics::solve_saddle(n, DEFAULT_TOL)?.h;
                let approx = if matches!(a.what, What::Phi) {
                    asymptotics::phi_ds(h, d, s)?
                } else {
                    asymptotics::zds_boltzmann(h, d, s)?
                };
                (exact, approx, approx / exact - 1.0)
            }
            What::Ez | What::Ey => {
                let q = if matches!(a.what, What::Ez) {
                    Quantity::Zn
                } else {
                    Quantity::Yn
                };
                let rep = ExpectationReport::compute(&table, n, q)?;
                let approx = rep.asymptotic.expect("n >= 2 has an asymptotic value");
                (rep.exact_f64, approx, approx / rep.exact_f64 - 1.0)
            }
        };
        rows.push(vec![
            n.to_string(),
            fmt_f64(exact),
            fmt_f64(approx),
            fmt_f64(rel),
        ]);
    }
    write_rows(ctx, "n,exact,approx,rel_err", &rows)
}

fn simulate(a: SimulateArgs, ctx: &mut Ctx) -> CliResult {
    let grid = match &a.grid {
        None => GridSpec::full(a.n),
        Some(g) if g.contains("u=") => {
            let (u, v) = parse_grid(g, &[("u", "v")])?;
            GridSpec::LogScale { u, v }
        }
        Some(g) => {
            let (r, s) = parse_grid(g, &[(row_key(a.procedure), "s")])?;
            GridSpec::Lattice {
                rows: integers(&r, "rows")?,
                sizes: integers(&s, "sizes")?,
            }
        }
    };
    let cfg = ExperimentConfig {
        n: a.n,
        procedure: a.procedure,
        samples: a.samples,
        seed: ctx.seed,
        method: a.method.into(),
        reference: match a.reference {
            Reference::Oracle => ReferenceKind::OracleExact,
            Reference::Limit => ReferenceKind::LimitLaw,
        },
        grid,
        replicas: a.replicas,
        max_trials: a.max_trials,
    };
    let report = run_monte_carlo(&cfg)?;
    if ctx.format == Some(Format::Csv) {
        report.write_csv(&mut ctx.out)?;
    } else {
        writeln!(ctx.out, "{}", report.to_json())?;
    }
    eprintln!("ks = {}", fmt_f64(report.ks));
    Ok(())
}

fn read_grid(path: &PathBuf) -> CliResult<GridFunction> {
    let f = File::open(path)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
    Ok(GridFunction::read_csv(f)?)
}

fn compare(a: CompareArgs, ctx: &mut Ctx) -> CliResult {
    let ks = ks_distance(&read_grid(&a.empirical)?, &read_grid(&a.reference)?)?;
    match ctx.format {
        Some(Format::Json) => writeln!(ctx.out, "{}", json!({"ks": ks}))?,
        Some(Format::Csv) => writeln!(ctx.out, "ks\n{}", fmt_f64(ks))?,
        None => writeln!(ctx.out, "{}", fmt_f64(ks))?,
    }
    Ok(())
}
