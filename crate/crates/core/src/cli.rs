//! The `cfr` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 the randomized search
//! ran out of trials, 64 bad usage, 65 malformed input data, 66 missing
//! input file, 70 internal error, 74 other I/O failure.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;

use crate::constructions::{
    asymptotic_expansion, combination_size, construct_combination, construct_duplicate, construct_recursive,
    predict_recursive_size, ConstructionError, RecursiveParams,
};
use crate::designs::{
    is_properly_local, min_blocks_bound, replication_bound, CoveringDesign, DesignError, DesignParams,
};
use crate::randomizer::{search_zero_skip, SearchConfig, Strategy};
use crate::rational::Rational;
use crate::skipcost::oracle::brute_force_cost;
use crate::skipcost::{
    expansion_factor, is_zero_skip, repair_all, ArrayError, CfrArray, CodeReport, SkipCostError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_INTERNAL: i32 = 70;
pub const EXIT_IO: i32 = 74;

/// The `(t,k)` pairs listed by `report --table 1` by default.
pub const TABLE1_PAIRS: [(u32, u32); 10] =
    [(3, 4), (4, 5), (4, 6), (5, 6), (5, 7), (5, 8), (6, 7), (6, 8), (6, 9), (6, 10)];

/// Best known covering sizes the published comparison was computed from,
/// as `(t, k, v, blocks)`. Used only to flag inputs of a different size.
const REFERENCE_SIZES: &[(u32, u32, u32, usize)] = &[
    (5, 6, 6, 1),
    (5, 6, 7, 6),
    (5, 6, 8, 12),
    (5, 6, 9, 30),
    (5, 6, 10, 50),
    (5, 6, 11, 100),
    (5, 6, 12, 132),
    (5, 6, 13, 245),
    (5, 6, 14, 371),
    (5, 6, 16, 808),
    (5, 6, 18, 1530),
    (5, 6, 20, 2800),
    (5, 6, 22, 4659),
    (5, 6, 24, 7084),
    (5, 6, 26, 11544),
    (4, 6, 12, 40),
    (4, 6, 14, 80),
    (4, 6, 16, 152),
    (4, 6, 18, 236),
    (4, 6, 20, 382),
    (4, 6, 22, 580),
    (4, 6, 24, 784),
    (4, 6, 26, 1152),
];

#[derive(Debug, Parser)]
#[command(name = "cfr", version, about = "Zero skip-cost covering fractional-repetition codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the covering property and print the counting bounds
    VerifyDesign(VerifyArgs),
    /// Build an array from covering designs
    Build(BuildArgs),
    /// Exact skip cost and repair plans of an array
    Skipcost(SkipcostArgs),
    /// Search for a zero skip-cost ordering of a design's blocks
    Randomize(RandomizeArgs),
    /// Reproduce the expansion-factor tables
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct DesignArgs {
    /// Block list, one block per line
    #[arg(long)]
    design: PathBuf,
    #[arg(long)]
    t: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    v: u32,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    design: DesignArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// every block twice
    Dup,
    /// blocks plus prefixed copies of a strength t-1 design
    Comb,
    /// the q-fold lift
    Rec,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    design: DesignArgs,
    /// The (t-1, k, v) covering design, for --method comb
    #[arg(long)]
    design2: Option<PathBuf>,
    /// Where to write the array
    #[arg(long)]
    out: PathBuf,
    /// Repair locality; defaults to 1 for dup and ceil(k/(t-1)) otherwise
    #[arg(long)]
    locality: Option<usize>,
    /// Print one repair plan per column
    #[arg(long)]
    plans: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
struct SkipcostArgs {
    #[arg(long)]
    array: PathBuf,
    /// Maximum number of helpers
    #[arg(long, conflicts_with = "t")]
    locality: Option<usize>,
    /// Strength of the underlying design; sets the locality to ceil(k/(t-1))
    #[arg(long)]
    t: Option<u32>,
    /// Cross-check every column against the brute-force solver
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Global,
    Local,
}

#[derive(Debug, Args)]
struct RandomizeArgs {
    #[command(flatten)]
    design: DesignArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_trials: u64,
    #[arg(long, value_enum)]
    strategy: StrategyArg,
    #[arg(long)]
    out: PathBuf,
    /// Defaults to ceil(k/(t-1))
    #[arg(long)]
    locality: Option<usize>,
    /// Write the trial log here as JSON lines
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    table: u8,
    /// (t,k) pairs for table 1, as T,K; defaults to the ten published pairs
    #[arg(long = "pair", value_parser = parse_pair)]
    pairs: Vec<(u32, u32)>,
    /// A (t,k,V) covering design, as V=PATH (table 3)
    #[arg(long = "t-design", value_parser = parse_keyed_path)]
    t_designs: Vec<(u32, PathBuf)>,
    /// A (t-1,k,V) covering design, as V=PATH (table 3)
    #[arg(long = "tm1-design", value_parser = parse_keyed_path)]
    tm1_designs: Vec<(u32, PathBuf)>,
    /// Size of a (t,k,V) design without a file, as V=N (table 3)
    #[arg(long = "t-size", value_parser = parse_keyed_size)]
    t_sizes: Vec<(u32, usize)>,
    /// Size of a (t-1,k,V) design without a file, as V=N (table 3)
    #[arg(long = "tm1-size", value_parser = parse_keyed_size)]
    tm1_sizes: Vec<(u32, usize)>,
    #[arg(long, default_value_t = 5)]
    t: u32,
    #[arg(long, default_value_t = 6)]
    k: u32,
    /// Also check every built array for zero skip cost
    #[arg(long)]
    verify: bool,
    /// Print exact rationals next to the rounded values
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    csv: bool,
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (t, k) = s.split_once(',').ok_or_else(|| format!("expected T,K, got {s:?}"))?;
    Ok((t.trim().parse().map_err(|e| format!("{t:?}: {e}"))?, k.trim().parse().map_err(|e| format!("{k:?}: {e}"))?))
}

fn parse_keyed_path(s: &str) -> Result<(u32, PathBuf), String> {
    let (v, path) = s.split_once('=').ok_or_else(|| format!("expected V=PATH, got {s:?}"))?;
    Ok((v.trim().parse().map_err(|e| format!("{v:?}: {e}"))?, PathBuf::from(path)))
}

fn parse_keyed_size(s: &str) -> Result<(u32, usize), String> {
    let (v, n) = s.split_once('=').ok_or_else(|| format!("expected V=N, got {s:?}"))?;
    Ok((v.trim().parse().map_err(|e| format!("{v:?}: {e}"))?, n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?))
}

/// A failure that ends the command with `code`.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn io_code(e: &io::Error) -> i32 {
    if e.kind() == io::ErrorKind::NotFound {
        EXIT_NO_INPUT
    } else {
        EXIT_IO
    }
}

impl From<DesignError> for Failure {
    fn from(e: DesignError) -> Self {
        let code = match &e {
            DesignError::Io { source, .. } => io_code(source),
            DesignError::InvalidParams { .. } => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<ArrayError> for Failure {
    fn from(e: ArrayError) -> Self {
        let code = match &e {
            ArrayError::Io { source, .. } => io_code(source),
            _ => EXIT_DATA,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SkipCostError> for Failure {
    fn from(e: SkipCostError) -> Self {
        let code = match e {
            SkipCostError::Capacity { .. } | SkipCostError::ZeroLocality => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        let code = match &e {
            ConstructionError::SizeMismatch { .. } => EXIT_VERIFY,
            ConstructionError::FamiliesOverlap { .. } | ConstructionError::Array(_) => EXIT_INTERNAL,
            _ => EXIT_DATA,
        };
        Failure::new(code, e.to_string())
    }
}

/// Output writes that fail end the command with the I/O code.
impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(shown.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(shown.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::VerifyDesign(a) => verify_design(a, out),
        Command::Build(a) => build(a, out, err),
        Command::Skipcost(a) => skipcost(a, out),
        Command::Randomize(a) => randomize(a, out, err),
        Command::Report(a) => report(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn params(t: u32, k: u32, v: u32) -> Result<DesignParams, Failure> {
    DesignParams::new(t, k, v).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))
}

fn load_design(path: &Path, p: DesignParams) -> Result<CoveringDesign, Failure> {
    CoveringDesign::from_path(path, p).map_err(|e| match e {
        DesignError::Io { .. } => e.into(),
        other => Failure::new(EXIT_DATA, format!("{}: {other}", path.display())),
    })
}

fn load(args: &DesignArgs) -> Result<CoveringDesign, Failure> {
    load_design(&args.design, params(args.t, args.k, args.v)?)
}

/// Fails with the verification code unless `design` covers.
fn require_covering(design: &CoveringDesign, path: &Path) -> Result<(), Failure> {
    let missing = design.verify_covering();
    match missing.first() {
        None => Ok(()),
        Some(first) => Err(Failure::new(
            EXIT_VERIFY,
            format!(
                "{} is not a {} covering design: {} t-subsets uncovered, first {{{}}}",
                path.display(),
                design.params(),
                missing.len(),
                first.iter().join(",")
            ),
        )),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn verify_design(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let d = load(&a.design)?;
    let p = d.params();
    writeln!(out, "design {p}: {} blocks", d.len())?;
    let missing = d.verify_covering();
    if missing.is_empty() {
        writeln!(out, "covering: yes")?;
    } else {
        writeln!(out, "covering: no, {} uncovered {}-subsets", missing.len(), p.t())?;
        for set in missing.iter().take(10) {
            writeln!(out, "  uncovered {{{}}}", set.iter().join(","))?;
        }
        if missing.len() > 10 {
            writeln!(out, "  ...")?;
        }
    }
    for s in 1..=p.t() {
        let r = replication_bound(p, s)?;
        writeln!(out, "r_{s} = {r} ({})", r.to_decimal(2))?;
    }
    let bound = min_blocks_bound(p);
    writeln!(out, "minimum blocks = {bound} ({}); this design is {} times that", bound.to_decimal(2), expansion_factor(d.len(), p).to_decimal(2))?;
    if p.t() >= 2 {
        let lc = is_properly_local(p)?;
        writeln!(
            out,
            "properly local: {} (ceil((v-t+1)/(k-t+1)) = {}, ceil(k/(t-1)) + 1 = {})",
            if lc.properly_local() { "yes" } else { "no" },
            lc.blocks_per_subset,
            lc.required()
        )?;
    }
    Ok(if missing.is_empty() { EXIT_OK } else { EXIT_VERIFY })
}

fn default_locality(p: DesignParams) -> Result<usize, Failure> {
    p.default_locality()
        .ok_or_else(|| Failure::new(EXIT_USAGE, "t = 1 has no default locality; pass --locality"))
}

fn build(a: BuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let d = load(&a.design)?;
    require_covering(&d, &a.design.design)?;
    let p = d.params();
    let (array, code_params, stated) = match a.method {
        Method::Dup => (construct_duplicate(&d)?, p, 1),
        Method::Comb => {
            let path = a
                .design2
                .as_deref()
                .ok_or_else(|| Failure::new(EXIT_USAGE, "--method comb needs --design2"))?;
            if p.t() < 2 {
                return Err(Failure::new(EXIT_USAGE, "--method comb needs t >= 2"));
            }
            let d2 = load_design(path, params(p.t() - 1, p.k(), p.v())?)?;
            require_covering(&d2, path)?;
            let array = construct_combination(&d, &d2)?;
            writeln!(out, "columns: {} from the design, {} from prefixed copies", d.len(), array.len() - d.len())?;
            (array, p, default_locality(p)?)
        }
        Method::Rec => {
            let build = construct_recursive(&d)?;
            for w in &build.warnings {
                writeln!(err, "warning: {w}")?;
            }
            let s = &build.prediction;
            writeln!(
                out,
                "lift: q = {}, r = {}, case {}, coefficient {}, predicted {} blocks, generated {}",
                s.params.q,
                s.params.r,
                s.params.case,
                s.coefficient,
                s.predicted_blocks,
                build.array.len()
            )?;
            let f = &build.families;
            writeln!(
                out,
                "families: B1 {}, B2 {}, B3 {} ({} + {}), B4 {}",
                f.b1.len(),
                f.b2.len(),
                f.b3_i1.len() + f.b3_i2.len(),
                f.b3_i1.len(),
                f.b3_i2.len(),
                f.b4.len()
            )?;
            (build.array, build.params, default_locality(p)?)
        }
    };
    write_file(&a.out, &array.to_text())?;
    let locality = a.locality.unwrap_or(stated);
    let report = CodeReport::new(&array, code_params, locality)?;
    if a.csv {
        write!(out, "{}", report.to_csv())?;
    } else {
        write!(out, "{}", report.to_text(&array, a.plans))?;
    }
    writeln!(out, "wrote {}", a.out.display())?;
    Ok(match report.skip_cost {
        Some(0) => EXIT_OK,
        _ => {
            writeln!(err, "error: the built array does not have zero skip cost at locality {locality}")?;
            EXIT_VERIFY
        }
    })
}

fn skipcost(a: SkipcostArgs, out: &mut dyn Write) -> Outcome {
    let array = CfrArray::from_path(&a.array)?;
    let locality = match (a.locality, a.t) {
        (Some(l), _) => l,
        (None, Some(t)) if t >= 2 => array.k().div_ceil((t - 1) as usize),
        (None, Some(_)) => return Err(Failure::new(EXIT_USAGE, "--t must be at least 2")),
        (None, None) => return Err(Failure::new(EXIT_USAGE, "pass --locality or --t")),
    };
    let plans = repair_all(&array, locality)?;
    let costs: Vec<Option<u32>> = plans.iter().map(|p| p.as_ref().map(|p| p.total_cost)).collect();
    let total = costs.iter().copied().collect::<Option<Vec<u32>>>().map(|c| c.into_iter().max().unwrap_or(0));
    let render = |c: Option<u32>| c.map_or_else(|| "infeasible".to_string(), |c| c.to_string());
    if a.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["column", "cost", "plan"]).map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))?;
        for (j, plan) in plans.iter().enumerate() {
            let desc = plan.as_ref().map(|p| p.describe(&array)).unwrap_or_default();
            w.write_record([(j + 1).to_string(), render(costs[j]), desc])
                .map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))?;
        out.write_all(&bytes)?;
    } else {
        writeln!(out, "array: k = {}, N = {}, v = {}, locality {locality}", array.k(), array.len(), array.v())?;
        for (j, plan) in plans.iter().enumerate() {
            match plan {
                Some(p) => writeln!(out, "column {}: cost {}: {}", j + 1, p.total_cost, p.describe(&array))?,
                None => writeln!(out, "column {}: infeasible", j + 1)?,
            }
        }
        writeln!(out, "cost(A) = {}", render(total))?;
    }
    if a.oracle {
        let mut mismatches = 0;
        for (j, &cost) in costs.iter().enumerate() {
            let expected = brute_force_cost(&array, j, locality);
            if expected != cost {
                mismatches += 1;
                writeln!(out, "oracle mismatch at column {}: search {}, brute force {}", j + 1, render(cost), render(expected))?;
            }
        }
        if mismatches > 0 {
            return Ok(EXIT_VERIFY);
        }
        writeln!(out, "oracle: all {} columns agree", array.len())?;
    }
    Ok(EXIT_OK)
}

fn randomize(a: RandomizeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let d = load(&a.design)?;
    require_covering(&d, &a.design.design)?;
    let p = d.params();
    let distinct = d.distinct();
    if distinct.len() < d.len() {
        writeln!(err, "warning: dropped {} repeated blocks", d.len() - distinct.len())?;
    }
    let config = SearchConfig {
        seed: a.seed,
        max_trials: a.max_trials as usize,
        strategy: match a.strategy {
            StrategyArg::Global => Strategy::GlobalReshuffle,
            StrategyArg::Local => Strategy::LocalRepair,
        },
        locality: match a.locality {
            Some(l) => l,
            None => default_locality(p)?,
        },
    };
    let outcome = search_zero_skip(&distinct, config)?;
    if let Some(path) = &a.log {
        write_file(path, &outcome.log_jsonl())?;
    }
    match &outcome.array {
        Some(array) => {
            write_file(&a.out, &array.to_text())?;
            let xi = expansion_factor(array.len(), p);
            writeln!(out, "zero skip cost found after {} trials", outcome.trials_used)?;
            writeln!(out, "N = {}, locality {}, expansion factor {} ({xi})", array.len(), config.locality, xi.to_decimal(2))?;
            writeln!(out, "wrote {}", a.out.display())?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(
                out,
                "no zero skip-cost ordering in {} trials; {} columns still fail: {}",
                outcome.trials_used,
                outcome.failing_columns.len(),
                outcome.failing_columns.iter().map(|j| j + 1).join(",")
            )?;
            Ok(EXIT_EXHAUSTED)
        }
    }
}

fn report(a: ReportArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match a.table {
        1 => table1(&a, out),
        3 => table3(&a, out, err),
        _ => Err(Failure::new(EXIT_USAGE, "table 2 lists published design sizes; only tables 1 and 3 are computed")),
    }
}

fn table1(a: &ReportArgs, out: &mut dyn Write) -> Outcome {
    let pairs: Vec<(u32, u32)> = if a.pairs.is_empty() { TABLE1_PAIRS.to_vec() } else { a.pairs.clone() };
    let mut rows = Vec::new();
    for &(t, k) in &pairs {
        let p = RecursiveParams::new(t, k).map_err(|e| Failure::new(EXIT_USAGE, format!("({t},{k}): {e}")))?;
        let xi = asymptotic_expansion(t, k)?;
        rows.push((t, k, p, xi));
    }
    if a.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| Failure::new(EXIT_INTERNAL, e.to_string());
        w.write_record(["t", "k", "q", "r", "case", "xi", "xi_decimal"]).map_err(fail)?;
        for (t, k, p, xi) in &rows {
            w.write_record([
                t.to_string(),
                k.to_string(),
                p.q.to_string(),
                p.r.to_string(),
                p.case.to_string(),
                xi.to_string(),
                xi.to_decimal(2),
            ])
            .map_err(fail)?;
        }
        out.write_all(&w.into_inner().map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))?)?;
    } else {
        writeln!(out, "asymptotic expansion factor of the recursive construction")?;
        writeln!(out, "{:<8} {:>3} {:>3} {:<9} {:>8} {:>8}", "(t,k)", "q", "r", "case", "xi", "decimal")?;
        for (t, k, p, xi) in &rows {
            writeln!(
                out,
                "{:<8} {:>3} {:>3} {:<9} {:>8} {:>8}",
                format!("({t},{k})"),
                p.q,
                p.r,
                p.case.to_string(),
                xi.to_string(),
                xi.to_decimal(2)
            )?;
        }
    }
    Ok(EXIT_OK)
}

/// Block count of a table-3 input, with its file when there is one.
struct Input {
    blocks: usize,
    design: Option<CoveringDesign>,
}

fn table3_inputs(
    files: &[(u32, PathBuf)],
    sizes: &[(u32, usize)],
    t: u32,
    k: u32,
) -> Result<BTreeMap<u32, Input>, Failure> {
    let mut map = BTreeMap::new();
    for (v, path) in files {
        let d = load_design(path, params(t, k, *v)?)?;
        require_covering(&d, path)?;
        if map.insert(*v, Input { blocks: d.len(), design: Some(d) }).is_some() {
            return Err(Failure::new(EXIT_USAGE, format!("two ({t},{k},{v}) inputs")));
        }
    }
    for &(v, n) in sizes {
        params(t, k, v)?;
        if map.insert(v, Input { blocks: n, design: None }).is_some() {
            return Err(Failure::new(EXIT_USAGE, format!("two ({t},{k},{v}) inputs")));
        }
    }
    Ok(map)
}

/// One cell of table 3.
struct Cell {
    columns: i128,
    xi: Rational,
    /// built and verified zero skip cost, or `None` when not checked
    verified: Option<bool>,
}

fn table3(a: &ReportArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (t, k) = (a.t, a.k);
    if t < 2 || t > k {
        return Err(Failure::new(EXIT_USAGE, "table 3 needs 2 <= t <= k"));
    }
    let rp = RecursiveParams::new(t, k)?;
    let q = rp.q;
    let locality = k.div_ceil(t - 1) as usize;
    let main = table3_inputs(&a.t_designs, &a.t_sizes, t, k)?;
    let lower = table3_inputs(&a.tm1_designs, &a.tm1_sizes, t - 1, k)?;

    let mut footnotes = BTreeSet::new();
    for (tt, inputs) in [(t, &main), (t - 1, &lower)] {
        for (&v, input) in inputs {
            if let Some(&(.., n)) = REFERENCE_SIZES.iter().find(|r| (r.0, r.1, r.2) == (tt, k, v)) {
                if n != input.blocks {
                    footnotes.insert(format!(
                        "the ({tt},{k},{v}) input has {} blocks; the published comparison used {n}",
                        input.blocks
                    ));
                }
            }
        }
    }

    let verify = |array: &CfrArray, l: usize| -> Result<Option<bool>, Failure> {
        if a.verify {
            Ok(Some(is_zero_skip(array, l)?.is_zero_skip()))
        } else {
            Ok(None)
        }
    };
    let mut rows: [BTreeMap<u32, Cell>; 3] = Default::default();
    for (&v, input) in &main {
        let p = params(t, k, v)?;
        let n = 2 * input.blocks as i128;
        let verified = match &input.design {
            Some(d) => verify(&construct_duplicate(d)?, 1)?,
            None => None,
        };
        rows[0].insert(v, Cell { columns: n, xi: expansion_factor(n as usize, p), verified });
        if let Some(low) = lower.get(&v) {
            let n = combination_size(t, k, input.blocks, low.blocks);
            let verified = match (&input.design, &low.design) {
                (Some(d), Some(d2)) => {
                    let array = construct_combination(d, d2)?;
                    debug_assert_eq!(array.len() as i128, n);
                    verify(&array, locality)?
                }
                _ => None,
            };
            rows[1].insert(v, Cell { columns: n, xi: expansion_factor(n as usize, p), verified });
        }
        let lifted = q * v;
        if let Ok(lp) = DesignParams::new(t, k, lifted) {
            let (n, verified) = match &input.design {
                Some(d) => match construct_recursive(d) {
                    Ok(build) => (build.array.len() as i128, verify(&build.array, locality)?),
                    Err(ConstructionError::SizeMismatch { predicted, generated }) => {
                        writeln!(err, "warning: ({t},{k},{v}) lift has {generated} blocks, formula says {predicted}")?;
                        (generated as i128, None)
                    }
                    Err(e) => return Err(e.into()),
                },
                None => (predict_recursive_size(p, input.blocks)?.predicted_blocks, None),
            };
            rows[2].insert(lifted, Cell { columns: n, xi: expansion_factor(n as usize, lp), verified });
        }
    }

    let names = ["duplicate", "combine", "lift"];
    let columns: BTreeSet<u32> = rows.iter().flat_map(|r| r.keys().copied()).collect();
    if a.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| Failure::new(EXIT_INTERNAL, e.to_string());
        w.write_record(["construction", "v", "columns", "xi", "xi_exact", "zero_skip"]).map_err(fail)?;
        for (name, row) in names.iter().zip(&rows) {
            for (v, c) in row {
                let z = c.verified.map_or(String::new(), |b| b.to_string());
                w.write_record([name.to_string(), v.to_string(), c.columns.to_string(), c.xi.to_decimal(2), c.xi.to_string(), z])
                    .map_err(fail)?;
            }
        }
        out.write_all(&w.into_inner().map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))?)?;
    } else {
        writeln!(out, "expansion factor of codes from ({t},{k},v) covering designs")?;
        let mut line = format!("{:<16}", "v");
        for v in &columns {
            let _ = write!(line, " {v:>8}");
        }
        writeln!(out, "{}", line.trim_end())?;
        for (name, row) in names.iter().zip(&rows) {
            let mut line = format!("{name:<16}");
            for v in &columns {
                let cell = row.get(v).map_or("-".to_string(), |c| {
                    let flag = if c.verified == Some(false) { "!" } else { "" };
                    format!("{}{flag}", c.xi.to_decimal(2))
                });
                let _ = write!(line, " {cell:>8}");
            }
            writeln!(out, "{}", line.trim_end())?;
            if a.exact {
                for (v, c) in row {
                    writeln!(out, "  v={v}: N = {}, xi = {}", c.columns, c.xi)?;
                }
            }
        }
        for note in &footnotes {
            writeln!(out, "* {note}")?;
        }
    }
    let failed = rows.iter().flat_map(|r| r.values()).any(|c| c.verified == Some(false));
    if failed {
        writeln!(err, "error: some built array (marked !) does not have zero skip cost")?;
        return Ok(EXIT_VERIFY);
    }
    Ok(EXIT_OK)
}
