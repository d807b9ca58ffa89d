//! Command-line front end.
//!
//! Every subcommand emits a table with a fixed column set, either as CSV
//! (header row, LF endings) or as JSON lines. Exit codes: 0 success,
//! 1 verification failure, 2 usage error, 3 resource limit.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::classifier::{classify_div5, classify_mod3, classify_mod8, Div5Form};
use crate::density::{density_table, empirical_density, ClassSelector, ExactRational};
use crate::engine::MotzkinEngine;
use crate::error::MotzkinError;
use crate::verify::{verify_classifier, SUPPORTED_MODULI};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

const DEFAULT_HORIZON: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "motzkin", version, about = "Motzkin numbers modulo 2, 4, 8, 3 and 5")]
struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineKind {
    Sum,
    Holonomic,
    Convolution,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print M_n (or M_n mod m) for n in a half-open range `a..b` or a single `n`.
    Compute {
        range: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
        /// Defaults to convolution with --mod, holonomic without.
        #[arg(long, value_enum)]
        engine: Option<EngineKind>,
    },
    /// Classify M_n mod 2, 4, 8, 3 or 5 from the digits of n.
    Classify {
        range: String,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Compare the digit classifier with computed residues for n < N.
    Verify {
        #[arg(long = "mod")]
        modulus: u64,
        horizon: u64,
    },
    /// Report the limiting density of a class and/or its finite-N estimate.
    #[command(group(ArgGroup::new("mode").args(["closed", "empirical", "both"])))]
    Density {
        /// Class selector, e.g. even, mod8=4, div5, t01, eps1_delta2,
        /// div5-form3, set:q,r,s,t,c,j_min; `table` dumps every class.
        selector: String,
        #[arg(short = 'N', long = "horizon", default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        #[arg(long)]
        closed: bool,
        #[arg(long)]
        empirical: bool,
        #[arg(long)]
        both: bool,
    },
    /// Dump the table of limiting densities.
    Table,
}

#[derive(Debug, Clone)]
enum Cell {
    Num(String),
    Text(String),
    Empty,
}

impl Cell {
    fn num(v: impl ToString) -> Self {
        Cell::Num(v.to_string())
    }

    fn text(v: impl ToString) -> Self {
        Cell::Text(v.to_string())
    }

    fn opt_num<T: ToString>(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Cell::num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(s) => s.clone(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(s) => s.clone(),
            Cell::Text(s) => serde_json::Value::String(s.clone()).to_string(),
            Cell::Empty => "null".into(),
        }
    }
}

/// Rows sharing one schema.
struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &'static [&'static str]) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Jsonl => {
                for row in &self.rows {
                    let fields: Vec<String> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(k, v)| format!("\"{k}\":{}", v.json()))
                        .collect();
                    writeln!(out, "{{{}}}", fields.join(","))?;
                }
            }
        }
        Ok(())
    }
}

/// Twelve significant digits, fixed-point.
pub fn format_decimal(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let precision = (11 - magnitude).max(0) as usize;
    format!("{x:.precision$}")
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<MotzkinError> for Failure {
    fn from(e: MotzkinError) -> Self {
        let code = match e {
            MotzkinError::ResourceLimit { .. } => EXIT_RESOURCE,
            MotzkinError::Domain(_)
            | MotzkinError::InvalidSpec(_)
            | MotzkinError::UnknownSelector(_) => EXIT_USAGE,
            MotzkinError::InexactDivision { .. } => EXIT_VERIFY_FAILED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `a..b` or a single `n` (meaning `n..n+1`).
fn parse_range(raw: &str) -> Result<(BigUint, BigUint), Failure> {
    let parse = |s: &str| {
        s.trim()
            .parse::<BigUint>()
            .map_err(|_| usage(format!("invalid range `{raw}`")))
    };
    let (lo, hi) = match raw.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let n = parse(raw)?;
            let next = &n + BigUint::one();
            (n, next)
        }
    };
    if lo > hi {
        return Err(usage(format!("range `{raw}` is reversed")));
    }
    Ok((lo, hi))
}

fn range_u64(lo: &BigUint, hi: &BigUint) -> Result<(u64, u64), Failure> {
    match (lo.to_u64(), hi.to_u64()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Failure {
            code: EXIT_RESOURCE,
            message: "range exceeds the engine ceilings".into(),
        }),
    }
}

fn cmd_compute(
    engine: &MotzkinEngine,
    range: &str,
    modulus: Option<u64>,
    kind: Option<EngineKind>,
) -> Result<Table, Failure> {
    let (lo, hi) = parse_range(range)?;
    let (lo, hi) = range_u64(&lo, &hi)?;
    if let Some(m) = modulus {
        if m < 2 {
            return Err(usage(format!("modulus must be at least 2, got {m}")));
        }
    }
    let kind = kind.unwrap_or(if modulus.is_some() {
        EngineKind::Convolution
    } else {
        EngineKind::Holonomic
    });
    let mut table = Table::new(&["n", "value"]);
    if lo == hi {
        return Ok(table);
    }
    let values: Vec<String> = match (kind, modulus) {
        (EngineKind::Convolution, None) => {
            return Err(usage("the convolution engine requires --mod"));
        }
        (EngineKind::Convolution, Some(m)) => engine
            .mod_stream(m, hi)?
            .values()[lo as usize..]
            .iter()
            .map(u64::to_string)
            .collect(),
        (EngineKind::Holonomic, Some(m)) => engine
            .exact_residues(m, hi)?
            .values()[lo as usize..]
            .iter()
            .map(u64::to_string)
            .collect(),
        (EngineKind::Holonomic, None) => engine.exact_stream(hi)?[lo as usize..]
            .iter()
            .map(BigUint::to_string)
            .collect(),
        (EngineKind::Sum, m) => {
            let mut out = Vec::with_capacity((hi - lo) as usize);
            for n in lo..hi {
                let v = engine.exact(n)?;
                out.push(match m {
                    Some(m) => (v % m).to_string(),
                    None => v.to_string(),
                });
            }
            out
        }
    };
    for (n, v) in (lo..hi).zip(values) {
        table.push(vec![Cell::num(n), Cell::num(v)]);
    }
    Ok(table)
}

const CLASSIFY_COLUMNS: &[&str] = &[
    "n", "modulus", "class", "residue", "epsilon", "delta", "i", "j", "y", "form",
];

fn classify_row(n: &BigUint, modulus: u64) -> Vec<Cell> {
    let mut row = vec![Cell::num(n), Cell::num(modulus)];
    match modulus {
        2 | 4 | 8 => {
            let c = classify_mod8(n);
            let (class, residue) = match (modulus, c.kind.residue()) {
                (2, None) => ("Odd".to_string(), Some(1)),
                (2, Some(_)) => ("Even".to_string(), Some(0)),
                (4, None) => ("Odd".to_string(), None),
                (4, Some(r)) => (format!("Residue{}", r % 4), Some(r % 4)),
                (_, r) => (c.kind.name().to_string(), r),
            };
            row.push(Cell::text(class));
            row.push(Cell::opt_num(residue));
            match &c.witness {
                Some(w) => row.extend([
                    Cell::num(w.epsilon),
                    Cell::num(w.delta),
                    Cell::num(&w.i),
                    Cell::num(w.j),
                ]),
                None => row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]),
            }
            row.push(Cell::opt_num(c.y));
            row.push(Cell::Empty);
        }
        3 => {
            let v = classify_mod3(n).value();
            row.push(Cell::text(format!("Residue{v}")));
            row.push(Cell::num(v));
            row.extend(std::iter::repeat_with(|| Cell::Empty).take(6));
        }
        5 => match classify_div5(n) {
            Div5Form::NotDivisible => {
                row.push(Cell::text("NotDivisible"));
                row.extend(std::iter::repeat_with(|| Cell::Empty).take(7));
            }
            Div5Form::Form { form, i, j } => {
                row.push(Cell::text("Divisible"));
                row.push(Cell::num(0));
                row.extend([Cell::Empty, Cell::Empty, Cell::num(i), Cell::num(j), Cell::Empty]);
                row.push(Cell::num(form));
            }
        },
        _ => unreachable!("modulus validated by caller"),
    }
    row
}

fn cmd_classify(range: &str, modulus: u64) -> Result<Table, Failure> {
    if !SUPPORTED_MODULI.contains(&modulus) {
        return Err(usage(format!(
            "unsupported modulus {modulus}; expected one of 2, 4, 8, 3, 5"
        )));
    }
    let (lo, hi) = parse_range(range)?;
    let mut table = Table::new(CLASSIFY_COLUMNS);
    let mut n = lo;
    while n < hi {
        table.push(classify_row(&n, modulus));
        n += 1u32;
    }
    Ok(table)
}

fn cmd_verify(engine: &MotzkinEngine, modulus: u64, horizon: u64) -> Result<(Table, i32), Failure> {
    let v = verify_classifier(engine, modulus, horizon)?;
    let mut table = Table::new(&["modulus", "horizon", "checked", "mismatches", "first_mismatch"]);
    table.push(vec![
        Cell::num(v.modulus),
        Cell::num(v.horizon),
        Cell::num(v.checked),
        Cell::num(v.mismatches),
        Cell::opt_num(v.first_mismatch),
    ]);
    let code = if v.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok((table, code))
}

const DENSITY_COLUMNS: &[&str] = &[
    "label",
    "limit",
    "limit_decimal",
    "horizon",
    "count",
    "ratio",
    "abs_discrepancy",
    "error_bound",
];

fn closed_row(label: String, limit: &ExactRational) -> Vec<Cell> {
    let mut row = vec![
        Cell::text(label),
        Cell::text(limit),
        Cell::num(format_decimal(limit.to_f64())),
    ];
    row.extend(std::iter::repeat_with(|| Cell::Empty).take(5));
    row
}

fn cmd_table() -> Table {
    let mut table = Table::new(DENSITY_COLUMNS);
    for (label, limit) in density_table() {
        table.push(closed_row(label, &limit));
    }
    table
}

fn cmd_density(selector: &str, horizon: u64, closed: bool) -> Result<Table, Failure> {
    if selector.trim().eq_ignore_ascii_case("table") {
        return Ok(cmd_table());
    }
    let sel: ClassSelector = selector.parse()?;
    let mut table = Table::new(DENSITY_COLUMNS);
    if closed {
        table.push(closed_row(sel.label(), &sel.limit()));
        return Ok(table);
    }
    let r = empirical_density(&sel, horizon)?;
    table.push(vec![
        Cell::text(&r.label),
        Cell::text(&r.limit),
        Cell::num(format_decimal(r.limit.to_f64())),
        Cell::num(r.horizon),
        Cell::num(r.observed_count),
        Cell::num(format_decimal(r.observed_ratio)),
        Cell::num(format_decimal(r.abs_discrepancy)),
        Cell::opt_num(r.error_bound.map(format_decimal)),
    ]);
    Ok(table)
}

fn dispatch(cli: &Cli, engine: &MotzkinEngine) -> Result<(Table, i32), Failure> {
    let ok = |t: Table| Ok((t, EXIT_OK));
    match &cli.command {
        Command::Compute {
            range,
            modulus,
            engine: kind,
        } => ok(cmd_compute(engine, range, *modulus, *kind)?),
        Command::Classify { range, modulus } => ok(cmd_classify(range, *modulus)?),
        Command::Verify { modulus, horizon } => cmd_verify(engine, *modulus, *horizon),
        Command::Density {
            selector,
            horizon,
            closed,
            ..
        } => ok(cmd_density(selector, *horizon, *closed)?),
        Command::Table => ok(cmd_table()),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Tables go to `--out` or `stdout`; diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_engine(args, &MotzkinEngine::from_env(), stdout, stderr)
}

/// Like [`run`] with an explicit engine (and thus explicit ceilings).
pub fn run_with_engine<I, T>(
    args: I,
    engine: &MotzkinEngine,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_parsed(&cli, engine, stdout, stderr),
        Err(e) => {
            let _ = write!(stderr, "{e}");
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}

fn run_parsed(
    cli: &Cli,
    engine: &MotzkinEngine,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let (table, code) = match dispatch(cli, engine) {
        Ok(res) => res,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            return f.code;
        }
    };
    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            table.write(cli.format, &mut w)?;
            w.flush()
        }),
        None => table.write(cli.format, stdout),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    code
}
