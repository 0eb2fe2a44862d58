//! The `wittkit` command line: one subcommand per computation, JSON or CSV
//! output, parallel sweeps.

mod commands;
mod sweep;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

pub use commands::{cmd_bar, cmd_divisor, cmd_kgroup, cmd_map, cmd_selftest, cmd_thresholds};
pub use sweep::{cmd_sweep, parse_range, SweepKind, SweepSpec};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "wittkit",
    version,
    about = "Witt vectors, K-groups of F_p[x]/(x^m) and cyclic bar homology"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Default output directory when `--out` is absent.
    #[arg(long = "out-dir", env = "WITTKIT_OUT", hide = true, global = true)]
    pub out_dir: Option<PathBuf>,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The group K_q(F_p[x]/(x^m), (x)).
    Kgroup(KgroupArgs),
    /// The map K_q(x^m) -> K_q(x^n) with kernel and cokernel.
    Map(MapArgs),
    /// Vanishing thresholds i0, q0 (given -m) and m0.
    Thresholds(ThresholdArgs),
    /// Divisor of the twist, of W_{n(i+1)}, and the vanishing test.
    Divisor(DivisorArgs),
    /// Homology of the cyclic bar construction of Π_m in weight i.
    Bar(BarArgs),
    /// Evaluate a check over a parameter grid.
    Sweep(SweepArgs),
    /// Run a fixed battery of consistency checks.
    Selftest,
}

#[derive(Debug, Args)]
pub struct KgroupArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub m: u64,
    #[arg(short, allow_hyphen_values = true)]
    pub q: i64,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub m: u64,
    #[arg(short)]
    pub n: u64,
    #[arg(short, allow_hyphen_values = true)]
    pub q: i64,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub m: Option<u64>,
    #[arg(short)]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct DivisorArgs {
    #[arg(short)]
    pub p: u64,
    #[arg(short)]
    pub m: u64,
    #[arg(short)]
    pub n: u64,
    #[arg(short)]
    pub i: u64,
}

#[derive(Debug, Args)]
pub struct BarArgs {
    #[arg(short)]
    pub m: u32,
    #[arg(short)]
    pub i: u32,
    /// Also compute the map induced by Π_m -> Π_n.
    #[arg(short)]
    pub n: Option<u32>,
}

/// Ranges are comma lists of values or inclusive spans, e.g. `2,3` or `1-8`.
#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub kind: SweepKind,
    #[arg(short, default_value = "2,3")]
    pub p: String,
    #[arg(short, default_value = "2-6")]
    pub m: String,
    #[arg(short, default_value = "1-5")]
    pub n: String,
    #[arg(short, default_value = "0-4")]
    pub i: String,
    /// Largest u for valuation sweeps (default: only the smallest admissible u).
    #[arg(long)]
    pub umax: Option<u32>,
}

/// Records produced by a command and the subset that failed a check.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub name: &'static str,
    pub records: Vec<Value>,
    pub failures: Vec<Value>,
}

impl Report {
    pub fn single(name: &'static str, record: Value) -> Self {
        Report {
            name,
            records: vec![record],
            failures: Vec::new(),
        }
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Kgroup(a) => cmd_kgroup(a.p, a.m, a.q).map(|v| Report::single("kgroup", v)),
        Command::Map(a) => cmd_map(a.p, a.m, a.n, a.q).map(|v| Report::single("map", v)),
        Command::Thresholds(a) => {
            cmd_thresholds(a.p, a.m, a.n).map(|v| Report::single("thresholds", v))
        }
        Command::Divisor(a) => {
            cmd_divisor(a.p, a.m, a.n, a.i).map(|v| Report::single("divisor", v))
        }
        Command::Bar(a) => {
            let v = cmd_bar(a.m, a.i, a.n)?;
            let mut r = Report::single("bar", v.clone());
            if v["match"] == Value::Bool(false) {
                r.failures.push(v);
            }
            Ok(r)
        }
        Command::Sweep(a) => {
            let spec = SweepSpec::from_args(a)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.jobs.unwrap_or(0))
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            pool.install(|| cmd_sweep(&spec))
        }
        Command::Selftest => Ok(cmd_selftest()),
    }
}

/// Renders records as one JSON document (a single record), JSON lines, or CSV.
pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            if report.records.len() == 1 && report.name != "sweep" {
                Ok(
                    serde_json::to_string_pretty(&report.records[0]).expect("values serialize")
                        + "\n",
                )
            } else {
                let mut out = String::new();
                for r in &report.records {
                    out.push_str(&r.to_string());
                    out.push('\n');
                }
                Ok(out)
            }
        }
        Format::Csv => to_csv(&report.records),
    }
}

fn to_csv(records: &[Value]) -> Result<String> {
    let mut header: Vec<String> = Vec::new();
    for r in records {
        if let Value::Object(map) = r {
            for k in map.keys() {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(&header).map_err(io)?;
    for r in records {
        let row: Vec<String> = header
            .iter()
            .map(|k| match r.get(k) {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            })
            .collect();
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn output_path(cli: &Cli, name: &str) -> Option<PathBuf> {
    if let Some(p) = &cli.out {
        return Some(p.clone());
    }
    let dir = cli.out_dir.as_ref()?;
    let ext = match (cli.format, name) {
        (Format::Csv, _) => "csv",
        (Format::Json, "sweep") => "jsonl",
        (Format::Json, _) => "json",
    };
    Some(dir.join(format!("{name}.{ext}")))
}

/// Parses arguments, runs, writes output; returns the process exit code:
/// `0` on success, `1` when a check failed, `2` on invalid input.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    let report = match execute(&cli).and_then(|r| render(&r, cli.format).map(|text| (r, text))) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(stderr, "{}", serde_json::json!({ "error": e.to_string() }));
            return 2;
        }
    };
    let (report, text) = report;
    match output_path(&cli, report.name) {
        Some(path) => {
            let written = path
                .parent()
                .filter(|d| !d.as_os_str().is_empty())
                .map_or(Ok(()), std::fs::create_dir_all)
                .and_then(|_| std::fs::write(&path, &text));
            if let Err(e) = written {
                let _ = writeln!(
                    stderr,
                    "{}",
                    serde_json::json!({ "error": format!("{}: {e}", path.display()) })
                );
                return 2;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    if report.failures.is_empty() {
        0
    } else {
        let _ = writeln!(
            stderr,
            "{}",
            serde_json::json!({ "failures": report.failures })
        );
        1
    }
}
