//! `swrec`: enumerate set partitions, compute weighted-record totals and
//! generating-function coefficients, and run the verification suites.
//!
//! Data goes to stdout, diagnostics to stderr. Exit status is 0 on success,
//! 1 when a verification suite reports failures, 2 on bad arguments.

use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Number, Value};

use swrec_core::asymptotics::asymptotic_report;
use swrec_core::closed_form::{load_or_build, total_swrec_egf, total_swrec_formula, CACHE_DIR_ENV};
use swrec_core::gf::gf_product;
use swrec_core::setpart::{
    enumerate_rgs, total_swrec_bruteforce, RestrictedGrowthString, DEFAULT_ENUMERATION_CAP,
};
use swrec_core::verify::{run_suite, Suite, VerifyConfig};
use swrec_core::{BellStirlingTables, Error};

#[derive(Parser)]
#[command(name = "swrec", version, about = "Weighted records in set partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List restricted growth strings of length n in lexicographic order.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Keep only words with exactly k blocks.
        #[arg(long)]
        k: Option<usize>,
        /// Append a statistic after a tab.
        #[arg(long, value_enum)]
        stat: Option<Stat>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Total of swrec over all partitions of [n].
    Total {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
        /// Largest n for brute-force enumeration.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
        /// Largest n for the formula and series methods.
        #[arg(long, default_value_t = 500)]
        formula_max: usize,
    },
    /// Rows (n, s, count) of the k-block generating function up to x^max_n.
    Gf {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a verification suite and print a JSON outcome.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest n enumerated (suite default when omitted).
        #[arg(long)]
        max_n: Option<usize>,
        /// Largest block count (suite default when omitted).
        #[arg(long)]
        max_k: Option<usize>,
        /// Series truncation order (default 12).
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 200)]
        egf_max: usize,
        #[arg(long, default_value_t = 500)]
        formula_max: usize,
    },
    /// Exact totals against the asymptotic estimate.
    Asymptotic {
        /// Comma-separated sizes, e.g. "10,100".
        #[arg(long, allow_hyphen_values = true)]
        ns: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        /// Same as --format json.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 2000)]
        table_cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Stat {
    Swrec,
    Srec,
    Rec,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Brute,
    Egf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

enum Failure {
    Usage(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_) | Error::Validation(_) | Error::Domain(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("swrec: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("swrec: {msg}");
            ExitCode::from(1)
        }
    }
}

fn tables(max_n: usize) -> Result<BellStirlingTables, Failure> {
    let dir = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from);
    Ok(load_or_build(max_n, dir.as_deref())?)
}

fn run(command: Command, out: &mut impl Write) -> CmdResult {
    match command {
        Command::Enumerate { n, k, stat, cap } => cmd_enumerate(out, n, k, stat, cap),
        Command::Total {
            n,
            method,
            cap,
            formula_max,
        } => cmd_total(out, n, method, cap, formula_max),
        Command::Gf { k, max_n, format } => cmd_gf(out, k, max_n, format),
        Command::Verify {
            suite,
            max_n,
            max_k,
            order,
            cap,
            egf_max,
            formula_max,
        } => {
            let config = VerifyConfig {
                max_n,
                max_k,
                order,
                brute_cap: cap,
                egf_max,
                formula_max,
            };
            cmd_verify(out, &suite, &config)
        }
        Command::Asymptotic {
            ns,
            format,
            json,
            table_cap,
        } => {
            let format = if json { ReportFormat::Json } else { format };
            cmd_asymptotic(out, &ns, format, table_cap)
        }
    }
}

fn cmd_enumerate(
    out: &mut impl Write,
    n: usize,
    k: Option<usize>,
    stat: Option<Stat>,
    cap: usize,
) -> CmdResult {
    if n > cap {
        return Err(Failure::Usage(format!(
            "n = {n} exceeds the enumeration cap {cap}"
        )));
    }
    for word in enumerate_rgs(n, k) {
        match stat {
            None => writeln!(out, "{word}")?,
            Some(s) => writeln!(out, "{word}\t{}", stat_value(&word, s))?,
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn stat_value(word: &RestrictedGrowthString, stat: Stat) -> u64 {
    match stat {
        Stat::Swrec => word.swrec(),
        Stat::Srec => word.srec(),
        Stat::Rec => word.rec_count() as u64,
    }
}

fn cmd_total(
    out: &mut impl Write,
    n: usize,
    method: Method,
    cap: usize,
    formula_max: usize,
) -> CmdResult {
    if method != Method::Brute && n > formula_max {
        return Err(Failure::Usage(format!(
            "n = {n} exceeds --formula-max {formula_max}"
        )));
    }
    let total = match method {
        Method::Brute => total_swrec_bruteforce(n, cap)?,
        Method::Formula => total_swrec_formula(n, &tables(n + 3)?)?,
        Method::Egf => total_swrec_egf(n, &tables(n + 3)?)?,
    };
    writeln!(out, "{total}")?;
    Ok(ExitCode::SUCCESS)
}

fn exact_number(v: impl ToString) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("decimal integer"))
}

fn cmd_gf(out: &mut impl Write, k: usize, max_n: usize, format: Format) -> CmdResult {
    let series = gf_product(k, max_n)?;
    match format {
        Format::Csv => {
            writeln!(out, "n,s,count")?;
            for (n, s, c) in series.terms() {
                writeln!(out, "{n},{s},{c}")?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = series
                .terms()
                .map(|(n, s, c)| json!([n, s, exact_number(c)]))
                .collect();
            let doc = json!({ "k": k, "max_n": max_n, "histogram": rows });
            writeln!(
                out,
                "{}",
                serde_json::to_string(&doc).expect("serializable")
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(out: &mut impl Write, suite: &str, config: &VerifyConfig) -> CmdResult {
    let suite: Suite = suite.parse()?;
    let tables = tables(config.tables_needed(suite))?;
    let outcome = run_suite(suite, config, &tables)?;
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&outcome).expect("serializable")
    )?;
    eprintln!(
        "swrec: suite {} ran {} cases, {} failures, {} ms",
        outcome.suite,
        outcome.cases_run,
        outcome.failures.len(),
        outcome.elapsed_ms
    );
    Ok(if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn parse_ns(list: &str) -> Result<Vec<usize>, Failure> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("bad size {p:?} in --ns")))
        })
        .collect()
}

fn cmd_asymptotic(
    out: &mut impl Write,
    ns: &str,
    format: ReportFormat,
    table_cap: usize,
) -> CmdResult {
    let ns = parse_ns(ns)?;
    let max = ns.iter().copied().max().unwrap_or(0);
    if max > table_cap {
        return Err(Failure::Usage(format!(
            "n = {max} exceeds --table-cap {table_cap}"
        )));
    }
    let reports = asymptotic_report(&ns, &tables(max + 3)?)?;
    match format {
        ReportFormat::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&reports).expect("serializable")
            )?;
        }
        ReportFormat::Table => {
            writeln!(out, "n\tr\texact_total\testimate\tratio")?;
            for rep in &reports {
                writeln!(
                    out,
                    "{}\t{:.10}\t{}\t{}\t{:.6}",
                    rep.n, rep.r, rep.exact_total, rep.estimate, rep.ratio
                )?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
