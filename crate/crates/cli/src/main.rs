//! `ssp4`: count, enumerate, search, and tabulate superspecial genus-4
//! hyperelliptic curves whose automorphism group properly contains the
//! Klein 4-group.
//!
//! Exit codes: 0 success, 1 runtime error, 2 internal consistency
//! violation, 3 usage error.

use std::path::PathBuf;

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use ssp4_core::app::{
    conjecture_scan, enumerate_all, find_one, is_prime, selftest, table_csv, table_rows,
    verify_model, CurveRecord, TableOptions, TableRow,
};
use ssp4_core::family_d10::d10_enumerate;
use ssp4_core::family_d4::{d4_enumerate_cached, d4_enumerate_direct};
use ssp4_core::family_d8::d8_enumerate;
use ssp4_core::fields::FieldDesc;
use ssp4_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ssp4",
    version,
    about = "Superspecial genus-4 hyperelliptic curves with extra involutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountGroup {
    D8,
    D10,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumGroup {
    D4,
    D8,
    D10,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Count isomorphism classes in one family from its coefficient
    /// polynomial degree; prints a single integer.
    Count {
        /// Prime characteristic, p >= 7.
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        group: CountGroup,
    },
    /// List one representative per isomorphism class.
    Enumerate {
        /// Prime characteristic, p >= 7.
        #[arg(long)]
        p: u64,
        /// Family to enumerate; `all` combines every family into a
        /// single report with counts and timings.
        #[arg(long, value_enum)]
        group: EnumGroup,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// For `--group d4`: use the genus-2 construction instead of the
        /// direct parameter scan, caching its triple lists here.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Find one curve as cheaply as possible: congruence classes first,
    /// then family polynomial roots, then the randomized direct scan.
    Find {
        /// Prime characteristic, p >= 7.
        #[arg(long)]
        p: u64,
        /// Scan order seed; defaults to SSP4_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Per-prime class counts over a range, as CSV.
    Table {
        /// Lower bound (inclusive).
        #[arg(long)]
        pmin: u64,
        /// Upper bound (exclusive).
        #[arg(long)]
        pmax: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fill the D4 and All columns above the ceiling too.
        #[arg(long)]
        with_d4: bool,
        /// The D4 column is always computed for p <= this bound.
        #[arg(long, default_value_t = 60)]
        d4_ceiling: u64,
        /// Worker threads across primes.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Decide superspeciality of y^2 = f(x) for a given f.
    Verify {
        /// Prime characteristic, p >= 7.
        #[arg(long)]
        p: u64,
        /// Integer coefficients of f, lowest degree first, separated by
        /// commas or spaces (e.g. "0,1,0,0,0,0,0,0,0,1").
        #[arg(long)]
        model: String,
    },
    /// Scan a prime range for counterexamples to the conjectured
    /// existence and vanishing patterns.
    Conjecture {
        /// Lower bound (inclusive).
        #[arg(long)]
        pmin: u64,
        /// Upper bound (exclusive).
        #[arg(long)]
        pmax: u64,
        /// Scan order seed; defaults to SSP4_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the property suites over sampled primes.
    Selftest {
        /// Sampling seed; defaults to SSP4_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// A usage mistake (bad argument values), distinct from runtime errors.
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(match run(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            3
        }
        Err(Failure::Core(Error::ConsistencyViolation(msg))) => {
            eprintln!("consistency violation: {msg}");
            2
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            1
        }
    });
}

fn require_prime(p: u64) -> std::result::Result<(), Failure> {
    if p < 7 || !is_prime(p) {
        return Err(Failure::Usage(format!("--p must be a prime >= 7, got {p}")));
    }
    Ok(())
}

fn seed_or_env(seed: Option<u64>) -> std::result::Result<u64, Failure> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("SSP4_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("SSP4_SEED must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}

fn print_json<T: serde::Serialize>(value: &T) {
    let text = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    println!("{text}");
}

/// Family-record CSV; lambda and model cells are quoted because field
/// elements serialize with commas.
fn records_csv(records: &[CurveRecord]) -> String {
    let mut out = String::from("p,family,aut,lambda,model\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},\"{}\",\"{}\"\n",
            r.p,
            r.family,
            r.aut,
            r.lambda.as_deref().unwrap_or(""),
            r.model.join(";")
        ));
    }
    out
}

fn family_records(p: u64, group: EnumGroup, cache_dir: Option<&PathBuf>) -> Result<Vec<CurveRecord>> {
    let f4 = FieldDesc::new(p, 4)?;
    let mut records = Vec::new();
    match group {
        EnumGroup::D4 => {
            let classes = match cache_dir {
                Some(dir) => d4_enumerate_cached(p, dir)?,
                None => d4_enumerate_direct(p)?,
            };
            for (form, aut) in classes {
                records.push(CurveRecord::from_model(&f4, aut, &form.model(&f4)?, None)?);
            }
        }
        EnumGroup::D8 => {
            for c in d8_enumerate(p)? {
                records.push(CurveRecord::from_model(
                    &f4,
                    c.aut(),
                    &c.model(&f4)?,
                    Some(c.lambda()),
                )?);
            }
        }
        EnumGroup::D10 => {
            for c in d10_enumerate(p)? {
                records.push(CurveRecord::from_model(
                    &f4,
                    c.aut(),
                    &c.model(&f4)?,
                    Some(c.lambda()),
                )?);
            }
        }
        EnumGroup::All => unreachable!("handled by the caller"),
    }
    Ok(records)
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Count { p, group } => {
            require_prime(p)?;
            let n = match group {
                CountGroup::D8 => ssp4_core::family_d8::d8_count(p)?,
                CountGroup::D10 => ssp4_core::family_d10::d10_count(p)?,
            };
            println!("{n}");
        }
        Command::Enumerate {
            p,
            group,
            format,
            cache_dir,
        } => {
            require_prime(p)?;
            if group == EnumGroup::All {
                let report = enumerate_all(p)?;
                match format {
                    Format::Json => print_json(&report),
                    Format::Csv => {
                        let row = TableRow {
                            p,
                            all: Some(report.counts.all),
                            d4: Some(report.counts.d4),
                            d8: report.counts.d8,
                            d10: report.counts.d10,
                            g32: report.counts.g32,
                            g40: report.counts.g40,
                        };
                        print!("{}", table_csv(&[row]));
                    }
                }
            } else {
                let records = family_records(p, group, cache_dir.as_ref())?;
                match format {
                    Format::Json => print_json(&records),
                    Format::Csv => print!("{}", records_csv(&records)),
                }
            }
        }
        Command::Find { p, seed } => {
            require_prime(p)?;
            let seed = seed_or_env(seed)?;
            match find_one(p, seed)? {
                Some(record) => print_json(&record),
                None => println!("null"),
            }
        }
        Command::Table {
            pmin,
            pmax,
            out,
            with_d4,
            d4_ceiling,
            jobs,
        } => {
            if pmin > pmax {
                return Err(Failure::Usage(format!(
                    "--pmin {pmin} exceeds --pmax {pmax}"
                )));
            }
            if jobs == 0 {
                return Err(Failure::Usage("--jobs must be at least 1".to_string()));
            }
            let opts = TableOptions {
                with_d4,
                d4_ceiling,
                jobs,
            };
            let csv = table_csv(&table_rows(pmin, pmax, &opts)?);
            match out {
                Some(path) => std::fs::write(&path, csv).map_err(Error::from)?,
                None => print!("{csv}"),
            }
        }
        Command::Verify { p, model } => {
            require_prime(p)?;
            let coeffs = model
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::parse::<i64>)
                .collect::<std::result::Result<Vec<i64>, _>>()
                .map_err(|_| {
                    Failure::Usage(format!(
                        "--model must be a list of integers separated by commas or spaces, got `{model}`"
                    ))
                })?;
            print_json(&verify_model(p, &coeffs)?);
        }
        Command::Conjecture { pmin, pmax, seed } => {
            if pmin > pmax {
                return Err(Failure::Usage(format!(
                    "--pmin {pmin} exceeds --pmax {pmax}"
                )));
            }
            let seed = seed_or_env(seed)?;
            let report = conjecture_scan(pmin, pmax, seed)?;
            let mut value =
                serde_json::to_value(&report).expect("report serialization cannot fail");
            value["counterexamples"] =
                serde_json::to_value(report.counterexamples()).expect("string list");
            value["known_exception_seen"] = serde_json::Value::Bool(report.known_exception_seen());
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("report serialization cannot fail")
            );
        }
        Command::Selftest { seed } => {
            let seed = seed_or_env(seed)?;
            for line in selftest(seed)? {
                println!("{line}");
            }
            println!("all property suites passed");
        }
    }
    Ok(())
}
