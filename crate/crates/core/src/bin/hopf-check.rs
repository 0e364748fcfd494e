use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use hopf_core::groups::{Cocycle, FiniteGroup};
use hopf_core::suites::{list_registry, registry_group, run_suite, SuiteOptions, DEFAULT_SEED, SUITES};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

/// Verification suites for finite-dimensional Hopf C*-algebras.
#[derive(Debug, Parser)]
#[command(name = "hopf-check", version)]
struct Args {
    /// Suite to run.
    #[arg(long, required_unless_present = "list")]
    suite: Option<String>,
    /// Built-in group name (see --list).
    #[arg(long, conflicts_with = "group_file")]
    group: Option<String>,
    /// Group multiplication table file.
    #[arg(long)]
    group_file: Option<PathBuf>,
    /// 2-cocycle file for counterexample-twisted.
    #[arg(long)]
    cocycle_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    report: ReportFormat,
    /// Print built-in groups and suites.
    #[arg(long)]
    list: bool,
    /// Record wall-clock time in the report (otherwise elapsed_ms is 0).
    #[arg(long)]
    timings: bool,
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("hopf-check: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    if args.list {
        print!("{}", list_registry());
        return ExitCode::SUCCESS;
    }
    let suite = args.suite.expect("required unless --list");
    if !SUITES.contains(&suite.as_str()) {
        return usage(&format!("unknown suite {suite:?}; try --list"));
    }
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return usage("--tol must be a positive number");
    }
    let group = match (&args.group, &args.group_file) {
        (Some(name), None) => match registry_group(name) {
            Some(g) => g,
            None => return usage(&format!("unknown group {name:?}; try --list")),
        },
        (None, Some(path)) => match FiniteGroup::from_file(path) {
            Ok(g) => g,
            Err(e) => return usage(&format!("{}: {e}", path.display())),
        },
        _ => return usage("exactly one of --group or --group-file is required"),
    };
    let cocycle = match &args.cocycle_file {
        Some(path) => match Cocycle::from_file(group.clone(), path) {
            Ok(u) => Some(u),
            Err(e) => return usage(&format!("{}: {e}", path.display())),
        },
        None => None,
    };
    let opts = SuiteOptions {
        tol: args.tol,
        seed: args.seed,
        cocycle,
    };
    let mut report = match run_suite(&suite, &group, &opts) {
        Ok(r) => r,
        Err(e) => return usage(&e.to_string()),
    };
    if args.timings {
        eprintln!("elapsed {:.1} ms", report.elapsed_ms);
    } else {
        report.elapsed_ms = 0.0;
    }
    match args.report {
        ReportFormat::Json => {
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            eprint!("{}", report.table());
        }
        ReportFormat::Text => print!("{}", report.table()),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
