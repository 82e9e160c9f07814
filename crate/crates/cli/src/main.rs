use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lgha::config::{parse_count, SuiteConfig, DEFAULT_TOLERANCES};
use lgha::report::write_atomic;
use lgha::suites::{self, SUITES};
use lgha::{CliError, EXIT_CHECK_FAILURE, EXIT_CONFIG, EXIT_PASS};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Numerical verification suites for harmonic analysis on the nilpotent
/// and KNA groups.
#[derive(Debug, Parser)]
#[command(name = "lgha", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Suite to run when no subcommand is given.
    #[arg(long, global = true)]
    suite: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON config file; command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Grid budget in total points; accepts `1e6`.
    #[arg(long, global = true, value_parser = parse_count)]
    budget_grid: Option<usize>,
    /// Monte Carlo sample budget; accepts `1e6`.
    #[arg(long, global = true, value_parser = parse_count)]
    budget_mc: Option<usize>,
    /// List suites and tolerance keys, then exit.
    #[arg(long)]
    list: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one suite (or `all`).
    Run { suite: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_CONFIG as u8
            } else {
                EXIT_PASS as u8
            });
        }
    };
    if cli.list {
        for (name, what) in SUITES {
            println!("{name:<24}{what}");
        }
        println!("{:<24}every suite above, in order", "all");
        println!();
        for (key, v) in DEFAULT_TOLERANCES {
            println!("tolerance {key:<28}{v:e}");
        }
        return ExitCode::SUCCESS;
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("lgha: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if let Ok(t) = std::env::var("LGHA_THREADS") {
        let n: usize = t.parse().map_err(|_| {
            CliError::Config(format!(
                "LGHA_THREADS must be a positive integer, got {t:?}"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let mut cfg = match &cli.config {
        Some(p) => SuiteConfig::from_path(p)?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(n) = cli.budget_grid {
        cfg.budgets.max_grid_points = n;
    }
    if let Some(n) = cli.budget_mc {
        cfg.budgets.max_mc_samples = n;
    }
    if let Some(p) = cli.out {
        cfg.out = Some(p);
    }
    let suite = match (cli.command, cli.suite) {
        (Some(Command::Run { suite }), _) => suite,
        (None, Some(s)) => s,
        (None, None) => cfg.suite.clone(),
    };

    let report = suites::run(&suite, &cfg)?;
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    match &cfg.out {
        Some(p) => write_atomic(p, &text)?,
        None => print!("{text}"),
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {} ({})", c.name, c.anchor);
    }
    eprintln!(
        "{}: {} passed, {} failed in {:.1} s",
        report.suite, report.summary.passed, report.summary.failed, report.summary.wall_time_s
    );
    Ok(if report.all_passed() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILURE
    })
}
