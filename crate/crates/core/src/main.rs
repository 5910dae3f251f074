//! Command-line front end: one subcommand per module plus `all`, emitting
//! deterministic verification reports. Exit codes: 0 all checks passed,
//! 1 at least one check failed, 2 usage or configuration error.

use clap::{Parser, Subcommand};
use embedlab::report::{emit, Format};
use embedlab::runner::{run_all, run_module, RunConfig};
use embedlab::Error;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "embedlab", version, about = "Geometric embedding verification lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// RNG seed shared by every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (the suite is deterministic regardless).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Output format: json, csv, or text.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Per-check parameter overrides, KEY=VALUE (repeatable).
    #[arg(long = "param", global = true, value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Root-system enumeration and strongly-commuting selection checks.
    Roots,
    /// Weyl groups and maximally distributed boundary configurations.
    Coxeter,
    /// AN-map into SPD matrices: exactness and quasi-isometry bounds.
    Symmetric,
    /// Exact tree lemmas for products of 3-regular trees.
    Trees,
    /// SL3(Q_2) building ball, projections, and marked-subcomplex checks.
    Building,
    /// Every module's checks in a fixed order.
    All,
}

fn run(cli: &Cli) -> Result<(String, bool), Error> {
    let format = Format::parse(&cli.format)?;
    let mut cfg = RunConfig {
        seed: cli.seed,
        threads: cli.threads.max(1),
        ..RunConfig::default()
    };
    for p in &cli.params {
        let (key, value) = p
            .split_once('=')
            .ok_or_else(|| Error::ConfigError(format!("expected KEY=VALUE, got `{p}`")))?;
        cfg.apply_param(key, value)?;
    }
    let reports = match &cli.command {
        Command::Roots => run_module("roots", &cfg)?,
        Command::Coxeter => run_module("coxeter", &cfg)?,
        Command::Symmetric => run_module("symmetric", &cfg)?,
        Command::Trees => run_module("trees", &cfg)?,
        Command::Building => run_module("building", &cfg)?,
        Command::All => run_all(&cfg)?,
    };
    let all_pass = reports.iter().all(|r| r.pass);
    Ok((emit(&reports, format), all_pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((artifact, all_pass)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &artifact).map_err(|e| e.to_string()),
                None => {
                    print!("{artifact}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ Error::ConfigError(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
