//! `cmzv`: evaluate, verify and hunt cyclotomic multiple zeta value
//! identities from the command line.

mod cache;
mod cmd;
mod config;
mod error;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cmd::eval::{EvalArgs, Kind};
use cmd::hunt::HuntArgs;
use cmd::verify::VerifyArgs;
use config::{Format, Overrides, RunConfig};
use error::CliResult;

#[derive(Parser)]
#[command(
    name = "cmzv",
    version,
    about = "High-precision evaluation and verification of CMZV identities"
)]
struct Cli {
    /// Config file (TOML); defaults to ./cmzv.toml when present
    #[arg(long, global = true, env = "CMZV_CONFIG")]
    config: Option<PathBuf>,

    /// Target decimal digits, 20 to 1000
    #[arg(long, global = true, env = "CMZV_DIGITS", value_parser = clap::value_parser!(u32).range(20..=1000))]
    digits: Option<u32>,

    /// Identity catalog (JSON); the bundled catalog otherwise
    #[arg(long, global = true, env = "CMZV_CATALOG")]
    catalog: Option<PathBuf>,

    /// Worker threads
    #[arg(long, global = true, env = "CMZV_PARALLEL", value_parser = clap::value_parser!(u32).range(1..))]
    parallel: Option<u32>,

    #[arg(long, global = true, env = "CMZV_OUTPUT", value_enum)]
    output: Option<Format>,

    #[arg(long, global = true, env = "CMZV_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a series, GPL, polylogarithm or integral
    Eval {
        #[arg(value_enum)]
        kind: Kind,
        /// Inline JSON or a path to a JSON file
        spec: String,
        /// Skip the value cache
        #[arg(long)]
        no_cache: bool,
    },
    /// Verify catalog identities
    Verify {
        #[arg(long)]
        group: Option<String>,
        /// Record id or glob such as `sun-2k*`
        #[arg(long)]
        id: Option<String>,
        /// Grid size for parametric families
        #[arg(long)]
        angles: Option<u32>,
        /// Write reports.jsonl, reports.csv and summary.json here
        #[arg(long)]
        report_dir: Option<PathBuf>,
        /// Include wall-clock times in reports
        #[arg(long)]
        timing: bool,
    },
    /// Search for an integer relation between a series value and a constant pool
    Hunt {
        /// Catalog id, inline JSON (series spec or problem), or a JSON file
        target: String,
        #[arg(long, conflicts_with = "basis")]
        preset: Option<String>,
        /// Comma-separated elements with `*`-joined factors, e.g. "pi^2,lambda^2"
        #[arg(long)]
        basis: Option<String>,
        /// Largest coefficient size in decimal digits
        #[arg(long)]
        max_digits: Option<u32>,
        /// Add 10^-E to the target before searching
        #[arg(long, value_name = "E")]
        perturb: Option<u32>,
    },
    /// Inspect the identity catalog
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Manage the value cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List {
        #[arg(long)]
        group: Option<String>,
    },
    /// Check a catalog file against the schema
    Validate { path: Option<PathBuf> },
}

#[derive(Subcommand)]
enum CacheAction {
    Clear,
    Stats,
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let cfg = RunConfig::resolve(Overrides {
        config: cli.config,
        digits: cli.digits,
        catalog: cli.catalog,
        cache_dir: cli.cache_dir,
        parallel: cli.parallel.map(|p| p as usize),
        output: cli.output,
    })?;
    match cli.command {
        Command::Eval {
            kind,
            spec,
            no_cache,
        } => cmd::eval::run(
            EvalArgs {
                kind,
                spec: &spec,
                use_cache: !no_cache,
            },
            &cfg,
            out,
        ),
        Command::Verify {
            group,
            id,
            angles,
            report_dir,
            timing,
        } => cmd::verify::run(
            VerifyArgs {
                group,
                id,
                angles,
                report_dir,
                timing,
            },
            &cfg,
            out,
        ),
        Command::Hunt {
            target,
            preset,
            basis,
            max_digits,
            perturb,
        } => cmd::hunt::run(
            HuntArgs {
                target,
                preset,
                basis,
                max_digits,
                perturb,
            },
            &cfg,
            out,
        ),
        Command::Catalog {
            action: CatalogAction::List { group },
        } => cmd::admin::catalog_list(group.as_deref(), &cfg, out),
        Command::Catalog {
            action: CatalogAction::Validate { path },
        } => cmd::admin::catalog_validate(path.as_deref(), &cfg, out),
        Command::Cache {
            action: CacheAction::Stats,
        } => cmd::admin::cache_stats(&cfg, out),
        Command::Cache {
            action: CacheAction::Clear,
        } => cmd::admin::cache_clear(&cfg, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
