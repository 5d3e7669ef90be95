use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use modhyp::{Int, MAX_MODULUS};
use modhyp_cli::cache::Cache;
use modhyp_cli::commands::{self, Format, Output, VerifyOptions};
use modhyp_cli::{Suite, SuiteParams};

/// Lattice points on modular hyperbolas: line censuses, distance counts and
/// verification sweeps.
#[derive(Parser, Debug)]
#[command(name = "modhyp", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    /// Directory for timestamped verification reports.
    #[arg(long, global = true, env = "MODHYP_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

fn modulus(s: &str) -> Result<Int, String> {
    let n: Int = s.parse().map_err(|e| format!("{e}"))?;
    if (2..=MAX_MODULUS).contains(&n) {
        Ok(n)
    } else {
        Err(format!("must lie in [2, {MAX_MODULUS}]"))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the points of xy = a (mod n).
    Points {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        a: Int,
        #[arg(long, value_parser = modulus)]
        n: Int,
    },
    /// Count ordinary lines and the collinearity histogram.
    Census {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        a: Int,
        #[arg(long, value_parser = modulus)]
        n: Int,
        #[arg(long)]
        all_a: bool,
    },
    /// Count distinct squared distances from the origin.
    Distances {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        a: Int,
        #[arg(long, value_parser = modulus)]
        n: Int,
        #[arg(long)]
        all_a: bool,
        /// Include the sorted list of squared distances.
        #[arg(long)]
        values: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<Int>,
        #[arg(long)]
        p: Option<Int>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, value_parser = modulus)]
        n_max: Option<Int>,
        #[arg(long)]
        all_a: bool,
        #[arg(long)]
        k: Option<u32>,
        /// Random `a` values per prime (theorem14).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// CSV table for the `tables` suite; the bundled copy is used otherwise.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Square-free construction with a large distance deficit.
    Gap {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: anyhow::Error| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

fn run(cli: Cli) -> Result<Output> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j as usize).build_global()?;
    }
    match cli.command {
        Command::Points { a, n } => commands::points(a, n, cli.format),
        Command::Census { a, n, all_a } => commands::census(a, n, all_a, cli.format),
        Command::Distances { a, n, all_a, values } => commands::distances(a, n, all_a, values, cli.format),
        Command::Verify {
            suite,
            a,
            p,
            m,
            n_max,
            all_a,
            k,
            samples,
            seed,
            fixtures,
        } => {
            let params = SuiteParams {
                a,
                p,
                m,
                n_max,
                all_a,
                k,
                samples,
                seed,
                fixtures,
            };
            let cache = cli.cache_dir.map(Cache::new);
            commands::verify(
                suite,
                &params,
                cli.format,
                VerifyOptions {
                    cache: cache.as_ref(),
                    verbose: cli.verbose,
                },
            )
        }
        Command::Gap { k } => commands::gap(k, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
