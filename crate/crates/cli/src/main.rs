use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sdp_cli::commands::{self, GammaAction, GammaArgs, SeriesKindArg};
use sdp_cli::error::{CliError, CliResult};
use sdp_cli::report::{RunConfig, DEFAULT_MAX_CHAIN_DEGREE, DEFAULT_THRESHOLD};
use sdp_cli::suites::{claims_for, run_suite};
use sdp_core::series::DEFAULT_CLASS_BOUND;
use sdp_core::ChainConfig;

#[derive(Parser)]
#[command(
    name = "sdp",
    version,
    about = "Subdirect products of perfect groups: verification driver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a claim suite and print one line per claim.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Degree above which chains use the randomized phase first.
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: usize,
        #[arg(long, default_value_t = DEFAULT_CLASS_BOUND)]
        class_bound: usize,
        /// Largest degree for which SL(2n,4) chains are built.
        #[arg(long, default_value_t = DEFAULT_MAX_CHAIN_DEGREE)]
        max_chain_degree: usize,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        /// List the claims of the suite and exit.
        #[arg(long)]
        list: bool,
    },
    /// Print a lower central, derived or iterated commutator series.
    Series {
        group: String,
        #[arg(long, value_enum, default_value = "lcs")]
        kind: SeriesKindArg,
        /// Normal subgroup for `--kind iterated` (default: the group itself).
        #[arg(long)]
        normal: Option<String>,
        /// Number of terms to compute.
        #[arg(long, default_value_t = DEFAULT_CLASS_BOUND)]
        max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build Γ_k(G,N) over [d] and report its order, a membership or the
    /// lower central comparison.
    Gamma {
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "order")]
        action: GammaAction,
        /// `w` for `--action member`: Δ_[d](w) is tested.
        #[arg(long)]
        element: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_CHAIN_DEGREE)]
        max_chain_degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Verify {
            suite,
            seed,
            json,
            threshold,
            class_bound,
            max_chain_degree,
            jobs,
            list,
        } => {
            if list {
                for (_, c) in claims_for(&suite)? {
                    println!("{:<22} {:<10} {}", c.id, c.suite, c.statement);
                }
                return Ok(());
            }
            let config = RunConfig {
                suite,
                seed,
                threshold,
                class_bound,
                max_chain_degree,
            };
            let jobs =
                jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let report = run_suite(&config, jobs)?;
            print!("{}", report.to_text());
            if let Some(path) = json {
                report.write_atomic(&path)?;
            }
            match report.payload.first_failure() {
                Some(c) => Err(CliError::ClaimFailed(c.id.clone())),
                None => Ok(()),
            }
        }
        Command::Series {
            group,
            kind,
            normal,
            max,
            seed,
        } => {
            let value = commands::series(
                &group,
                normal.as_deref(),
                kind,
                max,
                ChainConfig::with_seed(seed),
            )?;
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            Ok(())
        }
        Command::Gamma {
            g,
            n,
            d,
            k,
            action,
            element,
            max_chain_degree,
            seed,
        } => {
            let args = GammaArgs {
                g: &g,
                n: &n,
                d,
                k,
                action,
                element: element.as_deref(),
                max_chain_degree,
            };
            let value = commands::gamma(&args, ChainConfig::with_seed(seed))?;
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sdp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
