use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use boap_harness::{fixtures, run_all, summarize, summary, write_outputs, write_summary, ExperimentConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "boap", about = "Run and summarize BOAP experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every method and repeat of an experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Results directory; defaults to the config's `output` entry.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// Master seed, replacing the config's.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Recompute curves and the summary table from a results directory.
    Summarize {
        #[arg(long)]
        dir: PathBuf,
    },
    /// Regenerate reference maxima and dataset fixtures.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
        /// Only write the dataset fixtures.
        #[arg(long)]
        skip_true_max: bool,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Returns whether every run succeeded.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run {
            config,
            out,
            jobs,
            seed,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
                cfg.seeds = None;
            }
            let dir = out
                .or_else(|| cfg.output.clone())
                .context("no output directory: pass --out or set `output` in the config")?;
            let outputs = run_all(&cfg, jobs.max(1))?;
            write_outputs(&dir, &cfg, &outputs)?;
            let s = summarize(&dir)?;
            write_summary(&dir, &s)?;
            print!("{}", summary::render(&s));
            Ok(outputs.iter().all(|o| o.record.ok()))
        }
        Command::Summarize { dir } => {
            let s = summarize(&dir)?;
            write_summary(&dir, &s)?;
            print!("{}", summary::render(&s));
            Ok(s.warnings.is_empty())
        }
        Command::Fixtures { out, skip_true_max } => {
            fixtures::write_all(&out, !skip_true_max)?;
            println!("wrote fixtures to {}", out.display());
            Ok(true)
        }
    }
}
