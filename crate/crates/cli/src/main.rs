use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use emergent_irq_cli::config::SEED_ENV;
use emergent_irq_cli::{run, write_rows, CarrierKind, Experiment, ExperimentConfig, Format, Overrides};

/// Experiments on idempotent right quasigroups and their emergent algebra.
#[derive(Debug, Parser)]
#[command(name = "emergent-irq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        carrier: Option<CarrierKind>,
        #[arg(long, value_enum)]
        experiment: Option<Experiment>,
        /// Defaults to the config value, then $EMERGENT_IRQ_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Report path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// List carriers and their parameters.
    ListCarriers,
    /// List experiments.
    ListExperiments,
}

const EXIT_FAILED_CHECKS: u8 = 1;
const EXIT_INVALID: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED_CHECKS),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

/// `Ok(true)` when every row passed.
fn execute(command: Command) -> Result<bool> {
    match command {
        Command::ListCarriers => {
            for kind in <CarrierKind as clap::ValueEnum>::value_variants() {
                println!("{:<12}{}", kind.name(), kind.parameters());
            }
            Ok(true)
        }
        Command::ListExperiments => {
            for e in <Experiment as clap::ValueEnum>::value_variants() {
                println!("{:<13}{}", e.name(), e.summary());
            }
            Ok(true)
        }
        Command::Run {
            config,
            carrier,
            experiment,
            seed,
            tol,
            samples,
            out,
            format,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            cfg.apply(&Overrides {
                carrier,
                experiment,
                seed,
                tol,
                samples,
                out,
                format,
            });
            let env_seed = std::env::var(SEED_ENV).ok();
            let plan = cfg.resolve(env_seed.as_deref())?;
            let rows = run(&plan)?;
            match &plan.out {
                Some(path) => {
                    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
                    let mut w = BufWriter::new(file);
                    write_rows(&rows, plan.format, &mut w)?;
                    w.flush()?;
                }
                None => write_rows(&rows, plan.format, io::stdout().lock())?,
            }
            let failed = rows.iter().filter(|r| !r.passed).count();
            eprintln!("{} rows, {failed} failed", rows.len());
            Ok(failed == 0)
        }
    }
}
