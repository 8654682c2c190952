//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hazard_eeg_core::tsc::Task;

use crate::commands::{self, SweepOptions};
use crate::config::PipelineConfig;
use crate::error::Result;
use crate::pipeline::thread_pool;

#[derive(Debug, Parser)]
#[command(name = "hazard-eeg", version, about = "Simulate, preprocess, analyse and classify hazard-perception EEG")]
pub struct Cli {
    /// TOML pipeline configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configuration's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads for per-participant and per-model work.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic cohort.
    Simulate,
    /// Re-reference, filter, interpolate, clean, epoch, baseline and reject.
    Preprocess { manifest: PathBuf },
    /// Contingency tables, chi-square tests and ERP contrasts.
    Report { manifest: PathBuf, epochs: PathBuf },
    /// Fit and evaluate the configured models.
    Train {
        epochs: PathBuf,
        #[arg(long)]
        task: Option<Task>,
        #[arg(long, requires = "task")]
        electrode: Option<String>,
    },
    /// Score every epoch with one model.
    Classify { epochs: PathBuf, model: PathBuf },
    /// Emit one annotation record per recorded trial.
    Annotate { manifest: PathBuf, epochs: PathBuf, models: PathBuf },
    /// Repeat simulate, preprocess and analysis over consecutive seeds.
    SeedSweep {
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first: u64,
        /// Also train the configured models.
        #[arg(long)]
        classify: bool,
        /// Also train on permuted labels.
        #[arg(long, requires = "classify")]
        shuffled: bool,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    }
    .with_seed(cli.seed);
    let pool = thread_pool(cli.jobs)?;
    let out = &cli.out;
    match cli.command {
        Command::Simulate => {
            let cohort = commands::simulate(&config, out, &pool)?;
            println!("wrote {} participants to {}", cohort.recordings.len(), out.display());
        }
        Command::Preprocess { manifest } => {
            for s in commands::preprocess(&manifest, &config, out, &pool)? {
                println!("{}: {} epochs, {} rejected", s.participant, s.epochs, s.rejected.len());
            }
        }
        Command::Report { manifest, epochs } => {
            let report = commands::report(&manifest, &epochs, &config, out)?;
            for row in &report.stats {
                println!("{}", commands::format_stats_row(row));
            }
        }
        Command::Train { epochs, task, electrode } => {
            println!("{}", commands::EVAL_COLUMNS);
            for line in commands::train(&epochs, &config, task.map(|t| (t, electrode)), out, &pool)? {
                println!("{line}");
            }
        }
        Command::Classify { epochs, model } => {
            let n = commands::classify(&epochs, &model, &config, out)?;
            println!("scored {n} epochs");
        }
        Command::Annotate { manifest, epochs, models } => {
            let records = commands::annotate(&manifest, &epochs, &models, &config, out)?;
            let covert = records.iter().filter(|r| r.implicit_label == commands::ImplicitLabel::CovertHazard).count();
            println!("{} records, {covert} covert", records.len());
        }
        Command::SeedSweep { seeds, first, classify, shuffled } => {
            let opts = SweepOptions { first_seed: first, n_seeds: seeds, classify, shuffled };
            let sweep = commands::seed_sweep(&config, opts, out, &pool)?;
            for (i, c) in sweep.contrasts.iter().enumerate() {
                println!("{}: confirmed in {}/{} seeds", c.scope(), sweep.confirmed(i, 0.05), seeds);
            }
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and maps errors to exit codes: 0 on
/// success, 1 for runtime and data errors, 2 for configuration and usage
/// errors.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
