use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mimo_sparse::error::{Error, Result};
use mimo_sparse::experiment::{self, ExperimentConfig, InterferenceMode, SweepOptions};
use mimo_sparse::oracle;

#[derive(Parser)]
#[command(
    name = "mimo-select",
    version,
    about = "Joint transmit/receive antenna selection for MIMO radar"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select antennas for the configured target direction.
    Design {
        #[arg(long)]
        config: PathBuf,
        /// Result document (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the target direction over the configured angle grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also run exhaustive enumeration at every angle.
        #[arg(long)]
        oracle: bool,
        /// Worker threads (default: $MIMO_SELECT_JOBS or all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Enumerate every configuration for the configured target direction.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write every configuration instead of only the best one.
        #[arg(long)]
        retain_all: bool,
    },
    /// Score uniformly random configurations for the configured target direction.
    RandomBaseline {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Design { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let d = experiment::design(&cfg)?;
            let doc = &d.document;
            println!("tx_mask       {}", doc.tx_mask);
            println!("rx_mask       {}", doc.rx_mask);
            println!("sinr_db       {:.6}", doc.sinr_db);
            println!("sinr_full_db  {:.6}", doc.sinr_full_db);
            println!("iterations    {}", doc.iterations);
            println!("converged     {}", doc.converged);
            if !doc.converged {
                eprintln!("warning: selection did not converge within the iteration limit");
            }
            if let Some(path) = out {
                doc.write_json(&path)?;
            }
        }
        Command::Sweep {
            config,
            out,
            oracle,
            jobs,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let opts = SweepOptions {
                oracle: oracle.then_some(true),
                jobs: jobs.unwrap_or_else(experiment::default_jobs),
                ..SweepOptions::default()
            };
            let rows = experiment::sweep(&cfg, &opts)?;
            experiment::write_sweep_csv(&rows, create(&out)?)?;
            let failed = rows.iter().filter(|r| !r.is_ok()).count();
            println!("{} angles written to {}", rows.len(), out.display());
            if failed > 0 {
                eprintln!("warning: {failed} angles failed; see the status column");
            }
        }
        Command::Oracle {
            config,
            out,
            retain_all,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let scenario = cfg.scenario_at(cfg.design_angle()?, InterferenceMode::Fixed)?;
            let seed = cfg.snapshots.as_ref().map_or(0, |s| s.seed);
            let cov = experiment::covariances_for(&scenario, seed)?;
            let report = oracle::enumerate_optimal(
                &cov,
                &scenario.geometry,
                cfg.selection.tx_select,
                cfg.selection.rx_select,
                oracle::DEFAULT_CAP,
                retain_all,
            )?;
            let rows = report.all.unwrap_or_else(|| vec![report.best.clone()]);
            oracle::write_enumeration_csv(&rows, create(&out)?)?;
            let (tx, rx) = report.best.selection.to_bits();
            println!("evaluated {} configurations", report.evaluated);
            println!("best {tx} {rx} {:.6} dB", report.best.sinr_db);
        }
        Command::RandomBaseline {
            config,
            trials,
            out,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            if trials == 0 {
                return Err(Error::Config {
                    field: "trials".into(),
                    message: "must be at least 1".into(),
                });
            }
            let scenario = cfg.scenario_at(cfg.design_angle()?, InterferenceMode::Fixed)?;
            let seed = cfg.snapshots.as_ref().map_or(0, |s| s.seed);
            let cov = experiment::covariances_for(&scenario, seed)?;
            let rb = oracle::random_baseline(
                &cov,
                &scenario.geometry,
                cfg.selection.tx_select,
                cfg.selection.rx_select,
                trials,
                cfg.sweep.seed,
            )?;
            match out {
                Some(path) => oracle::write_enumeration_csv(&rb.trials, create(&path)?)?,
                None => oracle::write_enumeration_csv(&rb.trials, io::stdout().lock())?,
            }
            let mut err = io::stderr().lock();
            writeln!(
                err,
                "median {:.6} dB, best {:.6} dB, worst {:.6} dB",
                rb.median_db, rb.best_db, rb.worst_db
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
