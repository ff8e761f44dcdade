//! Command-line interface for the experiment harness.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pulsar_qlr::data;
use pulsar_qlr::harness::{reaggregate, run_config, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "pulsar-qlr",
    version,
    about = "Quantum logistic regression benchmarks on HTRU-2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every cell of one configuration file.
    Run {
        /// Flat key = value configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Override the configured dataset path.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Override the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand the depth grid at a fixed training-set size.
    SweepDepth {
        #[arg(long)]
        config: PathBuf,
        /// Fixed training-set size.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Comma-separated depth list.
        #[arg(long, default_value = "1,2,3,5,10", value_delimiter = ',')]
        depth: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand the training-set-size grid at a fixed depth.
    SweepSize {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated size list.
        #[arg(long, default_value = "200,500,1000", value_delimiter = ',')]
        n: Vec<usize>,
        /// Fixed circuit depth.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-aggregate summary, delta, and metadata from an output directory.
    Report {
        #[arg(long)]
        out: PathBuf,
        /// Configuration the directory was produced with; defaults echo the
        /// standard model and grid lists.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write a synthetic dataset with the HTRU-2 schema.
    Fixture {
        #[arg(long)]
        out: PathBuf,
        /// Row count for the small fixture.
        #[arg(long, default_value_t = 200)]
        rows: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Write the full-size stand-in with the canonical class counts
        /// instead of a small fixture.
        #[arg(long, default_value_t = false)]
        canonical: bool,
    },
}

fn load_config(
    path: &PathBuf,
    data: Option<PathBuf>,
    out: Option<PathBuf>,
) -> pulsar_qlr::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_file(path)?;
    if let Some(data) = data {
        cfg.data_path = data;
    }
    if let Some(out) = out {
        cfg.out_dir = out;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: Cli) -> pulsar_qlr::Result<()> {
    match cli.command {
        Command::Run { config, data, out } => {
            let cfg = load_config(&config, data, out)?;
            let records = run_config(&cfg)?;
            println!(
                "completed {} records into {}",
                records.len(),
                cfg.out_dir.display()
            );
        }
        Command::SweepDepth { config, n, depth, out } => {
            let mut cfg = load_config(&config, None, out)?;
            cfg.n_list = vec![n];
            cfg.depth_list = depth;
            cfg.validate()?;
            let records = run_config(&cfg)?;
            println!(
                "depth sweep finished: {} records into {}",
                records.len(),
                cfg.out_dir.display()
            );
        }
        Command::SweepSize { config, n, depth, out } => {
            let mut cfg = load_config(&config, None, out)?;
            cfg.n_list = n;
            cfg.depth_list = vec![depth];
            cfg.validate()?;
            let records = run_config(&cfg)?;
            println!(
                "size sweep finished: {} records into {}",
                records.len(),
                cfg.out_dir.display()
            );
        }
        Command::Report { out, config } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::from_file(&path)?,
                None => ExperimentConfig::default(),
            };
            cfg.out_dir = out;
            let records = reaggregate(&cfg)?;
            println!("re-aggregated {} records", records.len());
        }
        Command::Fixture { out, rows, seed, canonical } => {
            if canonical {
                let ds = data::generate_synthetic_canonical();
                data::write_csv(&ds, &out)?;
                println!(
                    "wrote {} rows ({} pulsars) to {}",
                    ds.len(),
                    ds.n_positive(),
                    out.display()
                );
            } else {
                let ds = data::write_fixture(&out, rows, seed)?;
                println!(
                    "wrote {} rows ({} pulsars) to {}",
                    ds.len(),
                    ds.n_positive(),
                    out.display()
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap handles usage errors itself with exit code 2
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
