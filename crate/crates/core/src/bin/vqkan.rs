use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vqkan::decoder::format_path;
use vqkan::experiment::{self, format_number, ExperimentConfig};
use vqkan::Error;

#[derive(Parser)]
#[command(name = "vqkan", version, about = "VQKAN solver for time-dependent TSP experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(short, long)]
    config: PathBuf,
    /// Output directory, overriding `[output] dir`.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Optimise every seed and write trials.csv and results.csv.
    Run(Common),
    /// Exact shortest tours per sample into oracle.csv.
    Oracle(Common),
    /// VQKAN sum/product decoding against the 16-qubit VQE baseline.
    Compare(Common),
}

fn load(common: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::from_file(&common.config)?;
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(common) => {
            let cfg = load(&common)?;
            let outcome = experiment::run(&cfg)?;
            let optimal = outcome.results.iter().filter(|r| r.is_optimal()).count();
            println!(
                "{} result rows ({} at the exact optimum) written to {}",
                outcome.results.len(),
                optimal,
                cfg.output_dir.display()
            );
        }
        Command::Oracle(common) => {
            let cfg = load(&common)?;
            for row in experiment::oracle(&cfg)? {
                println!("{:>3}  {}  {}", row.sample, format_path(&row.path), format_number(row.length));
            }
        }
        Command::Compare(common) => {
            let cfg = load(&common)?;
            let show = |p: &experiment::DecodedPath| {
                let len = p.length.map_or_else(|| "-".to_string(), format_number);
                format!("{} ({})", format_path(&p.path), len)
            };
            for row in experiment::compare(&cfg)? {
                println!(
                    "{:>3}  sum {}  product {}  vqe {}",
                    row.sample,
                    show(&row.sum),
                    show(&row.product),
                    show(&row.vqe)
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
