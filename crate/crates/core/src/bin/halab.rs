use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use halab::lab::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "halab", about = "Harmonic analysis experiment runner")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one experiment and write `<experiment>.json` and `<experiment>.csv`.
    Run {
        experiment: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List registered experiments.
    List,
}

fn run(experiment: &str, config: Option<PathBuf>, seed: Option<u64>, out: Option<PathBuf>) -> halab::Result<bool> {
    let mut cfg = match config {
        Some(path) => ExperimentConfig::load(&path)?,
        None => ExperimentConfig::named(experiment, 0),
    };
    if cfg.experiment.is_empty() {
        cfg.experiment = experiment.to_string();
    } else if cfg.experiment != experiment {
        return Err(halab::Error::Config(format!(
            "config names experiment {:?} but {experiment:?} was requested",
            cfg.experiment
        )));
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let dir = out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    let report = lab::run_experiment(&cfg)?;
    let (json, csv) = lab::write_outputs(&report, &dir)?;
    println!(
        "{}: {} assertions, {} failed; hash {}",
        report.experiment,
        report.summary.assertions,
        report.summary.failed,
        report.hash()
    );
    println!("wrote {} and {}", json.display(), csv.display());
    for a in report.failures() {
        eprintln!(
            "FAILED {} {}: {} {} {}",
            a.instance_id, a.quantity, a.lhs, a.relation, a.rhs
        );
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.cmd {
        Cmd::List => {
            for e in lab::EXPERIMENTS {
                println!("{:<22} {}", e.name, e.description);
            }
            ExitCode::SUCCESS
        }
        Cmd::Run {
            experiment,
            config,
            seed,
            out,
        } => match run(&experiment, config, seed, out) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
