use clap::{Parser, ValueEnum};
use orbitlab_cli::config::ExperimentConfig;
use orbitlab_cli::{run, RunOptions};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Kirillov,
    Star,
    Compose,
    Stability,
    Torsor,
    Disintegrate,
    Relchar,
    Nilcone,
    Microlocal,
}

#[derive(Debug, Parser)]
#[command(name = "orbitlab", about = "Run an orbitlab experiment from a TOML config")]
struct Args {
    /// Experiment to run; must match the config's `experiment` field.
    #[arg(value_enum)]
    experiment: Cmd,
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker count (cells currently run in order on one thread).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    emit_figures: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match ExperimentConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error at {e}");
            return ExitCode::from(2);
        }
    };
    let want = format!("{:?}", args.experiment).to_lowercase();
    if cfg.experiment.name() != want {
        eprintln!("config declares experiment {:?} but subcommand is {want:?}", cfg.experiment.name());
        return ExitCode::from(2);
    }
    let rep = match run(&cfg, &RunOptions { seed: args.seed, jobs: args.jobs }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = rep.write(&args.out, args.emit_figures) {
        eprintln!("writing artifacts: {e}");
        return ExitCode::from(1);
    }
    for c in &rep.criteria {
        println!("{:<16} {} measured={:e} threshold {}", c.criterion_id, if c.pass { "PASS" } else { "FAIL" }, c.measured, c.threshold);
    }
    for f in &rep.failures {
        eprintln!("cell failed: {f}");
    }
    if rep.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
