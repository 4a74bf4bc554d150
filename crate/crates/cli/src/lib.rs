//! Experiment orchestration for orbitlab: TOML configs in, CSV/JSON artifacts out.

pub mod config;
pub mod experiments;
pub mod report;

use config::{Experiment, ExperimentConfig};
pub use experiments::RunError;
use report::RunReport;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the config seed.
    pub seed: Option<u64>,
    pub jobs: usize,
}

pub const DEFAULT_SEED: u64 = 20240917;

/// Run the configured experiment and collect its report.
pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport, RunError> {
    let seed = opts.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let mut rep = RunReport { experiment: cfg.experiment.name().into(), ..Default::default() };
    match cfg.experiment {
        Experiment::Kirillov => experiments::kirillov(cfg, &mut rep)?,
        Experiment::Star => experiments::star(cfg, &mut rep)?,
        Experiment::Compose => experiments::compose(cfg, &mut rep, seed)?,
        Experiment::Stability => experiments::stability(cfg, &mut rep, seed)?,
        Experiment::Torsor => experiments::torsor(cfg, &mut rep, seed)?,
        Experiment::Disintegrate => experiments::disintegrate(cfg, &mut rep, seed)?,
        Experiment::Relchar => experiments::relchar(cfg, &mut rep, seed)?,
        Experiment::Nilcone => experiments::nilcone(cfg, &mut rep)?,
        Experiment::Microlocal => experiments::microlocal(cfg, &mut rep)?,
    }
    rep.row("run", "seed", seed as f64, None);
    rep.row("run", "jobs", opts.jobs.max(1) as f64, None);
    Ok(rep)
}
