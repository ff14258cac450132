use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_episode, CliError, EpisodeOptions, EpisodeReport, Outcome, Scenario};
use crate::controller::SteeringPolicy;
use crate::geometry::GammaFormula;

/// Command-line settings layered over a scenario's own.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOverrides {
    pub seed: Option<u64>,
    pub noise: Option<bool>,
    pub steering: Option<SteeringPolicy>,
    pub gamma: GammaFormula,
}

impl RunOverrides {
    pub fn options_for(&self, s: &Scenario) -> EpisodeOptions {
        EpisodeOptions {
            seed: self.seed.unwrap_or(s.seed),
            noise: self.noise.unwrap_or(s.noise),
            steering: self.steering.unwrap_or(s.controller.steering),
            gamma: self.gamma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchItem {
    pub scenario: String,
    pub seed: u64,
    pub report: Option<EpisodeReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub episodes: usize,
    pub errors: usize,
    pub picked: usize,
    /// Picked over episodes that ran to completion.
    pub pick_rate: f64,
    pub mean_time_to_pick: Option<f64>,
    pub mean_path_length: Option<f64>,
    /// Episodes in which at least one back-off happened.
    pub with_backoff: usize,
}

pub fn expand_glob(pattern: &str) -> Result<Vec<PathBuf>, CliError> {
    let paths = glob::glob(pattern)
        .map_err(|e| CliError::Pattern(e.to_string()))?
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Io(e.to_string()))?;
    if paths.is_empty() {
        return Err(CliError::Pattern(format!("no files match {pattern:?}")));
    }
    Ok(paths)
}

/// Run `n_seeds` seeds of every scenario. Seeds count up from each
/// scenario's base seed. Failures of single episodes are recorded, not
/// propagated.
pub fn run_batch(scenarios: &[(String, Scenario)], n_seeds: u64, overrides: &RunOverrides) -> Vec<BatchItem> {
    let jobs: Vec<(usize, u64)> = (0..scenarios.len()).flat_map(|i| (0..n_seeds).map(move |k| (i, k))).collect();
    jobs.par_iter()
        .map(|&(i, k)| {
            let (name, s) = &scenarios[i];
            let mut opts = overrides.options_for(s);
            opts.seed = opts.seed.wrapping_add(k);
            let (report, error) = match run_episode(s, &opts) {
                Ok((r, _)) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            BatchItem { scenario: name.clone(), seed: opts.seed, report, error }
        })
        .collect()
}

pub fn summarize(items: &[BatchItem]) -> BatchSummary {
    let reports: Vec<&EpisodeReport> = items.iter().filter_map(|i| i.report.as_ref()).collect();
    let picked: Vec<&&EpisodeReport> = reports.iter().filter(|r| r.outcome == Outcome::Picked).collect();
    let mean = |v: Vec<f64>| if v.is_empty() { None } else { Some(v.iter().sum::<f64>() / v.len() as f64) };
    BatchSummary {
        episodes: items.len(),
        errors: items.len() - reports.len(),
        picked: picked.len(),
        pick_rate: if reports.is_empty() { 0.0 } else { picked.len() as f64 / reports.len() as f64 },
        mean_time_to_pick: mean(picked.iter().filter_map(|r| r.time_to_pick).collect()),
        mean_path_length: mean(reports.iter().map(|r| r.path_length).collect()),
        with_backoff: reports.iter().filter(|r| r.backoffs > 0).count(),
    }
}
