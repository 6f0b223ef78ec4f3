//! Replicated parameter sweeps.
//!
//! Two families of trials are run per model: pruning swept at the default
//! noise level, and noise swept at the default pruning proportion. Every
//! method in a trial sees the same degraded matrix.

use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use crate::degrade::{degrade, DegradeSpec};
use crate::denoise::{self, LansConfig, Method, MethodParams};
use crate::error::{Error, Result};
use crate::graph_models::{ModelKind, ModelSpec};
use crate::matrix::AdjacencyMatrix;
use crate::metrics::{aggregate, f1_score, mse, AggregateRecord, TrialRecord};
use crate::seed;

use super::config::SweepConfig;
use super::io::{write_aggregates, write_trials};
use super::render::{render_curves, Metric};

// Stream label for regenerating stochastic ground truths.
const TRUTH_STREAM: u64 = 0x0074_7275_7468;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Prune,
    Noise,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::Prune, Axis::Noise];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Prune => "prune",
            Axis::Noise => "noise",
        }
    }

    fn code(self) -> u64 {
        match self {
            Axis::Prune => 0,
            Axis::Noise => 1,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axis::BOTH
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::config(format!("unknown axis `{s}`")))
    }
}

/// Seed of one trial: SplitMix64 folded over
/// `(model index, axis, point index, replicate)` starting from the master
/// seed.
pub fn trial_seed(master: u64, model_index: usize, axis: Axis, point_index: usize, rep: usize) -> u64 {
    seed::mix(master, &[model_index as u64, axis.code(), point_index as u64, rep as u64])
}

/// FNV-1a over the matrix size and the bit patterns of its entries.
pub fn instance_digest(x: &AdjacencyMatrix) -> u64 {
    const PRIME: u64 = 0x0000_0100_0000_01B3;
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    let mut feed = |word: u64| {
        for byte in word.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(PRIME);
        }
    };
    feed(x.n() as u64);
    for v in x.values() {
        feed(v.to_bits());
    }
    h
}

/// Identifies one degraded instance within a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialKey {
    pub model_index: usize,
    pub axis: Axis,
    pub point_index: usize,
    pub prune: f64,
    pub noise_sd: f64,
    pub rep: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    /// One record per method, in the order requested.
    pub records: Vec<TrialRecord>,
    /// Digest of the observed matrix as handed to each method.
    pub digests: Vec<u64>,
}

/// Ground truth for a trial: the shared matrix for deterministic models, a
/// fresh draw for stochastic ones.
pub fn trial_truth(
    model: &ModelSpec,
    shared: Option<&AdjacencyMatrix>,
    trial_seed: u64,
) -> Result<AdjacencyMatrix> {
    match shared {
        Some(a) if !model.kind().is_stochastic() => Ok(a.clone()),
        _ => model.with_seed(seed::mix(trial_seed, &[TRUTH_STREAM])).build(),
    }
}

/// Degrade `truth` once and score every method on that same instance.
pub fn run_trial(
    model: ModelKind,
    truth: &AdjacencyMatrix,
    key: &TrialKey,
    methods: &[Method],
    params: &MethodParams,
) -> Result<TrialOutcome> {
    let spec = DegradeSpec::new(key.prune, key.noise_sd, key.seed)?;
    let instance = degrade(truth, model.directedness(), &spec)?;
    let reference = instance_digest(&instance.observed);

    let mut records = Vec::with_capacity(methods.len());
    let mut digests = Vec::with_capacity(methods.len());
    for &method in methods {
        let digest = instance_digest(&instance.observed);
        if digest != reference {
            return Err(Error::Consistency(format!(
                "observed matrix changed before {method} ran"
            )));
        }
        digests.push(digest);
        let result = denoise::run(method, &instance.observed, params)?;
        records.push(TrialRecord {
            model,
            method,
            prune: key.prune,
            noise_sd: key.noise_sd,
            rep: key.rep,
            seed: key.seed,
            f1: f1_score(truth, &result.output)?,
            mse: mse(truth, &result.output)?,
            iterations: result.iterations,
            converged: result.converged,
        });
    }
    Ok(TrialOutcome { records, digests })
}

/// Every trial of the sweep in canonical order: model, axis, grid point,
/// replicate.
pub fn trial_keys(config: &SweepConfig) -> Vec<TrialKey> {
    let mut keys = Vec::with_capacity(config.trial_count() / config.methods.len().max(1));
    for model_index in 0..config.models.len() {
        for axis in Axis::BOTH {
            let points = match axis {
                Axis::Prune => config.prune_grid.points(),
                Axis::Noise => config.noise_grid.points(),
            };
            for (point_index, &value) in points.iter().enumerate() {
                let (prune, noise_sd) = match axis {
                    Axis::Prune => (value, config.default_noise_sd),
                    Axis::Noise => (config.default_prune, value),
                };
                for rep in 0..config.replicates {
                    keys.push(TrialKey {
                        model_index,
                        axis,
                        point_index,
                        prune,
                        noise_sd,
                        rep,
                        seed: trial_seed(config.seed, model_index, axis, point_index, rep),
                    });
                }
            }
        }
    }
    keys
}

/// Configuration echo plus everything needed to replay each trial.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub config: SweepConfig,
    pub trials: Vec<TrialKey>,
    pub version: &'static str,
    /// Seconds since the Unix epoch at the start of the run.
    pub timestamp: u64,
}

impl RunManifest {
    /// A valid configuration file: the configuration keys, then the
    /// provenance and per-trial seeds as comments.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# iterft {} sweep manifest", self.version).unwrap();
        writeln!(s, "# timestamp = {}", self.timestamp).unwrap();
        s.push_str(&self.config.to_text());
        writeln!(s, "# trials: model axis point_index prune noise_sd rep seed").unwrap();
        for k in &self.trials {
            writeln!(
                s,
                "# trial {} {} {} {} {} {} {}",
                self.config.models[k.model_index].kind(),
                k.axis,
                k.point_index,
                k.prune,
                k.noise_sd,
                k.rep,
                k.seed
            )
            .unwrap();
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub trials: Vec<TrialRecord>,
    pub aggregates: Vec<AggregateRecord>,
    pub manifest: RunManifest,
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let params = MethodParams {
        i_max: config.i_max,
        lans: LansConfig::new(config.lans_alpha)?,
    };
    let shared: Vec<Option<AdjacencyMatrix>> = config
        .models
        .iter()
        .map(|m| (!m.kind().is_stochastic()).then(|| m.build()).transpose())
        .collect::<Result<_>>()?;

    let keys = trial_keys(config);
    let outcomes: Vec<TrialOutcome> = keys
        .par_iter()
        .map(|key| {
            let model = &config.models[key.model_index];
            let truth = trial_truth(model, shared[key.model_index].as_ref(), key.seed)?;
            run_trial(model.kind(), &truth, key, &config.methods, &params)
        })
        .collect::<Result<_>>()?;

    // Canonical order: grid key, then method, then replicate.
    type SortKey = (usize, Axis, usize, usize, usize);
    let mut indexed: Vec<(SortKey, TrialRecord)> = Vec::new();
    for (key, outcome) in keys.iter().zip(outcomes) {
        for (method_pos, record) in outcome.records.into_iter().enumerate() {
            indexed.push(((key.model_index, key.axis, key.point_index, method_pos, key.rep), record));
        }
    }
    indexed.sort_by_key(|(k, _)| *k);
    let trials: Vec<TrialRecord> = indexed.into_iter().map(|(_, r)| r).collect();
    let aggregates = aggregate(&trials)?;

    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Ok(SweepOutput {
        trials,
        aggregates,
        manifest: RunManifest {
            config: config.clone(),
            trials: keys,
            version: env!("CARGO_PKG_VERSION"),
            timestamp,
        },
    })
}

/// Aggregates along one axis of one model: the points whose other
/// coordinate equals `fixed`.
pub fn curve_series(
    aggregates: &[AggregateRecord],
    model: ModelKind,
    axis: Axis,
    fixed: f64,
) -> Vec<AggregateRecord> {
    aggregates
        .iter()
        .filter(|a| a.model == model)
        .filter(|a| match axis {
            Axis::Prune => a.noise_sd == fixed,
            Axis::Noise => a.prune == fixed,
        })
        .cloned()
        .collect()
}

/// Write `trials.csv`, `aggregates.csv`, `manifest.txt` and one chart per
/// (model, metric, axis) under `dir`. Returns the written paths.
pub fn write_outputs(dir: &Path, output: &SweepOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let mut trials = Vec::new();
    write_trials(&mut trials, &output.trials)?;
    let path = dir.join("trials.csv");
    fs::write(&path, trials)?;
    written.push(path);

    let mut aggs = Vec::new();
    write_aggregates(&mut aggs, &output.aggregates)?;
    let path = dir.join("aggregates.csv");
    fs::write(&path, aggs)?;
    written.push(path);

    let path = dir.join("manifest.txt");
    fs::write(&path, output.manifest.to_text())?;
    written.push(path);

    let config = &output.manifest.config;
    for model in &config.models {
        for axis in Axis::BOTH {
            let (fixed, default_line) = match axis {
                Axis::Prune => (config.default_noise_sd, config.default_prune),
                Axis::Noise => (config.default_prune, config.default_noise_sd),
            };
            let series = curve_series(&output.aggregates, model.kind(), axis, fixed);
            for metric in Metric::BOTH {
                let svg = render_curves(&series, metric, axis, default_line)?;
                let path = dir.join(format!("{}_{}_{}.svg", model.kind(), metric, axis));
                fs::write(&path, svg)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Grid;
    use std::collections::HashSet;

    fn tiny_config() -> SweepConfig {
        SweepConfig {
            models: vec![ModelSpec::Lattice { rows: 4, cols: 4 }],
            methods: vec![Method::RealThreshold],
            prune_grid: Grid::new(0.25, 0.25, 0.05).unwrap(),
            noise_grid: Grid::new(0.25, 0.25, 0.05).unwrap(),
            replicates: 1,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn seeds_are_unique_over_the_default_grid() {
        let keys = trial_keys(&SweepConfig::default());
        assert_eq!(keys.len(), 2000);
        let seeds: HashSet<u64> = keys.iter().map(|k| k.seed).collect();
        assert_eq!(seeds.len(), keys.len());
    }

    #[test]
    fn trial_seed_varies_with_each_component() {
        let base = trial_seed(1, 0, Axis::Prune, 0, 0);
        assert_ne!(base, trial_seed(2, 0, Axis::Prune, 0, 0));
        assert_ne!(base, trial_seed(1, 1, Axis::Prune, 0, 0));
        assert_ne!(base, trial_seed(1, 0, Axis::Noise, 0, 0));
        assert_ne!(base, trial_seed(1, 0, Axis::Prune, 1, 0));
        assert_ne!(base, trial_seed(1, 0, Axis::Prune, 0, 1));
    }

    #[test]
    fn single_trial_cardinality() {
        let mut cfg = tiny_config();
        cfg.noise_grid = Grid::new(0.0, 0.0, 1.0).unwrap();
        // One point per axis: two trials, one method.
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.trials.len(), 2);
        assert_eq!(out.trials.len(), cfg.trial_count());
    }

    #[test]
    fn methods_share_the_degraded_instance() {
        let truth = crate::graph_models::lattice(5, 5);
        let key = TrialKey {
            model_index: 0,
            axis: Axis::Prune,
            point_index: 0,
            prune: 0.3,
            noise_sd: 0.2,
            rep: 0,
            seed: 17,
        };
        let out = run_trial(ModelKind::Lattice, &truth, &key, &Method::ALL, &MethodParams::default())
            .unwrap();
        let expected = degrade(&truth, ModelKind::Lattice.directedness(), &DegradeSpec::new(0.3, 0.2, 17).unwrap())
            .unwrap();
        assert_eq!(out.digests, vec![instance_digest(&expected.observed); 5]);
        assert_eq!(out.records.len(), 5);
    }

    #[test]
    fn stochastic_truth_is_regenerated() {
        let pa = ModelSpec::default_for(ModelKind::PreferentialAttachment);
        let a = trial_truth(&pa, None, 1).unwrap();
        let b = trial_truth(&pa, None, 2).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, trial_truth(&pa, None, 1).unwrap());

        let lattice = ModelSpec::Lattice { rows: 3, cols: 3 };
        let shared = lattice.build().unwrap();
        assert_eq!(trial_truth(&lattice, Some(&shared), 5).unwrap(), shared);
    }

    #[test]
    fn manifest_replays_as_a_config() {
        let cfg = tiny_config();
        let out = run_sweep(&cfg).unwrap();
        let text = out.manifest.to_text();
        assert_eq!(SweepConfig::parse(&text).unwrap(), cfg);
        let again = run_sweep(&SweepConfig::parse(&text).unwrap()).unwrap();
        assert_eq!(again.trials, out.trials);
    }

    #[test]
    fn curve_series_selects_one_axis() {
        let mut cfg = tiny_config();
        cfg.prune_grid = Grid::new(0.1, 0.3, 0.1).unwrap();
        cfg.noise_grid = Grid::new(0.0, 0.5, 0.25).unwrap();
        let out = run_sweep(&cfg).unwrap();
        let prune = curve_series(&out.aggregates, ModelKind::Lattice, Axis::Prune, 0.25);
        assert_eq!(prune.iter().map(|a| a.prune).collect::<Vec<_>>(), vec![0.1, 0.2, 0.25, 0.3]);
        let noise = curve_series(&out.aggregates, ModelKind::Lattice, Axis::Noise, 0.25);
        assert_eq!(noise.iter().map(|a| a.noise_sd).collect::<Vec<_>>(), vec![0.0, 0.25, 0.5]);
    }
}
