//! Sweep configuration and its flat `key = value` text form.
//!
//! Blank lines and lines starting with `#` are ignored. Keys not present
//! keep their defaults. A configuration printed with
//! [`SweepConfig::to_text`] parses back to the same value.

use std::fmt::Write as _;

use crate::degrade::DegradeSpec;
use crate::denoise::{LansConfig, Method, DEFAULT_MAX_ITERATIONS};
use crate::error::{Error, Result};
use crate::graph_models::{ModelKind, ModelSpec};

/// An inclusive arithmetic grid `start, start + step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::config("grid bounds must be finite"));
        }
        if step <= 0.0 {
            return Err(Error::config(format!("grid step {step} must be > 0")));
        }
        if stop < start {
            return Err(Error::config(format!("grid stop {stop} below start {start}")));
        }
        Ok(Self { start, stop, step })
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid values rounded to 12 decimals, so `0.05 + 4 * 0.05` is exactly
    /// the literal `0.25`.
    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub models: Vec<ModelSpec>,
    pub methods: Vec<Method>,
    pub prune_grid: Grid,
    pub noise_grid: Grid,
    /// Held fixed while the noise axis is swept.
    pub default_prune: f64,
    /// Held fixed while the pruning axis is swept.
    pub default_noise_sd: f64,
    pub replicates: usize,
    pub seed: u64,
    pub i_max: usize,
    pub lans_alpha: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            models: ModelKind::ALL.iter().map(|&k| ModelSpec::default_for(k)).collect(),
            methods: Method::ALL.to_vec(),
            prune_grid: Grid { start: 0.05, stop: 0.95, step: 0.05 },
            noise_grid: Grid { start: 0.0, stop: 1.0, step: 0.05 },
            default_prune: DegradeSpec::DEFAULT_PRUNE,
            default_noise_sd: DegradeSpec::DEFAULT_NOISE_SD,
            replicates: 10,
            seed: 1,
            i_max: DEFAULT_MAX_ITERATIONS,
            lans_alpha: LansConfig::DEFAULT_ALPHA,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("bad value `{value}` for `{key}`")))
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::config("no models configured"));
        }
        if self.methods.is_empty() {
            return Err(Error::config("no methods configured"));
        }
        if self.replicates == 0 {
            return Err(Error::config("replicates must be at least 1"));
        }
        if self.i_max == 0 {
            return Err(Error::config("i_max must be at least 1"));
        }
        Grid::new(self.prune_grid.start, self.prune_grid.stop, self.prune_grid.step)?;
        Grid::new(self.noise_grid.start, self.noise_grid.stop, self.noise_grid.step)?;
        if self.prune_grid.start < 0.0 || self.prune_grid.stop > 1.0 {
            return Err(Error::config("prune grid must lie within [0, 1]"));
        }
        if self.noise_grid.start < 0.0 {
            return Err(Error::config("noise grid must be non-negative"));
        }
        DegradeSpec::new(self.default_prune, self.default_noise_sd, 0)
            .map_err(|e| Error::config(e.to_string()))?;
        LansConfig::new(self.lans_alpha).map_err(|e| Error::config(e.to_string()))?;
        for m in &self.models {
            m.build().map_err(|e| Error::config(format!("model {}: {e}", m.kind())))?;
        }
        Ok(())
    }

    /// Trial count: every model and replicate at every point of both axes.
    pub fn trial_count(&self) -> usize {
        self.models.len()
            * self.methods.len()
            * (self.prune_grid.len() + self.noise_grid.len())
            * self.replicates
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        let mut kinds: Vec<ModelKind> = ModelKind::ALL.to_vec();
        let mut params: Vec<ModelSpec> = cfg.models.clone();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "models" => {
                    kinds = value
                        .split(',')
                        .map(|t| t.trim().parse::<ModelKind>())
                        .collect::<Result<_>>()?;
                }
                "methods" => {
                    cfg.methods = value
                        .split(',')
                        .map(|t| t.trim().parse::<Method>())
                        .collect::<Result<_>>()?;
                }
                "prune_start" => cfg.prune_grid.start = parse_num(key, value)?,
                "prune_stop" => cfg.prune_grid.stop = parse_num(key, value)?,
                "prune_step" => cfg.prune_grid.step = parse_num(key, value)?,
                "noise_start" => cfg.noise_grid.start = parse_num(key, value)?,
                "noise_stop" => cfg.noise_grid.stop = parse_num(key, value)?,
                "noise_step" => cfg.noise_grid.step = parse_num(key, value)?,
                "default_prune" => cfg.default_prune = parse_num(key, value)?,
                "default_noise_sd" => cfg.default_noise_sd = parse_num(key, value)?,
                "replicates" => cfg.replicates = parse_num(key, value)?,
                "seed" => cfg.seed = parse_num(key, value)?,
                "i_max" => cfg.i_max = parse_num(key, value)?,
                "lans_alpha" => cfg.lans_alpha = parse_num(key, value)?,
                _ => match slot_kind(key) {
                    Some(kind) => set_model_param(&mut params[kind_index(kind)], key, value)?,
                    None => return Err(Error::config(format!("unknown key `{key}`"))),
                },
            }
        }
        cfg.models = kinds
            .iter()
            .map(|&k| params[kind_index(k)].clone())
            .collect();
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical text form; parses back to an equal configuration.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let names = |it: Vec<&str>| it.join(",");
        writeln!(s, "models = {}", names(self.models.iter().map(|m| m.kind().name()).collect())).unwrap();
        writeln!(s, "methods = {}", names(self.methods.iter().map(|m| m.name()).collect())).unwrap();
        writeln!(s, "prune_start = {}", self.prune_grid.start).unwrap();
        writeln!(s, "prune_stop = {}", self.prune_grid.stop).unwrap();
        writeln!(s, "prune_step = {}", self.prune_grid.step).unwrap();
        writeln!(s, "noise_start = {}", self.noise_grid.start).unwrap();
        writeln!(s, "noise_stop = {}", self.noise_grid.stop).unwrap();
        writeln!(s, "noise_step = {}", self.noise_grid.step).unwrap();
        writeln!(s, "default_prune = {}", self.default_prune).unwrap();
        writeln!(s, "default_noise_sd = {}", self.default_noise_sd).unwrap();
        writeln!(s, "replicates = {}", self.replicates).unwrap();
        writeln!(s, "seed = {}", self.seed).unwrap();
        writeln!(s, "i_max = {}", self.i_max).unwrap();
        writeln!(s, "lans_alpha = {}", self.lans_alpha).unwrap();
        for m in &self.models {
            match *m {
                ModelSpec::Kautz { m, n } => {
                    writeln!(s, "kautz_m = {m}\nkautz_n = {n}").unwrap();
                }
                ModelSpec::Lattice { rows, cols } => {
                    writeln!(s, "lattice_rows = {rows}\nlattice_cols = {cols}").unwrap();
                }
                ModelSpec::Tree { n, children } => {
                    writeln!(s, "tree_n = {n}\ntree_children = {children}").unwrap();
                }
                ModelSpec::FullBipartite { n1, n2 } => {
                    writeln!(s, "bipartite_n1 = {n1}\nbipartite_n2 = {n2}").unwrap();
                }
                ModelSpec::PreferentialAttachment { n, power, zero_appeal, .. } => {
                    writeln!(s, "pa_n = {n}\npa_power = {power}\npa_zero_appeal = {zero_appeal}")
                        .unwrap();
                }
            }
        }
        s
    }
}

fn kind_index(kind: ModelKind) -> usize {
    ModelKind::ALL.iter().position(|&k| k == kind).expect("every kind is listed")
}

fn slot_kind(key: &str) -> Option<ModelKind> {
    let prefix = key.split('_').next()?;
    match prefix {
        "kautz" => Some(ModelKind::Kautz),
        "lattice" => Some(ModelKind::Lattice),
        "tree" => Some(ModelKind::Tree),
        "bipartite" => Some(ModelKind::FullBipartite),
        "pa" => Some(ModelKind::PreferentialAttachment),
        _ => None,
    }
}

fn set_model_param(spec: &mut ModelSpec, key: &str, value: &str) -> Result<()> {
    match (spec, key) {
        (ModelSpec::Kautz { m, .. }, "kautz_m") => *m = parse_num(key, value)?,
        (ModelSpec::Kautz { n, .. }, "kautz_n") => *n = parse_num(key, value)?,
        (ModelSpec::Lattice { rows, .. }, "lattice_rows") => *rows = parse_num(key, value)?,
        (ModelSpec::Lattice { cols, .. }, "lattice_cols") => *cols = parse_num(key, value)?,
        (ModelSpec::Tree { n, .. }, "tree_n") => *n = parse_num(key, value)?,
        (ModelSpec::Tree { children, .. }, "tree_children") => *children = parse_num(key, value)?,
        (ModelSpec::FullBipartite { n1, .. }, "bipartite_n1") => *n1 = parse_num(key, value)?,
        (ModelSpec::FullBipartite { n2, .. }, "bipartite_n2") => *n2 = parse_num(key, value)?,
        (ModelSpec::PreferentialAttachment { n, .. }, "pa_n") => *n = parse_num(key, value)?,
        (ModelSpec::PreferentialAttachment { power, .. }, "pa_power") => {
            *power = parse_num(key, value)?
        }
        (ModelSpec::PreferentialAttachment { zero_appeal, .. }, "pa_zero_appeal") => {
            *zero_appeal = parse_num(key, value)?
        }
        _ => return Err(Error::config(format!("unknown key `{key}`"))),
    }
    Ok(())
}
