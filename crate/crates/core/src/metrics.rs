//! Scoring against ground truth and replicate aggregation.
//!
//! Both metrics run over all `n * n` positions, diagonal included. A
//! position is a predicted edge when the denoised value is exactly
//! nonzero.

use std::collections::BTreeMap;

use crate::denoise::Method;
use crate::error::{Error, Result};
use crate::graph_models::ModelKind;
use crate::matrix::AdjacencyMatrix;

fn check_shapes(a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::invalid(format!(
            "cannot score a {0}x{0} matrix against a {1}x{1} one",
            b.n(),
            a.n()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl Confusion {
    /// `2TP / (2TP + FP + FN)`; 1 when both edge sets are empty.
    pub fn f1(&self) -> f64 {
        let denom = 2 * self.tp + self.fp + self.fn_;
        if denom == 0 {
            1.0
        } else {
            (2 * self.tp) as f64 / denom as f64
        }
    }
}

pub fn confusion(truth: &AdjacencyMatrix, denoised: &AdjacencyMatrix) -> Result<Confusion> {
    check_shapes(truth, denoised)?;
    let mut c = Confusion::default();
    for (&t, &d) in truth.values().iter().zip(denoised.values()) {
        match (t != 0.0, d != 0.0) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (true, false) => c.fn_ += 1,
            (false, false) => {}
        }
    }
    Ok(c)
}

pub fn f1_score(truth: &AdjacencyMatrix, denoised: &AdjacencyMatrix) -> Result<f64> {
    Ok(confusion(truth, denoised)?.f1())
}

pub fn mse(truth: &AdjacencyMatrix, denoised: &AdjacencyMatrix) -> Result<f64> {
    check_shapes(truth, denoised)?;
    let sum: f64 = truth
        .values()
        .iter()
        .zip(denoised.values())
        .map(|(t, d)| (d - t) * (d - t))
        .sum();
    Ok(sum / truth.values().len() as f64)
}

/// One (model, method, degradation, replicate) outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub model: ModelKind,
    pub method: Method,
    pub prune: f64,
    pub noise_sd: f64,
    pub rep: usize,
    pub seed: u64,
    pub f1: f64,
    pub mse: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRecord {
    pub model: ModelKind,
    pub method: Method,
    pub prune: f64,
    pub noise_sd: f64,
    pub n: usize,
    pub mean_f1: f64,
    pub sem_f1: f64,
    pub mean_mse: f64,
    pub sem_mse: f64,
}

/// Mean and standard error of the mean (sample SD over `sqrt(n)`; 0 for a
/// single value).
pub fn mean_sem(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

type GroupKey = (ModelKind, Method, u64, u64);

/// Group by (model, method, prune, noise) and summarize each group. Groups
/// come out ordered by model, method, prune, then noise.
pub fn aggregate(records: &[TrialRecord]) -> Result<Vec<AggregateRecord>> {
    if records.is_empty() {
        return Err(Error::invalid("no trial records to aggregate"));
    }
    // Non-negative floats order the same as their bit patterns.
    let mut groups: BTreeMap<GroupKey, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.model, r.method, r.prune.to_bits(), r.noise_sd.to_bits()))
            .or_default()
            .push(r);
    }
    Ok(groups
        .into_iter()
        .map(|((model, method, prune, noise), members)| {
            let f1: Vec<f64> = members.iter().map(|r| r.f1).collect();
            let mse: Vec<f64> = members.iter().map(|r| r.mse).collect();
            let (mean_f1, sem_f1) = mean_sem(&f1);
            let (mean_mse, sem_mse) = mean_sem(&mse);
            AggregateRecord {
                model,
                method,
                prune: f64::from_bits(prune),
                noise_sd: f64::from_bits(noise),
                n: members.len(),
                mean_f1,
                sem_f1,
                mean_mse,
                sem_mse,
            }
        })
        .collect())
}
