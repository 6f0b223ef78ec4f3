//! Locally adaptive network sparsification.
//!
//! Each edge is judged against the local weight distribution at each of
//! its endpoints: the p-value at endpoint `i` is the empirical survival
//! probability of the edge's fractional weight `w_ij / s_i` among all of
//! `i`'s nonzero fractional weights. All endpoint p-values form a single
//! Benjamini–Hochberg family; an edge is kept when either endpoint is
//! significant.

use crate::error::{Error, Result};
use crate::matrix::AdjacencyMatrix;

use super::DenoiseResult;

/// How the empirical survival function treats weights equal to the one
/// being tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    /// `P(F >= f)`: the edge itself and ties count against it. The
    /// heaviest of `k` edges scores `1/k`.
    Inclusive,
    /// `1 - ecdf(f) = P(F > f)`: only strictly heavier edges count. The
    /// heaviest edge scores 0.
    Exclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LansConfig {
    pub alpha: f64,
    pub ties: TieRule,
}

impl LansConfig {
    pub const DEFAULT_ALPHA: f64 = 0.05;

    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid(format!("LANS alpha {alpha} outside (0, 1)")));
        }
        Ok(Self { alpha, ..Self::default() })
    }
}

impl Default for LansConfig {
    fn default() -> Self {
        Self { alpha: Self::DEFAULT_ALPHA, ties: TieRule::Exclusive }
    }
}

/// Benjamini–Hochberg step-up adjustment. Output is in input order.
pub fn benjamini_hochberg(pvalues: &[f64]) -> Result<Vec<f64>> {
    if let Some(p) = pvalues.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::invalid(format!("p-value {p} outside [0, 1]")));
    }
    let m = pvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvalues[a].total_cmp(&pvalues[b]));

    let mut adjusted = vec![0.0; m];
    let mut running_min = 1.0_f64;
    for (rank0, &idx) in order.iter().enumerate().rev() {
        let scaled = pvalues[idx] * m as f64 / (rank0 + 1) as f64;
        running_min = running_min.min(scaled);
        adjusted[idx] = running_min;
    }
    Ok(adjusted)
}

/// Survival p-values of each of `weights` (all positive) within the set.
/// Fractional weights share the endpoint strength as denominator, so the
/// comparison is done on raw weights.
pub fn endpoint_pvalues(weights: &[f64], ties: TieRule) -> Vec<f64> {
    let k = weights.len();
    let mut sorted = weights.to_vec();
    sorted.sort_by(f64::total_cmp);
    weights
        .iter()
        .map(|&w| {
            // Count of entries strictly below / at most `w`.
            let heavier_or_equal = k - sorted.partition_point(|&s| s < w);
            let heavier = k - sorted.partition_point(|&s| s <= w);
            let count = match ties {
                TieRule::Inclusive => heavier_or_equal,
                TieRule::Exclusive => heavier,
            };
            count as f64 / k as f64
        })
        .collect()
}

/// Backbone of `x`. Weights are `(|x| + |x|^T) / 2` with self-loops
/// ignored; kept positions carry the original observed values in both
/// directions.
pub fn lans_denoise(x: &AdjacencyMatrix, config: &LansConfig) -> Result<DenoiseResult> {
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::invalid(format!("LANS alpha {} outside (0, 1)", config.alpha)));
    }
    let n = x.n();
    let weight = |i: usize, j: usize| (x.get(i, j).abs() + x.get(j, i).abs()) / 2.0;

    // Per-vertex neighbour lists and their p-values.
    let mut neighbours: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut local_p: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let nbrs: Vec<usize> = (0..n).filter(|&j| j != i && weight(i, j) > 0.0).collect();
        let weights: Vec<f64> = nbrs.iter().map(|&j| weight(i, j)).collect();
        local_p.push(endpoint_pvalues(&weights, config.ties));
        neighbours.push(nbrs);
    }

    // One family: for each undirected edge, the p-value at both endpoints.
    let mut edges = Vec::new();
    let mut family = Vec::new();
    for i in 0..n {
        for (slot, &j) in neighbours[i].iter().enumerate() {
            if j <= i {
                continue;
            }
            let back = neighbours[j].binary_search(&i).expect("weights are symmetric");
            edges.push((i, j));
            family.push(local_p[i][slot]);
            family.push(local_p[j][back]);
        }
    }
    let adjusted = benjamini_hochberg(&family)?;

    let mut output = AdjacencyMatrix::zeros(n);
    for (e, &(i, j)) in edges.iter().enumerate() {
        if adjusted[2 * e] <= config.alpha || adjusted[2 * e + 1] <= config.alpha {
            output.set(i, j, x.get(i, j));
            output.set(j, i, x.get(j, i));
        }
    }
    Ok(DenoiseResult::single_pass(output))
}
