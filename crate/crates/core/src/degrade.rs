//! Observation model: `X = A ⊙ P + E`. A ground truth `A` loses a fixed
//! proportion of its edges (mask `P`), then every entry receives
//! independent Gaussian noise `E`.

use rand::seq::index;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::graph_models::Directedness;
use crate::matrix::AdjacencyMatrix;
use crate::seed;

// Sub-stream labels mixed into the instance seed.
const PRUNE_STREAM: u64 = 1;
const NOISE_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradeSpec {
    pub prune_proportion: f64,
    pub noise_sd: f64,
    pub seed: u64,
}

impl DegradeSpec {
    pub const DEFAULT_PRUNE: f64 = 0.25;
    pub const DEFAULT_NOISE_SD: f64 = 0.25;

    pub fn new(prune_proportion: f64, noise_sd: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&prune_proportion) {
            return Err(Error::invalid(format!(
                "prune proportion {prune_proportion} outside [0, 1]"
            )));
        }
        if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
            return Err(Error::invalid(format!("noise sd {noise_sd} must be finite and >= 0")));
        }
        Ok(Self { prune_proportion, noise_sd, seed })
    }
}

/// A ground truth together with every stage of its degradation.
#[derive(Debug, Clone)]
pub struct DegradedInstance {
    pub truth: AdjacencyMatrix,
    /// 1 where the entry was kept, 0 where a true edge was pruned.
    pub mask: AdjacencyMatrix,
    pub pruned: AdjacencyMatrix,
    pub observed: AdjacencyMatrix,
}

fn edge_list(a: &AdjacencyMatrix, directedness: Directedness) -> Vec<(usize, usize)> {
    let n = a.n();
    let mut edges = Vec::new();
    for i in 0..n {
        let start = match directedness {
            Directedness::Directed => 0,
            Directedness::Undirected => i,
        };
        for j in start..n {
            if a.get(i, j) != 0.0 {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Remove exactly `round(proportion * E)` edges chosen uniformly without
/// replacement. For undirected graphs an edge is the unordered pair and
/// both entries are cleared. Returns the pruned matrix and the mask.
pub fn prune(
    a: &AdjacencyMatrix,
    proportion: f64,
    seed: u64,
    directedness: Directedness,
) -> Result<(AdjacencyMatrix, AdjacencyMatrix)> {
    if !(0.0..=1.0).contains(&proportion) {
        return Err(Error::invalid(format!("prune proportion {proportion} outside [0, 1]")));
    }
    let edges = edge_list(a, directedness);
    let remove = ((proportion * edges.len() as f64).round() as usize).min(edges.len());

    let n = a.n();
    let mut pruned = a.clone();
    let mut mask = AdjacencyMatrix::new(n, vec![1.0; n * n])?;
    let mut rng = seed::rng(seed);
    for idx in index::sample(&mut rng, edges.len(), remove) {
        let (i, j) = edges[idx];
        pruned.set(i, j, 0.0);
        mask.set(i, j, 0.0);
        if directedness == Directedness::Undirected {
            pruned.set(j, i, 0.0);
            mask.set(j, i, 0.0);
        }
    }
    Ok((pruned, mask))
}

/// Add an independent `Normal(0, sd^2)` draw to every entry, diagonal
/// included. Draws use `rand_distr`'s ziggurat sampler over a ChaCha8
/// stream seeded with `seed`.
pub fn add_noise(x: &AdjacencyMatrix, sd: f64, seed: u64) -> Result<AdjacencyMatrix> {
    if !(sd >= 0.0 && sd.is_finite()) {
        return Err(Error::invalid(format!("noise sd {sd} must be finite and >= 0")));
    }
    if sd == 0.0 {
        return Ok(x.clone());
    }
    let normal = Normal::new(0.0, sd).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = seed::rng(seed);
    let values = x.values().iter().map(|v| v + normal.sample(&mut rng)).collect();
    AdjacencyMatrix::new(x.n(), values)
}

/// Prune then add noise, each step on its own sub-stream of `spec.seed`.
pub fn degrade(
    truth: &AdjacencyMatrix,
    directedness: Directedness,
    spec: &DegradeSpec,
) -> Result<DegradedInstance> {
    let (pruned, mask) = prune(
        truth,
        spec.prune_proportion,
        seed::mix(spec.seed, &[PRUNE_STREAM]),
        directedness,
    )?;
    let observed = add_noise(&pruned, spec.noise_sd, seed::mix(spec.seed, &[NOISE_STREAM]))?;
    Ok(DegradedInstance { truth: truth.clone(), mask, pruned, observed })
}
