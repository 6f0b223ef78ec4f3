//! The five denoisers. Each maps an observed adjacency matrix to a
//! denoised one.

mod lans;

use std::fmt;
use std::str::FromStr;

pub use lans::{benjamini_hochberg, endpoint_pvalues, lans_denoise, LansConfig, TieRule};

use crate::error::{Error, Result};
use crate::matrix::{
    abs_threshold, dft2_real, idft2, magnitude_threshold, sparsity_pattern,
    truncated_svd_reconstruct, AdjacencyMatrix, IMAGINARY_RESIDUE_BOUND,
};

/// Iteration cap used when none is given.
pub const DEFAULT_MAX_ITERATIONS: usize = 100;

/// Rank of the low-rank baseline.
pub const LOW_RANK: usize = 3;

#[derive(Debug, Clone)]
pub struct DenoiseResult {
    pub output: AdjacencyMatrix,
    /// Iterations completed; 1 for the single-pass methods.
    pub iterations: usize,
    /// IterativeFT: the sparsity pattern repeated. Single-pass methods
    /// report `true`.
    pub converged: bool,
    /// Largest imaginary component seen across all inverse transforms.
    pub max_imaginary_residue: f64,
}

impl DenoiseResult {
    fn single_pass(output: AdjacencyMatrix) -> Self {
        Self { output, iterations: 1, converged: true, max_imaginary_residue: 0.0 }
    }
}

/// Real part of `idft2(magnitude_threshold(dft2(x)))` along with the
/// discarded imaginary residue.
fn spectral_filter(x: &AdjacencyMatrix) -> Result<(AdjacencyMatrix, f64)> {
    let spectrum = magnitude_threshold(&dft2_real(x));
    let inverse = idft2(&spectrum)?;
    let residue = inverse.max_imag();
    Ok((inverse.into_real(IMAGINARY_RESIDUE_BOUND)?, residue))
}

/// IterativeFT: alternate mean-absolute thresholding in the real domain
/// with mean-magnitude thresholding in the frequency domain until the real
/// domain sparsity pattern repeats.
///
/// The first pass has nothing to compare against, so it never converges.
/// If the cap is reached, the last filtered iterate is thresholded once
/// more and returned with `iterations == i_max`; `converged` then reports
/// whether that final pattern matched the previous one.
pub fn iterative_ft(x: &AdjacencyMatrix, i_max: usize) -> Result<DenoiseResult> {
    if i_max == 0 {
        return Err(Error::invalid("iteration cap must be at least 1"));
    }
    let mut current = x.clone();
    let mut previous = None;
    let mut max_residue: f64 = 0.0;
    for iteration in 1..=i_max {
        let thresholded = abs_threshold(&current);
        let pattern = sparsity_pattern(&thresholded);
        if previous.as_ref() == Some(&pattern) {
            return Ok(DenoiseResult {
                output: thresholded,
                iterations: iteration,
                converged: true,
                max_imaginary_residue: max_residue,
            });
        }
        let (filtered, residue) = spectral_filter(&thresholded)?;
        max_residue = max_residue.max(residue);
        current = filtered;
        previous = Some(pattern);
    }
    let output = abs_threshold(&current);
    let converged = previous.as_ref() == Some(&sparsity_pattern(&output));
    Ok(DenoiseResult { output, iterations: i_max, converged, max_imaginary_residue: max_residue })
}

/// Zero entries whose absolute value is below the mean absolute value.
pub fn real_threshold_denoise(x: &AdjacencyMatrix) -> DenoiseResult {
    DenoiseResult::single_pass(abs_threshold(x))
}

/// One pass of frequency-domain thresholding.
pub fn freq_threshold_denoise(x: &AdjacencyMatrix) -> Result<DenoiseResult> {
    let (output, residue) = spectral_filter(x)?;
    Ok(DenoiseResult { max_imaginary_residue: residue, ..DenoiseResult::single_pass(output) })
}

/// Rank-3 SVD reconstruction.
pub fn low_rank_denoise(x: &AdjacencyMatrix) -> Result<DenoiseResult> {
    if x.n() < LOW_RANK {
        return Err(Error::invalid(format!(
            "low-rank reconstruction needs at least {LOW_RANK} vertices, got {}",
            x.n()
        )));
    }
    Ok(DenoiseResult::single_pass(truncated_svd_reconstruct(x, LOW_RANK)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    IterativeFt,
    RealThreshold,
    FreqThreshold,
    LowRank,
    Lans,
}

impl Method {
    /// Canonical order, used for result files and figure panels.
    pub const ALL: [Method; 5] = [
        Method::IterativeFt,
        Method::RealThreshold,
        Method::FreqThreshold,
        Method::LowRank,
        Method::Lans,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::IterativeFt => "iterft",
            Method::RealThreshold => "real-thresh",
            Method::FreqThreshold => "freq-thresh",
            Method::LowRank => "low-rank",
            Method::Lans => "lans",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::config(format!("unknown method `{s}`")))
    }
}

/// Tunables shared by the methods that have any.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodParams {
    pub i_max: usize,
    pub lans: LansConfig,
}

impl Default for MethodParams {
    fn default() -> Self {
        Self { i_max: DEFAULT_MAX_ITERATIONS, lans: LansConfig::default() }
    }
}

pub fn run(method: Method, x: &AdjacencyMatrix, params: &MethodParams) -> Result<DenoiseResult> {
    match method {
        Method::IterativeFt => iterative_ft(x, params.i_max),
        Method::RealThreshold => Ok(real_threshold_denoise(x)),
        Method::FreqThreshold => freq_threshold_denoise(x),
        Method::LowRank => low_rank_denoise(x),
        Method::Lans => lans_denoise(x, &params.lans),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_models::{full_bipartite, lattice};
    use crate::matrix::{singular_values, sparse_match};
    use crate::seed;
    use rand::Rng;

    fn random_matrix(n: usize, seed: u64) -> AdjacencyMatrix {
        let mut rng = seed::rng(seed);
        AdjacencyMatrix::new(n, (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
    }

    fn adj(rows: &[&[f64]]) -> AdjacencyMatrix {
        AdjacencyMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn iterft_zero_input_converges_at_two() {
        let r = iterative_ft(&AdjacencyMatrix::zeros(6), 100).unwrap();
        assert_eq!(r.output, AdjacencyMatrix::zeros(6));
        assert_eq!(r.iterations, 2);
        assert!(r.converged);
    }

    #[test]
    fn iterft_single_iteration_cap() {
        let x = random_matrix(10, 1);
        let r = iterative_ft(&x, 1).unwrap();
        assert_eq!(r.iterations, 1);
        let (filtered, _) = spectral_filter(&abs_threshold(&x)).unwrap();
        assert_eq!(r.output, abs_threshold(&filtered));

        // The zero matrix reaches a fixed point after one pass.
        let z = iterative_ft(&AdjacencyMatrix::zeros(3), 1).unwrap();
        assert_eq!((z.iterations, z.converged), (1, true));
    }

    #[test]
    fn iterft_rejects_zero_cap() {
        assert!(iterative_ft(&AdjacencyMatrix::zeros(2), 0).is_err());
    }

    #[test]
    fn iterft_output_survivors_exceed_mean_of_last_iterate() {
        for s in 0..5 {
            let x = random_matrix(12, s);
            let r = iterative_ft(&x, 100).unwrap();
            assert!(r.iterations <= 100);
            let min_survivor = r
                .output
                .values()
                .iter()
                .filter(|v| **v != 0.0)
                .map(|v| v.abs())
                .fold(f64::INFINITY, f64::min);
            // The output is its own threshold's fixed pattern, so its
            // nonzero magnitudes are bounded below by a positive mean.
            assert!(min_survivor > 0.0);
            let again = iterative_ft(&x, 100).unwrap();
            assert_eq!(again.output, r.output);
            assert_eq!(again.iterations, r.iterations);
        }
    }

    #[test]
    fn real_threshold_examples() {
        let x = adj(&[&[4.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(real_threshold_denoise(&x).output, adj(&[&[4.0, 0.0], &[0.0, 0.0]]));
        let z = AdjacencyMatrix::zeros(4);
        assert_eq!(real_threshold_denoise(&z).output, z);
        let l = lattice(5, 5);
        assert_eq!(real_threshold_denoise(&l).output, l);
    }

    #[test]
    fn real_threshold_pattern_idempotent() {
        for s in 0..20 {
            let x = random_matrix(15, 100 + s);
            let once = real_threshold_denoise(&x).output;
            let twice = real_threshold_denoise(&once).output;
            let p1 = sparsity_pattern(&once);
            assert!(p1.zero_count() >= sparsity_pattern(&x).zero_count());
            // Idempotence is empirical; a second pass may prune further.
            if !sparse_match(&p1, &sparsity_pattern(&twice)).unwrap() {
                assert!(sparsity_pattern(&twice).zero_count() > p1.zero_count());
            }
        }
    }

    #[test]
    fn freq_threshold_examples() {
        let c = AdjacencyMatrix::new(5, vec![0.7; 25]).unwrap();
        assert!(freq_threshold_denoise(&c).unwrap().output.max_abs_diff(&c) < 1e-12);
        let z = AdjacencyMatrix::zeros(5);
        assert_eq!(freq_threshold_denoise(&z).unwrap().output, z);

        let x = random_matrix(16, 8);
        let sym = AdjacencyMatrix::new(
            16,
            (0..256).map(|k| x.get(k / 16, k % 16) + x.get(k % 16, k / 16)).collect(),
        )
        .unwrap();
        let out = freq_threshold_denoise(&sym).unwrap().output;
        assert!(out.max_abs_diff(&out.transpose()) < 1e-9);
    }

    #[test]
    fn low_rank_examples() {
        let d = adj(&[
            &[4.0, 0.0, 0.0, 0.0],
            &[0.0, 3.0, 0.0, 0.0],
            &[0.0, 0.0, 2.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        let r = low_rank_denoise(&d).unwrap().output;
        assert!((r.get(3, 3)).abs() < 1e-12 && (r.get(0, 0) - 4.0).abs() < 1e-12);

        let b = full_bipartite(54, 54);
        assert!(low_rank_denoise(&b).unwrap().output.max_abs_diff(&b) < 1e-9);

        assert!(low_rank_denoise(&AdjacencyMatrix::zeros(2)).is_err());
    }

    #[test]
    fn low_rank_output_has_rank_three() {
        let x = random_matrix(20, 4);
        let s = singular_values(&low_rank_denoise(&x).unwrap().output);
        assert!(s[3] < 1e-8 * s[0]);
    }

    #[test]
    fn method_names() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!(matches!("svd".parse::<Method>(), Err(Error::Config(msg)) if msg.contains("svd")));
    }
}
