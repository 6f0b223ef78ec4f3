//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the transform, threshold or SVD code under test.

#![allow(dead_code)]

use std::f64::consts::PI;

use iterft::AdjacencyMatrix;
use num_complex::Complex64;
use rand::Rng;

pub fn random_real(rows: usize, cols: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_complex(rows: usize, cols: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..rows * cols)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn random_adjacency(n: usize, rng: &mut impl Rng) -> AdjacencyMatrix {
    AdjacencyMatrix::new(n, random_real(n, n, rng)).unwrap()
}

/// Direct evaluation of the defining quadruple sum. `sign` is -1 for the
/// forward transform and +1 for the inverse; no normalization is applied.
pub fn naive_dft2(x: &[Complex64], rows: usize, cols: usize, sign: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    for u in 0..rows {
        for v in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..rows {
                for k in 0..cols {
                    let phase = sign
                        * 2.0
                        * PI
                        * (((u * j) % rows) as f64 / rows as f64 + ((v * k) % cols) as f64 / cols as f64);
                    acc += x[j * cols + k] * Complex64::from_polar(1.0, phase);
                }
            }
            out[u * cols + v] = acc;
        }
    }
    out
}

pub fn naive_idft2(w: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let scale = 1.0 / (rows * cols) as f64;
    naive_dft2(w, rows, cols, 1.0).into_iter().map(|z| z * scale).collect()
}

/// Separable direct DFT of a square matrix with a precomputed twiddle
/// table: O(n^3) instead of O(n^4), still no fast algorithm.
pub struct DirectDft {
    n: usize,
    twiddle: Vec<Complex64>,
}

impl DirectDft {
    pub fn new(n: usize) -> Self {
        let twiddle = (0..n).map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64)).collect();
        Self { n, twiddle }
    }

    fn pass(&self, x: &[Complex64], inverse: bool) -> Vec<Complex64> {
        let n = self.n;
        let w = |k: usize| {
            let t = self.twiddle[k % n];
            if inverse { t.conj() } else { t }
        };
        let mut rows = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for v in 0..n {
                rows[j * n + v] = (0..n).map(|k| x[j * n + k] * w(v * k)).sum();
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for u in 0..n {
            for v in 0..n {
                out[u * n + v] = (0..n).map(|j| rows[j * n + v] * w(u * j)).sum();
            }
        }
        out
    }

    pub fn forward(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.pass(x, false)
    }

    pub fn inverse(&self, w: &[Complex64]) -> Vec<Complex64> {
        let scale = 1.0 / (self.n * self.n) as f64;
        self.pass(w, true).into_iter().map(|z| z * scale).collect()
    }
}

/// Singular values by one-sided Jacobi rotations, descending.
pub fn jacobi_singular_values(a: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    // Work on columns of a (rows x cols) matrix, column-major.
    let mut c: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| a[i * cols + j]).collect()).collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = c[p].iter().map(|v| v * v).sum();
                let beta: f64 = c[q].iter().map(|v| v * v).sum();
                let gamma: f64 = c[p].iter().zip(&c[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let (left, right) = c.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    (*x, *y) = (cs * *x - sn * *y, sn * *x + cs * *y);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = c.iter().map(|col| col.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Outcome of the reference IterativeFT loop.
pub struct TraceResult {
    pub output: Vec<f64>,
    pub iterations: usize,
}

/// Straight-line IterativeFT: threshold, stop on a repeated zero pattern,
/// otherwise transform, threshold magnitudes, invert and keep the real
/// part. At the cap the last iterate is thresholded once more.
pub fn reference_iterative_ft(x: &[f64], n: usize, i_max: usize) -> TraceResult {
    let dft = DirectDft::new(n);
    let mut current = x.to_vec();
    let mut previous_zeros: Option<Vec<bool>> = None;
    for i in 1..=i_max {
        let t = current.iter().map(|v| v.abs()).sum::<f64>() / (n * n) as f64;
        let thresholded: Vec<f64> = current.iter().map(|&v| if v.abs() < t { 0.0 } else { v }).collect();
        let zeros: Vec<bool> = thresholded.iter().map(|&v| v == 0.0).collect();
        if previous_zeros.as_ref() == Some(&zeros) {
            return TraceResult { output: thresholded, iterations: i };
        }
        let w = dft.forward(&thresholded.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>());
        let tm = w.iter().map(|z| z.norm()).sum::<f64>() / (n * n) as f64;
        let w: Vec<Complex64> = w.into_iter().map(|z| if z.norm() < tm { Complex64::new(0.0, 0.0) } else { z }).collect();
        current = dft.inverse(&w).into_iter().map(|z| z.re).collect();
        previous_zeros = Some(zeros);
    }
    let t = current.iter().map(|v| v.abs()).sum::<f64>() / (n * n) as f64;
    TraceResult {
        output: current.iter().map(|&v| if v.abs() < t { 0.0 } else { v }).collect(),
        iterations: i_max,
    }
}
