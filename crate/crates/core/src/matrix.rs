//! Dense real and complex matrices and the numerical primitives shared by
//! every denoiser: the 2D DFT pair, mean-based thresholding in both
//! domains, sparsity patterns and truncated SVD reconstruction.
//!
//! DFT convention: the forward transform is unnormalized and the inverse
//! carries the `1/(rows*cols)` factor, so `idft2(dft2(x)) == x`.

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};

/// Largest imaginary component tolerated when an inverse transform is
/// expected to be real.
pub const IMAGINARY_RESIDUE_BOUND: f64 = 1e-6;

/// Square matrix of real edge weights; entry `(i, j)` is the weight of the
/// edge `i -> j`. All values are finite.
#[derive(Clone, PartialEq)]
pub struct AdjacencyMatrix {
    n: usize,
    values: Vec<f64>,
}

impl AdjacencyMatrix {
    /// Build from row-major values.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("adjacency matrix must have at least one vertex"));
        }
        if values.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {} values for a {n}x{n} matrix, got {}",
                n * n,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite value at ({}, {})",
                pos / n,
                pos % n
            )));
        }
        Ok(Self { n, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::invalid(format!(
                "row of length {} in a matrix with {n} rows",
                bad.len()
            )));
        }
        Self::new(n, rows.concat())
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "adjacency matrix must have at least one vertex");
        Self { n, values: vec![0.0; n * n] }
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(value.is_finite(), "adjacency weights must be finite");
        self.values[i * self.n + j] = value;
    }

    /// Row-major view of the entries.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                values[j * n + i] = self.values[i * n + j];
            }
        }
        Self { n, values }
    }

    /// Count of entries that are not exactly zero.
    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0.0).count()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mean_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs_diff(&self, other: &AdjacencyMatrix) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.values)
    }
}

impl fmt::Debug for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdjacencyMatrix")
            .field("n", &self.n)
            .field("nonzero", &self.nonzero_count())
            .finish()
    }
}

/// Dense complex matrix, row-major. Holds 2D DFT images.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// A 2D DFT image.
pub type SpectrumMatrix = ComplexMatrix;

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("non-finite complex entry"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Lift a row-major real array into the complex plane.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_adjacency(x: &AdjacencyMatrix) -> Self {
        Self {
            rows: x.n,
            cols: x.n,
            data: x.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Largest absolute imaginary component.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Mean of the entry magnitudes.
    pub fn mean_magnitude(&self) -> f64 {
        self.data.iter().map(|&z| magnitude(z)).sum::<f64>() / self.data.len() as f64
    }

    /// Real part as an adjacency matrix, failing with a consistency error
    /// if any imaginary component exceeds `bound`.
    pub fn into_real(self, bound: f64) -> Result<AdjacencyMatrix> {
        if self.rows != self.cols {
            return Err(Error::invalid(format!(
                "cannot form an adjacency matrix from a {}x{} array",
                self.rows, self.cols
            )));
        }
        let residue = self.max_imag();
        if !residue.is_finite() || self.data.iter().any(|z| !z.re.is_finite()) {
            return Err(Error::Numerical("non-finite value after inverse transform".into()));
        }
        if residue > bound {
            return Err(Error::Consistency(format!(
                "imaginary residue {residue:e} exceeds {bound:e}"
            )));
        }
        Ok(AdjacencyMatrix {
            n: self.rows,
            values: self.data.into_iter().map(|z| z.re).collect(),
        })
    }
}

/// `sqrt(re^2 + im^2)`. Exactly equal for a value and its conjugate, and
/// much cheaper than `hypot`.
fn magnitude(z: Complex64) -> f64 {
    z.norm_sqr().sqrt()
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
}

fn transpose_into(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    for (r, row) in src.chunks_exact(cols).enumerate() {
        for (c, &z) in row.iter().enumerate() {
            dst[c * rows + r] = z;
        }
    }
}

/// Unnormalized separable transform: rows first, then columns.
fn transform(w: &ComplexMatrix, direction: FftDirection) -> ComplexMatrix {
    let (rows, cols) = (w.rows, w.cols);
    let row_fft = plan(cols, direction);
    let col_fft = plan(rows, direction);
    let mut scratch = vec![
        Complex64::new(0.0, 0.0);
        row_fft.get_inplace_scratch_len().max(col_fft.get_inplace_scratch_len())
    ];
    let mut data = w.data.clone();
    let mut t = vec![Complex64::new(0.0, 0.0); data.len()];
    // rustfft processes every consecutive chunk of the plan length.
    row_fft.process_with_scratch(&mut data, &mut scratch);
    transpose_into(&data, &mut t, rows, cols);
    col_fft.process_with_scratch(&mut t, &mut scratch);
    transpose_into(&t, &mut data, cols, rows);
    ComplexMatrix { rows, cols, data }
}

/// Forward 2D DFT, `W[u][v] = sum_{j,k} x[j][k] exp(-2 pi i (uj/n + vk/m))`.
pub fn dft2(x: &ComplexMatrix) -> Result<SpectrumMatrix> {
    if x.data.is_empty() {
        return Err(Error::invalid("dft2 of an empty matrix"));
    }
    Ok(transform(x, FftDirection::Forward))
}

/// Inverse 2D DFT with the `1/(rows*cols)` normalization.
pub fn idft2(w: &SpectrumMatrix) -> Result<ComplexMatrix> {
    if w.data.is_empty() {
        return Err(Error::invalid("idft2 of an empty matrix"));
    }
    let mut out = transform(w, FftDirection::Inverse);
    let scale = 1.0 / (w.rows * w.cols) as f64;
    out.data.iter_mut().for_each(|z| *z *= scale);
    Ok(out)
}

/// Forward 2D DFT of a real matrix.
///
/// The result is made exactly conjugate symmetric by averaging each bin
/// with the conjugate of its mirror. Floating-point FFT output is only
/// symmetric up to rounding, and mirror bins whose magnitudes differ in
/// the last ulp could otherwise straddle a threshold and break the
/// realness of the inverse.
pub fn dft2_real(x: &AdjacencyMatrix) -> SpectrumMatrix {
    let raw = transform(&ComplexMatrix::from_adjacency(x), FftDirection::Forward);
    let n = x.n;
    let mut data = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            let mirror = raw.data[((n - u) % n) * n + (n - v) % n];
            data.push((raw.data[u * n + v] + mirror.conj()) * 0.5);
        }
    }
    ComplexMatrix { rows: n, cols: n, data }
}

/// Zero every entry whose absolute value is strictly below the mean
/// absolute value (zeros included in the mean). Survivors keep their sign.
pub fn abs_threshold(x: &AdjacencyMatrix) -> AdjacencyMatrix {
    let t = x.mean_abs();
    AdjacencyMatrix {
        n: x.n,
        values: x
            .values
            .iter()
            .map(|&v| if v.abs() < t { 0.0 } else { v })
            .collect(),
    }
}

/// Zero every complex entry whose magnitude is strictly below the mean
/// magnitude.
pub fn magnitude_threshold(w: &SpectrumMatrix) -> SpectrumMatrix {
    let t = w.mean_magnitude();
    let zero = Complex64::new(0.0, 0.0);
    ComplexMatrix {
        rows: w.rows,
        cols: w.cols,
        data: w
            .data
            .iter()
            .map(|&z| if magnitude(z) < t { zero } else { z })
            .collect(),
    }
}

/// Singular values in descending order.
pub fn singular_values(x: &AdjacencyMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = x.to_nalgebra().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Best rank-`k` approximation in Frobenius norm: the sum of the `k`
/// leading singular triplets.
pub fn truncated_svd_reconstruct(x: &AdjacencyMatrix, k: usize) -> Result<AdjacencyMatrix> {
    let n = x.n;
    if k == 0 || k > n {
        return Err(Error::invalid(format!("rank {k} outside 1..={n}")));
    }
    let svd = x.to_nalgebra().svd(true, true);
    let (u, v_t) = match (&svd.u, &svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Numerical("SVD did not produce singular vectors".into())),
    };
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let mut values = vec![0.0; n * n];
    for &idx in order.iter().take(k) {
        let sigma = svd.singular_values[idx];
        for i in 0..n {
            let left = sigma * u[(i, idx)];
            let row = &mut values[i * n..(i + 1) * n];
            for (j, out) in row.iter_mut().enumerate() {
                *out += left * v_t[(idx, j)];
            }
        }
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite rank-k reconstruction".into()));
    }
    Ok(AdjacencyMatrix { n, values })
}

/// Where a matrix is exactly zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsityPattern {
    n: usize,
    zero: Vec<bool>,
}

impl SparsityPattern {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self, i: usize, j: usize) -> bool {
        self.zero[i * self.n + j]
    }

    pub fn zero_count(&self) -> usize {
        self.zero.iter().filter(|&&z| z).count()
    }

    /// Same pattern with position `(i, j)` flipped.
    pub fn toggled(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.zero[i * self.n + j] = !out.zero[i * self.n + j];
        out
    }
}

pub fn sparsity_pattern(x: &AdjacencyMatrix) -> SparsityPattern {
    SparsityPattern { n: x.n, zero: x.values.iter().map(|&v| v == 0.0).collect() }
}

/// True iff both patterns agree at every position.
pub fn sparse_match(a: &SparsityPattern, b: &SparsityPattern) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::invalid(format!(
            "sparsity patterns of different shapes ({0}x{0} vs {1}x{1})",
            a.n, b.n
        )));
    }
    Ok(a.zero == b.zero)
}
