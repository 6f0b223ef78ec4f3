//! Recovery of deterministic network structure from pruned, noisy
//! adjacency matrices by iterated 2D Fourier thresholding (IterativeFT),
//! together with the baseline denoisers, ground-truth generators,
//! degradation pipeline, scoring and the experiment harness used to
//! compare them.
//!
//! The pipeline, end to end:
//!
//! ```
//! use iterft::{degrade, denoise, graph_models, metrics};
//!
//! let truth = graph_models::lattice(6, 6);
//! let spec = degrade::DegradeSpec::new(0.25, 0.25, 7).unwrap();
//! let instance = degrade::degrade(&truth, graph_models::Directedness::Undirected, &spec).unwrap();
//! let result = denoise::iterative_ft(&instance.observed, 100).unwrap();
//! let f1 = metrics::f1_score(&truth, &result.output).unwrap();
//! assert!((0.0..=1.0).contains(&f1));
//! ```

pub mod degrade;
pub mod denoise;
pub mod error;
pub mod graph_models;
pub mod harness;
pub mod matrix;
pub mod metrics;
pub mod seed;

pub use error::{Error, Result};
pub use matrix::{AdjacencyMatrix, SparsityPattern, SpectrumMatrix};
