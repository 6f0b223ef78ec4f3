//! Experiment harness: configuration, sweeps, file formats and figures.

pub mod config;
pub mod example;
pub mod io;
pub mod render;
pub mod sweep;
