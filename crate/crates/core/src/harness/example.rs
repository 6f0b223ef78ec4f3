//! The single-instance example figure: one degraded network and every
//! method's reconstruction of it.

use crate::degrade::{degrade, DegradeSpec};
use crate::denoise::{self, Method, MethodParams};
use crate::error::Result;
use crate::graph_models::ModelSpec;
use crate::matrix::AdjacencyMatrix;

/// Eight labelled panels: truth, pruned, pruned plus noise, then each
/// method's output in canonical order.
pub fn run_example(
    model: &ModelSpec,
    spec: &DegradeSpec,
    params: &MethodParams,
) -> Result<Vec<(String, AdjacencyMatrix)>> {
    let truth = model.build()?;
    let inst = degrade(&truth, model.directedness(), spec)?;
    let mut panels = vec![
        ("truth".to_string(), inst.truth),
        ("pruned".to_string(), inst.pruned),
        ("pruned + noise".to_string(), inst.observed.clone()),
    ];
    for method in Method::ALL {
        let out = denoise::run(method, &inst.observed, params)?;
        panels.push((method.name().to_string(), out.output));
    }
    Ok(panels)
}
