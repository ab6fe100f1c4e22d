//! JSON problem files.
//!
//! A file holds either the dimensionless blocks `grid, time, material,
//! peclet, boundary_left, boundary_right, initial`, or `grid, time` plus a
//! `dimensional` block with physical data. The two forms are exclusive.
//! `grid` and `time` are dimensionless in both.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{
    nondimensionalize, DimensionalScenario, Grid1D, PhysicalAmbient, PhysicalMaterial, ProblemSpec, TimeControls,
};

const COEFFICIENT_BLOCKS: [&str; 5] = ["material", "peclet", "boundary_left", "boundary_right", "initial"];

/// Physical description reduced by `nondimensionalize`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionalBlock {
    pub scenario: DimensionalScenario<f64>,
    pub material: PhysicalMaterial<f64>,
    pub ambient: PhysicalAmbient<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DimensionalFile {
    grid: Grid1D<f64>,
    time: TimeControls<f64>,
    dimensional: DimensionalBlock,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DimensionlessFile {
    grid: Grid1D<f64>,
    time: TimeControls<f64>,
    material: crate::model::MaterialModel<f64>,
    peclet: crate::model::PecletModel<f64>,
    boundary_left: crate::model::RobinBoundary<f64>,
    boundary_right: crate::model::RobinBoundary<f64>,
    initial: crate::model::InitialState<f64>,
}

/// A parsed problem and, for physical input, the scenario that scales it.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedProblem {
    pub spec: ProblemSpec<f64>,
    pub scenario: Option<DimensionalScenario<f64>>,
}

/// Parses a problem document. A `dimensional` block is accepted only with
/// `allow_dimensional`.
pub fn parse_problem(text: &str, allow_dimensional: bool) -> Result<LoadedProblem> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| Error::Config("problem file must be a JSON object".into()))?;
    let loaded = if obj.contains_key("dimensional") {
        if !allow_dimensional {
            return Err(Error::Config("a `dimensional` block needs the --dimensional flag".into()));
        }
        if let Some(k) = COEFFICIENT_BLOCKS.iter().find(|k| obj.contains_key(**k)) {
            return Err(Error::Config(format!("`{k}` cannot be combined with a `dimensional` block")));
        }
        let f: DimensionalFile = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        let d = f.dimensional;
        let spec = nondimensionalize(&d.scenario, &d.material, &d.ambient, f.grid, f.time)?;
        LoadedProblem { spec, scenario: Some(d.scenario) }
    } else {
        let f: DimensionlessFile = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        let spec = ProblemSpec {
            grid: f.grid,
            time: f.time,
            material: f.material,
            peclet: f.peclet,
            boundary_left: f.boundary_left,
            boundary_right: f.boundary_right,
            initial: f.initial,
        };
        LoadedProblem { spec, scenario: None }
    };
    loaded.spec.validate()?;
    Ok(loaded)
}

pub fn load_problem(path: &Path, allow_dimensional: bool) -> Result<LoadedProblem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_problem(&text, allow_dimensional)
}

/// Dimensionless JSON document that `parse_problem` reads back unchanged.
pub fn problem_to_json(spec: &ProblemSpec<f64>) -> Result<String> {
    serde_json::to_string_pretty(spec).map_err(|e| Error::Config(e.to_string()))
}
