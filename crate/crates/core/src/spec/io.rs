use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{PointMatrix, TransitionMatrix, Vector};

use super::{default_labels, validate_spec, BSpecification, BStateSystem, SpecError};

#[derive(Serialize, Deserialize)]
struct SpecFile {
    #[serde(default)]
    name: Option<String>,
    dimension: usize,
    branching: u32,
    state_count: usize,
    root_state: usize,
    #[serde(default)]
    state_names: Option<Vec<String>>,
    child_state: Vec<Vec<usize>>,
    vertex_counts: Vec<usize>,
    root_points: Vec<Vector>,
    matrices: BTreeMap<String, Vec<Vector>>,
}

fn parse_err(field: impl Into<String>, detail: impl Into<String>) -> SpecError {
    SpecError::Parse { field: field.into(), detail: detail.into() }
}

/// Parses the JSON spec format. Rationals are strings `"p/q"` or integers.
pub fn parse_spec(text: &str) -> Result<BSpecification, SpecError> {
    let raw: SpecFile = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    if raw.root_state != 0 {
        return Err(parse_err("root_state", "the root state must be 0"));
    }
    if raw.child_state.len() != raw.state_count {
        return Err(parse_err("child_state", format!("{} rows for {} states", raw.child_state.len(), raw.state_count)));
    }
    let system = BStateSystem::new(raw.branching, raw.child_state)?;
    let root_points = PointMatrix::from_rows(raw.root_points).map_err(|e| parse_err("root_points", e.to_string()))?;
    let mut matrices = Vec::with_capacity(raw.state_count * raw.branching as usize);
    for s in 0..raw.state_count {
        for j in 0..raw.branching {
            let key = format!("{s},{j}");
            let rows = raw.matrices.get(&key).ok_or_else(|| parse_err(format!("matrices.\"{key}\""), "missing"))?;
            let m = TransitionMatrix::from_rows(rows.clone())
                .map_err(|e| parse_err(format!("matrices.\"{key}\""), e.to_string()))?;
            matrices.push(m);
        }
    }
    let extra = raw.matrices.len() as isize - matrices.len() as isize;
    if extra > 0 {
        return Err(parse_err("matrices", format!("{extra} unexpected entries")));
    }
    let spec = BSpecification {
        name: raw.name.unwrap_or_else(|| "custom".into()),
        dimension: raw.dimension,
        system,
        vertex_counts: raw.vertex_counts,
        root_points,
        matrices,
        state_labels: raw.state_names.unwrap_or_else(|| default_labels(raw.state_count)),
    };
    validate_spec(&spec)?;
    Ok(spec)
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<BSpecification, SpecError> {
    parse_spec(&std::fs::read_to_string(path)?)
}

pub fn spec_to_json(spec: &BSpecification) -> String {
    let b = spec.branching();
    let mut matrices = BTreeMap::new();
    for s in 0..spec.state_count() {
        for j in 0..b {
            matrices.insert(format!("{s},{j}"), spec.matrix(s, j).rows().to_vec());
        }
    }
    let raw = SpecFile {
        name: Some(spec.name.clone()),
        dimension: spec.dimension,
        branching: b,
        state_count: spec.state_count(),
        root_state: 0,
        state_names: Some(spec.state_labels.clone()),
        child_state: spec.system.child_rows(),
        vertex_counts: spec.vertex_counts.clone(),
        root_points: spec.root_points.rows(),
        matrices,
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}

pub fn save_spec(spec: &BSpecification, path: impl AsRef<Path>) -> Result<(), SpecError> {
    std::fs::write(path, spec_to_json(spec))?;
    Ok(())
}
