//! File formats: the fan JSON schema used by the CLI and the catalog
//! exporters, and the JSON shape of positivity reports.
//!
//! Fan files look like
//! `{"rank": 2, "rays": [{"name": "x1", "vector": [1, 0]}, ...],
//!   "maximal_cones": [[0, 1], ...]}` with 0-based ray indices.
//!
//! Rationals serialize as strings, reduced, with positive denominator:
//! `"p/q"`, or just `"p"` when the denominator is 1. Output ordering is
//! deterministic everywhere so identical invocations are byte-identical.

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chern::PositivityReport;
use crate::fan::{build_fan, Fan, FanError};
use crate::linalg::{IntegerVector, Rational};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed fan file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("fan coordinate {0} exceeds the supported integer range")]
    CoordinateOverflow(String),
    #[error(transparent)]
    Fan(#[from] FanError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RayFile {
    pub name: String,
    pub vector: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<RayFile>,
    pub maximal_cones: Vec<Vec<usize>>,
}

impl FanFile {
    pub fn from_fan(fan: &Fan) -> Result<FanFile, JsonError> {
        let rays = fan
            .rays()
            .iter()
            .map(|r| {
                let vector = r
                    .vector
                    .entries
                    .iter()
                    .map(|x| {
                        i64::try_from(x).map_err(|_| JsonError::CoordinateOverflow(x.to_string()))
                    })
                    .collect::<Result<Vec<i64>, _>>()?;
                Ok(RayFile {
                    name: r.name.clone(),
                    vector,
                })
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(FanFile {
            rank: fan.rank(),
            rays,
            maximal_cones: fan.maximal_cones().iter().map(|c| c.ids()).collect(),
        })
    }

    pub fn into_fan(self) -> Result<Fan, FanError> {
        let rays = self
            .rays
            .into_iter()
            .map(|r| (r.name, IntegerVector::from_i64(&r.vector)))
            .collect();
        build_fan(self.rank, rays, self.maximal_cones)
    }
}

/// Read and validate a fan file.
pub fn load_fan(path: &str) -> Result<Fan, JsonError> {
    let text = std::fs::read_to_string(path).map_err(|source| JsonError::Io {
        path: path.to_string(),
        source,
    })?;
    let file: FanFile = serde_json::from_str(&text)?;
    Ok(file.into_fan()?)
}

/// Canonical rational formatting: reduced, positive denominator, `"p"` for
/// integers and `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Names of the rays of a cone, in ray-id order.
pub fn cone_names(fan: &Fan, cone: &crate::fan::Cone) -> Vec<String> {
    cone.iter().map(|r| fan.ray(r).name.clone()).collect()
}

/// The JSON shape of one positivity report:
/// `{"k":, "classification":, "min_value":, "witness_cone": [names],
///   "values": [{"cone": [names], "value": "p/q"}, ...]?}`.
pub fn report_json(fan: &Fan, report: &PositivityReport, include_values: bool) -> serde_json::Value {
    let mut obj = serde_json::Map::new();
    obj.insert("k".into(), serde_json::json!(report.k));
    obj.insert(
        "classification".into(),
        serde_json::json!(report.classification.as_str()),
    );
    obj.insert(
        "min_value".into(),
        serde_json::json!(format_rational(&report.min_value)),
    );
    obj.insert(
        "witness_cone".into(),
        serde_json::json!(cone_names(fan, &report.witness)),
    );
    if include_values {
        let values: Vec<serde_json::Value> = report
            .values
            .iter()
            .map(|cv| {
                serde_json::json!({
                    "cone": cone_names(fan, &cv.cone),
                    "value": format_rational(&cv.value),
                })
            })
            .collect();
        obj.insert("values".into(), serde_json::Value::Array(values));
    }
    serde_json::Value::Object(obj)
}
