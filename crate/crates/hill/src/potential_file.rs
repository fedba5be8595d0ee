//! Potential documents: a JSON object tagged by `kind`, with an optional
//! `declared_period`. Unknown fields are rejected.

use std::fs;
use std::path::Path;

use hill_core::potential::PotentialDef;
use hill_core::{Interpolation, PotentialSpec};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterpolationName {
    Linear,
    CubicPeriodic,
}

impl From<InterpolationName> for Interpolation {
    fn from(i: InterpolationName) -> Self {
        match i {
            InterpolationName::Linear => Interpolation::Linear,
            InterpolationName::CubicPeriodic => Interpolation::CubicPeriodic,
        }
    }
}

fn cubic_periodic() -> InterpolationName {
    InterpolationName::CubicPeriodic
}

/// The document body, without `declared_period`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialDocument {
    Constant {
        value: f64,
    },
    FourierCosine {
        coefficients: Vec<f64>,
    },
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    Tabulated {
        samples: Vec<(f64, f64)>,
        #[serde(default = "cubic_periodic")]
        interpolation: InterpolationName,
    },
}

impl From<PotentialDocument> for PotentialDef {
    fn from(d: PotentialDocument) -> Self {
        match d {
            PotentialDocument::Constant { value } => PotentialDef::Constant { value },
            PotentialDocument::FourierCosine { coefficients } => PotentialDef::FourierCosine { coefficients },
            PotentialDocument::PiecewiseConstant { breakpoints, values } => {
                PotentialDef::PiecewiseConstant { breakpoints, values }
            }
            PotentialDocument::Tabulated { samples, interpolation } => {
                PotentialDef::Tabulated { samples, interpolation: interpolation.into() }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialFileError {
    Io { path: String, message: String },
    Malformed(String),
    Invalid(hill_core::Error),
}

impl std::fmt::Display for PotentialFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PotentialFileError::Io { path, message } => write!(f, "cannot read potential file {path}: {message}"),
            PotentialFileError::Malformed(m) => write!(f, "malformed potential document: {m}"),
            PotentialFileError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PotentialFileError {}

/// Parses and validates a potential document, normalizing it to period 1.
pub fn parse_potential(text: &str) -> Result<PotentialSpec, PotentialFileError> {
    let value: Value = serde_json::from_str(text).map_err(|e| PotentialFileError::Malformed(e.to_string()))?;
    let Value::Object(mut map) = value else {
        return Err(PotentialFileError::Malformed("expected a JSON object".into()));
    };
    let period = take_period(&mut map)?;
    let doc: PotentialDocument =
        serde_json::from_value(Value::Object(map)).map_err(|e| PotentialFileError::Malformed(e.to_string()))?;
    PotentialSpec::from_def(doc.into(), period).map_err(PotentialFileError::Invalid)
}

fn take_period(map: &mut Map<String, Value>) -> Result<f64, PotentialFileError> {
    match map.remove("declared_period") {
        None => Ok(1.0),
        Some(Value::Number(n)) => {
            n.as_f64().ok_or_else(|| PotentialFileError::Malformed("declared_period is not representable".into()))
        }
        Some(other) => Err(PotentialFileError::Malformed(format!("declared_period must be a number, got {other}"))),
    }
}

pub fn load_potential(path: &Path) -> Result<PotentialSpec, PotentialFileError> {
    let text = fs::read_to_string(path)
        .map_err(|e| PotentialFileError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_potential(&text)
}
