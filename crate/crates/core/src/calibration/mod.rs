//! Measured force/displacement data and the property queries answered from it.
//!
//! A [`CalibrationTable`] groups knots into series keyed by test geometry,
//! grid configuration, fabric, layer count and test mode. Queries interpolate
//! linearly between knots; every series starts at (0 mm, 0 N). Nothing is
//! extrapolated past the last knot unless the caller opts into clamping.

mod affordance;
mod formability;
mod predict;
mod table;
mod time;

use alloc::string::String;
use core::fmt;

use thiserror::Error;

pub use affordance::{affordance_hints, Affordance, FabricationParameter, ParameterHint};
pub use formability::{classify_formability, FormabilityAssessment, FormabilityClass, TESTED_MOLD_DIAMETERS_MM};
pub use predict::{
    predict, predict_compression, predict_tensile, Extrapolation, PredictOptions, Prediction, PredictionSource,
    PropertyQuery,
};
pub use table::{load_calibration, CalibrationTable, Knot, SeriesKey};
pub use time::{estimate_fabrication_time, swatch_plan, TimeAnchor, TimeModel};

/// Version string of the bundled knot table.
pub const BUNDLED_TABLE_VERSION: &str = "1";

pub(crate) const BUNDLED_TABLE: &str = include_str!("default_table.csv");

/// Specimen geometry a series was measured on. Data does not transfer between
/// geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeometryTag {
    Swatch100,
    Splint,
    BraDome,
}

impl GeometryTag {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "swatch-100" => Some(GeometryTag::Swatch100),
            "splint" => Some(GeometryTag::Splint),
            "bra-dome" => Some(GeometryTag::BraDome),
            _ => None,
        }
    }
}

impl fmt::Display for GeometryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometryTag::Swatch100 => "swatch-100",
            GeometryTag::Splint => "splint",
            GeometryTag::BraDome => "bra-dome",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestMode {
    Compression,
    Tensile,
}

impl TestMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "compression" => Some(TestMode::Compression),
            "tensile" => Some(TestMode::Tensile),
            _ => None,
        }
    }
}

impl fmt::Display for TestMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestMode::Compression => "compression",
            TestMode::Tensile => "tensile",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Paper,
    Derived,
    External,
}

impl Provenance {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper" => Some(Provenance::Paper),
            "derived" => Some(Provenance::Derived),
            "external" => Some(Provenance::External),
            _ => None,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "paper",
            Provenance::Derived => "derived",
            Provenance::External => "external",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibrationError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{}invariant violated: {message}", line.map(|l| alloc::format!("line {l}: ")).unwrap_or_default())]
    InvariantViolation { line: Option<usize>, message: String },
    #[error("no calibration data for {0}")]
    UnknownConfig(String),
    #[error("{series} is calibrated up to {max_mm} mm; {requested_mm} mm requested")]
    InsufficientCalibration { series: String, requested_mm: f64, max_mm: f64 },
    #[error("tensile data exists only for stretch fabrics; {0} is non-stretch")]
    NonStretchFabric(String),
    #[error("unknown fabric {0:?}")]
    UnknownFabric(String),
    #[error("no formability data for a {0} mm mold (tested: 10, 20, 30 mm)")]
    UnsupportedMold(f64),
    #[error("unknown affordance {0:?}")]
    UnknownAffordance(String),
    #[error("invalid query: {0}")]
    InvalidQuery(&'static str),
    #[error("query mode is {found}, expected {expected}")]
    ModeMismatch { expected: TestMode, found: TestMode },
    #[error("invalid time anchors: {0}")]
    InvalidTimeAnchors(&'static str),
}
