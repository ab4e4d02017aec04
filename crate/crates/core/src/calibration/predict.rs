use alloc::format;
use alloc::string::String;

use super::{CalibrationError, CalibrationTable, GeometryTag, Knot, SeriesKey, TestMode};
use crate::grid::GridConfig;
use crate::materials::{FabricSpec, StretchClass};

/// Largest layer count with measurements.
pub const MAX_LAYERS: u8 = 4;

/// Four tensile layers carry about three times the single-layer force.
const TENSILE_FOUR_LAYER_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyQuery {
    pub geometry: GeometryTag,
    pub config: GridConfig,
    pub fabric: String,
    pub layers: u8,
    pub displacement_mm: f64,
    pub mode: TestMode,
}

impl PropertyQuery {
    pub fn compression(config: GridConfig, fabric: &str, layers: u8, displacement_mm: f64) -> Self {
        Self {
            geometry: GeometryTag::Swatch100,
            config,
            fabric: fabric.into(),
            layers,
            displacement_mm,
            mode: TestMode::Compression,
        }
    }

    pub fn tensile(config: GridConfig, fabric: &str, layers: u8, displacement_mm: f64) -> Self {
        Self { mode: TestMode::Tensile, ..Self::compression(config, fabric, layers, displacement_mm) }
    }

    pub fn on(mut self, geometry: GeometryTag) -> Self {
        self.geometry = geometry;
        self
    }

    fn key(&self, fabric: &'static str, layers: u8) -> SeriesKey {
        SeriesKey { geometry: self.geometry, config: self.config, fabric, layers, mode: self.mode }
    }
}

/// What happens past the last knot of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Extrapolation {
    #[default]
    Error,
    /// Hold the last knot's force.
    Clamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PredictOptions {
    pub extrapolation: Extrapolation,
    /// Derive multi-layer tensile force from the single-layer series.
    pub tensile_layer_scaling: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionSource {
    Measured,
    /// Linear in layer count between the 1- and 4-layer series.
    LayerInterpolated,
    /// Single-layer tensile series times the multi-layer factor.
    LayerScaled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub force_n: f64,
    /// Derived from a knot that was reported as a ceiling.
    pub upper_bound: bool,
    pub source: PredictionSource,
    /// The query ran past the last knot and was held flat.
    pub clamped: bool,
}

pub fn predict_compression(
    query: &PropertyQuery,
    table: &CalibrationTable,
    options: PredictOptions,
) -> Result<Prediction, CalibrationError> {
    if query.mode != TestMode::Compression {
        return Err(CalibrationError::ModeMismatch { expected: TestMode::Compression, found: query.mode });
    }
    predict(query, table, options)
}

pub fn predict_tensile(
    query: &PropertyQuery,
    table: &CalibrationTable,
    options: PredictOptions,
) -> Result<Prediction, CalibrationError> {
    if query.mode != TestMode::Tensile {
        return Err(CalibrationError::ModeMismatch { expected: TestMode::Tensile, found: query.mode });
    }
    predict(query, table, options)
}

/// Force at the query displacement for either mode.
pub fn predict(
    query: &PropertyQuery,
    table: &CalibrationTable,
    options: PredictOptions,
) -> Result<Prediction, CalibrationError> {
    if !query.displacement_mm.is_finite() || query.displacement_mm < 0.0 {
        return Err(CalibrationError::InvalidQuery("displacement must be a non-negative number"));
    }
    if !(1..=MAX_LAYERS).contains(&query.layers) {
        return Err(CalibrationError::InvalidQuery("layers must be in 1..=4"));
    }
    let fabric = FabricSpec::lookup(&query.fabric).ok_or_else(|| CalibrationError::UnknownFabric(query.fabric.clone()))?;
    if query.mode == TestMode::Tensile && fabric.stretch == StretchClass::NonStretch {
        return Err(CalibrationError::NonStretchFabric(fabric.name.into()));
    }

    let key = query.key(fabric.name, query.layers);
    let d = query.displacement_mm;
    if let Some(knots) = table.knots(&key) {
        let (force_n, upper_bound, clamped) = interpolate(&key, knots, d, options.extrapolation)?;
        return Ok(Prediction { force_n, upper_bound, source: PredictionSource::Measured, clamped });
    }

    let single = query.key(fabric.name, 1);
    let four = query.key(fabric.name, MAX_LAYERS);
    if query.geometry == GeometryTag::Swatch100 && (2..MAX_LAYERS).contains(&query.layers) {
        if let (Some(k1), Some(k4)) = (table.knots(&single), table.knots(&four)) {
            let (f1, u1, c1) = interpolate(&single, k1, d, options.extrapolation)?;
            let (f4, u4, c4) = interpolate(&four, k4, d, options.extrapolation)?;
            let w = f64::from(query.layers - 1) / f64::from(MAX_LAYERS - 1);
            return Ok(Prediction {
                force_n: f1 + w * (f4 - f1),
                upper_bound: u1 || u4,
                source: PredictionSource::LayerInterpolated,
                clamped: c1 || c4,
            });
        }
    }
    if query.mode == TestMode::Tensile && options.tensile_layer_scaling && query.layers > 1 {
        if let Some(k1) = table.knots(&single) {
            let (f1, upper_bound, clamped) = interpolate(&single, k1, d, options.extrapolation)?;
            let factor = 1.0 + (TENSILE_FOUR_LAYER_FACTOR - 1.0) * f64::from(query.layers - 1) / f64::from(MAX_LAYERS - 1);
            return Ok(Prediction { force_n: f1 * factor, upper_bound, source: PredictionSource::LayerScaled, clamped });
        }
    }
    Err(CalibrationError::UnknownConfig(format!("{key}")))
}

/// Piecewise-linear lookup; exact at knots.
fn interpolate(
    key: &SeriesKey,
    knots: &[Knot],
    d: f64,
    extrapolation: Extrapolation,
) -> Result<(f64, bool, bool), CalibrationError> {
    let last = knots.last().expect("series always holds the zero anchor");
    if d > last.displacement_mm {
        return match extrapolation {
            Extrapolation::Clamp => Ok((last.force_n, last.upper_bound, true)),
            Extrapolation::Error => Err(CalibrationError::InsufficientCalibration {
                series: format!("{key}"),
                requested_mm: d,
                max_mm: last.displacement_mm,
            }),
        };
    }
    let j = knots.partition_point(|k| k.displacement_mm < d);
    let hi = &knots[j];
    if hi.displacement_mm == d {
        return Ok((hi.force_n, hi.upper_bound, false));
    }
    let lo = &knots[j - 1];
    let f = lo.force_n + (d - lo.displacement_mm) * (hi.force_n - lo.force_n) / (hi.displacement_mm - lo.displacement_mm);
    Ok((f, lo.upper_bound || hi.upper_bound, false))
}
