//! Stitch-plan generation for the three thread layouts.
//!
//! Coordinates are millimetres with the y axis pointing up. A plan is an
//! ordered list of needle positions; each point records whether the machine
//! reached it by sewing ([`PointKind::Stitch`]) or by moving with the needle up
//! ([`PointKind::Jump`]). Rows (a fill line, a spoke, a ring) are kept as index
//! ranges so previews can draw them as separate runs.

mod clip;
mod fill;
mod region;
mod validate;

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Range, Sub};

use thiserror::Error;

pub use clip::clip_to_region;
pub use fill::{compile, concentric_fill, linear_fill, radial_fill};
pub use region::{Bounds, Region};
pub use validate::{validate_design, Diagnostic, Severity};

/// Coordinates further than this from the origin are rejected.
pub const COORDINATE_LIMIT_MM: f64 = 10_000.0;

/// Slack used for containment and boundary tests.
pub const TOLERANCE_MM: f64 = 1e-9;

/// Longest connecting move between rows that is still sewn rather than jumped.
pub const MAX_CONNECTING_STITCH_MM: f64 = 12.1;

pub const DEFAULT_WAVINESS_AMPLITUDE_MM: f64 = 1.5;
pub const DEFAULT_WAVINESS_PERIOD_MM: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn length(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).length()
    }

    /// Rotation about the origin.
    pub fn rotated(self, radians: f64) -> Point2 {
        let (s, c) = libm::sincos(radians);
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        self + (other - self) * t
    }

    pub fn is_sane(self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && libm::fabs(self.x) <= COORDINATE_LIMIT_MM
            && libm::fabs(self.y) <= COORDINATE_LIMIT_MM
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    Linear,
    Radial,
    Concentric,
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Primitive::Linear => "linear",
            Primitive::Radial => "radial",
            Primitive::Concentric => "concentric",
        })
    }
}

impl core::str::FromStr for Primitive {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "linear" => Ok(Primitive::Linear),
            "radial" => Ok(Primitive::Radial),
            "concentric" => Ok(Primitive::Concentric),
            _ => Err(()),
        }
    }
}

/// Thread layout parameters.
///
/// `line_spacing_mm` is the row pitch for linear fills, the spoke pitch
/// measured as arc length along the rim for radial fills, and the ring pitch
/// for concentric fills. `angle_deg` only applies to linear fills: 0° lays rows
/// parallel to the x axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbroideryConfig {
    pub primitive: Primitive,
    pub line_spacing_mm: f64,
    pub stitch_spacing_mm: f64,
    pub angle_deg: f64,
    pub waviness_amplitude_mm: f64,
    pub waviness_period_mm: f64,
}

impl EmbroideryConfig {
    pub const LINE_SPACING_RANGE: (f64, f64) = (0.66, 10.0);
    pub const STITCH_SPACING_RANGE: (f64, f64) = (0.5, 15.0);

    pub fn linear(line_spacing_mm: f64, stitch_spacing_mm: f64, angle_deg: f64) -> Self {
        Self {
            primitive: Primitive::Linear,
            line_spacing_mm,
            stitch_spacing_mm,
            angle_deg,
            waviness_amplitude_mm: 0.0,
            waviness_period_mm: DEFAULT_WAVINESS_PERIOD_MM,
        }
    }

    pub fn radial(line_spacing_mm: f64, stitch_spacing_mm: f64) -> Self {
        Self {
            primitive: Primitive::Radial,
            line_spacing_mm,
            stitch_spacing_mm,
            angle_deg: 0.0,
            waviness_amplitude_mm: DEFAULT_WAVINESS_AMPLITUDE_MM,
            waviness_period_mm: DEFAULT_WAVINESS_PERIOD_MM,
        }
    }

    pub fn concentric(line_spacing_mm: f64, stitch_spacing_mm: f64) -> Self {
        Self { primitive: Primitive::Concentric, ..Self::radial(line_spacing_mm, stitch_spacing_mm) }
    }

    pub fn with_waviness(mut self, amplitude_mm: f64, period_mm: f64) -> Self {
        self.waviness_amplitude_mm = amplitude_mm;
        self.waviness_period_mm = period_mm;
        self
    }

    pub fn check(&self) -> Result<(), GeometryError> {
        let (lmin, lmax) = Self::LINE_SPACING_RANGE;
        let (smin, smax) = Self::STITCH_SPACING_RANGE;
        let in_range = |v: f64, lo: f64, hi: f64| v.is_finite() && v >= lo && v <= hi;
        if !in_range(self.line_spacing_mm, lmin, lmax) {
            return Err(GeometryError::InvalidConfig("line spacing outside [0.66, 10] mm"));
        }
        if !in_range(self.stitch_spacing_mm, smin, smax) {
            return Err(GeometryError::InvalidConfig("stitch spacing outside [0.5, 15] mm"));
        }
        if !self.angle_deg.is_finite() {
            return Err(GeometryError::InvalidConfig("angle is not finite"));
        }
        if !(self.waviness_amplitude_mm >= 0.0) || !self.waviness_amplitude_mm.is_finite() {
            return Err(GeometryError::InvalidConfig("waviness amplitude must be >= 0"));
        }
        if self.waviness_amplitude_mm > 0.0 && !(self.waviness_period_mm > 0.0 && self.waviness_period_mm.is_finite()) {
            return Err(GeometryError::InvalidConfig("waviness period must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointKind {
    Stitch,
    Jump,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StitchPoint {
    pub at: Point2,
    pub kind: PointKind,
}

impl StitchPoint {
    pub const fn stitch(at: Point2) -> Self {
        Self { at, kind: PointKind::Stitch }
    }

    pub const fn jump(at: Point2) -> Self {
        Self { at, kind: PointKind::Jump }
    }
}

/// The compiled needle path.
#[derive(Debug, Clone, PartialEq)]
pub struct StitchPlan {
    pub points: Vec<StitchPoint>,
    /// Point index ranges of sewn rows. Rows may share an end point (radial
    /// spokes meet at the centre); segments outside every row are connectors.
    pub rows: Vec<Range<usize>>,
    pub config: Option<EmbroideryConfig>,
    pub region: Option<Region>,
    pub layer_count: u32,
}

impl StitchPlan {
    pub fn empty() -> Self {
        Self { points: Vec::new(), rows: Vec::new(), config: None, region: None, layer_count: 1 }
    }

    /// A plan without row structure, e.g. one decoded from a machine file.
    pub fn from_points(points: Vec<StitchPoint>) -> Self {
        let mut plan = Self { points, ..Self::empty() };
        plan.rows = rows_between_jumps(&plan.points);
        plan
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Needle penetrations in one layer.
    pub fn stitch_count(&self) -> usize {
        self.points.iter().filter(|p| p.kind == PointKind::Stitch).count()
    }

    pub fn jump_count(&self) -> usize {
        self.points.iter().filter(|p| p.kind == PointKind::Jump).count()
    }

    pub fn bounds(&self) -> Option<Bounds> {
        Bounds::of(self.points.iter().map(|p| p.at))
    }

    pub fn with_layers(mut self, layer_count: u32) -> Self {
        self.layer_count = layer_count.max(1);
        self
    }

    pub fn translated(&self, by: Point2) -> StitchPlan {
        let mut out = self.clone();
        for p in &mut out.points {
            p.at = p.at + by;
        }
        out.region = self.region.as_ref().map(|r| r.translated(by));
        out
    }

    /// Row index for each segment `(i, i + 1)`, `None` for connectors.
    pub fn segment_rows(&self) -> Vec<Option<usize>> {
        let mut seg = alloc::vec![None; self.points.len().saturating_sub(1)];
        for (r, range) in self.rows.iter().enumerate() {
            for i in range.start..range.end.saturating_sub(1) {
                if let Some(s) = seg.get_mut(i) {
                    *s = Some(r);
                }
            }
        }
        seg
    }
}

/// Rows for a bare point list: maximal stitch runs, each starting at the
/// point the run leaves from.
pub(crate) fn rows_between_jumps(points: &[StitchPoint]) -> Vec<Range<usize>> {
    let mut rows = Vec::new();
    let mut start = 0usize;
    for i in 1..=points.len() {
        let breaks = i == points.len() || points[i].kind == PointKind::Jump;
        if breaks {
            if i - start >= 2 {
                rows.push(start..i);
            }
            start = i;
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("region is degenerate: {0}")]
    RegionDegenerate(&'static str),
    #[error("invalid region: {0}")]
    InvalidRegion(&'static str),
    #[error("{operation} needs a {expected} pattern, got {found}")]
    ConfigMismatch { operation: &'static str, expected: Primitive, found: Primitive },
    #[error("{operation} needs a circular region")]
    RegionMismatch { operation: &'static str },
    #[error("invalid embroidery configuration: {0}")]
    InvalidConfig(&'static str),
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn config_ranges() {
        assert!(EmbroideryConfig::linear(2.0 / 3.0, 1.0, 0.0).check().is_ok());
        assert!(EmbroideryConfig::linear(0.5, 1.0, 0.0).check().is_err());
        assert!(EmbroideryConfig::linear(1.0, 16.0, 0.0).check().is_err());
        assert!(EmbroideryConfig::radial(1.0, 1.0).with_waviness(1.0, 0.0).check().is_err());
        assert!(EmbroideryConfig::radial(1.0, 1.0).with_waviness(0.0, 0.0).check().is_ok());
    }

    #[test]
    fn rows_from_points_split_at_jumps() {
        let p = |x: f64| Point2::new(x, 0.0);
        let pts = vec![
            StitchPoint::jump(p(0.0)),
            StitchPoint::stitch(p(1.0)),
            StitchPoint::stitch(p(2.0)),
            StitchPoint::jump(p(5.0)),
            StitchPoint::jump(p(6.0)),
            StitchPoint::stitch(p(7.0)),
        ];
        assert_eq!(rows_between_jumps(&pts), vec![0..3, 4..6]);
    }
}
