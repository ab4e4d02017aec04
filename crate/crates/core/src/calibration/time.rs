use super::{CalibrationError, CalibrationTable};
use crate::geometry::{linear_fill, EmbroideryConfig, Region, StitchPlan};
use crate::grid::{GridConfig, LineSpacing, StitchSpacing};

/// Measured sewing time for one grid configuration on the 100 x 100 mm swatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeAnchor {
    pub config: GridConfig,
    pub stitches_per_layer: usize,
    pub minutes: f64,
}

impl TimeAnchor {
    /// The densest and sparsest grid points with stitch counts taken from
    /// their swatch plans.
    pub fn bundled() -> [TimeAnchor; 2] {
        let anchor = |config: GridConfig, minutes| TimeAnchor {
            config,
            stitches_per_layer: swatch_plan(config).stitch_count(),
            minutes,
        };
        [
            anchor(GridConfig::new(LineSpacing::L0_66, StitchSpacing::S1), 20.0),
            anchor(GridConfig::new(LineSpacing::L2, StitchSpacing::S15), 5.0),
        ]
    }
}

/// Linear fill of the calibration swatch for a grid point, rows along x.
pub fn swatch_plan(config: GridConfig) -> StitchPlan {
    let cfg = EmbroideryConfig::linear(config.line_spacing_mm(), config.stitch_spacing_mm(), 0.0);
    linear_fill(&Region::swatch(), &cfg).expect("grid configurations fill the swatch")
}

/// `minutes = (a + b * stitches) * layers`, through two anchors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeModel {
    lo: (f64, f64),
    hi: (f64, f64),
}

impl TimeModel {
    pub fn from_anchors(a: &TimeAnchor, b: &TimeAnchor) -> Result<TimeModel, CalibrationError> {
        let (lo, hi) = if a.stitches_per_layer <= b.stitches_per_layer { (a, b) } else { (b, a) };
        if lo.stitches_per_layer == hi.stitches_per_layer {
            return Err(CalibrationError::InvalidTimeAnchors("anchors need distinct stitch counts"));
        }
        if !(hi.minutes > lo.minutes) || !(lo.minutes > 0.0) {
            return Err(CalibrationError::InvalidTimeAnchors("time must be positive and grow with stitch count"));
        }
        Ok(TimeModel {
            lo: (lo.stitches_per_layer as f64, lo.minutes),
            hi: (hi.stitches_per_layer as f64, hi.minutes),
        })
    }

    pub fn bundled() -> TimeModel {
        let [a, b] = TimeAnchor::bundled();
        TimeModel::from_anchors(&a, &b).expect("bundled anchors are valid")
    }

    /// Model through a table's two anchors, or the bundled model when the
    /// table does not hold exactly two valid ones.
    pub fn from_table(table: &CalibrationTable) -> TimeModel {
        match table.time_anchors.as_slice() {
            [a, b] => TimeModel::from_anchors(a, b).unwrap_or_else(|_| TimeModel::bundled()),
            _ => TimeModel::bundled(),
        }
    }

    /// Minutes per stitch.
    pub fn slope(&self) -> f64 {
        (self.hi.1 - self.lo.1) / (self.hi.0 - self.lo.0)
    }

    /// Fixed minutes per layer.
    pub fn intercept(&self) -> f64 {
        self.lo.1 - self.slope() * self.lo.0
    }

    pub fn minutes_per_layer(&self, stitches: usize) -> f64 {
        // two-point form keeps both anchors exact
        let n = stitches as f64;
        self.lo.1 + (n - self.lo.0) * (self.hi.1 - self.lo.1) / (self.hi.0 - self.lo.0)
    }

    pub fn minutes(&self, stitches_per_layer: usize, layers: u32) -> f64 {
        self.minutes_per_layer(stitches_per_layer) * f64::from(layers)
    }
}

/// Sewing time for every layer of `plan`. Empty plans take no time.
pub fn estimate_fabrication_time(plan: &StitchPlan, model: &TimeModel) -> f64 {
    if plan.is_empty() {
        return 0.0;
    }
    model.minutes(plan.stitch_count(), plan.layer_count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors_are_exact() {
        let m = TimeModel::bundled();
        let [dense, sparse] = TimeAnchor::bundled();
        assert_eq!(m.minutes_per_layer(dense.stitches_per_layer), 20.0);
        assert_eq!(m.minutes_per_layer(sparse.stitches_per_layer), 5.0);
        assert!(m.slope() > 0.0);
    }

    #[test]
    fn degenerate_anchors_are_rejected() {
        let a = TimeAnchor { config: GridConfig::new(LineSpacing::L1, StitchSpacing::S1), stitches_per_layer: 10, minutes: 1.0 };
        assert!(TimeModel::from_anchors(&a, &a).is_err());
        let b = TimeAnchor { stitches_per_layer: 20, minutes: 0.5, ..a };
        assert!(TimeModel::from_anchors(&a, &b).is_err());
    }

    #[test]
    fn linear_in_layers() {
        let m = TimeModel::bundled();
        let plan = swatch_plan(GridConfig::new(LineSpacing::L1, StitchSpacing::S5));
        let one = estimate_fabrication_time(&plan, &m);
        let three = estimate_fabrication_time(&plan.clone().with_layers(3), &m);
        assert!((three - 3.0 * one).abs() < 1e-12);
        assert_eq!(estimate_fabrication_time(&StitchPlan::empty(), &m), 0.0);
    }
}
