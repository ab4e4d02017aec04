use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{
    clip_to_region, EmbroideryConfig, GeometryError, Point2, PointKind, Primitive, Region, StitchPlan, StitchPoint,
    MAX_CONNECTING_STITCH_MM, TOLERANCE_MM,
};

/// Shortest extent perpendicular to the rows that still yields a plan.
const MIN_EXTENT_MM: f64 = 1e-6;

/// Arc-length tables are built from chords no longer than this.
const ARC_RESOLUTION_MM: f64 = 0.02;

/// Compiles `config` over `region` with the fill matching its primitive.
pub fn compile(region: &Region, config: &EmbroideryConfig) -> Result<StitchPlan, GeometryError> {
    match config.primitive {
        Primitive::Linear => linear_fill(region, config),
        Primitive::Radial => radial_fill(region, config),
        Primitive::Concentric => concentric_fill(region, config),
    }
}

/// Parallel rows at `line_spacing_mm`, sewn back and forth.
///
/// Rows run along `angle_deg`. The row count is `round(extent / pitch)` where
/// extent is the region's width across the rows, and the rows are centred in
/// that extent. Stitches sit at multiples of the stitch spacing from the low
/// end of each row plus the far end point. Adjacent rows are joined by a
/// stitch when the connector stays inside the region, otherwise by a jump.
pub fn linear_fill(region: &Region, config: &EmbroideryConfig) -> Result<StitchPlan, GeometryError> {
    expect_primitive("linear_fill", config, Primitive::Linear)?;
    config.check()?;
    region.validate()?;

    let (sin, cos) = libm::sincos(config.angle_deg.to_radians());
    let along = Point2::new(cos, sin);
    let normal = Point2::new(-sin, cos);
    let (vmin, vmax) = region.projection(normal);
    let extent = vmax - vmin;
    if !(extent >= MIN_EXTENT_MM) {
        return Err(GeometryError::RegionDegenerate("extent across rows is below 1e-6 mm"));
    }

    let pitch = config.line_spacing_mm;
    let lines = (libm::round(extent / pitch) as usize).max(1);
    let first = vmin + (extent - (lines - 1) as f64 * pitch) / 2.0;

    let mut builder = PlanBuilder::new(region);
    for i in 0..lines {
        let offset = first + i as f64 * pitch;
        let base = normal * offset;
        let mut spans: Vec<(f64, f64)> =
            region.scanline(along, normal, offset).into_iter().filter(|(a, b)| b - a > TOLERANCE_MM).collect();
        let forward = i % 2 == 0;
        if !forward {
            spans.reverse();
        }
        for (s0, s1) in spans {
            let mut row: Vec<Point2> =
                abscissae(s1 - s0, config.stitch_spacing_mm).into_iter().map(|a| base + along * (s0 + a)).collect();
            if !forward {
                row.reverse();
            }
            builder.push_row(&row, Connect::IfInside);
        }
    }
    Ok(builder.finish(region, config))
}

/// Spokes from the centre to the rim, counterclockwise.
///
/// `round(2 pi r / line_spacing)` spokes. With waviness each spoke swings
/// sideways by `A sin(2 pi t / P)` measured as arc at radius `t`, so every
/// stitch stays within the circle. Spokes alternate outward and inward and
/// meet at the centre; the outward-to-inward change is a jump along the rim.
pub fn radial_fill(region: &Region, config: &EmbroideryConfig) -> Result<StitchPlan, GeometryError> {
    expect_primitive("radial_fill", config, Primitive::Radial)?;
    config.check()?;
    let (center, radius) = circle_of(region, "radial_fill")?;
    if radius < MIN_EXTENT_MM {
        return Err(GeometryError::RegionDegenerate("radius is below 1e-6 mm"));
    }

    let spokes = (libm::round(2.0 * PI * radius / config.line_spacing_mm) as usize).max(1);
    let amp = config.waviness_amplitude_mm;
    let period = config.waviness_period_mm;
    let swing = move |t: f64| -> f64 {
        if amp == 0.0 {
            0.0
        } else if t < 1e-12 {
            2.0 * PI * amp / period
        } else {
            amp * libm::sin(2.0 * PI * t / period) / t
        }
    };

    let mut builder = PlanBuilder::new(region);
    for k in 0..spokes {
        let theta = 2.0 * PI * k as f64 / spokes as f64;
        let spoke = move |t: f64| {
            let (s, c) = libm::sincos(theta + swing(t));
            center + Point2::new(c, s) * t
        };
        let mut pts = sample_by_arc_length(spoke, 0.0, radius, config.stitch_spacing_mm);
        let connect = if k % 2 == 0 {
            Connect::IfInside
        } else {
            pts.reverse();
            Connect::Jump
        };
        builder.push_row(&pts, connect);
    }
    Ok(builder.finish(region, config))
}

/// Rings at radii `k * line_spacing` for `k = 1 ..= floor(r / line_spacing)`,
/// innermost first, each entered by a radial jump.
///
/// Waviness offsets the ring radius by `A sin(m phi)` where `m` is the whole
/// number of waves closest to circumference / period; the amplitude is capped
/// at half the ring radius. Points pushed past the rim are clipped.
pub fn concentric_fill(region: &Region, config: &EmbroideryConfig) -> Result<StitchPlan, GeometryError> {
    expect_primitive("concentric_fill", config, Primitive::Concentric)?;
    config.check()?;
    let (center, radius) = circle_of(region, "concentric_fill")?;

    let pitch = config.line_spacing_mm;
    let rings = libm::floor(radius / pitch + 1e-9) as usize;
    if rings == 0 {
        return Err(GeometryError::RegionDegenerate("radius is smaller than one ring pitch"));
    }

    let mut builder = PlanBuilder::new(region);
    for k in 1..=rings {
        let r = k as f64 * pitch;
        let amp = config.waviness_amplitude_mm.min(r / 2.0);
        let waves = if amp > 0.0 { libm::round(2.0 * PI * r / config.waviness_period_mm).max(1.0) } else { 0.0 };
        let ring = move |phi: f64| {
            let rho = r + amp * libm::sin(waves * phi);
            let (s, c) = libm::sincos(phi);
            center + Point2::new(c, s) * rho
        };
        let mut pts = sample_by_arc_length(ring, 0.0, 2.0 * PI, config.stitch_spacing_mm);
        if let Some(&first) = pts.first() {
            let n = pts.len();
            pts[n - 1] = first;
        }
        builder.push_row(&pts, Connect::Jump);
    }
    let plan = builder.finish(region, config);
    if config.waviness_amplitude_mm > 0.0 {
        let mut clipped = clip_to_region(&plan, region);
        clipped.config = plan.config;
        clipped.region = plan.region;
        Ok(clipped)
    } else {
        Ok(plan)
    }
}

fn expect_primitive(
    operation: &'static str,
    config: &EmbroideryConfig,
    expected: Primitive,
) -> Result<(), GeometryError> {
    if config.primitive == expected {
        Ok(())
    } else {
        Err(GeometryError::ConfigMismatch { operation, expected, found: config.primitive })
    }
}

fn circle_of(region: &Region, operation: &'static str) -> Result<(Point2, f64), GeometryError> {
    match region {
        Region::Circle { center, radius } => {
            if !center.is_sane() || !radius.is_finite() {
                return Err(GeometryError::InvalidRegion("circle out of range"));
            }
            if *radius <= 0.0 {
                return Err(GeometryError::RegionDegenerate("radius must be positive"));
            }
            Ok((*center, *radius))
        }
        _ => Err(GeometryError::RegionMismatch { operation }),
    }
}

/// `{0, S, 2S, ..., floor(len / S) S} U {len}`.
pub(crate) fn abscissae(len: f64, step: f64) -> Vec<f64> {
    let k = libm::floor(len / step + 1e-9) as usize;
    let mut out: Vec<f64> = (0..=k).map(|i| i as f64 * step).collect();
    if len - k as f64 * step > 1e-9 {
        out.push(len);
    } else if k > 0 {
        // pin the far end exactly
        out[k] = len;
    }
    out
}

/// Points along `curve(t)`, `t` in `[t0, t1]`, at arc-length multiples of
/// `step` plus the end point.
fn sample_by_arc_length(curve: impl Fn(f64) -> Point2, t0: f64, t1: f64, step: f64) -> Vec<Point2> {
    let coarse = 256usize;
    let estimate = polyline_length(&curve, t0, t1, coarse);
    let pieces = (libm::ceil(estimate / ARC_RESOLUTION_MM) as usize).clamp(coarse, 400_000);

    let mut ts = Vec::with_capacity(pieces + 1);
    let mut cum = Vec::with_capacity(pieces + 1);
    let mut prev = curve(t0);
    let mut acc = 0.0;
    for i in 0..=pieces {
        let t = t0 + (t1 - t0) * i as f64 / pieces as f64;
        let p = curve(t);
        acc += p.distance(prev);
        prev = p;
        ts.push(t);
        cum.push(acc);
    }
    let total = acc;

    abscissae(total, step)
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            if i == 0 {
                return curve(t0);
            }
            if s >= total {
                return curve(t1);
            }
            let j = cum.partition_point(|&c| c < s).max(1);
            let (c0, c1) = (cum[j - 1], cum[j]);
            let f = if c1 > c0 { (s - c0) / (c1 - c0) } else { 0.0 };
            curve(ts[j - 1] + f * (ts[j] - ts[j - 1]))
        })
        .collect()
}

fn polyline_length(curve: &impl Fn(f64) -> Point2, t0: f64, t1: f64, pieces: usize) -> f64 {
    let mut prev = curve(t0);
    let mut acc = 0.0;
    for i in 1..=pieces {
        let p = curve(t0 + (t1 - t0) * i as f64 / pieces as f64);
        acc += p.distance(prev);
        prev = p;
    }
    acc
}

#[derive(Clone, Copy)]
enum Connect {
    /// Sew to the row start if the connector stays inside the region.
    IfInside,
    Jump,
}

struct PlanBuilder<'a> {
    region: &'a Region,
    points: Vec<StitchPoint>,
    rows: Vec<core::ops::Range<usize>>,
}

impl<'a> PlanBuilder<'a> {
    fn new(region: &'a Region) -> Self {
        Self { region, points: Vec::new(), rows: Vec::new() }
    }

    fn push_row(&mut self, row: &[Point2], connect: Connect) {
        let Some((&head, tail)) = row.split_first() else { return };
        let start;
        match self.points.last() {
            None => {
                start = 0;
                self.points.push(StitchPoint::jump(head));
            }
            Some(last) if last.at.distance(head) <= TOLERANCE_MM => {
                // Shared end point, e.g. spokes meeting at the centre.
                start = self.points.len() - 1;
            }
            Some(last) => {
                start = self.points.len();
                let kind = match connect {
                    Connect::Jump => PointKind::Jump,
                    Connect::IfInside => {
                        if last.at.distance(head) <= MAX_CONNECTING_STITCH_MM && self.inside(last.at, head) {
                            PointKind::Stitch
                        } else {
                            PointKind::Jump
                        }
                    }
                };
                self.points.push(StitchPoint { at: head, kind });
            }
        }
        self.points.extend(tail.iter().map(|&p| StitchPoint::stitch(p)));
        if self.points.len() - start >= 2 {
            self.rows.push(start..self.points.len());
        }
    }

    fn inside(&self, a: Point2, b: Point2) -> bool {
        match self.region.segment_intervals(a, b).as_slice() {
            [(t0, t1)] => *t0 <= 1e-9 && *t1 >= 1.0 - 1e-9,
            _ => false,
        }
    }

    fn finish(self, region: &Region, config: &EmbroideryConfig) -> StitchPlan {
        StitchPlan {
            points: self.points,
            rows: self.rows,
            config: Some(*config),
            region: Some(region.clone()),
            layer_count: 1,
        }
    }
}
