use alloc::vec::Vec;

use super::{GeometryError, Point2, TOLERANCE_MM};

/// Design area. Rectangles are axis-aligned; polygons are simple and
/// counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Rectangle { center: Point2, width: f64, height: f64 },
    Circle { center: Point2, radius: f64 },
    Polygon(Vec<Point2>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: Point2,
    pub max: Point2,
}

impl Bounds {
    pub fn of(points: impl IntoIterator<Item = Point2>) -> Option<Bounds> {
        let mut it = points.into_iter();
        let first = it.next()?;
        Some(it.fold(Bounds { min: first, max: first }, |b, p| Bounds {
            min: Point2::new(b.min.x.min(p.x), b.min.y.min(p.y)),
            max: Point2::new(b.max.x.max(p.x), b.max.y.max(p.y)),
        }))
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        p.x >= self.min.x - tol && p.x <= self.max.x + tol && p.y >= self.min.y - tol && p.y <= self.max.y + tol
    }
}

impl Region {
    /// Rectangle with its lower-left corner at the origin.
    pub fn rectangle(width: f64, height: f64) -> Region {
        Region::Rectangle { center: Point2::new(width / 2.0, height / 2.0), width, height }
    }

    pub fn circle(center: Point2, radius: f64) -> Region {
        Region::Circle { center, radius }
    }

    /// The 100 x 100 mm calibration swatch.
    pub fn swatch() -> Region {
        Region::rectangle(100.0, 100.0)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        match self {
            Region::Rectangle { center, width, height } => {
                if !center.is_sane() {
                    return Err(GeometryError::InvalidRegion("rectangle center out of range"));
                }
                if !positive(*width) || !positive(*height) {
                    return Err(GeometryError::InvalidRegion("rectangle dimensions must be positive"));
                }
            }
            Region::Circle { center, radius } => {
                if !center.is_sane() {
                    return Err(GeometryError::InvalidRegion("circle center out of range"));
                }
                if !positive(*radius) {
                    return Err(GeometryError::InvalidRegion("circle radius must be positive"));
                }
            }
            Region::Polygon(vs) => {
                if vs.len() < 3 {
                    return Err(GeometryError::InvalidRegion("polygon needs at least 3 vertices"));
                }
                if !vs.iter().all(|v| v.is_sane()) {
                    return Err(GeometryError::InvalidRegion("polygon vertex out of range"));
                }
                let area = signed_area(vs);
                if area <= 0.0 {
                    return Err(GeometryError::InvalidRegion("polygon must be counterclockwise with positive area"));
                }
                if self_intersects(vs) {
                    return Err(GeometryError::InvalidRegion("polygon is not simple"));
                }
            }
        }
        if let Some(b) = self.bounds() {
            if !b.min.is_sane() || !b.max.is_sane() {
                return Err(GeometryError::InvalidRegion("region exceeds coordinate limit"));
            }
        }
        Ok(())
    }

    pub fn bounds(&self) -> Option<Bounds> {
        match self {
            Region::Circle { center, radius } => Some(Bounds {
                min: Point2::new(center.x - radius, center.y - radius),
                max: Point2::new(center.x + radius, center.y + radius),
            }),
            _ => Bounds::of(self.vertices()),
        }
    }

    /// Boundary vertices, counterclockwise. Empty for circles.
    pub fn vertices(&self) -> Vec<Point2> {
        match self {
            Region::Rectangle { center, width, height } => {
                let (hw, hh) = (width / 2.0, height / 2.0);
                alloc::vec![
                    Point2::new(center.x - hw, center.y - hh),
                    Point2::new(center.x + hw, center.y - hh),
                    Point2::new(center.x + hw, center.y + hh),
                    Point2::new(center.x - hw, center.y + hh),
                ]
            }
            Region::Circle { .. } => Vec::new(),
            Region::Polygon(vs) => vs.clone(),
        }
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        match self {
            Region::Rectangle { center, width, height } => {
                libm::fabs(p.x - center.x) <= width / 2.0 + tol && libm::fabs(p.y - center.y) <= height / 2.0 + tol
            }
            Region::Circle { center, radius } => p.distance(*center) <= radius + tol,
            Region::Polygon(vs) => point_in_polygon(vs, p) || distance_to_boundary(vs, p) <= tol,
        }
    }

    /// `(min, max)` of `p . dir` over the region.
    pub fn projection(&self, dir: Point2) -> (f64, f64) {
        match self {
            Region::Circle { center, radius } => {
                let c = center.dot(dir);
                (c - radius * dir.length(), c + radius * dir.length())
            }
            _ => self
                .vertices()
                .into_iter()
                .map(|v| v.dot(dir))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d), hi.max(d))),
        }
    }

    /// Intervals of `s` where `offset * normal + s * along` lies inside the
    /// region, ascending. `along` and `normal` must be orthonormal.
    pub(crate) fn scanline(&self, along: Point2, normal: Point2, offset: f64) -> Vec<(f64, f64)> {
        match self {
            Region::Circle { center, radius } => {
                let h = offset - center.dot(normal);
                let disc = radius * radius - h * h;
                if disc < 0.0 {
                    return Vec::new();
                }
                let half = libm::sqrt(disc);
                let c = center.dot(along);
                alloc::vec![(c - half, c + half)]
            }
            _ => {
                let vs = self.vertices();
                let mut hits: Vec<f64> = Vec::new();
                for i in 0..vs.len() {
                    let (p, q) = (vs[i], vs[(i + 1) % vs.len()]);
                    let (pv, qv) = (p.dot(normal), q.dot(normal));
                    // Half-open edge rule so a scanline through a vertex counts it once.
                    if (pv <= offset && offset < qv) || (qv <= offset && offset < pv) {
                        let t = (offset - pv) / (qv - pv);
                        let (pu, qu) = (p.dot(along), q.dot(along));
                        hits.push(pu + t * (qu - pu));
                    }
                }
                hits.sort_by(f64::total_cmp);
                hits.chunks_exact(2).map(|c| (c[0], c[1])).collect()
            }
        }
    }

    /// Parameter intervals `[t0, t1]` of the segment `a -> b` lying inside the
    /// region (boundary inclusive), ascending and merged.
    pub(crate) fn segment_intervals(&self, a: Point2, b: Point2) -> Vec<(f64, f64)> {
        let d = b - a;
        if d.length() <= TOLERANCE_MM {
            return if self.contains(a, TOLERANCE_MM) { alloc::vec![(0.0, 1.0)] } else { Vec::new() };
        }
        match self {
            Region::Circle { center, radius } => {
                let r = radius + TOLERANCE_MM;
                let f = a - *center;
                let qa = d.dot(d);
                let qb = 2.0 * f.dot(d);
                let qc = f.dot(f) - r * r;
                let disc = qb * qb - 4.0 * qa * qc;
                if disc < 0.0 {
                    return Vec::new();
                }
                let sq = libm::sqrt(disc);
                let t0 = ((-qb - sq) / (2.0 * qa)).max(0.0);
                let t1 = ((-qb + sq) / (2.0 * qa)).min(1.0);
                if t0 <= t1 {
                    alloc::vec![(t0, t1)]
                } else {
                    Vec::new()
                }
            }
            _ => {
                let vs = self.vertices();
                let mut ts: Vec<f64> = alloc::vec![0.0, 1.0];
                for i in 0..vs.len() {
                    let (p, q) = (vs[i], vs[(i + 1) % vs.len()]);
                    let e = q - p;
                    let denom = d.cross(e);
                    if libm::fabs(denom) < 1e-15 {
                        continue;
                    }
                    let t = (p - a).cross(e) / denom;
                    let u = (p - a).cross(d) / denom;
                    if (0.0..=1.0).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u) {
                        ts.push(t);
                    }
                }
                ts.sort_by(f64::total_cmp);
                ts.dedup_by(|x, y| libm::fabs(*x - *y) < 1e-15);
                let mut out: Vec<(f64, f64)> = Vec::new();
                for w in ts.windows(2) {
                    let (t0, t1) = (w[0], w[1]);
                    let inside = if t1 - t0 < 1e-12 {
                        self.contains(a.lerp(b, t0), TOLERANCE_MM)
                    } else {
                        self.contains(a.lerp(b, 0.5 * (t0 + t1)), TOLERANCE_MM)
                    };
                    if !inside {
                        continue;
                    }
                    match out.last_mut() {
                        Some(last) if libm::fabs(last.1 - t0) < 1e-15 => last.1 = t1,
                        _ => out.push((t0, t1)),
                    }
                }
                // A single boundary touch at an end point still counts.
                if out.is_empty() {
                    for t in [0.0, 1.0] {
                        if self.contains(a.lerp(b, t), TOLERANCE_MM) {
                            out.push((t, t));
                        }
                    }
                }
                out
            }
        }
    }

    pub fn translated(&self, by: Point2) -> Region {
        match self {
            Region::Rectangle { center, width, height } => {
                Region::Rectangle { center: *center + by, width: *width, height: *height }
            }
            Region::Circle { center, radius } => Region::Circle { center: *center + by, radius: *radius },
            Region::Polygon(vs) => Region::Polygon(vs.iter().map(|v| *v + by).collect()),
        }
    }
}

fn signed_area(vs: &[Point2]) -> f64 {
    let n = vs.len();
    (0..n).map(|i| vs[i].cross(vs[(i + 1) % n])).sum::<f64>() / 2.0
}

fn point_in_polygon(vs: &[Point2], p: Point2) -> bool {
    let mut inside = false;
    let n = vs.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (vs[i], vs[j]);
        if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn distance_to_boundary(vs: &[Point2], p: Point2) -> f64 {
    let n = vs.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vs[i], vs[(i + 1) % n]);
            let ab = b - a;
            let len2 = ab.dot(ab);
            let t = if len2 == 0.0 { 0.0 } else { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) };
            p.distance(a.lerp(b, t))
        })
        .fold(f64::INFINITY, f64::min)
}

fn segments_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    let on = |p: Point2, q: Point2, r: Point2, o: f64| {
        o == 0.0 && r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

fn self_intersects(vs: &[Point2]) -> bool {
    let n = vs.len();
    for i in 0..n {
        let (a, b) = (vs[i], vs[(i + 1) % n]);
        if a == b {
            return true;
        }
        for j in (i + 1)..n {
            // adjacent edges share a vertex by construction
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (vs[j], vs[(j + 1) % n]);
            if segments_cross(a, b, c, d) {
                return true;
            }
        }
    }
    false
}
