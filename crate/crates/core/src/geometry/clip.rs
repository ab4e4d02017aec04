use alloc::vec::Vec;
use core::ops::Range;

use super::{Region, StitchPlan, StitchPoint, TOLERANCE_MM};
use crate::geometry::PointKind;

/// Keeps the parts of `plan` inside `region`.
///
/// Sewn segments are cut at the boundary and the crossing points become
/// needle positions; each run that re-enters the region starts with a jump.
/// Jump targets outside the region are dropped. Order is preserved.
pub fn clip_to_region(plan: &StitchPlan, region: &Region) -> StitchPlan {
    let mut clip = Clipper { out: Vec::new(), rows: Vec::new(), open: None };
    let pts = &plan.points;
    let seg_rows = plan.segment_rows();

    if let Some(first) = pts.first() {
        if region.contains(first.at, TOLERANCE_MM) {
            clip.out.push(*first);
        }
    }
    for i in 1..pts.len() {
        let (a, b) = (pts[i - 1], pts[i]);
        if b.kind == PointKind::Jump {
            if region.contains(b.at, TOLERANCE_MM) {
                clip.close();
                clip.out.push(b);
            }
            continue;
        }
        let len = a.at.distance(b.at);
        for (t0, t1) in region.segment_intervals(a.at, b.at) {
            if len > TOLERANCE_MM && (t1 - t0) * len <= TOLERANCE_MM {
                continue;
            }
            let start = if t0 <= 0.0 { a.at } else { a.at.lerp(b.at, t0) };
            let end = if t1 >= 1.0 { b.at } else { a.at.lerp(b.at, t1) };
            let continuing = clip.out.last().is_some_and(|l| l.at.distance(start) <= TOLERANCE_MM);
            if !continuing {
                clip.close();
                clip.out.push(StitchPoint::jump(start));
            }
            clip.sew(end, seg_rows[i - 1]);
        }
    }
    clip.close();

    StitchPlan {
        points: clip.out,
        rows: clip.rows,
        config: plan.config,
        region: Some(region.clone()),
        layer_count: plan.layer_count,
    }
}

struct Clipper {
    out: Vec<StitchPoint>,
    rows: Vec<Range<usize>>,
    /// (source row, first output index) of the row being extended.
    open: Option<(usize, usize)>,
}

impl Clipper {
    fn close(&mut self) {
        if let Some((_, start)) = self.open.take() {
            if self.out.len() - start >= 2 {
                self.rows.push(start..self.out.len());
            }
        }
    }

    fn sew(&mut self, end: super::Point2, row: Option<usize>) {
        match (row, self.open) {
            (Some(r), Some((open, _))) if r == open => {}
            (Some(r), _) => {
                self.close();
                self.open = Some((r, self.out.len() - 1));
            }
            (None, _) => self.close(),
        }
        self.out.push(StitchPoint::stitch(end));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{linear_fill, EmbroideryConfig, Point2};
    use alloc::vec;

    #[test]
    fn inside_plan_is_unchanged() {
        let plan = linear_fill(&Region::swatch(), &EmbroideryConfig::linear(2.0, 5.0, 0.0)).unwrap();
        let clipped = clip_to_region(&plan, &Region::rectangle(200.0, 200.0));
        assert_eq!(clipped.points, plan.points);
        assert_eq!(clipped.rows, plan.rows);
    }

    #[test]
    fn severed_run_restarts_with_jump() {
        let plan = StitchPlan::from_points(vec![
            StitchPoint::jump(Point2::new(1.0, 1.0)),
            StitchPoint::stitch(Point2::new(9.0, 1.0)),
            StitchPoint::stitch(Point2::new(9.0, 20.0)),
            StitchPoint::stitch(Point2::new(5.0, 5.0)),
        ]);
        let clipped = clip_to_region(&plan, &Region::rectangle(10.0, 10.0));
        let kinds: Vec<_> = clipped.points.iter().map(|p| p.kind).collect();
        assert_eq!(
            kinds,
            vec![PointKind::Jump, PointKind::Stitch, PointKind::Stitch, PointKind::Jump, PointKind::Stitch]
        );
        assert_eq!(clipped.points[2].at, Point2::new(9.0, 10.0));
        assert!(clipped.points[3].at.y - 10.0 < 1e-12);
    }

    #[test]
    fn fully_outside_plan_clips_to_nothing() {
        let plan = StitchPlan::from_points(vec![
            StitchPoint::jump(Point2::new(50.0, 50.0)),
            StitchPoint::stitch(Point2::new(60.0, 50.0)),
        ]);
        assert!(clip_to_region(&plan, &Region::rectangle(10.0, 10.0)).is_empty());
    }
}
