//! SVG previews. One user unit is one millimetre and y points up, as on the
//! machine.

use std::fmt::Write as _;

use exofabric_core::geometry::{Point2, PointKind, StitchPlan};
use exofabric_core::units::format_decimal;

pub const MARGIN_MM: f64 = 5.0;
/// Plans with more points than this are drawn without stitch dots.
pub const MAX_DOTS: usize = 2000;

/// Rows become polylines, sewn connectors solid lines and jumps dashed lines.
pub fn write_svg(plan: &StitchPlan) -> String {
    let (min, max) = match plan.bounds() {
        Some(b) => (b.min, b.max),
        None => (Point2::ORIGIN, Point2::ORIGIN),
    };
    let width = max.x - min.x + 2.0 * MARGIN_MM;
    let height = max.y - min.y + 2.0 * MARGIN_MM;
    let n = |v: f64| format_decimal(v, 3);
    let coords = |p: Point2| (n(p.x - min.x + MARGIN_MM), n(max.y - p.y + MARGIN_MM));
    let xy = |p: Point2| {
        let (x, y) = coords(p);
        format!("{x},{y}")
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}mm" height="{h}mm" viewBox="0 0 {w} {h}">"#,
        w = n(width),
        h = n(height)
    );

    let _ = writeln!(out, r##"<g id="rows" fill="none" stroke="#1f4e79" stroke-width="0.2" stroke-linejoin="round">"##);
    for row in &plan.rows {
        let pts: Vec<String> = plan.points[row.clone()].iter().map(|p| xy(p.at)).collect();
        let _ = writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" "));
    }
    let _ = writeln!(out, "</g>");

    let mut connectors = String::new();
    let mut jumps = String::new();
    for (i, seg) in plan.segment_rows().iter().enumerate() {
        if seg.is_some() {
            continue;
        }
        let (a, b) = (plan.points[i].at, plan.points[i + 1].at);
        let (x1, y1) = coords(a);
        let (x2, y2) = coords(b);
        let line = format!(r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
        let target = if plan.points[i + 1].kind == PointKind::Jump { &mut jumps } else { &mut connectors };
        let _ = writeln!(target, "{line}");
    }
    let _ = writeln!(out, r##"<g id="connectors" stroke="#1f4e79" stroke-width="0.2">"##);
    out.push_str(&connectors);
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g id="jumps" stroke="#c0504d" stroke-width="0.15" stroke-dasharray="1,1">"##);
    out.push_str(&jumps);
    let _ = writeln!(out, "</g>");

    if !plan.is_empty() && plan.len() <= MAX_DOTS {
        let _ = writeln!(out, r##"<g id="stitches" fill="#000000">"##);
        for p in plan.points.iter().filter(|p| p.kind == PointKind::Stitch) {
            let (cx, cy) = coords(p.at);
            let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="0.25"/>"#);
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    out
}
