//! Fabrication and molding instruction sheets.

use std::fmt::Write as _;

use exofabric_core::calibration::{estimate_fabrication_time, TimeModel};
use exofabric_core::geometry::{validate_design, Primitive, Region};
use exofabric_core::units::format_decimal;
use exofabric_core::ThreadSide;

use super::spec::DesignSpecFile;

/// Instruction sheet using the bundled time model.
pub fn render_instructions(spec: &DesignSpecFile) -> String {
    render_instructions_with(spec, &TimeModel::bundled())
}

pub fn render_instructions_with(spec: &DesignSpecFile, time: &TimeModel) -> String {
    let n = |v: f64| format_decimal(v, 3);
    let t = &spec.thread;
    let c = &spec.config;
    let mut out = String::new();

    let _ = writeln!(out, "ExoFabric instructions: {}", spec.name);
    let _ = writeln!(out);
    let f = spec.fabric;
    let _ = writeln!(out, "fabric: {} ({}, {} GSM, {})", f.name, f.stretch, n(f.gsm), f.composition);
    let _ = writeln!(out, "thread: Tex {} {}, Tg {}–{} °C", n(t.tex), t.material, n(t.tg_low_c), n(t.tg_high_c));

    let region = match &spec.region {
        Region::Rectangle { width, height, .. } => format!("rectangle {} x {} mm", n(*width), n(*height)),
        Region::Circle { radius, .. } => format!("circle, radius {} mm", n(*radius)),
        Region::Polygon(vs) => format!("polygon, {} vertices", vs.len()),
    };
    let _ = writeln!(out, "region: {region}");
    let mut pattern = format!(
        "pattern: {}, line spacing {} mm, stitch spacing {} mm",
        c.primitive,
        n(c.line_spacing_mm),
        n(c.stitch_spacing_mm)
    );
    match c.primitive {
        Primitive::Linear => {
            let _ = write!(pattern, ", rows at {}°", n(c.angle_deg));
        }
        Primitive::Radial | Primitive::Concentric => {
            let _ = write!(pattern, ", waviness {} mm / {} mm", n(c.waviness_amplitude_mm), n(c.waviness_period_mm));
        }
    }
    if let Some(g) = spec.grid_id() {
        let _ = write!(pattern, " ({g})");
    }
    let _ = writeln!(out, "{pattern}");

    match spec.compile() {
        Ok(plan) => {
            let _ = writeln!(out, "stitches per layer: {}, jumps per layer: {}", plan.stitch_count(), plan.jump_count());
            let _ = writeln!(
                out,
                "estimated sewing time: {} min for {} layer{}",
                format_decimal(estimate_fabrication_time(&plan, time), 1),
                spec.layers,
                if spec.layers == 1 { "" } else { "s" }
            );
        }
        Err(e) => {
            let _ = writeln!(out, "stitch plan unavailable: {e}");
        }
    }

    let _ = writeln!(out);
    let _ = writeln!(out, "steps:");
    let copies = if spec.layers == 1 { String::from("embroider 1 copy") } else {
        format!("embroider {} copies and stack", spec.layers)
    };
    let _ = writeln!(out, "1. {copies}");
    let side = match t.side {
        ThreadSide::Back => String::from(
            "2. thread side: thermoplastic on the back side of the fabric (bobbin thread), regular thread on the front",
        ),
        ThreadSide::Front => String::from(
            "2. thread side: thermoplastic is configured on the front; the back side is recommended to keep thread tension balanced",
        ),
    };
    let _ = writeln!(out, "{side}");
    let m = &t.molding;
    let _ = writeln!(
        out,
        "3. molding: heat to {} °C for {} s; cool {} s to {} °C",
        n(m.heat_to_c),
        n(m.heat_seconds),
        n(m.cool_seconds),
        n(m.cool_to_c)
    );
    let _ = writeln!(
        out,
        "4. re-molding: the thread softens above its glass transition ({}–{} °C); reheat to reshape",
        n(t.tg_low_c),
        n(t.tg_high_c)
    );
    if spec.layers >= 2 {
        let _ = writeln!(out, "note: stacked layers add stiffness but reduce mold conformance");
    }

    let diags = validate_design(c, t, f);
    if !diags.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "diagnostics:");
        for d in diags {
            let _ = writeln!(out, "- {d}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::spec::parse_design_spec;

    #[test]
    fn protocol_and_stacking() {
        let spec = parse_design_spec(
            "[design]\nname = s\nfabric = nonstretch-336\nlayers = 4\n[region]\nshape = rectangle\nwidth_mm = 20\nheight_mm = 20\n[pattern]\nprimitive = linear\nconfig = L1_S5\n",
        )
        .unwrap();
        let sheet = render_instructions(&spec);
        assert!(sheet.contains("embroider 4 copies and stack"), "{sheet}");
        assert!(sheet.contains("heat to 70 °C for 10 s; cool 20 s to 22 °C"));
        assert!(sheet.contains("47–57 °C"));
        assert!(sheet.contains("back side"));
        assert!(sheet.contains("(L1_S5)"));
        assert!(!sheet.contains("diagnostics"));
    }
}
