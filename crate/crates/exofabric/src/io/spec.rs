//! Design spec files: `[design]`, `[region]` and `[pattern]` sections.
//!
//! ```text
//! [design]
//! name = splint
//! fabric = nonstretch-336
//! layers = 4
//!
//! [region]
//! shape = rectangle
//! width_mm = 40
//! height_mm = 120
//!
//! [pattern]
//! primitive = linear
//! config = L0.66_S1
//! ```
//!
//! Optional keys left out of the file take defaults, and the names of the
//! defaulted keys are kept in [`DesignSpecFile::defaulted`] so that printing
//! reproduces the original key set.

use std::fmt::Write as _;

use exofabric_core::geometry::{
    compile, EmbroideryConfig, GeometryError, Point2, Primitive, Region, StitchPlan, DEFAULT_WAVINESS_AMPLITUDE_MM,
    DEFAULT_WAVINESS_PERIOD_MM,
};
use exofabric_core::{FabricSpec, GridConfig, ThreadSide, ThreadSpec};

use super::sections::{parse_pair, Document, Entry, Section, SpecError};

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpecFile {
    pub name: String,
    pub fabric: &'static FabricSpec,
    pub layers: u32,
    pub thread: ThreadSpec,
    pub region: Region,
    /// Set when the spacings were given as a grid id such as `L1_S5`.
    pub grid: Option<GridConfig>,
    pub config: EmbroideryConfig,
    /// `section.key` for every optional key that took its default.
    pub defaulted: Vec<&'static str>,
}

impl DesignSpecFile {
    /// Stitch plan for one layer, tagged with the layer count.
    pub fn compile(&self) -> Result<StitchPlan, GeometryError> {
        Ok(compile(&self.region, &self.config)?.with_layers(self.layers))
    }

    pub fn is_defaulted(&self, key: &str) -> bool {
        self.defaulted.contains(&key)
    }

    /// Config id when the spacings sit on the design grid.
    pub fn grid_id(&self) -> Option<GridConfig> {
        self.grid.or_else(|| {
            GridConfig::all().find(|g| {
                g.line_spacing_mm() == self.config.line_spacing_mm && g.stitch_spacing_mm() == self.config.stitch_spacing_mm
            })
        })
    }
}

pub fn parse_design_spec(text: &str) -> Result<DesignSpecFile, SpecError> {
    let mut doc = Document::parse(text, &["design", "region", "pattern"])?;
    let mut defaulted = Vec::new();

    let mut design = doc.require("design")?;
    let mut region_sec = doc.require("region")?;
    let mut pattern = doc.require("pattern")?;

    let name_entry = design.require("name")?;
    if name_entry.value.is_empty() {
        return Err(name_entry.error("must not be empty"));
    }
    let fabric_entry = design.require("fabric")?;
    let fabric = FabricSpec::lookup(&fabric_entry.value)
        .ok_or_else(|| SpecError::UnknownFabric { line: fabric_entry.line, name: fabric_entry.value.clone() })?;
    let layers = match design.take("layers") {
        Some(e) => {
            let n: u32 = e.integer()?;
            if n == 0 {
                return Err(e.error("must be at least 1"));
            }
            n
        }
        None => {
            defaulted.push("design.layers");
            1
        }
    };
    let mut thread = match design.take("thread") {
        Some(e) => parse_thread(&e)?,
        None => {
            defaulted.push("design.thread");
            ThreadSpec::default()
        }
    };
    match design.take("thread_side") {
        Some(e) => {
            thread.side = match e.value.as_str() {
                "back" => ThreadSide::Back,
                "front" => ThreadSide::Front,
                _ => return Err(e.error("expected `back` or `front`")),
            }
        }
        None => defaulted.push("design.thread_side"),
    }
    design.finish()?;

    let region = parse_region(&mut region_sec, &mut defaulted)?;
    region_sec.finish()?;

    let (config, grid) = parse_pattern(&mut pattern, &mut defaulted)?;
    pattern.finish()?;

    Ok(DesignSpecFile { name: name_entry.value, fabric, layers, thread, region, grid, config, defaulted })
}

fn parse_thread(e: &Entry) -> Result<ThreadSpec, SpecError> {
    let digits = e.value.strip_prefix("tex").unwrap_or(&e.value).trim();
    let tex: f64 = digits.parse().map_err(|_| e.error("expected a Tex gauge such as `tex60`"))?;
    if !(tex.is_finite() && tex > 0.0) {
        return Err(e.error("Tex must be positive"));
    }
    Ok(ThreadSpec::with_tex(tex))
}

fn parse_region(s: &mut Section, defaulted: &mut Vec<&'static str>) -> Result<Region, SpecError> {
    let shape = s.require("shape")?;
    let center = s
        .take("center")
        .map(|e| parse_pair(&e.value).map(|(x, y)| Point2::new(x, y)).ok_or_else(|| e.error("expected `x, y`")))
        .transpose()?;
    let region = match shape.value.as_str() {
        "rectangle" => {
            let width = s.require("width_mm")?.positive()?;
            let height = s.require("height_mm")?.positive()?;
            let center = center.unwrap_or_else(|| {
                defaulted.push("region.center");
                Point2::new(width / 2.0, height / 2.0)
            });
            Region::Rectangle { center, width, height }
        }
        "circle" => {
            let radius = s.require("radius_mm")?.positive()?;
            let center = center.unwrap_or_else(|| {
                defaulted.push("region.center");
                Point2::ORIGIN
            });
            Region::Circle { center, radius }
        }
        "polygon" => {
            if center.is_some() {
                return Err(SpecError::parse(s.line, "polygon regions take no center"));
            }
            let e = s.require("vertices")?;
            let vertices = e
                .value
                .split(';')
                .map(|v| parse_pair(v).map(|(x, y)| Point2::new(x, y)))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| e.error("expected `x, y; x, y; ...`"))?;
            let region = Region::Polygon(vertices);
            region.validate().map_err(|err| e.error(err))?;
            region
        }
        other => return Err(shape.error(format!("unknown shape {other:?}"))),
    };
    region.validate().map_err(|err| SpecError::parse(shape.line, err))?;
    Ok(region)
}

fn parse_pattern(
    s: &mut Section,
    defaulted: &mut Vec<&'static str>,
) -> Result<(EmbroideryConfig, Option<GridConfig>), SpecError> {
    let prim_entry = s.require("primitive")?;
    let primitive: Primitive =
        prim_entry.value.parse().map_err(|_| prim_entry.error("expected linear, radial or concentric"))?;

    let (line, stitch, grid) = match s.take("config") {
        Some(e) => {
            if let Some(extra) = s.take("line_spacing_mm").or_else(|| s.take("stitch_spacing_mm")) {
                return Err(extra.error("give either `config` or explicit spacings, not both"));
            }
            let g: GridConfig = e.value.parse().map_err(|err| e.error(err))?;
            (g.line_spacing_mm(), g.stitch_spacing_mm(), Some(g))
        }
        None => (s.require("line_spacing_mm")?.number()?, s.require("stitch_spacing_mm")?.number()?, None),
    };

    let mut config = match primitive {
        Primitive::Linear => {
            let angle = match s.take("angle_deg") {
                Some(e) => e.number()?,
                None => {
                    defaulted.push("pattern.angle_deg");
                    0.0
                }
            };
            for key in ["waviness_amp_mm", "waviness_period_mm"] {
                if let Some(e) = s.take(key) {
                    return Err(e.error("waviness applies to radial and concentric patterns only"));
                }
            }
            EmbroideryConfig::linear(line, stitch, angle)
        }
        Primitive::Radial | Primitive::Concentric => {
            if let Some(e) = s.take("angle_deg") {
                return Err(e.error("angle applies to linear patterns only"));
            }
            let amp = match s.take("waviness_amp_mm") {
                Some(e) => e.non_negative()?,
                None => {
                    defaulted.push("pattern.waviness_amp_mm");
                    DEFAULT_WAVINESS_AMPLITUDE_MM
                }
            };
            let period = match s.take("waviness_period_mm") {
                Some(e) => e.positive()?,
                None => {
                    defaulted.push("pattern.waviness_period_mm");
                    DEFAULT_WAVINESS_PERIOD_MM
                }
            };
            let base = if primitive == Primitive::Radial {
                EmbroideryConfig::radial(line, stitch)
            } else {
                EmbroideryConfig::concentric(line, stitch)
            };
            base.with_waviness(amp, period)
        }
    };
    config.primitive = primitive;
    config.check().map_err(|err| SpecError::parse(prim_entry.line, err))?;
    Ok((config, grid))
}

/// Prints a spec that parses back to an equal record.
pub fn print_design_spec(spec: &DesignSpecFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[design]");
    let _ = writeln!(out, "name = {}", spec.name);
    let _ = writeln!(out, "fabric = {}", spec.fabric.name);
    if !spec.is_defaulted("design.layers") {
        let _ = writeln!(out, "layers = {}", spec.layers);
    }
    if !spec.is_defaulted("design.thread") {
        let _ = writeln!(out, "thread = tex{}", spec.thread.tex);
    }
    if !spec.is_defaulted("design.thread_side") {
        let _ = writeln!(out, "thread_side = {}", spec.thread.side);
    }

    let _ = writeln!(out, "\n[region]");
    let center = |out: &mut String, c: Point2| {
        if !spec.is_defaulted("region.center") {
            let _ = writeln!(out, "center = {}, {}", c.x, c.y);
        }
    };
    match &spec.region {
        Region::Rectangle { center: c, width, height } => {
            let _ = writeln!(out, "shape = rectangle\nwidth_mm = {width}\nheight_mm = {height}");
            center(&mut out, *c);
        }
        Region::Circle { center: c, radius } => {
            let _ = writeln!(out, "shape = circle\nradius_mm = {radius}");
            center(&mut out, *c);
        }
        Region::Polygon(vs) => {
            let list: Vec<String> = vs.iter().map(|v| format!("{}, {}", v.x, v.y)).collect();
            let _ = writeln!(out, "shape = polygon\nvertices = {}", list.join("; "));
        }
    }

    let c = &spec.config;
    let _ = writeln!(out, "\n[pattern]");
    let _ = writeln!(out, "primitive = {}", c.primitive);
    match spec.grid {
        Some(g) => {
            let _ = writeln!(out, "config = {g}");
        }
        None => {
            let _ = writeln!(out, "line_spacing_mm = {}\nstitch_spacing_mm = {}", c.line_spacing_mm, c.stitch_spacing_mm);
        }
    }
    if c.primitive == Primitive::Linear {
        if !spec.is_defaulted("pattern.angle_deg") {
            let _ = writeln!(out, "angle_deg = {}", c.angle_deg);
        }
    } else {
        if !spec.is_defaulted("pattern.waviness_amp_mm") {
            let _ = writeln!(out, "waviness_amp_mm = {}", c.waviness_amplitude_mm);
        }
        if !spec.is_defaulted("pattern.waviness_period_mm") {
            let _ = writeln!(out, "waviness_period_mm = {}", c.waviness_period_mm);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[design]\nname = s\nfabric = stretch-390\n[region]\nshape = circle\nradius_mm = 30\n[pattern]\nprimitive = concentric\nline_spacing_mm = 2\nstitch_spacing_mm = 3\n";

    #[test]
    fn defaults_are_recorded() {
        let s = parse_design_spec(MINIMAL).unwrap();
        assert_eq!(s.layers, 1);
        assert_eq!(s.thread, ThreadSpec::default());
        assert_eq!(s.config.waviness_amplitude_mm, 1.5);
        assert_eq!(s.config.waviness_period_mm, 10.0);
        assert!(s.is_defaulted("pattern.waviness_amp_mm"));
        assert!(s.is_defaulted("region.center"));
        assert!(!s.is_defaulted("design.name"));
    }

    #[test]
    fn round_trip() {
        let s = parse_design_spec(MINIMAL).unwrap();
        let printed = print_design_spec(&s);
        assert_eq!(parse_design_spec(&printed).unwrap(), s);
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_design_spec(&MINIMAL.replace("stretch-390", "silk")).unwrap_err();
        assert_eq!(e, SpecError::UnknownFabric { line: 3, name: "silk".into() });
        let e = parse_design_spec(&format!("{MINIMAL}colour = red\n")).unwrap_err();
        assert!(matches!(e, SpecError::UnknownKey { line: 11, .. }), "{e}");
        let e = parse_design_spec(&MINIMAL.replace("primitive = concentric", "primitive = linear\nangle_deg = x"))
            .unwrap_err();
        assert_eq!(e.line(), 9);
    }

    #[test]
    fn missing_section_is_named() {
        let text = MINIMAL.split("[pattern]").next().unwrap();
        let e = parse_design_spec(text).unwrap_err();
        assert!(e.to_string().contains("[pattern]"), "{e}");
    }

    #[test]
    fn out_of_range_spacing() {
        assert!(parse_design_spec(&MINIMAL.replace("line_spacing_mm = 2", "line_spacing_mm = 0.1")).is_err());
    }
}
