//! Requirements files for the solver: one `[requirements]` section.
//!
//! ```text
//! [requirements]
//! geometry = bra-dome
//! fabric = stretch
//! min_compression = 1.8 N @ 19 mm
//! formability = double-curve
//! mold_diameter_mm = 30
//! ```
//!
//! `fabric` is `any`, `non-stretch`, `stretch` or a registry name. Force
//! bounds read `<force> N @ <displacement> mm`; the units may be left out.

use std::fmt::Write as _;

use exofabric_core::calibration::GeometryTag;
use exofabric_core::solver::{FabricConstraint, ForceBound, FormabilityTarget, Requirements, RequirementsError};
use exofabric_core::FabricSpec;

use super::sections::{Document, Entry, SpecError};

pub fn parse_requirements(text: &str) -> Result<Requirements, SpecError> {
    let mut doc = Document::parse(text, &["requirements"])?;
    let mut s = doc.require("requirements")?;
    let mut req = Requirements::default();

    if let Some(e) = s.take("geometry") {
        req.geometry = GeometryTag::parse(&e.value).ok_or_else(|| e.error("expected swatch-100, splint or bra-dome"))?;
    }
    if let Some(e) = s.take("fabric") {
        req.fabric = match e.value.as_str() {
            "any" => FabricConstraint::Any,
            "non-stretch" | "nonstretch" => FabricConstraint::NonStretch,
            "stretch" => FabricConstraint::Stretch,
            name => {
                if FabricSpec::lookup(name).is_none() {
                    return Err(SpecError::UnknownFabric { line: e.line, name: name.to_string() });
                }
                FabricConstraint::Named(name.to_string())
            }
        };
    }
    if let Some(e) = s.take("min_compression") {
        req.min_compression = Some(parse_bound(&e)?);
    }
    if let Some(e) = s.take("max_tensile") {
        req.max_tensile = Some(parse_bound(&e)?);
    }
    let formability_line = s.take("formability").map(|e| -> Result<usize, SpecError> {
        req.formability = match e.value.as_str() {
            "none" => FormabilityTarget::None,
            "single-curve" => FormabilityTarget::SingleCurve,
            "double-curve" => FormabilityTarget::DoubleCurve,
            _ => return Err(e.error("expected none, single-curve or double-curve")),
        };
        Ok(e.line)
    });
    let formability_line = formability_line.transpose()?;
    if let Some(e) = s.take("mold_diameter_mm") {
        req.mold_diameter_mm = Some(e.positive()?);
    }
    if let Some(e) = s.take("max_layers") {
        req.max_layers = e.integer()?;
    }
    s.finish()?;

    let line = s.line;
    req.validate().map_err(|err| match err {
        RequirementsError::NoConstraint => SpecError::parse(line, "no constraint present"),
        RequirementsError::MissingMold | RequirementsError::Calibration(_) => {
            SpecError::parse(formability_line.unwrap_or(line), err)
        }
        other => SpecError::parse(line, other),
    })?;
    Ok(req)
}

fn parse_bound(e: &Entry) -> Result<ForceBound, SpecError> {
    let (force, disp) = e.value.split_once('@').ok_or_else(|| e.error("expected `<force> N @ <displacement> mm`"))?;
    let number = |s: &str, unit: &str| -> Result<f64, SpecError> {
        let s = s.trim();
        let s = s.strip_suffix(unit).unwrap_or(s).trim();
        let v: f64 = s.parse().map_err(|_| e.error(format!("expected a number, got {s:?}")))?;
        if !v.is_finite() {
            return Err(e.error("value must be finite"));
        }
        Ok(v)
    };
    let force_n = number(force, "N")?;
    let displacement_mm = number(disp, "mm")?;
    if displacement_mm < 0.0 {
        return Err(e.error("displacement must not be negative"));
    }
    if force_n < 0.0 {
        return Err(e.error("force must not be negative"));
    }
    Ok(ForceBound { force_n, displacement_mm })
}

pub fn print_requirements(req: &Requirements) -> String {
    let mut out = String::from("[requirements]\n");
    let _ = writeln!(out, "geometry = {}", req.geometry);
    let _ = writeln!(out, "fabric = {}", req.fabric);
    let bound = |b: &ForceBound| format!("{} N @ {} mm", b.force_n, b.displacement_mm);
    if let Some(b) = &req.min_compression {
        let _ = writeln!(out, "min_compression = {}", bound(b));
    }
    if let Some(b) = &req.max_tensile {
        let _ = writeln!(out, "max_tensile = {}", bound(b));
    }
    if req.formability != FormabilityTarget::None {
        let _ = writeln!(out, "formability = {}", req.formability);
    }
    if let Some(d) = req.mold_diameter_mm {
        let _ = writeln!(out, "mold_diameter_mm = {d}");
    }
    let _ = writeln!(out, "max_layers = {}", req.max_layers);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bra_requirements() {
        let r = parse_requirements(
            "[requirements]\ngeometry = bra-dome\nfabric = stretch\nmin_compression = 1.8 N @ 19 mm\nformability = double-curve\nmold_diameter_mm = 30\n",
        )
        .unwrap();
        assert_eq!(r.min_compression, Some(ForceBound { force_n: 1.8, displacement_mm: 19.0 }));
        assert_eq!(r.fabric, FabricConstraint::Stretch);
        assert_eq!(r.geometry, GeometryTag::BraDome);
        assert_eq!(parse_requirements(&print_requirements(&r)).unwrap(), r);
    }

    #[test]
    fn negative_displacement() {
        let e = parse_requirements("[requirements]\nmin_compression = 2 @ -1\n").unwrap_err();
        assert_eq!(e.line(), 2);
        assert!(e.to_string().contains("displacement"));
    }

    #[test]
    fn empty_constraints() {
        let e = parse_requirements("[requirements]\nfabric = any\n").unwrap_err();
        assert!(e.to_string().contains("no constraint present"), "{e}");
    }

    #[test]
    fn formability_without_mold() {
        let e = parse_requirements("[requirements]\n\nformability = single-curve\n").unwrap_err();
        assert_eq!(e.line(), 3);
    }
}
