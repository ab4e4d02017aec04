use exofabric_core::calibration::{
    classify_formability, predict, swatch_plan, CalibrationTable, FormabilityClass, GeometryTag, PredictOptions,
    PropertyQuery, TestMode,
};
use exofabric_core::solver::{
    feasibility_report, solve, FabricConstraint, ForceBound, FormabilityTarget, Requirements,
};
use exofabric_core::{FabricSpec, GridConfig, StretchClass};

#[derive(Debug, Clone, PartialEq)]
struct Row {
    config: GridConfig,
    fabric: &'static str,
    layers: u8,
    minutes: f64,
    stitches: usize,
}

enum Verdict {
    Feasible(Row),
    Rejected,
    Unknown,
}

/// Minutes per layer on the line through the two swatch anchors.
fn minutes(stitches: usize) -> f64 {
    let (n1, m1, n2, m2) = (15149.0, 20.0, 399.0, 5.0);
    m2 + (stitches as f64 - n2) * (m1 - m2) / (n1 - n2)
}

fn fabrics(c: &FabricConstraint) -> Vec<&'static FabricSpec> {
    FabricSpec::primary()
        .iter()
        .filter(|f| match c {
            FabricConstraint::Any => true,
            FabricConstraint::NonStretch => f.stretch == StretchClass::NonStretch,
            FabricConstraint::Stretch => f.stretch == StretchClass::Stretch,
            FabricConstraint::Named(n) => f.name == n,
        })
        .collect()
}

fn judge(req: &Requirements, config: GridConfig, fabric: &'static FabricSpec, layers: u8) -> Verdict {
    let t = CalibrationTable::bundled();
    let q = |b: ForceBound, mode| PropertyQuery {
        geometry: req.geometry,
        config,
        fabric: fabric.name.into(),
        layers,
        displacement_mm: b.displacement_mm,
        mode,
    };
    let mut ok = true;
    if let Some(b) = req.min_compression {
        match predict(&q(b, TestMode::Compression), &t, PredictOptions::default()) {
            Ok(p) => ok &= p.force_n >= b.force_n,
            Err(_) => return Verdict::Unknown,
        }
    }
    if let Some(b) = req.max_tensile {
        match predict(&q(b, TestMode::Tensile), &t, PredictOptions::default()) {
            Ok(p) => ok &= p.force_n <= b.force_n,
            Err(_) => return Verdict::Unknown,
        }
    }
    if req.formability != FormabilityTarget::None {
        let mold = req.mold_diameter_mm.unwrap();
        match classify_formability(config.line_spacing_mm(), config.stitch_spacing_mm(), fabric, mold, layers) {
            Ok(a) => {
                ok &= a.class == FormabilityClass::Good;
                if req.formability == FormabilityTarget::DoubleCurve {
                    ok &= fabric.stretch == StretchClass::Stretch;
                }
            }
            Err(_) => return Verdict::Unknown,
        }
    }
    if !ok {
        return Verdict::Rejected;
    }
    let per_layer = swatch_plan(config).stitch_count();
    Verdict::Feasible(Row {
        config,
        fabric: fabric.name,
        layers,
        minutes: minutes(per_layer) * f64::from(layers),
        stitches: per_layer * usize::from(layers),
    })
}

fn beats(a: &Row, b: &Row) -> bool {
    let le = a.minutes <= b.minutes + 1e-9 && a.layers <= b.layers && a.stitches <= b.stitches;
    let lt = a.minutes < b.minutes - 1e-9 || a.layers < b.layers || a.stitches < b.stitches;
    le && lt
}

/// Front, rejected count and unknown count by exhaustive filtering.
fn brute_force(req: &Requirements) -> (Vec<Row>, usize, usize) {
    let mut feasible = Vec::new();
    let (mut rejected, mut unknown) = (0, 0);
    for config in GridConfig::all() {
        for f in fabrics(&req.fabric) {
            for layers in 1..=req.max_layers {
                match judge(req, config, f, layers) {
                    Verdict::Feasible(r) => feasible.push(r),
                    Verdict::Rejected => rejected += 1,
                    Verdict::Unknown => unknown += 1,
                }
            }
        }
    }
    let front = feasible.iter().filter(|r| !feasible.iter().any(|o| beats(o, r))).cloned().collect();
    (front, rejected, unknown)
}

fn check(req: &Requirements) {
    let got = solve(req, &CalibrationTable::bundled(), PredictOptions::default()).unwrap();
    let (mut want, rejected, unknown) = brute_force(req);
    assert_eq!(got.rejected_count, rejected);
    assert_eq!(got.skipped_for_missing_calibration.len(), unknown);
    assert_eq!(got.feasible, !want.is_empty());
    assert_eq!(got.pareto_front.len(), want.len());
    for c in &got.pareto_front {
        let i = want
            .iter()
            .position(|r| r.config == c.config && r.fabric == c.fabric && r.layers == c.layers)
            .unwrap_or_else(|| panic!("{} not in oracle front", c.label()));
        let r = want.remove(i);
        assert!((r.minutes - c.objectives.minutes).abs() < 1e-9);
        assert_eq!(r.stitches, c.objectives.stitches);
    }
}

fn splint() -> Requirements {
    Requirements {
        geometry: GeometryTag::Splint,
        fabric: FabricConstraint::NonStretch,
        min_compression: Some(ForceBound { force_n: 6.4, displacement_mm: 5.0 }),
        ..Default::default()
    }
}

fn bra() -> Requirements {
    Requirements {
        geometry: GeometryTag::BraDome,
        fabric: FabricConstraint::Stretch,
        min_compression: Some(ForceBound { force_n: 1.8, displacement_mm: 19.0 }),
        formability: FormabilityTarget::DoubleCurve,
        mold_diameter_mm: Some(30.0),
        ..Default::default()
    }
}

#[test]
fn splint_front() {
    check(&splint());
    let r = solve(&splint(), &CalibrationTable::bundled(), PredictOptions::default()).unwrap();
    let labels: Vec<String> = r.pareto_front.iter().map(|c| c.label()).collect();
    assert_eq!(labels, ["L0.66_S1 nonstretch-336 x4"]);
    assert_eq!(r.pareto_front[0].predictions.compression.as_ref().unwrap().force_n, 7.8);
}

#[test]
fn bra_front() {
    check(&bra());
    let r = solve(&bra(), &CalibrationTable::bundled(), PredictOptions::default()).unwrap();
    assert_eq!(r.pareto_front[0].label(), "L1_S15 stretch-390 x1");
    assert!(r.pareto_front.iter().all(|c| c.primitive == exofabric_core::geometry::Primitive::Concentric));
}

#[test]
fn heavy_requirement_is_infeasible() {
    let req = Requirements {
        min_compression: Some(ForceBound { force_n: 200.0, displacement_mm: 20.0 }),
        ..Default::default()
    };
    check(&req);
    let r = solve(&req, &CalibrationTable::bundled(), PredictOptions::default()).unwrap();
    assert!(!r.feasible);
    assert_eq!(r.binding_constraint().unwrap().constraint.code(), "min_compression");
    assert_eq!(r.nearest_miss.as_ref().unwrap().design.label(), "L0.66_S1 stretch-390 x4");
    let report = feasibility_report(&r);
    assert!(report.starts_with("status: infeasible\nreason: min_compression"), "{report}");
}

#[test]
fn swatch_requirement_sets() {
    let sets = [
        (Some(5.0), None, FormabilityTarget::None, FabricConstraint::Any),
        (Some(4.0), Some(45.0), FormabilityTarget::None, FabricConstraint::Stretch),
        (None, Some(30.0), FormabilityTarget::None, FabricConstraint::Any),
        (Some(2.0), None, FormabilityTarget::SingleCurve, FabricConstraint::NonStretch),
        (None, None, FormabilityTarget::DoubleCurve, FabricConstraint::Any),
        (Some(15.0), None, FormabilityTarget::SingleCurve, FabricConstraint::Named("stretch-390".into())),
    ];
    for (c, t, form, fabric) in sets {
        let req = Requirements {
            fabric,
            min_compression: c.map(|f| ForceBound { force_n: f, displacement_mm: 10.0 }),
            max_tensile: t.map(|f| ForceBound { force_n: f, displacement_mm: 20.0 }),
            formability: form,
            mold_diameter_mm: (form != FormabilityTarget::None).then_some(30.0),
            ..Default::default()
        };
        check(&req);
    }
}
