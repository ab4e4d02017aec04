use exofabric_core::calibration::{predict, CalibrationTable, GeometryTag, PredictOptions, PropertyQuery, TestMode};
use exofabric_core::geometry::{compile, EmbroideryConfig, Point2, PointKind, Primitive, Region, StitchPlan};
use exofabric_core::solver::{
    enumerate_candidates, solve, CandidateStatus, FabricConstraint, ForceBound, FormabilityTarget, Requirements,
};
use exofabric_core::GridConfig;
use proptest::prelude::*;

fn grid() -> impl Strategy<Value = GridConfig> {
    (0usize..9).prop_map(|i| GridConfig::all().nth(i).unwrap())
}

fn fabric() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("nonstretch-336"), Just("stretch-390")]
}

fn mode() -> impl Strategy<Value = TestMode> {
    prop_oneof![Just(TestMode::Compression), Just(TestMode::Tensile)]
}

fn query(config: GridConfig, fabric: &str, layers: u8, d: f64, mode: TestMode) -> PropertyQuery {
    PropertyQuery { geometry: GeometryTag::Swatch100, config, fabric: fabric.into(), layers, displacement_mm: d, mode }
}

fn region() -> impl Strategy<Value = Region> {
    let center = (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Point2::new(x, y));
    prop_oneof![
        (center.clone(), 5.0..60.0f64, 5.0..60.0f64)
            .prop_map(|(center, width, height)| Region::Rectangle { center, width, height }),
        (center, 6.0..40.0f64).prop_map(|(c, r)| Region::circle(c, r)),
    ]
}

fn config() -> impl Strategy<Value = EmbroideryConfig> {
    prop_oneof![
        (grid(), -90.0..90.0f64).prop_map(|(g, a)| EmbroideryConfig::linear(g.line_spacing_mm(), g.stitch_spacing_mm(), a)),
        grid().prop_map(|g| EmbroideryConfig::radial(g.line_spacing_mm() * 3.0, g.stitch_spacing_mm())),
        grid().prop_map(|g| EmbroideryConfig::concentric(g.line_spacing_mm() * 3.0, g.stitch_spacing_mm())),
    ]
}

fn near(a: &StitchPlan, b: &StitchPlan, tol: f64) -> bool {
    a.len() == b.len()
        && a.rows == b.rows
        && a.points.iter().zip(&b.points).all(|(p, q)| p.kind == q.kind && p.at.distance(q.at) <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn force_grows_with_displacement(
        c in grid(), f in fabric(), m in mode(), layers in 1u8..=4, a in 0.0..25.0f64, b in 0.0..25.0f64,
    ) {
        let t = CalibrationTable::bundled();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let o = PredictOptions::default();
        if let (Ok(p), Ok(q)) = (predict(&query(c, f, layers, lo, m), &t, o), predict(&query(c, f, layers, hi, m), &t, o)) {
            prop_assert!(p.force_n <= q.force_n);
        }
    }

    #[test]
    fn force_grows_with_layers(c in grid(), f in fabric(), n in 1u8..4, d in 0.0..20.0f64) {
        let t = CalibrationTable::bundled();
        let o = PredictOptions::default();
        let fewer = predict(&query(c, f, n, d, TestMode::Compression), &t, o);
        let more = predict(&query(c, f, n + 1, d, TestMode::Compression), &t, o);
        if let (Ok(p), Ok(q)) = (fewer, more) {
            prop_assert!(p.force_n <= q.force_n);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn compile_is_deterministic(r in region(), c in config()) {
        prop_assert_eq!(compile(&r, &c), compile(&r, &c));
    }

    #[test]
    fn translation_moves_the_plan(r in region(), c in config(), dx in -30.0..30.0f64, dy in -30.0..30.0f64) {
        let by = Point2::new(dx, dy);
        if let Ok(plan) = compile(&r, &c) {
            let moved = compile(&r.translated(by), &c).unwrap();
            prop_assert!(near(&moved, &plan.translated(by), 1e-6));
        }
    }

    #[test]
    fn stitches_stay_inside_and_close(r in region(), c in config()) {
        if let Ok(plan) = compile(&r, &c) {
            for p in &plan.points {
                prop_assert!(r.contains(p.at, 1e-6), "{:?} outside", p.at);
            }
            if c.primitive == Primitive::Linear {
                for row in &plan.rows {
                    for w in plan.points[row.clone()].windows(2) {
                        prop_assert!(w[0].at.distance(w[1].at) <= c.stitch_spacing_mm + 1e-6);
                    }
                }
            }
            for (i, row) in plan.segment_rows().iter().enumerate() {
                let next = plan.points[i + 1];
                if row.is_none() && next.kind == PointKind::Stitch {
                    prop_assert!(plan.points[i].at.distance(next.at) <= 12.1 + 1e-6);
                }
            }
        }
    }
}

fn requirements() -> impl Strategy<Value = Requirements> {
    let bound = |hi: f64, dmax: f64| proptest::option::of((0.0..hi, 0.0..dmax).prop_map(|(force_n, displacement_mm)| ForceBound { force_n, displacement_mm }));
    let fabric = prop_oneof![
        Just(FabricConstraint::Any),
        Just(FabricConstraint::NonStretch),
        Just(FabricConstraint::Stretch),
    ];
    let form = prop_oneof![
        Just(FormabilityTarget::None),
        Just(FormabilityTarget::SingleCurve),
        Just(FormabilityTarget::DoubleCurve),
    ];
    (fabric, bound(100.0, 20.0), bound(80.0, 20.0), form, 1u8..=4).prop_map(|(fabric, c, t, formability, max_layers)| {
        let mut req = Requirements {
            fabric,
            min_compression: c,
            max_tensile: t,
            formability,
            mold_diameter_mm: (formability != FormabilityTarget::None).then_some(30.0),
            geometry: GeometryTag::Swatch100,
            max_layers,
        };
        if req.validate().is_err() {
            req.min_compression = Some(ForceBound { force_n: 1.0, displacement_mm: 5.0 });
        }
        req
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn front_is_the_non_dominated_feasible_set(req in requirements()) {
        let t = CalibrationTable::bundled();
        let o = PredictOptions::default();
        let result = solve(&req, &t, o).unwrap();
        let feasible: Vec<_> = enumerate_candidates(&req, &t, o)
            .into_iter()
            .filter(|c| c.status == CandidateStatus::Feasible)
            .map(|c| c.design)
            .collect();
        for a in &result.pareto_front {
            prop_assert!(!feasible.iter().any(|b| b.objectives.dominates(&a.objectives)));
        }
        for c in &feasible {
            let on_front = result.pareto_front.iter().any(|f| f == c);
            prop_assert!(on_front || result.pareto_front.iter().any(|f| f.objectives.dominates(&c.objectives)));
        }
        prop_assert_eq!(result.feasible, !feasible.is_empty());
    }
}
