use exofabric_core::calibration::{
    classify_formability, estimate_fabrication_time, load_calibration, predict, predict_compression, predict_tensile,
    swatch_plan, CalibrationError, CalibrationTable, Extrapolation, FormabilityClass, GeometryTag, PredictOptions,
    PropertyQuery, Provenance, TimeModel,
};
use exofabric_core::{FabricSpec, GridConfig, LineSpacing, StitchSpacing};

const NS: &str = "nonstretch-336";
const ST: &str = "stretch-390";

fn cfg(s: &str) -> GridConfig {
    s.parse().unwrap()
}

fn compression(config: &str, fabric: &str, layers: u8, d: f64) -> f64 {
    let t = CalibrationTable::bundled();
    predict_compression(&PropertyQuery::compression(cfg(config), fabric, layers, d), &t, PredictOptions::default())
        .unwrap()
        .force_n
}

#[test]
fn quoted_compression_knots() {
    let cases = [
        ("L2_S5", NS, 1, 10.0, 2.4),
        ("L1_S5", NS, 1, 10.0, 4.2),
        ("L0.66_S5", NS, 1, 10.0, 5.9),
        ("L0.66_S1", NS, 1, 20.0, 13.3),
        ("L0.66_S1", ST, 1, 20.0, 17.2),
        ("L0.66_S1", NS, 4, 20.0, 86.0),
        ("L0.66_S1", ST, 4, 20.0, 96.6),
    ];
    for (c, f, n, d, want) in cases {
        assert_eq!(compression(c, f, n, d), want, "{c} {f} x{n} @ {d}");
    }
}

#[test]
fn application_knots() {
    let t = CalibrationTable::bundled();
    let o = PredictOptions::default();
    for (layers, want) in [(2, 2.6), (3, 6.3), (4, 7.8)] {
        let q = PropertyQuery::compression(cfg("L0.66_S1"), NS, layers, 5.0).on(GeometryTag::Splint);
        assert_eq!(predict_compression(&q, &t, o).unwrap().force_n, want);
    }
    for (d, want) in [(10.0, 0.6), (15.0, 0.9), (19.0, 1.8)] {
        let q = PropertyQuery::compression(cfg("L1_S15"), ST, 1, d).on(GeometryTag::BraDome);
        assert_eq!(predict_compression(&q, &t, o).unwrap().force_n, want);
    }
}

#[test]
fn quoted_tensile_knots() {
    let t = CalibrationTable::bundled();
    let o = PredictOptions::default();
    let get = |c: &str, d: f64| predict_tensile(&PropertyQuery::tensile(cfg(c), ST, 1, d), &t, o).unwrap();
    assert_eq!(get("L0.66_S1", 20.0).force_n, 62.3);
    assert_eq!(get("L1_S1", 20.0).force_n, 41.0);
    let sparse = get("L2_S15", 20.0);
    assert_eq!(sparse.force_n, 7.0);
    assert!(sparse.upper_bound);
    assert!(!get("L1_S1", 20.0).upper_bound);
}

#[test]
fn interpolated_values() {
    // (0, 0) to (10, 5.9) at 5 mm
    let want = 0.0 + (5.0 - 0.0) * (5.9 - 0.0) / (10.0 - 0.0);
    assert!((compression("L0.66_S5", NS, 1, 5.0) - want).abs() < 1e-12);
    assert!((compression("L0.66_S5", NS, 1, 5.0) - 2.95).abs() < 1e-12);

    let t = CalibrationTable::bundled();
    let q = PropertyQuery::tensile(cfg("L1_S1"), ST, 1, 10.0);
    let f = predict_tensile(&q, &t, PredictOptions::default()).unwrap().force_n;
    assert!((f - 41.0 * 10.0 / 20.0).abs() < 1e-12);
    assert!((f - 20.5).abs() < 1e-12);
}

#[test]
fn layer_interpolation_between_measured_stacks() {
    for (n, f) in [(2u8, 13.3 + (86.0 - 13.3) / 3.0), (3, 13.3 + 2.0 * (86.0 - 13.3) / 3.0)] {
        assert!((compression("L0.66_S1", NS, n, 20.0) - f).abs() < 1e-9);
    }
}

#[test]
fn zero_displacement_is_zero_force() {
    let t = CalibrationTable::bundled();
    for (key, _) in t.series() {
        let q = PropertyQuery {
            geometry: key.geometry,
            config: key.config,
            fabric: key.fabric.into(),
            layers: key.layers,
            displacement_mm: 0.0,
            mode: key.mode,
        };
        assert_eq!(predict(&q, &t, PredictOptions::default()).unwrap().force_n, 0.0, "{key}");
    }
}

#[test]
fn knots_reproduce_exactly_and_are_tagged() {
    let t = CalibrationTable::bundled();
    for (key, knots) in t.series() {
        assert_eq!(knots[0].displacement_mm, 0.0);
        for k in knots {
            let q = PropertyQuery {
                geometry: key.geometry,
                config: key.config,
                fabric: key.fabric.into(),
                layers: key.layers,
                displacement_mm: k.displacement_mm,
                mode: key.mode,
            };
            assert_eq!(predict(&q, &t, PredictOptions::default()).unwrap().force_n, k.force_n);
            if k.displacement_mm > 0.0 {
                assert_eq!(k.provenance, Provenance::Paper, "{key}");
            }
        }
    }
}

#[test]
fn beyond_last_knot() {
    let t = CalibrationTable::bundled();
    let q = PropertyQuery::compression(cfg("L2_S5"), NS, 1, 12.0);
    assert!(matches!(
        predict(&q, &t, PredictOptions::default()),
        Err(CalibrationError::InsufficientCalibration { .. })
    ));
    let clamp = PredictOptions { extrapolation: Extrapolation::Clamp, ..Default::default() };
    let p = predict(&q, &t, clamp).unwrap();
    assert_eq!(p.force_n, 2.4);
    assert!(p.clamped);
}

#[test]
fn tensile_rules() {
    let t = CalibrationTable::bundled();
    let q = PropertyQuery::tensile(cfg("L0.66_S1"), NS, 1, 10.0);
    assert!(matches!(predict(&q, &t, PredictOptions::default()), Err(CalibrationError::NonStretchFabric(_))));
    let q = PropertyQuery::tensile(cfg("L0.66_S15"), ST, 1, 10.0);
    assert!(matches!(predict(&q, &t, PredictOptions::default()), Err(CalibrationError::UnknownConfig(_))));
    let q = PropertyQuery::tensile(cfg("L1_S1"), ST, 4, 20.0);
    assert!(predict(&q, &t, PredictOptions::default()).is_err());
    let scaled = PredictOptions { tensile_layer_scaling: true, ..Default::default() };
    assert!((predict(&q, &t, scaled).unwrap().force_n - 3.0 * 41.0).abs() < 1e-9);
}

#[test]
fn non_monotone_rows_are_rejected() {
    let text = "geometry,config,fabric,layers,mode,displacement_mm,force_n,provenance\n\
                swatch-100,L1_S1,nonstretch-336,1,compression,5,3.0,external\n\
                swatch-100,L1_S1,nonstretch-336,1,compression,10,2.0,external\n";
    assert!(matches!(load_calibration(text), Err(CalibrationError::InvariantViolation { .. })));
}

#[test]
fn bad_cell_reports_row_and_column() {
    let text = "geometry,config,fabric,layers,mode,displacement_mm,force_n,provenance\n\
                swatch-100,L1_S1,nonstretch-336,1,compression,five,3.0,external\n";
    assert!(matches!(load_calibration(text), Err(CalibrationError::Parse { line: 2, column: 6, .. })));
}

#[test]
fn merged_knots_are_external_and_monotone() {
    let mut t = CalibrationTable::bundled();
    let extra = load_calibration(
        "geometry,config,fabric,layers,mode,displacement_mm,force_n,provenance\n\
         swatch-100,L2_S5,nonstretch-336,1,compression,5,1.1,derived\n\
         swatch-100,L2_S5,nonstretch-336,1,compression,15,3.0,external\n",
    )
    .unwrap();
    t.merge(&extra).unwrap();
    let key = t.series().find(|(k, _)| k.config == cfg("L2_S5")).unwrap().0;
    let knots = t.knots(key).unwrap();
    let ds: Vec<f64> = knots.iter().map(|k| k.displacement_mm).collect();
    assert_eq!(ds, [0.0, 5.0, 10.0, 15.0]);
    assert_eq!(knots[1].provenance, Provenance::External);
    assert_eq!(knots[2].provenance, Provenance::Paper);
    assert!(knots.windows(2).all(|w| w[0].force_n <= w[1].force_n));

    let bad = load_calibration(
        "geometry,config,fabric,layers,mode,displacement_mm,force_n,provenance\n\
         swatch-100,L2_S5,nonstretch-336,1,compression,5,3.0,external\n",
    )
    .unwrap();
    let before = CalibrationTable::bundled();
    let mut t = before.clone();
    assert!(t.merge(&bad).is_err());
    assert_eq!(t, before);
}

#[test]
fn cross_config_ordering() {
    let f = |c| compression(c, NS, 1, 10.0);
    assert!(f("L0.66_S5") > f("L1_S5") && f("L1_S5") > f("L2_S5"));
}

#[test]
fn time_model_matches_hand_solution() {
    // swatch stitch counts: rows x points per row, minus the opening jump
    let dense = 150 * 101 - 1;
    let sparse = 50 * 8 - 1;
    assert_eq!(swatch_plan(cfg("L0.66_S1")).stitch_count(), dense);
    assert_eq!(swatch_plan(cfg("L2_S15")).stitch_count(), sparse);

    // a + b n = minutes at both anchors, by Cramer's rule
    let (n1, m1, n2, m2) = (dense as f64, 20.0, sparse as f64, 5.0);
    let det = n2 - n1;
    let a = (m1 * n2 - m2 * n1) / det;
    let b = (m2 - m1) / det;

    let model = TimeModel::bundled();
    assert!((model.intercept() - a).abs() < 1e-9);
    assert!((model.slope() - b).abs() < 1e-15);
    assert_eq!(estimate_fabrication_time(&swatch_plan(cfg("L0.66_S1")), &model), 20.0);
    assert_eq!(estimate_fabrication_time(&swatch_plan(cfg("L2_S15")), &model), 5.0);

    let mut minutes: Vec<(usize, f64)> = GridConfig::all()
        .map(|c| {
            let p = swatch_plan(c);
            (p.stitch_count(), estimate_fabrication_time(&p, &model))
        })
        .collect();
    minutes.sort_by_key(|m| m.0);
    assert!(minutes.windows(2).all(|w| w[0].0 == w[1].0 || w[0].1 < w[1].1));
}

#[test]
fn formability_grid() {
    let ns = FabricSpec::lookup(NS).unwrap();
    let st = FabricSpec::lookup(ST).unwrap();
    let mut agree = 0;
    for line in LineSpacing::ALL {
        for stitch in StitchSpacing::ALL {
            let c = GridConfig::new(line, stitch);
            let good_ns = stitch != StitchSpacing::S15;
            let good_st = line != LineSpacing::L2;
            for (fabric, want) in [(ns, good_ns), (st, good_st)] {
                let got = classify_formability(c.line_spacing_mm(), c.stitch_spacing_mm(), fabric, 30.0, 1).unwrap();
                assert_eq!(got.class == FormabilityClass::Good, want, "{c} {}", fabric.name);
                agree += 1;
            }
        }
    }
    assert_eq!(agree, 18);
}

#[test]
fn formability_examples() {
    let ns = FabricSpec::lookup(NS).unwrap();
    let st = FabricSpec::lookup(ST).unwrap();
    assert_eq!(classify_formability(2.0 / 3.0, 15.0, ns, 30.0, 1).unwrap().class, FormabilityClass::Poor);
    assert_eq!(classify_formability(2.0 / 3.0, 15.0, st, 30.0, 1).unwrap().class, FormabilityClass::Good);
    let stacked = classify_formability(2.0, 5.0, ns, 30.0, 4).unwrap();
    assert_eq!(stacked.class, FormabilityClass::Good);
    assert!(stacked.warnings.iter().any(|w| w.contains("reduced mold conformance")));
    assert!(matches!(classify_formability(2.0, 5.0, ns, 25.0, 1), Err(CalibrationError::UnsupportedMold(_))));
}
