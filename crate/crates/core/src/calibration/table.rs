use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{CalibrationError, GeometryTag, Provenance, TestMode, TimeAnchor, BUNDLED_TABLE};
use crate::grid::GridConfig;
use crate::materials::FabricSpec;

const COLUMNS: [&str; 9] =
    ["geometry", "config", "fabric", "layers", "mode", "displacement_mm", "force_n", "provenance", "bound"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesKey {
    pub geometry: GeometryTag,
    pub config: GridConfig,
    pub fabric: &'static str,
    pub layers: u8,
    pub mode: TestMode,
}

impl fmt::Display for SeriesKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} x{} {}", self.geometry, self.config, self.fabric, self.layers, self.mode)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot {
    pub displacement_mm: f64,
    pub force_n: f64,
    pub provenance: Provenance,
    /// The force is a reported ceiling rather than a mean.
    pub upper_bound: bool,
}

impl Knot {
    const ZERO: Knot = Knot { displacement_mm: 0.0, force_n: 0.0, provenance: Provenance::Derived, upper_bound: false };
}

/// Validated knot series plus the fabrication-time anchors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CalibrationTable {
    series: BTreeMap<SeriesKey, Vec<Knot>>,
    pub time_anchors: Vec<TimeAnchor>,
}

impl CalibrationTable {
    /// The shipped table with its time anchors.
    pub fn bundled() -> CalibrationTable {
        let mut table = load_calibration(BUNDLED_TABLE).expect("bundled calibration table is valid");
        table.time_anchors = TimeAnchor::bundled().to_vec();
        table
    }

    pub fn knots(&self, key: &SeriesKey) -> Option<&[Knot]> {
        self.series.get(key).map(Vec::as_slice)
    }

    pub fn series(&self) -> impl Iterator<Item = (&SeriesKey, &[Knot])> {
        self.series.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn series_count(&self) -> usize {
        self.series.len()
    }

    /// Adds user knots. Incoming knots are tagged external; a knot at an
    /// existing displacement must carry the same force. On error `self` is
    /// left unchanged.
    pub fn merge(&mut self, other: &CalibrationTable) -> Result<(), CalibrationError> {
        let mut merged = self.series.clone();
        for (key, knots) in &other.series {
            let target = merged.entry(*key).or_insert_with(|| alloc::vec![Knot::ZERO]);
            for k in knots.iter().filter(|k| k.displacement_mm > 0.0) {
                let incoming = Knot { provenance: Provenance::External, ..*k };
                match target.iter().position(|t| t.displacement_mm == incoming.displacement_mm) {
                    Some(i) if target[i].force_n == incoming.force_n => {}
                    Some(i) => {
                        return Err(CalibrationError::InvariantViolation {
                            line: None,
                            message: format!(
                                "{key}: {} N at {} mm conflicts with existing {} N",
                                incoming.force_n, incoming.displacement_mm, target[i].force_n
                            ),
                        })
                    }
                    None => target.push(incoming),
                }
            }
            target.sort_by(|a, b| a.displacement_mm.total_cmp(&b.displacement_mm));
            check_monotone(key, target.iter().map(|k| (k, None)))?;
        }
        self.series = merged;
        Ok(())
    }
}

/// Parses comma-separated knot rows.
///
/// The first non-comment line is the header
/// `geometry,config,fabric,layers,mode,displacement_mm,force_n,provenance`
/// with an optional trailing `bound` column (`exact` or `upper`). Lines
/// starting with `#` and blank lines are ignored.
pub fn load_calibration(text: &str) -> Result<CalibrationTable, CalibrationError> {
    let mut header: Option<usize> = None;
    let mut rows: BTreeMap<SeriesKey, Vec<(Knot, usize)>> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        let Some(width) = header else {
            let ok = (fields.len() == 8 || fields.len() == 9) && fields.iter().zip(COLUMNS).all(|(f, c)| *f == c);
            if !ok {
                return Err(parse_err(line, 1, format!("expected header `{}`", COLUMNS[..8].join(","))));
            }
            header = Some(fields.len());
            continue;
        };
        if fields.len() != width {
            return Err(parse_err(line, fields.len().min(width) + 1, format!("expected {width} fields, found {}", fields.len())));
        }
        let (key, knot) = parse_row(line, &fields)?;
        rows.entry(key).or_default().push((knot, line));
    }
    if header.is_none() {
        return Err(parse_err(1, 1, "missing header row".to_string()));
    }

    let mut series = BTreeMap::new();
    for (key, mut knots) in rows {
        knots.sort_by(|a, b| a.0.displacement_mm.total_cmp(&b.0.displacement_mm));
        if knots.first().map_or(true, |(k, _)| k.displacement_mm > 0.0) {
            knots.insert(0, (Knot::ZERO, 0));
        }
        check_monotone(&key, knots.iter().map(|(k, l)| (k, Some(*l))))?;
        series.insert(key, knots.into_iter().map(|(k, _)| k).collect());
    }
    Ok(CalibrationTable { series, time_anchors: Vec::new() })
}

fn parse_row(line: usize, f: &[&str]) -> Result<(SeriesKey, Knot), CalibrationError> {
    let geometry = GeometryTag::parse(f[0])
        .ok_or_else(|| parse_err(line, 1, format!("unknown geometry {:?} (swatch-100|splint|bra-dome)", f[0])))?;
    let config: GridConfig = f[1].parse().map_err(|e: crate::grid::UnknownConfigId| parse_err(line, 2, e.to_string()))?;
    let fabric = FabricSpec::lookup(f[2]).ok_or_else(|| parse_err(line, 3, format!("unknown fabric {:?}", f[2])))?;
    let layers: u8 = f[3]
        .parse()
        .ok()
        .filter(|l| (1..=4).contains(l))
        .ok_or_else(|| parse_err(line, 4, format!("layers must be an integer in 1..=4, got {:?}", f[3])))?;
    let mode = TestMode::parse(f[4])
        .ok_or_else(|| parse_err(line, 5, format!("unknown mode {:?} (compression|tensile)", f[4])))?;
    let displacement_mm = parse_number(line, 6, f[5])?;
    let force_n = parse_number(line, 7, f[6])?;
    let provenance = Provenance::parse(f[7])
        .ok_or_else(|| parse_err(line, 8, format!("unknown provenance {:?} (paper|derived|external)", f[7])))?;
    let upper_bound = match f.get(8).copied() {
        None | Some("exact") | Some("") => false,
        Some("upper") => true,
        Some(other) => return Err(parse_err(line, 9, format!("unknown bound {other:?} (exact|upper)"))),
    };
    Ok((
        SeriesKey { geometry, config, fabric: fabric.name, layers, mode },
        Knot { displacement_mm, force_n, provenance, upper_bound },
    ))
}

fn parse_number(line: usize, column: usize, s: &str) -> Result<f64, CalibrationError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(parse_err(line, column, format!("expected a non-negative number, got {s:?}"))),
    }
}

fn parse_err(line: usize, column: usize, message: String) -> CalibrationError {
    CalibrationError::Parse { line, column, message }
}

fn check_monotone<'a>(
    key: &SeriesKey,
    knots: impl Iterator<Item = (&'a Knot, Option<usize>)>,
) -> Result<(), CalibrationError> {
    let mut prev: Option<&Knot> = None;
    for (k, line) in knots {
        let line = line.filter(|&l| l > 0);
        if k.displacement_mm == 0.0 && k.force_n != 0.0 {
            return Err(CalibrationError::InvariantViolation {
                line,
                message: format!("{key}: force at 0 mm must be 0 N, got {} N", k.force_n),
            });
        }
        if let Some(p) = prev {
            if k.displacement_mm <= p.displacement_mm {
                return Err(CalibrationError::InvariantViolation {
                    line,
                    message: format!("{key}: duplicate knot at {} mm", k.displacement_mm),
                });
            }
            if k.force_n < p.force_n {
                return Err(CalibrationError::InvariantViolation {
                    line,
                    message: format!(
                        "{key}: force decreases from {} N at {} mm to {} N at {} mm",
                        p.force_n, p.displacement_mm, k.force_n, k.displacement_mm
                    ),
                });
            }
        }
        prev = Some(k);
    }
    Ok(())
}
