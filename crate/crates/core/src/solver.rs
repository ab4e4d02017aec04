//! Inverse design over the discrete grid.
//!
//! Every (grid configuration, fabric, layer count) combination is scored
//! against the calibration data. Designs meeting all requirements are reduced
//! to the Pareto front over fabrication minutes, layer count and stitch count,
//! all minimized. Combinations the data cannot speak to are reported as
//! skipped rather than guessed.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::{self, Write as _};

use thiserror::Error;

use crate::calibration::{
    affordance_hints, classify_formability, predict, Affordance, CalibrationError, CalibrationTable,
    FormabilityAssessment, FormabilityClass, GeometryTag, PredictOptions, Prediction, PropertyQuery, TestMode,
    TimeModel, TESTED_MOLD_DIAMETERS_MM,
};
use crate::calibration::swatch_plan;
use crate::geometry::Primitive;
use crate::grid::GridConfig;
use crate::materials::{FabricSpec, StretchClass};
use crate::units::format_decimal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FabricConstraint {
    Any,
    NonStretch,
    Stretch,
    Named(String),
}

impl fmt::Display for FabricConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FabricConstraint::Any => f.write_str("any"),
            FabricConstraint::NonStretch => f.write_str("non-stretch"),
            FabricConstraint::Stretch => f.write_str("stretch"),
            FabricConstraint::Named(n) => f.write_str(n),
        }
    }
}

/// A force requirement evaluated at one displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceBound {
    pub force_n: f64,
    pub displacement_mm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormabilityTarget {
    None,
    SingleCurve,
    DoubleCurve,
}

impl fmt::Display for FormabilityTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormabilityTarget::None => "none",
            FormabilityTarget::SingleCurve => "single-curve",
            FormabilityTarget::DoubleCurve => "double-curve",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Requirements {
    pub fabric: FabricConstraint,
    pub min_compression: Option<ForceBound>,
    pub max_tensile: Option<ForceBound>,
    pub formability: FormabilityTarget,
    pub mold_diameter_mm: Option<f64>,
    pub geometry: GeometryTag,
    pub max_layers: u8,
}

impl Default for Requirements {
    fn default() -> Self {
        Self {
            fabric: FabricConstraint::Any,
            min_compression: None,
            max_tensile: None,
            formability: FormabilityTarget::None,
            mold_diameter_mm: None,
            geometry: GeometryTag::Swatch100,
            max_layers: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RequirementsError {
    #[error("no constraint present")]
    NoConstraint,
    #[error("{0}")]
    InvalidBound(&'static str),
    #[error("max_layers must be in 1..=4, got {0}")]
    InvalidMaxLayers(u8),
    #[error("unknown fabric {0:?}")]
    UnknownFabric(String),
    #[error("formability target needs a mold diameter")]
    MissingMold,
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
}

impl Requirements {
    pub fn validate(&self) -> Result<(), RequirementsError> {
        if self.min_compression.is_none() && self.max_tensile.is_none() && self.formability == FormabilityTarget::None
        {
            return Err(RequirementsError::NoConstraint);
        }
        for bound in [self.min_compression, self.max_tensile].into_iter().flatten() {
            if !bound.displacement_mm.is_finite() || bound.displacement_mm < 0.0 {
                return Err(RequirementsError::InvalidBound("displacement must be a non-negative number"));
            }
            if !bound.force_n.is_finite() || bound.force_n < 0.0 {
                return Err(RequirementsError::InvalidBound("force must be a non-negative number"));
            }
        }
        if !(1..=4).contains(&self.max_layers) {
            return Err(RequirementsError::InvalidMaxLayers(self.max_layers));
        }
        if let FabricConstraint::Named(name) = &self.fabric {
            if FabricSpec::lookup(name).is_none() {
                return Err(RequirementsError::UnknownFabric(name.clone()));
            }
        }
        if self.formability != FormabilityTarget::None {
            let d = self.mold_diameter_mm.ok_or(RequirementsError::MissingMold)?;
            if !TESTED_MOLD_DIAMETERS_MM.iter().any(|&t| libm::fabs(t - d) < 1e-9) {
                return Err(CalibrationError::UnsupportedMold(d).into());
            }
        }
        Ok(())
    }

    pub fn admissible_fabrics(&self) -> Vec<&'static FabricSpec> {
        match &self.fabric {
            FabricConstraint::Any => FabricSpec::primary().iter().collect(),
            FabricConstraint::NonStretch => {
                FabricSpec::primary().iter().filter(|f| f.stretch == StretchClass::NonStretch).collect()
            }
            FabricConstraint::Stretch => {
                FabricSpec::primary().iter().filter(|f| f.stretch == StretchClass::Stretch).collect()
            }
            FabricConstraint::Named(n) => FabricSpec::lookup(n).into_iter().collect(),
        }
    }

    fn primitive(&self) -> Primitive {
        match self.formability {
            FormabilityTarget::DoubleCurve => Primitive::Concentric,
            _ => Primitive::Linear,
        }
    }
}

/// Minimized objectives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objectives {
    pub minutes: f64,
    pub layers: u8,
    /// Stitches summed over all layers.
    pub stitches: usize,
}

impl Objectives {
    /// No worse in every objective and better in at least one.
    pub fn dominates(&self, other: &Objectives) -> bool {
        let no_worse =
            self.minutes <= other.minutes && self.layers <= other.layers && self.stitches <= other.stitches;
        let better = self.minutes < other.minutes || self.layers < other.layers || self.stitches < other.stitches;
        no_worse && better
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CandidatePredictions {
    pub compression: Option<Prediction>,
    pub tensile: Option<Prediction>,
    pub formability: Option<FormabilityAssessment>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateDesign {
    pub config: GridConfig,
    pub fabric: &'static str,
    pub layers: u8,
    pub primitive: Primitive,
    pub predictions: CandidatePredictions,
    pub objectives: Objectives,
    pub explanation: String,
}

impl CandidateDesign {
    fn tie_break(&self, other: &CandidateDesign) -> Ordering {
        self.layers
            .cmp(&other.layers)
            .then(other.config.line_spacing_mm().total_cmp(&self.config.line_spacing_mm()))
            .then(other.config.stitch_spacing_mm().total_cmp(&self.config.stitch_spacing_mm()))
            .then(self.fabric.cmp(other.fabric))
    }

    pub fn label(&self) -> String {
        format!("{} {} x{}", self.config, self.fabric, self.layers)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintKind {
    MinCompression,
    MaxTensile,
    Formability,
}

impl ConstraintKind {
    /// Stable identifier for scripts.
    pub fn code(self) -> &'static str {
        match self {
            ConstraintKind::MinCompression => "min_compression",
            ConstraintKind::MaxTensile => "max_tensile",
            ConstraintKind::Formability => "formability",
        }
    }

    fn affordance(self) -> Affordance {
        match self {
            ConstraintKind::MinCompression => Affordance::Stiffness,
            ConstraintKind::MaxTensile => Affordance::Stretchability,
            ConstraintKind::Formability => Affordance::Formability,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: ConstraintKind,
    pub detail: String,
    /// Relative miss; 1.0 for a failed pass/fail check.
    pub shortfall: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CandidateStatus {
    Feasible,
    Rejected(Vec<Violation>),
    MissingCalibration(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedCandidate {
    pub design: CandidateDesign,
    pub status: CandidateStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedCandidate {
    pub config: GridConfig,
    pub fabric: &'static str,
    pub layers: u8,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearMiss {
    pub design: CandidateDesign,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub requirements: Requirements,
    pub feasible: bool,
    pub pareto_front: Vec<CandidateDesign>,
    /// Fully evaluated candidates that miss at least one constraint.
    pub rejected_count: usize,
    /// Feasible candidates dominated by a front member.
    pub dominated_count: usize,
    pub skipped_for_missing_calibration: Vec<SkippedCandidate>,
    /// Rejected candidate with the smallest total relative shortfall.
    pub nearest_miss: Option<NearMiss>,
    pub evaluated_count: usize,
}

struct Context<'a> {
    table: &'a CalibrationTable,
    options: PredictOptions,
    time: TimeModel,
    stitches: BTreeMap<GridConfig, usize>,
}

impl<'a> Context<'a> {
    fn new(table: &'a CalibrationTable, options: PredictOptions) -> Self {
        let time = TimeModel::from_table(table);
        let stitches = GridConfig::all().map(|c| (c, swatch_plan(c).stitch_count())).collect();
        Self { table, options, time, stitches }
    }

    fn evaluate(&self, req: &Requirements, config: GridConfig, fabric: &'static FabricSpec, layers: u8) -> EvaluatedCandidate {
        let per_layer = self.stitches[&config];
        let objectives = Objectives {
            minutes: self.time.minutes(per_layer, u32::from(layers)),
            layers,
            stitches: per_layer * usize::from(layers),
        };
        let mut predictions = CandidatePredictions::default();
        let mut violations = Vec::new();
        let mut missing: Vec<String> = Vec::new();

        let query = |bound: &ForceBound, mode| PropertyQuery {
            geometry: req.geometry,
            config,
            fabric: fabric.name.into(),
            layers,
            displacement_mm: bound.displacement_mm,
            mode,
        };

        if let Some(bound) = &req.min_compression {
            match predict(&query(bound, TestMode::Compression), self.table, self.options) {
                Ok(p) => {
                    if p.force_n < bound.force_n {
                        violations.push(Violation {
                            constraint: ConstraintKind::MinCompression,
                            detail: format!(
                                "compression {} N at {} mm (needs >= {} N)",
                                format_decimal(p.force_n, 3),
                                format_decimal(bound.displacement_mm, 3),
                                format_decimal(bound.force_n, 3)
                            ),
                            shortfall: relative(bound.force_n - p.force_n, bound.force_n),
                        });
                    }
                    predictions.compression = Some(p);
                }
                Err(e) => missing.push(format!("compression: {e}")),
            }
        }
        if let Some(bound) = &req.max_tensile {
            match predict(&query(bound, TestMode::Tensile), self.table, self.options) {
                Ok(p) => {
                    if p.force_n > bound.force_n {
                        violations.push(Violation {
                            constraint: ConstraintKind::MaxTensile,
                            detail: format!(
                                "tensile {} N at {} mm (needs <= {} N)",
                                format_decimal(p.force_n, 3),
                                format_decimal(bound.displacement_mm, 3),
                                format_decimal(bound.force_n, 3)
                            ),
                            shortfall: relative(p.force_n - bound.force_n, bound.force_n),
                        });
                    }
                    predictions.tensile = Some(p);
                }
                Err(e) => missing.push(format!("tensile: {e}")),
            }
        }
        if req.formability != FormabilityTarget::None {
            let mold = req.mold_diameter_mm.unwrap_or(f64::NAN);
            match classify_formability(config.line_spacing_mm(), config.stitch_spacing_mm(), fabric, mold, layers) {
                Ok(a) => {
                    if a.class == FormabilityClass::Poor {
                        violations.push(Violation {
                            constraint: ConstraintKind::Formability,
                            detail: format!("formability poor on {} fabric", fabric.stretch),
                            shortfall: 1.0,
                        });
                    } else if req.formability == FormabilityTarget::DoubleCurve && fabric.stretch != StretchClass::Stretch
                    {
                        violations.push(Violation {
                            constraint: ConstraintKind::Formability,
                            detail: String::from("double curves need stretch fabric"),
                            shortfall: 1.0,
                        });
                    }
                    predictions.formability = Some(a);
                }
                Err(e) => missing.push(format!("formability: {e}")),
            }
        }

        let design = CandidateDesign {
            config,
            fabric: fabric.name,
            layers,
            primitive: req.primitive(),
            explanation: explain(req, config, fabric.name, layers, &predictions),
            predictions,
            objectives,
        };
        let status = if !missing.is_empty() {
            CandidateStatus::MissingCalibration(missing.join("; "))
        } else if violations.is_empty() {
            CandidateStatus::Feasible
        } else {
            CandidateStatus::Rejected(violations)
        };
        EvaluatedCandidate { design, status }
    }
}

fn relative(excess: f64, reference: f64) -> f64 {
    if reference > 0.0 {
        excess / reference
    } else {
        excess
    }
}

fn active_constraints(req: &Requirements) -> Vec<ConstraintKind> {
    let mut out = Vec::new();
    if req.min_compression.is_some() {
        out.push(ConstraintKind::MinCompression);
    }
    if req.max_tensile.is_some() {
        out.push(ConstraintKind::MaxTensile);
    }
    if req.formability != FormabilityTarget::None {
        out.push(ConstraintKind::Formability);
    }
    out
}

fn explain(req: &Requirements, config: GridConfig, fabric: &str, layers: u8, p: &CandidatePredictions) -> String {
    let mut parts: Vec<String> = Vec::new();
    if let (Some(b), Some(c)) = (&req.min_compression, &p.compression) {
        parts.push(format!(
            "compression {} N at {} mm",
            format_decimal(c.force_n, 3),
            format_decimal(b.displacement_mm, 3)
        ));
    }
    if let (Some(b), Some(t)) = (&req.max_tensile, &p.tensile) {
        let qual = if t.upper_bound { " (upper bound)" } else { "" };
        parts.push(format!(
            "tensile {} N at {} mm{qual}",
            format_decimal(t.force_n, 3),
            format_decimal(b.displacement_mm, 3)
        ));
    }
    if let Some(f) = &p.formability {
        parts.push(format!("formability {}", f.class));
    }
    let levers: Vec<String> = active_constraints(req)
        .into_iter()
        .map(|c| {
            let a = c.affordance();
            let params: Vec<String> = affordance_hints(a).iter().map(|h| format!("{}", h.parameter)).collect();
            format!("{a} via {}", params.join(", "))
        })
        .collect();
    format!("{config} on {fabric} x{layers}: {}; levers: {}", parts.join(", "), levers.join("; "))
}

/// Every grid configuration x admissible fabric x layer count, evaluated.
pub fn enumerate_candidates(
    req: &Requirements,
    table: &CalibrationTable,
    options: PredictOptions,
) -> Vec<EvaluatedCandidate> {
    let ctx = Context::new(table, options);
    enumerate_with(&ctx, req)
}

fn enumerate_with(ctx: &Context<'_>, req: &Requirements) -> Vec<EvaluatedCandidate> {
    let fabrics = req.admissible_fabrics();
    let mut out = Vec::with_capacity(9 * fabrics.len() * usize::from(req.max_layers));
    for config in GridConfig::all() {
        for fabric in &fabrics {
            for layers in 1..=req.max_layers {
                out.push(ctx.evaluate(req, config, fabric, layers));
            }
        }
    }
    out
}

/// Filters the grid by `req` and returns the Pareto front.
pub fn solve(
    req: &Requirements,
    table: &CalibrationTable,
    options: PredictOptions,
) -> Result<SolveResult, RequirementsError> {
    req.validate()?;
    let ctx = Context::new(table, options);
    let candidates = enumerate_with(&ctx, req);
    let evaluated_count = candidates.len();

    let mut feasible = Vec::new();
    let mut rejected: Vec<NearMiss> = Vec::new();
    let mut skipped = Vec::new();
    for c in candidates {
        match c.status {
            CandidateStatus::Feasible => feasible.push(c.design),
            CandidateStatus::Rejected(violations) => rejected.push(NearMiss { design: c.design, violations }),
            CandidateStatus::MissingCalibration(reason) => skipped.push(SkippedCandidate {
                config: c.design.config,
                fabric: c.design.fabric,
                layers: c.design.layers,
                reason,
            }),
        }
    }

    let mut front: Vec<CandidateDesign> = feasible
        .iter()
        .filter(|c| !feasible.iter().any(|o| o.objectives.dominates(&c.objectives)))
        .cloned()
        .collect();
    front.sort_by(|a, b| a.tie_break(b));
    let dominated_count = feasible.len() - front.len();

    let total = |v: &[Violation]| v.iter().map(|x| x.shortfall).sum::<f64>();
    let nearest_miss = rejected
        .iter()
        .min_by(|a, b| {
            total(&a.violations).total_cmp(&total(&b.violations)).then_with(|| a.design.tie_break(&b.design))
        })
        .cloned();

    Ok(SolveResult {
        requirements: req.clone(),
        feasible: !front.is_empty(),
        pareto_front: front,
        rejected_count: rejected.len(),
        dominated_count,
        skipped_for_missing_calibration: skipped,
        nearest_miss,
        evaluated_count,
    })
}

impl SolveResult {
    /// The constraint that decided an infeasible result: the largest miss of
    /// the nearest candidate, or `None` when nothing could be evaluated.
    pub fn binding_constraint(&self) -> Option<&Violation> {
        self.nearest_miss
            .as_ref()?
            .violations
            .iter()
            .max_by(|a, b| a.shortfall.total_cmp(&b.shortfall).then(b.constraint.cmp(&a.constraint)))
    }
}

fn describe_requirements(req: &Requirements) -> String {
    let mut parts = alloc::vec![format!("geometry {}", req.geometry), format!("fabric {}", req.fabric)];
    if let Some(b) = &req.min_compression {
        parts.push(format!(
            "min compression {} N at {} mm",
            format_decimal(b.force_n, 3),
            format_decimal(b.displacement_mm, 3)
        ));
    }
    if let Some(b) = &req.max_tensile {
        parts.push(format!(
            "max tensile {} N at {} mm",
            format_decimal(b.force_n, 3),
            format_decimal(b.displacement_mm, 3)
        ));
    }
    if req.formability != FormabilityTarget::None {
        let mold = req.mold_diameter_mm.map(|d| format_decimal(d, 3)).unwrap_or_default();
        parts.push(format!("formability {} on {mold} mm mold", req.formability));
    }
    parts.push(format!("max layers {}", req.max_layers));
    parts.join("; ")
}

fn describe_constraint(req: &Requirements, kind: ConstraintKind) -> String {
    match kind {
        ConstraintKind::MinCompression => req
            .min_compression
            .map(|b| {
                format!(
                    "min compression {} N at {} mm",
                    format_decimal(b.force_n, 3),
                    format_decimal(b.displacement_mm, 3)
                )
            })
            .unwrap_or_default(),
        ConstraintKind::MaxTensile => req
            .max_tensile
            .map(|b| {
                format!("max tensile {} N at {} mm", format_decimal(b.force_n, 3), format_decimal(b.displacement_mm, 3))
            })
            .unwrap_or_default(),
        ConstraintKind::Formability => format!("formability {}", req.formability),
    }
}

/// Plain-text summary of a solve: status, machine-readable reason, the front,
/// the nearest miss and the parameters that move each constrained property.
pub fn feasibility_report(result: &SolveResult) -> String {
    let req = &result.requirements;
    let mut out = String::new();
    let status = if result.feasible { "feasible" } else { "infeasible" };
    let _ = writeln!(out, "status: {status}");
    if !result.feasible {
        let reason = match result.binding_constraint() {
            Some(v) => v.constraint.code(),
            None => "missing_calibration",
        };
        let _ = writeln!(out, "reason: {reason}");
    }
    let _ = writeln!(out, "requirements: {}", describe_requirements(req));
    let _ = writeln!(
        out,
        "candidates: {} evaluated, {} on front, {} dominated, {} rejected, {} skipped for missing calibration",
        result.evaluated_count,
        result.pareto_front.len(),
        result.dominated_count,
        result.rejected_count,
        result.skipped_for_missing_calibration.len()
    );

    if result.feasible {
        let _ = writeln!(out, "\npareto front (minimize minutes, layers, stitches):");
        let _ = writeln!(
            out,
            "  {:<3} {:<9} {:<15} {:>6} {:<10} {:>8} {:>9}",
            "#", "config", "fabric", "layers", "primitive", "minutes", "stitches"
        );
        for (i, c) in result.pareto_front.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {:<3} {:<9} {:<15} {:>6} {:<10} {:>8} {:>9}",
                i + 1,
                format!("{}", c.config),
                c.fabric,
                c.layers,
                format!("{}", c.primitive),
                format_decimal(c.objectives.minutes, 1),
                c.objectives.stitches
            );
            let _ = writeln!(out, "      {}", c.explanation);
            if let Some(f) = &c.predictions.formability {
                for w in &f.warnings {
                    let _ = writeln!(out, "      warning: {w}");
                }
            }
        }
    } else if let Some(v) = result.binding_constraint() {
        let _ = writeln!(out, "binding constraint: {}", describe_constraint(req, v.constraint));
    } else {
        let _ = writeln!(out, "binding constraint: no candidate has calibration data for these requirements");
    }

    if let Some(miss) = &result.nearest_miss {
        if !result.feasible {
            let _ = writeln!(out, "\nnearest miss: {}", miss.design.label());
            for v in &miss.violations {
                let _ = writeln!(out, "  violates {}: {}", v.constraint.code(), v.detail);
            }
        }
    }

    let _ = writeln!(out, "\nlevers:");
    for c in active_constraints(req) {
        let a = c.affordance();
        for h in affordance_hints(a) {
            let _ = writeln!(out, "  {a} <- {}: {}", h.parameter, h.guidance);
        }
    }
    if !result.skipped_for_missing_calibration.is_empty() {
        let _ = writeln!(out, "\nskipped (no calibration data):");
        let skipped = &result.skipped_for_missing_calibration;
        let mut i = 0;
        while i < skipped.len() {
            let head = &skipped[i];
            let mut layers = alloc::vec![format!("{}", head.layers)];
            let mut j = i + 1;
            while j < skipped.len() && skipped[j].config == head.config && skipped[j].fabric == head.fabric {
                layers.push(format!("{}", skipped[j].layers));
                j += 1;
            }
            let _ = writeln!(out, "  {} {} x{}: {}", head.config, head.fabric, layers.join(","), head.reason);
            i = j;
        }
    }
    out
}
