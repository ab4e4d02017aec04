use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::EmbroideryConfig;
use crate::materials::{FabricSpec, ThreadSide, ThreadSpec};

/// Heaviest thread the hobbyist machines sew without jamming.
pub const MAX_TEX: f64 = 60.0;
/// Lightest thread that still stiffens the fabric.
pub const MIN_TEX: f64 = 45.0;
pub const MIN_STITCH_SPACING_MM: f64 = 0.5;
/// Densest row pitch that was fabricated without damaging the fabric.
pub const MIN_LINE_SPACING_MM: f64 = 0.66;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{level}[{}]: {}", self.code, self.message)
    }
}

/// Fabrication checks for a design. Never fails; an empty list means the
/// design sits in the tested operating window.
pub fn validate_design(config: &EmbroideryConfig, thread: &ThreadSpec, fabric: &FabricSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut push = |severity, code, message| out.push(Diagnostic { severity, code, message });

    if thread.tex > MAX_TEX {
        push(
            Severity::Error,
            "thread-jam",
            format!("machine jam risk: Tex {} is heavier than Tex {MAX_TEX}", thread.tex),
        );
    } else if thread.tex < MIN_TEX {
        push(
            Severity::Error,
            "thread-soft",
            format!("thread too soft: Tex {} is lighter than Tex {MIN_TEX}", thread.tex),
        );
    }
    if config.stitch_spacing_mm < MIN_STITCH_SPACING_MM {
        push(
            Severity::Warning,
            "over-punch",
            format!(
                "over-punch risk: stitch spacing {} mm is below {MIN_STITCH_SPACING_MM} mm",
                config.stitch_spacing_mm
            ),
        );
    }
    if config.line_spacing_mm < MIN_LINE_SPACING_MM {
        push(
            Severity::Warning,
            "over-punch",
            format!("over-punch risk: line spacing {} mm is below {MIN_LINE_SPACING_MM} mm", config.line_spacing_mm),
        );
    }
    if thread.side == ThreadSide::Front {
        push(
            Severity::Warning,
            "thread-side",
            String::from("thermoplastic thread on the front side unbalances bobbin tension; load it on the back side"),
        );
    }
    if !FabricSpec::primary().iter().any(|f| f.name == fabric.name) {
        push(
            Severity::Warning,
            "uncalibrated-fabric",
            format!("fabric {} has no calibration data; property predictions are unavailable", fabric.name),
        );
    }
    out
}
