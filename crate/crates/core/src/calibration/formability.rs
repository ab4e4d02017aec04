use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::CalibrationError;
use crate::materials::{FabricSpec, StretchClass};

/// Cylinder mold diameters that were tested.
pub const TESTED_MOLD_DIAMETERS_MM: [f64; 3] = [10.0, 20.0, 30.0];

/// Non-stretch fabric holds a molded shape at this stitch spacing or denser.
const NON_STRETCH_MAX_STITCH_MM: f64 = 5.0;
/// Stretch fabric holds a molded shape at this line spacing or denser.
const STRETCH_MAX_LINE_MM: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormabilityClass {
    Good,
    Poor,
}

impl fmt::Display for FormabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormabilityClass::Good => "good",
            FormabilityClass::Poor => "poor",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormabilityAssessment {
    pub class: FormabilityClass,
    pub warnings: Vec<String>,
}

/// Rule-based shape retention on a cylindrical mold.
///
/// On non-stretch fabric the stitch spacing decides; on stretch fabric the
/// line spacing does. Stacked layers form as well as one layer but follow the
/// mold less precisely, which is reported as a warning.
pub fn classify_formability(
    line_spacing_mm: f64,
    stitch_spacing_mm: f64,
    fabric: &FabricSpec,
    mold_diameter_mm: f64,
    layers: u8,
) -> Result<FormabilityAssessment, CalibrationError> {
    if !TESTED_MOLD_DIAMETERS_MM.iter().any(|&d| libm::fabs(d - mold_diameter_mm) < 1e-9) {
        return Err(CalibrationError::UnsupportedMold(mold_diameter_mm));
    }
    // small slack so the 2/3 mm grid pitch and typed-in values compare alike
    let good = match fabric.stretch {
        StretchClass::NonStretch => stitch_spacing_mm <= NON_STRETCH_MAX_STITCH_MM + 1e-9,
        StretchClass::Stretch => line_spacing_mm <= STRETCH_MAX_LINE_MM + 1e-9,
    };
    let mut warnings = Vec::new();
    if layers >= 2 {
        warnings.push(String::from("reduced mold conformance: stacked layers follow the mold less precisely"));
    }
    Ok(FormabilityAssessment { class: if good { FormabilityClass::Good } else { FormabilityClass::Poor }, warnings })
}
