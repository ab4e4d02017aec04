use core::fmt;
use core::str::FromStr;

use super::CalibrationError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Affordance {
    Stiffness,
    Formability,
    Stretchability,
    Remoldability,
}

impl Affordance {
    pub const ALL: [Affordance; 4] =
        [Affordance::Stiffness, Affordance::Formability, Affordance::Stretchability, Affordance::Remoldability];
}

impl fmt::Display for Affordance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Affordance::Stiffness => "stiffness",
            Affordance::Formability => "formability",
            Affordance::Stretchability => "stretchability",
            Affordance::Remoldability => "re-moldability",
        })
    }
}

impl FromStr for Affordance {
    type Err = CalibrationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stiffness" => Ok(Affordance::Stiffness),
            "formability" | "geometrical-formability" => Ok(Affordance::Formability),
            "stretchability" => Ok(Affordance::Stretchability),
            "re-moldability" | "remoldability" => Ok(Affordance::Remoldability),
            _ => Err(CalibrationError::UnknownAffordance(s.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FabricationParameter {
    ThermoplasticQuantity,
    ThermoplasticDirection,
    ThermoplasticProperty,
    FabricType,
}

impl fmt::Display for FabricationParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FabricationParameter::ThermoplasticQuantity => "thermoplastic quantity",
            FabricationParameter::ThermoplasticDirection => "thermoplastic direction",
            FabricationParameter::ThermoplasticProperty => "thermoplastic property",
            FabricationParameter::FabricType => "fabric type",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParameterHint {
    pub parameter: FabricationParameter,
    pub guidance: &'static str,
}

const QUANTITY: ParameterHint = ParameterHint {
    parameter: FabricationParameter::ThermoplasticQuantity,
    guidance: "tighter line and stitch spacing or more stacked layers add thermoplastic",
};
const DIRECTION_STIFF: ParameterHint = ParameterHint {
    parameter: FabricationParameter::ThermoplasticDirection,
    guidance: "run rows parallel to the bending direction",
};
const DIRECTION_FORM: ParameterHint = ParameterHint {
    parameter: FabricationParameter::ThermoplasticDirection,
    guidance: "straight rows along the bend for single curves; radial or concentric wavy layouts for domes",
};
const DIRECTION_STRETCH: ParameterHint = ParameterHint {
    parameter: FabricationParameter::ThermoplasticDirection,
    guidance: "rows across the stretch direction leave the knit free to extend",
};
const FABRIC_STIFF: ParameterHint = ParameterHint {
    parameter: FabricationParameter::FabricType,
    guidance: "heavier fabric (higher GSM) resists deformation more",
};
const FABRIC_FORM: ParameterHint = ParameterHint {
    parameter: FabricationParameter::FabricType,
    guidance: "non-stretch fabric for single curves, stretch fabric for double curves",
};
const FABRIC_STRETCH: ParameterHint = ParameterHint {
    parameter: FabricationParameter::FabricType,
    guidance: "only stretch fabric provides stretchability",
};
const PROPERTY: ParameterHint = ParameterHint {
    parameter: FabricationParameter::ThermoplasticProperty,
    guidance: "glass transition range sets the reheating temperature for re-molding",
};

/// Which fabrication parameters move an affordance.
pub fn affordance_hints(affordance: Affordance) -> &'static [ParameterHint] {
    match affordance {
        Affordance::Stiffness => &[QUANTITY, DIRECTION_STIFF, FABRIC_STIFF],
        Affordance::Formability => &[DIRECTION_FORM, FABRIC_FORM],
        Affordance::Stretchability => &[DIRECTION_STRETCH, FABRIC_STRETCH],
        Affordance::Remoldability => &[PROPERTY],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn params(a: Affordance) -> Vec<FabricationParameter> {
        affordance_hints(a).iter().map(|h| h.parameter).collect()
    }

    #[test]
    fn parameter_matrix() {
        use FabricationParameter::*;
        assert_eq!(params(Affordance::Stiffness), [ThermoplasticQuantity, ThermoplasticDirection, FabricType]);
        assert_eq!(params(Affordance::Formability), [ThermoplasticDirection, FabricType]);
        assert_eq!(params(Affordance::Stretchability), [ThermoplasticDirection, FabricType]);
        assert_eq!(params(Affordance::Remoldability), [ThermoplasticProperty]);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!("softness".parse::<Affordance>(), Err(CalibrationError::UnknownAffordance(_))));
        assert_eq!("re-moldability".parse::<Affordance>().unwrap(), Affordance::Remoldability);
    }
}
