//! Fabric and thread registries.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StretchClass {
    NonStretch,
    Stretch,
}

impl fmt::Display for StretchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StretchClass::NonStretch => "non-stretch",
            StretchClass::Stretch => "stretch",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FabricSpec {
    pub name: &'static str,
    pub stretch: StretchClass,
    pub gsm: f64,
    pub composition: &'static str,
}

const FABRICS: [FabricSpec; 4] = [
    FabricSpec {
        name: "nonstretch-336",
        stretch: StretchClass::NonStretch,
        gsm: 336.0,
        composition: "98% cotton, 2% elastane, twill weave",
    },
    FabricSpec {
        name: "stretch-390",
        stretch: StretchClass::Stretch,
        gsm: 390.0,
        composition: "62% rayon, 32% nylon, 6% spandex, knit",
    },
    FabricSpec {
        name: "nonstretch-167",
        stretch: StretchClass::NonStretch,
        gsm: 167.0,
        composition: "unspecified",
    },
    FabricSpec {
        name: "stretch-189",
        stretch: StretchClass::Stretch,
        gsm: 189.0,
        composition: "unspecified",
    },
];

impl FabricSpec {
    /// Every shipped fabric.
    pub fn registry() -> &'static [FabricSpec] {
        &FABRICS
    }

    /// The two fabrics the calibration data was measured on; the solver
    /// enumerates these when no fabric is named.
    pub fn primary() -> &'static [FabricSpec] {
        &FABRICS[..2]
    }

    pub fn lookup(name: &str) -> Option<&'static FabricSpec> {
        FABRICS.iter().find(|f| f.name == name)
    }
}

/// Which face of the base fabric carries the thermoplastic thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThreadSide {
    Front,
    Back,
}

impl fmt::Display for ThreadSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThreadSide::Front => "front",
            ThreadSide::Back => "back",
        })
    }
}

/// Heat-gun molding cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoldingProtocol {
    pub heat_to_c: f64,
    pub heat_seconds: f64,
    pub cool_seconds: f64,
    pub cool_to_c: f64,
}

impl MoldingProtocol {
    pub const HEAT_GUN: MoldingProtocol = MoldingProtocol {
        heat_to_c: 70.0,
        heat_seconds: 10.0,
        cool_seconds: 20.0,
        cool_to_c: 22.0,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreadSpec {
    /// Linear density in grams per kilometre.
    pub tex: f64,
    pub material: String,
    pub tg_low_c: f64,
    pub tg_high_c: f64,
    pub side: ThreadSide,
    pub molding: MoldingProtocol,
}

impl ThreadSpec {
    /// A thread of the default material at another gauge.
    pub fn with_tex(tex: f64) -> Self {
        Self { tex, ..Self::default() }
    }

    pub fn is_valid(&self) -> bool {
        self.tex > 0.0 && self.tg_low_c < self.tg_high_c
    }
}

impl Default for ThreadSpec {
    fn default() -> Self {
        Self {
            tex: 60.0,
            material: String::from("nylon monofilament"),
            tg_low_c: 47.0,
            tg_high_c: 57.0,
            side: ThreadSide::Back,
            molding: MoldingProtocol::HEAT_GUN,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_four_fabrics() {
        let reg = FabricSpec::registry();
        assert_eq!(reg.len(), 4);
        assert!(reg.iter().all(|f| f.gsm > 0.0));
        let mut pairs: alloc::vec::Vec<_> = reg.iter().map(|f| (f.stretch, f.gsm as u32)).collect();
        pairs.sort();
        assert_eq!(
            pairs,
            [
                (StretchClass::NonStretch, 167),
                (StretchClass::NonStretch, 336),
                (StretchClass::Stretch, 189),
                (StretchClass::Stretch, 390)
            ]
        );
    }

    #[test]
    fn default_thread() {
        let t = ThreadSpec::default();
        assert_eq!(t.tex, 60.0);
        assert_eq!((t.tg_low_c, t.tg_high_c), (47.0, 57.0));
        assert_eq!(t.side, ThreadSide::Back);
        assert!(t.is_valid());
    }
}
