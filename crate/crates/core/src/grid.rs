//! The nine-point design grid: three line spacings crossed with three stitch
//! spacings, named like `L0.66_S1`.

use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// Row pitch of the grid. `L0_66` is two thirds of a millimetre, which puts
/// exactly 150 rows across a 100 mm swatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineSpacing {
    L2,
    L1,
    L0_66,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StitchSpacing {
    S1,
    S5,
    S15,
}

impl LineSpacing {
    pub const ALL: [LineSpacing; 3] = [LineSpacing::L2, LineSpacing::L1, LineSpacing::L0_66];

    pub fn millimeters(self) -> f64 {
        match self {
            LineSpacing::L2 => 2.0,
            LineSpacing::L1 => 1.0,
            LineSpacing::L0_66 => 2.0 / 3.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LineSpacing::L2 => "2",
            LineSpacing::L1 => "1",
            LineSpacing::L0_66 => "0.66",
        }
    }
}

impl StitchSpacing {
    pub const ALL: [StitchSpacing; 3] = [StitchSpacing::S1, StitchSpacing::S5, StitchSpacing::S15];

    pub fn millimeters(self) -> f64 {
        match self {
            StitchSpacing::S1 => 1.0,
            StitchSpacing::S5 => 5.0,
            StitchSpacing::S15 => 15.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StitchSpacing::S1 => "1",
            StitchSpacing::S5 => "5",
            StitchSpacing::S15 => "15",
        }
    }
}

/// One point of the design grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridConfig {
    pub line: LineSpacing,
    pub stitch: StitchSpacing,
}

impl GridConfig {
    pub const fn new(line: LineSpacing, stitch: StitchSpacing) -> Self {
        Self { line, stitch }
    }

    /// All nine grid points, line spacing major, stitch spacing minor.
    pub fn all() -> impl Iterator<Item = GridConfig> {
        LineSpacing::ALL
            .into_iter()
            .flat_map(|line| StitchSpacing::ALL.into_iter().map(move |stitch| GridConfig { line, stitch }))
    }

    pub fn line_spacing_mm(&self) -> f64 {
        self.line.millimeters()
    }

    pub fn stitch_spacing_mm(&self) -> f64 {
        self.stitch.millimeters()
    }
}

impl fmt::Display for GridConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}_S{}", self.line.label(), self.stitch.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown configuration id {0:?} (expected L2|L1|L0.66 _ S1|S5|S15)")]
pub struct UnknownConfigId(pub alloc::string::String);

impl FromStr for GridConfig {
    type Err = UnknownConfigId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || UnknownConfigId(s.into());
        let (l, st) = s.trim().split_once('_').ok_or_else(err)?;
        let line = match l {
            "L2" => LineSpacing::L2,
            "L1" => LineSpacing::L1,
            "L0.66" => LineSpacing::L0_66,
            _ => return Err(err()),
        };
        let stitch = match st {
            "S1" => StitchSpacing::S1,
            "S5" => StitchSpacing::S5,
            "S15" => StitchSpacing::S15,
            _ => return Err(err()),
        };
        Ok(GridConfig { line, stitch })
    }
}
