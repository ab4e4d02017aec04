//! Stitch-plan generation, calibration lookup and inverse design for
//! thermoplastic-embroidered fabrics.
//!
//! Everything in this crate is a pure function over in-memory values. It builds
//! without `std` (an allocator is required); file formats, the Tajima DST codec
//! and the command-line front end live in the `exofabric` crate.
//!
//! The pieces:
//!
//! * [`geometry`] turns an [`EmbroideryConfig`](geometry::EmbroideryConfig) and a
//!   [`Region`](geometry::Region) into an ordered [`StitchPlan`](geometry::StitchPlan)
//!   using linear, radial or concentric thread layouts.
//! * [`calibration`] stores measured force/displacement knots per
//!   configuration and answers property queries by piecewise-linear lookup.
//! * [`solver`] enumerates the discrete design grid and returns the Pareto
//!   front of designs meeting a set of force and formability requirements.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod calibration;
pub mod geometry;
pub mod grid;
pub mod materials;
pub mod solver;
pub mod units;

pub use grid::{GridConfig, LineSpacing, StitchSpacing};
pub use materials::{FabricSpec, MoldingProtocol, StretchClass, ThreadSide, ThreadSpec};
