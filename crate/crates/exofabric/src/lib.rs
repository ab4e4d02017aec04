//! File formats and the `exofab` command-line tool for thermoplastic
//! embroidery designs.
//!
//! The geometry, calibration and solver live in [`exofabric_core`], re-exported
//! here as [`core`]. This crate adds the design and requirements spec files,
//! a Tajima DST encoder/decoder, SVG previews and molding instruction sheets.

#![forbid(unsafe_code)]

pub use exofabric_core as core;

pub mod cli;
pub mod io;
