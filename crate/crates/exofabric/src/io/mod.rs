//! Text and binary formats.

pub mod dst;
pub mod instructions;
pub mod requirements;
mod sections;
pub mod spec;
pub mod svg;

pub use dst::{read_dst, write_dst, DstDocument, DstError, DstHeader, DstRead, DstWarning};
pub use instructions::render_instructions;
pub use requirements::{parse_requirements, print_requirements};
pub use sections::SpecError;
pub use spec::{parse_design_spec, print_design_spec, DesignSpecFile};
pub use svg::write_svg;
