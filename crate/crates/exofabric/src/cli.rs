//! The `exofab` command line.
//!
//! Exit status is 0 on success, 1 when the design or data is at fault and 2
//! for usage errors, including input or output paths that cannot be used.
//! Results go to standard output, diagnostics to standard error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use exofabric_core::calibration::{
    estimate_fabrication_time, load_calibration, predict, swatch_plan, CalibrationTable, Extrapolation, GeometryTag,
    PredictOptions, PropertyQuery, TestMode, TimeModel,
};
use exofabric_core::geometry::{validate_design, Severity};
use exofabric_core::solver::{feasibility_report, solve};
use exofabric_core::units::format_decimal;
use exofabric_core::GridConfig;

use crate::io::instructions::render_instructions_with;
use crate::io::{parse_design_spec, parse_requirements, write_dst, write_svg, DesignSpecFile};

/// Tool version and the bundled calibration table version.
pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (calibration table v1)");

/// Environment variable naming an extra calibration table.
pub const CALIBRATION_ENV: &str = "EXOFAB_CALIBRATION";

#[derive(Debug, Parser)]
#[command(name = "exofab", version = VERSION, about = "Design compiler for thermoplastic-embroidered fabrics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Calibration table merged over the bundled one.
    #[arg(long, global = true, env = CALIBRATION_ENV, value_name = "CSV")]
    pub calibration: Option<PathBuf>,
    /// Hold the last measured force past the end of a series instead of failing.
    #[arg(long, global = true)]
    pub extrapolate: bool,
    /// Calibration geometry for predict and solve.
    #[arg(long, global = true, value_parser = parse_geometry)]
    pub geometry: Option<GeometryTag>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a design spec to a DST file, with optional preview and instructions.
    Generate {
        spec: PathBuf,
        #[arg(long, value_name = "PATH")]
        dst: PathBuf,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        instructions: Option<PathBuf>,
    },
    /// Force at a displacement from the calibration table.
    Predict {
        #[arg(long, value_parser = parse_config)]
        config: GridConfig,
        #[arg(long)]
        fabric: String,
        #[arg(long, default_value_t = 1)]
        layers: u8,
        /// Displacement in mm; repeat for a table.
        #[arg(long = "displacement", required = true, value_name = "MM")]
        displacements: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Compression)]
        mode: Mode,
        /// Scale single-layer tensile data to more layers.
        #[arg(long)]
        tensile_layer_scaling: bool,
    },
    /// Search the design grid for designs meeting a requirements file.
    Solve {
        requirements: PathBuf,
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// SVG preview of a design spec.
    Preview {
        spec: PathBuf,
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Sewing time of a design spec, or of the swatch for a grid configuration.
    Time {
        #[arg(required_unless_present = "config", conflicts_with = "config")]
        spec: Option<PathBuf>,
        #[arg(long, value_parser = parse_config)]
        config: Option<GridConfig>,
        #[arg(long, default_value_t = 1, requires = "config")]
        layers: u32,
    },
    /// Molding instruction sheet for a design spec.
    Instructions {
        spec: PathBuf,
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Compression,
    Tensile,
}

fn parse_config(s: &str) -> Result<GridConfig, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_geometry(s: &str) -> Result<GeometryTag, String> {
    GeometryTag::parse(s).ok_or_else(|| format!("unknown geometry {s:?} (swatch-100, splint, bra-dome)"))
}

/// A bad path or argument found before any work starts.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())).into())
}

fn check_output(path: &Path) -> Result<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    if !parent.is_dir() {
        return Err(Usage(format!("output directory {} does not exist", parent.display())).into());
    }
    if path.is_dir() {
        return Err(Usage(format!("output path {} is a directory", path.display())).into());
    }
    Ok(())
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

fn load_table(global: &GlobalArgs) -> Result<CalibrationTable> {
    let mut table = CalibrationTable::bundled();
    if let Some(path) = &global.calibration {
        let text = read_input(path)?;
        let extra = load_calibration(&text).with_context(|| path.display().to_string())?;
        table.merge(&extra).with_context(|| format!("merging {}", path.display()))?;
    }
    Ok(table)
}

fn load_spec(path: &Path) -> Result<DesignSpecFile> {
    let text = read_input(path)?;
    parse_design_spec(&text).with_context(|| path.display().to_string())
}

fn options(global: &GlobalArgs) -> PredictOptions {
    PredictOptions {
        extrapolation: if global.extrapolate { Extrapolation::Clamp } else { Extrapolation::Error },
        ..PredictOptions::default()
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_output(p, text.as_bytes()),
        None => out.write_all(text.as_bytes()).context("writing standard output"),
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let global = &cli.global;
    match cli.command {
        Command::Generate { spec, dst, svg, instructions } => {
            for p in std::iter::once(&dst).chain(svg.as_ref()).chain(instructions.as_ref()) {
                check_output(p)?;
            }
            let table = load_table(global)?;
            let design = load_spec(&spec)?;
            let diags = validate_design(&design.config, &design.thread, design.fabric);
            for d in &diags {
                writeln!(err, "{}: {d}", spec.display())?;
            }
            if diags.iter().any(|d| d.severity == Severity::Error) {
                bail!("{}: design has errors; nothing written", spec.display());
            }
            let plan = design.compile().with_context(|| spec.display().to_string())?;
            let bytes = write_dst(&plan, &design.name).with_context(|| spec.display().to_string())?;
            let preview = svg.as_ref().map(|_| write_svg(&plan));
            let sheet = instructions.as_ref().map(|_| render_instructions_with(&design, &TimeModel::from_table(&table)));
            write_output(&dst, &bytes)?;
            if let (Some(p), Some(text)) = (&svg, &preview) {
                write_output(p, text.as_bytes())?;
            }
            if let (Some(p), Some(text)) = (&instructions, &sheet) {
                write_output(p, text.as_bytes())?;
            }
        }
        Command::Predict { config, fabric, layers, displacements, mode, tensile_layer_scaling } => {
            let table = load_table(global)?;
            let opts = PredictOptions { tensile_layer_scaling, ..options(global) };
            let geometry = global.geometry.unwrap_or(GeometryTag::Swatch100);
            let mode = match mode {
                Mode::Compression => TestMode::Compression,
                Mode::Tensile => TestMode::Tensile,
            };
            let mut lines = Vec::new();
            for &d in &displacements {
                let q = PropertyQuery { geometry, config, fabric: fabric.clone(), layers, displacement_mm: d, mode };
                let p = predict(&q, &table, opts)?;
                let mut line = format!("{} N", format_decimal(p.force_n, 3));
                if p.upper_bound {
                    line.push_str(" (upper bound)");
                }
                if p.clamped {
                    line.push_str(" (clamped)");
                }
                lines.push(if displacements.len() == 1 { line } else { format!("{} mm: {line}", format_decimal(d, 3)) });
            }
            for l in lines {
                writeln!(out, "{l}")?;
            }
        }
        Command::Solve { requirements, output } => {
            if let Some(p) = &output {
                check_output(p)?;
            }
            let table = load_table(global)?;
            let text = read_input(&requirements)?;
            let mut req = parse_requirements(&text).with_context(|| requirements.display().to_string())?;
            if let Some(g) = global.geometry {
                req.geometry = g;
            }
            let result = solve(&req, &table, options(global)).with_context(|| requirements.display().to_string())?;
            emit(out, output.as_deref(), &feasibility_report(&result))?;
        }
        Command::Preview { spec, output } => {
            if let Some(p) = &output {
                check_output(p)?;
            }
            let design = load_spec(&spec)?;
            let plan = design.compile().with_context(|| spec.display().to_string())?;
            emit(out, output.as_deref(), &write_svg(&plan))?;
        }
        Command::Time { spec, config, layers } => {
            let table = load_table(global)?;
            let model = TimeModel::from_table(&table);
            let minutes = match (spec, config) {
                (Some(path), _) => {
                    let design = load_spec(&path)?;
                    let plan = design.compile().with_context(|| path.display().to_string())?;
                    estimate_fabrication_time(&plan, &model)
                }
                (None, Some(c)) => {
                    if layers == 0 {
                        return Err(Usage("--layers must be at least 1".into()).into());
                    }
                    estimate_fabrication_time(&swatch_plan(c).with_layers(layers), &model)
                }
                (None, None) => return Err(anyhow!(Usage("give a spec file or --config".into()))),
            };
            writeln!(out, "{} min", format_decimal(minutes, 2))?;
        }
        Command::Instructions { spec, output } => {
            if let Some(p) = &output {
                check_output(p)?;
            }
            let table = load_table(global)?;
            let design = load_spec(&spec)?;
            emit(out, output.as_deref(), &render_instructions_with(&design, &TimeModel::from_table(&table)))?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                2
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exofabric_core::calibration::BUNDLED_TABLE_VERSION;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("exofab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn version_names_table() {
        assert!(VERSION.ends_with(&format!("(calibration table v{BUNDLED_TABLE_VERSION})")));
        let (code, out, _) = run_args(&["--version"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), format!("exofab {VERSION}"));
    }

    #[test]
    fn predict_prints_force() {
        let (code, out, err) =
            run_args(&["predict", "--config", "L2_S5", "--fabric", "nonstretch-336", "--layers", "1", "--displacement", "10"]);
        assert_eq!((code, out.as_str(), err.as_str()), (0, "2.4 N\n", ""));
    }

    #[test]
    fn usage_and_domain_codes() {
        assert_eq!(run_args(&["predict", "--config", "L3_S5"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["solve", "/nonexistent/req.txt"]).0, 2);
        let (code, _, err) =
            run_args(&["predict", "--config", "L2_S5", "--fabric", "nonstretch-336", "--displacement", "30"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error: "));
    }
}
