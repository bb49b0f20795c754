//! Command-line front end.
//!
//! Exit codes: 0 success, 1 the document has validation errors, 2 usage
//! errors and I/O failures. Only the requested artifact goes to stdout.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::itn::parse_with_source_map;
use crate::kml::{emit_placemarks, emit_tour, TourConfig};
use crate::model::{has_errors, validate, Diagnostic, ItineraryDoc};
use crate::svg::{emit_map_sketch, SketchConfig};
use crate::text::emit_itinerarium;
use crate::timeline::build_timeline;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "itinerarium", version, about = "Compile a life itinerarium into KML, text and SVG")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a document and print diagnostics to stderr.
    Validate {
        file: PathBuf,
        /// Treat overlapping stays as errors.
        #[arg(long)]
        strict: bool,
    },
    /// Emit the placemark KML document.
    Kml(Output),
    /// Emit a KML document with a gx:Tour through every stay.
    Tour {
        #[command(flatten)]
        output: Output,
        /// Seconds per FlyTo.
        #[arg(long, value_name = "S", default_value_t = 5.0)]
        fly_duration: f64,
        /// Minimum seconds to wait at each stay.
        #[arg(long, value_name = "S", default_value_t = 4.0)]
        dwell_base: f64,
        /// Extra wait seconds per decade of stay length in days.
        #[arg(long, value_name = "S", default_value_t = 2.0)]
        dwell_scale: f64,
        /// Closest camera range in meters.
        #[arg(long, value_name = "M", default_value_t = 2000.0)]
        camera_floor: f64,
        /// Camera tilt in degrees, 0 to 90.
        #[arg(long, value_name = "D", default_value_t = 45.0)]
        tilt: f64,
    },
    /// Emit the textual itinerarium.
    Itinerary(Output),
    /// Emit an SVG map sketch.
    Map {
        #[command(flatten)]
        output: Output,
        #[arg(long, value_name = "PX", default_value_t = 800)]
        width: u32,
        #[arg(long, value_name = "PX", default_value_t = 600)]
        height: u32,
    },
    /// Print the table of legs and the total distance.
    Distances { file: PathBuf },
}

#[derive(Debug, Args)]
struct Output {
    file: PathBuf,
    /// Write to this file instead of stdout.
    #[arg(short = 'o', long = "output", value_name = "OUT")]
    out: Option<PathBuf>,
}

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

struct Failure {
    code: u8,
    message: Option<String>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: Some(message.into()) }
    }

    fn invalid() -> Self {
        Self { code: EXIT_INVALID, message: None }
    }
}

pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            return if err.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            if let Some(message) = failure.message {
                let _ = writeln!(stderr, "itinerarium: {message}");
            }
            failure.code
        }
    }
}

fn report(stderr: &mut dyn Write, file: &Path, diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        let _ = match d.line() {
            Some(line) => writeln!(stderr, "{}:{line}: {}: {}: {}", file.display(), d.severity, d.code, d.message),
            None => writeln!(stderr, "{}: {}: {}: {}", file.display(), d.severity, d.code, d.message),
        };
    }
}

/// Reads, parses and validates; diagnostics go to stderr.
fn load(file: &Path, strict: bool, stderr: &mut dyn Write) -> Result<ItineraryDoc, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", file.display())))?;
    let parsed = match parse_with_source_map(&text) {
        Ok(parsed) => parsed,
        Err(diagnostics) => {
            report(stderr, file, &diagnostics);
            return Err(Failure::invalid());
        }
    };
    let mut diagnostics = validate(&parsed.doc, strict);
    parsed.source_map.locate(&mut diagnostics);
    report(stderr, file, &diagnostics);
    if has_errors(&diagnostics) {
        return Err(Failure::invalid());
    }
    Ok(parsed.doc)
}

fn write_output(out: Option<&Path>, content: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(content.as_bytes())
            .and_then(|()| stdout.flush())
            .map_err(|e| Failure::usage(format!("cannot write to stdout: {e}"))),
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Validate { file, strict } => load(&file, strict, stderr).map(drop),
        Command::Kml(output) => {
            let doc = load(&output.file, false, stderr)?;
            write_output(output.out.as_deref(), &emit_placemarks(&doc), stdout)
        }
        Command::Tour { output, fly_duration, dwell_base, dwell_scale, camera_floor, tilt } => {
            let cfg = TourConfig {
                fly_duration_s: fly_duration,
                dwell_base_s: dwell_base,
                dwell_scale_s: dwell_scale,
                camera_floor_m: camera_floor,
                tilt_deg: tilt,
            };
            cfg.check().map_err(|e| Failure::usage(e.to_string()))?;
            let doc = load(&output.file, false, stderr)?;
            let tl = timeline(&doc)?;
            let kml = emit_tour(&tl, &cfg).map_err(|e| Failure::usage(e.to_string()))?;
            write_output(output.out.as_deref(), &kml, stdout)
        }
        Command::Itinerary(output) => {
            let doc = load(&output.file, false, stderr)?;
            let tl = timeline(&doc)?;
            let text = emit_itinerarium(&tl).map_err(|e| Failure::usage(e.to_string()))?;
            write_output(output.out.as_deref(), &text, stdout)
        }
        Command::Map { output, width, height } => {
            let cfg = SketchConfig { width_px: width, height_px: height, ..SketchConfig::default() };
            cfg.check().map_err(|e| Failure::usage(e.to_string()))?;
            let doc = load(&output.file, false, stderr)?;
            let tl = timeline(&doc)?;
            let svg = emit_map_sketch(&tl, &cfg).map_err(|e| Failure::usage(e.to_string()))?;
            write_output(output.out.as_deref(), &svg, stdout)
        }
        Command::Distances { file } => {
            let doc = load(&file, false, stderr)?;
            let tl = timeline(&doc)?;
            write_output(None, &distance_table(&tl), stdout)
        }
    }
}

fn timeline(doc: &ItineraryDoc) -> Result<crate::timeline::Timeline<'_>, Failure> {
    build_timeline(doc).map_err(|e| Failure::usage(e.to_string()))
}

/// Tab-separated leg table with a total row.
pub fn distance_table(tl: &crate::timeline::Timeline<'_>) -> String {
    let mut out = String::from("from\tto\tkm\n");
    for leg in tl.legs() {
        let _ = writeln!(out, "{}\t{}\t{:.1}", leg.from_place.name, leg.to_place.name, leg.distance_km);
    }
    let _ = writeln!(out, "total\t\t{:.1}", tl.total_distance());
    out
}
