//! Command-line front end: pattern search and validation, polyline export,
//! the witness coverage certificate, the rectifiable covering bound and
//! Minkowski averages.
//!
//! Exit codes: 0 success, 1 validation failure, 2 search failure,
//! 3 missing artifact, 64 usage error.

use std::ffi::OsString;
use std::fmt;
use std::io::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use cantorloop::analysis::{
    coverage_certificate, greedy_partition, linear_fit, measure_bound, midpoint_voxel_cover, sf_sequence,
    AnalysisError, CurveSpec, MeasureBound, Path, SfReport, SweepFit, MAX_POINTS,
};
use cantorloop::curve::{build_polyline, length_stats, CurveError, LengthStats};
use cantorloop::pattern::{
    pattern_closure, validate_tree, Clause, PatternError, PatternFile, PatternTable, SearchOptions, Violation,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_SEARCH: i32 = 2;
pub const EXIT_MISSING: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Largest depth any command accepts; node counts grow as `8^n`.
pub const MAX_DEPTH: u32 = 12;
/// Largest coverage grid side.
pub const MAX_GRID: u32 = 243;

#[derive(Debug, Parser)]
#[command(
    name = "cantorloop",
    version,
    about = "Finite-depth checks for a closed curve whose midpoint set is the unit cube"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search the pattern table and validate it exactly to a depth, or
    /// re-validate a stored table with --check.
    Pattern(PatternArgs),
    /// Write the depth-n polyline approximation.
    Generate(GenerateArgs),
    /// Certify that witness midpoints reach every voxel center of a grid.
    Coverage(CoverageArgs),
    /// Greedy ε-partitions, covering bounds and a voxel sweep for a
    /// rectifiable curve.
    Rectifiable(RectifiableArgs),
    /// Hausdorff distances from Minkowski averages to the convex hull.
    Sf(SfArgs),
}

fn depth_arg() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(0..=MAX_DEPTH as i64)
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Validation depth [default: 4, or the depth stored in a checked file]
    #[arg(long, value_parser = depth_arg())]
    pub depth: Option<u32>,
    /// Output file for the pattern table; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-validate this pattern file instead of searching.
    #[arg(long, conflicts_with = "out")]
    pub check: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Obj,
    Json,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 3, value_parser = depth_arg())]
    pub depth: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Pattern file to use instead of searching.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[arg(long, default_value_t = 6, value_parser = depth_arg())]
    pub depth: u32,
    /// Cells per axis of the voxel-center grid.
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u32).range(1..=MAX_GRID as i64))]
    pub grid: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub pattern: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RectifiableArgs {
    /// circle, square, helix, l-polyline or file:<path>
    #[arg(long, default_value = "circle")]
    pub curve: CurveSpec,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.2,0.1")]
    pub eps: Vec<f64>,
    /// Voxel sides for the volume sweep.
    #[arg(long, value_delimiter = ',', default_value = "0.04,0.02,0.01,0.005")]
    pub h: Vec<f64>,
    /// Points sampled along a built-in curve.
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u32).range(2..=20_000))]
    pub samples: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run-length text of the finest voxel grid.
    #[arg(long)]
    pub voxels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SfArgs {
    #[arg(long, default_value = "square")]
    pub curve: CurveSpec,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=6))]
    pub k: u32,
    #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u32).range(1..=MAX_POINTS as i64))]
    pub samples: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A non-zero exit with its message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<PatternError> for Failure {
    fn from(e: PatternError) -> Self {
        let code = match e {
            PatternError::NotFound | PatternError::OffLattice => EXIT_SEARCH,
            _ => EXIT_VALIDATION,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::Pattern(p) => p.into(),
            other => Failure::new(EXIT_VALIDATION, other.to_string()),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let code = match e {
            AnalysisError::Io(_) => EXIT_MISSING,
            AnalysisError::OutsideUnitCube => EXIT_VALIDATION,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

/// What a command produced: the main output and whether its checks held.
struct Outcome {
    text: String,
    passed: bool,
}

/// Pretty JSON with keys in sorted order and a trailing newline.
pub fn to_sorted_json<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

/// Replaces `path` in one rename, so readers never see a partial file.
pub fn write_atomic(path: &FsPath, text: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let fail = |e: &dyn fmt::Display| Failure::new(EXIT_MISSING, format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| fail(&e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn load_table(pattern: Option<&FsPath>) -> Result<PatternTable, Failure> {
    let Some(path) = pattern else {
        return Ok(pattern_closure(SearchOptions::default())?);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_MISSING, format!("cannot read {}: {e}", path.display())))?;
    let file = PatternFile::from_json(&text)?;
    let (table, issues) = file.to_table()?;
    if let Some(v) = issues.first() {
        return Err(Failure::new(EXIT_VALIDATION, format!("{}: {} at {}", path.display(), v.detail, v.location)));
    }
    Ok(table)
}

#[derive(Serialize)]
struct CheckReport {
    file: String,
    ok: bool,
    issues: Vec<Violation>,
    digest: cantorloop::pattern::Digest,
}

fn cmd_pattern(args: &PatternArgs) -> Result<Outcome, Failure> {
    if let Some(path) = &args.check {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_MISSING, format!("cannot read {}: {e}", path.display())))?;
        let file = PatternFile::from_json(&text)?;
        let (table, mut issues) = file.to_table()?;
        let depth = args.depth.map_or(file.digest.depth, |d| d as usize);
        let report = validate_tree(&table, depth);
        let digest = PatternFile::new(&table, &report).digest;
        if depth == file.digest.depth && digest != file.digest {
            issues.push(Violation::new(
                Clause::DigestMismatch,
                "digest".into(),
                "recorded digest differs from a fresh run",
            ));
        }
        issues.extend(report.violations);
        let ok = issues.is_empty();
        let out = CheckReport { file: path.display().to_string(), ok, issues, digest };
        return Ok(Outcome { text: to_sorted_json(&out), passed: ok });
    }
    let depth = args.depth.unwrap_or(4) as usize;
    let table = pattern_closure(SearchOptions::default())?;
    let report = validate_tree(&table, depth);
    eprintln!(
        "pattern: {} classes, {} nodes, {} checks, {} violations",
        table.classes().len(),
        report.nodes,
        report.total_checks(),
        report.violations.len()
    );
    let file = PatternFile::new(&table, &report);
    Ok(Outcome { text: file.to_json(), passed: report.ok() })
}

#[derive(Serialize)]
struct JsonVertex {
    t_numerator: String,
    t_denom_exp15: u32,
    exact: [String; 3],
    point: [f64; 3],
}

#[derive(Serialize)]
struct PolylineReport {
    depth: u32,
    closed: bool,
    stats: LengthStats,
    vertices: Vec<JsonVertex>,
}

fn cmd_generate(args: &GenerateArgs) -> Result<Outcome, Failure> {
    let table = load_table(args.pattern.as_deref())?;
    let poly = build_polyline(&table, args.depth as usize)?;
    let chords = 8usize.pow(args.depth);
    eprintln!(
        "generate: depth {}, {} vertices ({} chords, {} waypoints)",
        args.depth,
        poly.len(),
        chords,
        poly.len() - 2 * chords
    );
    let text = match args.format {
        Format::Csv => poly.to_csv(),
        Format::Obj => poly.to_obj(),
        Format::Json => {
            let vertices = poly
                .vertices
                .iter()
                .map(|v| JsonVertex {
                    t_numerator: v.t.numer().to_string(),
                    t_denom_exp15: v.t.exp(),
                    exact: v.point.to_rational().map(|c| c.to_string()),
                    point: v.point.to_f64(),
                })
                .collect();
            let stats = length_stats(&table, args.depth as usize)?;
            to_sorted_json(&PolylineReport { depth: args.depth, closed: poly.closed, stats, vertices })
        }
    };
    Ok(Outcome { text, passed: true })
}

fn cmd_coverage(args: &CoverageArgs) -> Result<Outcome, Failure> {
    let table = load_table(args.pattern.as_deref())?;
    let report = coverage_certificate(&table, args.depth as usize, args.grid as usize)?;
    eprintln!(
        "coverage: {} centers, max deviation {:.6e}, bound {:.6e}, {} failures",
        report.centers, report.max_deviation, report.bound, report.failures
    );
    Ok(Outcome { passed: report.certified(), text: to_sorted_json(&report) })
}

#[derive(Serialize)]
struct PartitionReport {
    #[serde(flatten)]
    bound: MeasureBound,
    /// Largest `|diam − ε|` over all pieces but the last.
    diameter_error: f64,
    last_diameter: f64,
}

#[derive(Serialize)]
struct SweepPoint {
    h: f64,
    voxel_count: usize,
    volume: f64,
    dilated_count: usize,
    dilated_volume: f64,
}

#[derive(Serialize)]
struct RectifiableReport {
    curve: String,
    closed: bool,
    samples: usize,
    length: f64,
    partitions: Vec<PartitionReport>,
    sweep: Vec<SweepPoint>,
    fit: SweepFit,
    /// Slope positive and `R² ≥ 0.9`.
    sweep_linear: bool,
    ok: bool,
}

fn cmd_rectifiable(args: &RectifiableArgs) -> Result<Outcome, Failure> {
    if let Some(&e) = args.eps.iter().find(|&&e| !(e > 0.0 && e.is_finite())) {
        return Err(Failure::new(EXIT_USAGE, format!("--eps values must be positive, got {e}")));
    }
    if let Some(&h) = args.h.iter().find(|&&h| !(h > 0.0 && h.is_finite())) {
        return Err(Failure::new(EXIT_USAGE, format!("--h values must be positive, got {h}")));
    }
    if args.h.len() < 2 {
        return Err(Failure::new(EXIT_USAGE, "--h needs at least two values for the sweep fit"));
    }
    let curve = args.curve.sample(args.samples as usize)?;
    let path = if curve.closed { Path::closed(curve.points.clone())? } else { Path::new(curve.points.clone())? };
    let mut partitions = Vec::new();
    for &eps in &args.eps {
        let dec = greedy_partition(&path, eps)?;
        partitions.push(PartitionReport {
            diameter_error: dec.diameter_error,
            last_diameter: dec.pieces.last().map_or(0.0, |p| p.diameter),
            bound: measure_bound(&dec),
        });
    }
    let mut sweep = Vec::new();
    let mut finest = None;
    for &h in &args.h {
        let c = midpoint_voxel_cover(&curve.points, &curve.points, h)?;
        sweep.push(SweepPoint {
            h,
            voxel_count: c.voxel_count,
            volume: c.volume,
            dilated_count: c.dilated_count,
            dilated_volume: c.dilated_volume,
        });
        if finest.as_ref().is_none_or(|f: &cantorloop::analysis::VoxelCover| h < f.h) {
            finest = Some(c);
        }
    }
    let fit = linear_fit(&sweep.iter().map(|s| (s.h, s.volume)).collect::<Vec<_>>());
    let sweep_linear = fit.slope > 0.0 && fit.r_squared >= 0.9;
    let ok = sweep_linear
        && partitions
            .iter()
            .all(|p| p.bound.count_bound_holds && p.bound.refined_within_cube_bound && p.bound.cube_bound_within_final);
    for p in &partitions {
        eprintln!(
            "rectifiable: eps {} -> {} pieces, bound {:.6}, final form {:.6}",
            p.bound.epsilon, p.bound.n_pieces, p.bound.cube_bound, p.bound.final_form
        );
    }
    if let (Some(path), Some(c)) = (&args.voxels, &finest) {
        write_atomic(path, &c.grid.to_rle())?;
    }
    let report = RectifiableReport {
        curve: args.curve.to_string(),
        closed: curve.closed,
        samples: curve.points.len(),
        length: path.length(),
        partitions,
        sweep,
        fit,
        sweep_linear,
        ok,
    };
    Ok(Outcome { text: to_sorted_json(&report), passed: ok })
}

#[derive(Serialize)]
struct SfOutput {
    curve: String,
    #[serde(flatten)]
    report: SfReport,
    /// The last distance is below `tolerance`.
    final_within_tolerance: bool,
}

fn cmd_sf(args: &SfArgs) -> Result<Outcome, Failure> {
    let curve = args.curve.sample(args.samples as usize)?;
    let report = sf_sequence(&curve.points, args.k as usize, args.seed)?;
    for s in &report.steps {
        eprintln!("sf: k {} -> {} points, distance {:.6}", s.k, s.points, s.hausdorff);
    }
    let last = report.steps.last().map_or(0.0, |s| s.hausdorff);
    let out = SfOutput { curve: args.curve.to_string(), final_within_tolerance: last < report.tolerance, report };
    Ok(Outcome { text: to_sorted_json(&out), passed: true })
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Pattern(a) => cmd_pattern(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Coverage(a) => cmd_coverage(a),
        Command::Rectifiable(a) => cmd_rectifiable(a),
        Command::Sf(a) => cmd_sf(a),
    }
}

fn out_path(cli: &Cli) -> Option<&FsPath> {
    match &cli.command {
        Command::Pattern(a) => a.out.as_deref(),
        Command::Generate(a) => a.out.as_deref(),
        Command::Coverage(a) => a.out.as_deref(),
        Command::Rectifiable(a) => a.out.as_deref(),
        Command::Sf(a) => a.out.as_deref(),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
/// Output files are written only when every check passed; otherwise the
/// report goes to stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let result = execute(&cli).and_then(|o| {
        match out_path(&cli) {
            Some(p) if o.passed => write_atomic(p, &o.text)?,
            _ => print!("{}", o.text),
        }
        Ok(o.passed)
    });
    eprintln!("elapsed: {:.2}s", start.elapsed().as_secs_f64());
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VALIDATION,
        Err(f) => {
            eprintln!("error: {f}");
            f.code
        }
    }
}
