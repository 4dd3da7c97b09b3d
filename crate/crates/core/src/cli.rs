//! Command-line front end, JSON analysis reports and convention calibration.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::design_graph::{build_components, motif_census, Component, MotifCensus};
use crate::error::{Error, Result};
use crate::grid::{GridConvention, PerFamily, Window};
use crate::koch_oracle::{
    auto_window, known_phases, koch_polygon, verify_koch, VerificationResult,
};
use crate::render::{to_svg, RenderOptions, RenderSide};
use crate::stitcher::{
    check_invariants, dual, generate_design, DirectionSpec, InvariantResult, Side, StitchPattern,
};
use crate::symmetry::{
    classify_wallpaper, is_self_dual, period_cell, LatticeIsometry, WallpaperGroup, Witness,
};
use crate::words::{BinaryWord, KochOrder};

pub const TOOL_VERSION: &str = concat!("isostitch ", env!("CARGO_PKG_VERSION"));

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const INCONCLUSIVE: i32 = 4;
    pub const NOT_FOUND: i32 = 5;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerSide<T> {
    pub front: T,
    pub back: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallpaperReport {
    pub group: WallpaperGroup,
    pub rotation_order: u8,
    pub witnesses: Vec<Witness>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfDualReport {
    pub self_dual: bool,
    pub witness: Option<LatticeIsometry>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub pattern: StitchPattern,
    pub window: Window,
    pub invariant_results: BTreeMap<String, InvariantResult>,
    pub census: PerSide<MotifCensus>,
    pub wallpaper: Option<PerSide<WallpaperReport>>,
    pub self_dual: Option<SelfDualReport>,
    pub koch: Option<VerificationResult>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn wallpaper_report(design: &crate::stitcher::Design) -> WallpaperReport {
    match classify_wallpaper(design) {
        Ok(c) => WallpaperReport {
            group: c.group,
            rotation_order: c.rotation_order,
            witnesses: c.witnesses,
            error: None,
        },
        Err(e) => WallpaperReport {
            group: WallpaperGroup::Unknown,
            rotation_order: 1,
            witnesses: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Full analysis of a pattern over a window.
pub fn analyze(pattern: &StitchPattern, window: Window, self_dual: bool) -> Result<AnalysisReport> {
    let design = generate_design(window, pattern)?;
    let back_view = dual(&design);
    let wallpaper = PerSide {
        front: wallpaper_report(&design),
        back: wallpaper_report(&back_view),
    };
    let self_dual = self_dual.then(|| match is_self_dual(&design) {
        Ok((yes, witness)) => SelfDualReport {
            self_dual: yes,
            witness,
            error: None,
        },
        Err(e) => SelfDualReport {
            self_dual: false,
            witness: None,
            error: Some(e.to_string()),
        },
    });
    Ok(AnalysisReport {
        tool_version: TOOL_VERSION.to_string(),
        pattern: pattern.clone(),
        window,
        invariant_results: check_invariants(&design),
        census: PerSide {
            front: motif_census(&design, Side::Front),
            back: motif_census(&design, Side::Back),
        },
        wallpaper: Some(wallpaper),
        self_dual,
        koch: None,
    })
}

/// One candidate of the calibration search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationCandidate {
    pub convention: GridConvention,
    pub accepted: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub chosen: GridConvention,
    pub accepting: Vec<GridConvention>,
    pub candidates: Vec<CalibrationCandidate>,
}

/// Conventions with presence `{A:0, B:0, C:1}` in lexicographic order of
/// `(base_A, base_B, base_C, slope_A, slope_B, slope_C)`.
pub fn calibration_candidates() -> Vec<GridConvention> {
    (0u8..64)
        .map(|bits| {
            let b = |k: u8| (bits >> (5 - k)) & 1;
            GridConvention {
                presence_parity: GridConvention::DEFAULT_PRESENCE,
                phase_base: PerFamily::new(b(0), b(1), b(2)),
                phase_slope: PerFamily::new(b(3), b(4), b(5)),
            }
        })
        .collect()
}

/// Checks one convention against the hexagram design on a `size × size` window.
pub fn check_convention(conv: &GridConvention, size: i64) -> Result<(bool, String)> {
    let pattern = StitchPattern::uniform(DirectionSpec::constant(0))?.with_convention(*conv);
    let design = generate_design(Window::square(0, size - 1)?, &pattern)?;
    let inv = check_invariants(&design);
    for key in ["degree_two", "quarter_empty"] {
        if !inv.get(key).is_some_and(|r| r.pass) {
            return Ok((false, format!("{key} invariant fails")));
        }
    }
    let census = motif_census(&design, Side::Front);
    let lengths: Vec<usize> = census.counts.keys().map(|s| s.len()).collect();
    if lengths != [12] {
        return Ok((
            false,
            format!("front cycle classes have lengths {lengths:?}"),
        ));
    }
    let class = classify_wallpaper(&design)?;
    if class.group != WallpaperGroup::p6mm {
        return Ok((false, format!("front classifies as {}", class.group)));
    }
    Ok((true, "hexagrams, p6mm".to_string()))
}

/// Brute-force the 64 phase conventions; the least accepting one is chosen.
pub fn calibrate() -> Result<Calibration> {
    let mut candidates = Vec::new();
    let mut accepting = Vec::new();
    for conv in calibration_candidates() {
        let (accepted, reason) = check_convention(&conv, 40)?;
        if accepted {
            accepting.push(conv);
        }
        candidates.push(CalibrationCandidate {
            convention: conv,
            accepted,
            reason,
        });
    }
    let chosen = *accepting.first().ok_or(Error::CalibrationFailed)?;
    Ok(Calibration {
        chosen,
        accepting,
        candidates,
    })
}

// ---------------------------------------------------------------------------
// argument parsing

#[derive(Debug, Parser)]
#[command(
    name = "isostitch",
    version,
    about = "Dilute hitomezashi on the isometric grid"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a design as SVG.
    Render(RenderArgs),
    /// Check invariants, census motifs, classify symmetry; write a JSON report.
    Analyze(AnalyzeArgs),
    /// Search a Koch-word design for the matching snowflake iterate.
    VerifyKoch(VerifyKochArgs),
    /// Search the stitch-phase conventions that reproduce the hexagram design.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Offset word used in all three directions.
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long)]
    pub word_a: Option<String>,
    #[arg(long)]
    pub word_b: Option<String>,
    #[arg(long)]
    pub word_c: Option<String>,
    /// Koch words of this order in all three directions.
    #[arg(long, conflicts_with_all = ["word", "word_a", "word_b", "word_c"])]
    pub koch_order: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phase_a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phase_b: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phase_c: Option<i64>,
    /// imin:imax:jmin:jmax
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Front,
    Back,
    Both,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(long, value_enum, default_value = "front")]
    pub side: SideArg,
    #[arg(long)]
    pub mirror_back: bool,
    #[arg(long)]
    pub dots: bool,
    #[arg(long)]
    pub show_empty: bool,
    /// Outline front cycles congruent to the snowflake of the Koch order.
    #[arg(long)]
    pub highlight_koch: bool,
    #[arg(long, default_value_t = 0.15)]
    pub stroke_width: f64,
    #[arg(long, default_value_t = 12.0)]
    pub unit_px: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(long)]
    pub skip_self_dual: bool,
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyKochArgs {
    #[arg(long)]
    pub order: i64,
    #[arg(long)]
    pub phase_search: bool,
    /// Required for orders 5 and 6.
    #[arg(long)]
    pub long_running: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Write the calibration result as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        Self {
            code: exit::USAGE,
            message: e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } => exit::IO,
            Error::OverlapTooSmall(_) => exit::INCONCLUSIVE,
            _ => exit::USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_word(s: &str) -> Result<DirectionSpec> {
    DirectionSpec::periodic(s.parse::<BinaryWord>()?)
}

impl PatternArgs {
    fn phases(&self, defaults: PerFamily<i64>) -> PerFamily<i64> {
        PerFamily::new(
            self.phase_a.unwrap_or(defaults.a),
            self.phase_b.unwrap_or(defaults.b),
            self.phase_c.unwrap_or(defaults.c),
        )
    }

    /// Pattern and window; Koch patterns default to the known phases and an
    /// auto-sized window, word patterns to a square of at least 40 vertices
    /// per side that holds three period cells.
    pub fn resolve(&self) -> Result<(StitchPattern, Window, Option<KochOrder>)> {
        if let Some(n) = self.koch_order {
            let order = KochOrder::new(n)?;
            let pattern = StitchPattern::koch(order, self.phases(known_phases(order)));
            let window = match &self.window {
                Some(w) => w.parse()?,
                None => auto_window(order)?,
            };
            return Ok((pattern, window, Some(order)));
        }
        let joint = self.word.as_deref().unwrap_or("0");
        let spec = |w: &Option<String>| parse_word(w.as_deref().unwrap_or(joint));
        let phases = self.phases(PerFamily::splat(0));
        let pattern = StitchPattern::new(
            PerFamily::new(
                spec(&self.word_a)?.with_phase(phases.a),
                spec(&self.word_b)?.with_phase(phases.b),
                spec(&self.word_c)?.with_phase(phases.c),
            ),
            GridConvention::default(),
        )?;
        let window = match &self.window {
            Some(w) => w.parse()?,
            None => Window::square(0, (3 * period_cell(&pattern)).max(40) - 1)?,
        };
        Ok((pattern, window, None))
    }
}

fn cmd_render(args: &RenderArgs) -> std::result::Result<(), CliError> {
    let (pattern, window, order) = args.pattern.resolve()?;
    let design = generate_design(window, &pattern)?;
    let mut highlight = Vec::new();
    if args.highlight_koch {
        let order = order.ok_or_else(|| CliError::usage("--highlight-koch needs --koch-order"))?;
        let reference = koch_polygon(order.get() as i64)?.cycle.signature();
        highlight = build_components(&design, Side::Front)
            .into_iter()
            .filter_map(|c| match c {
                Component::Cycle(c) if c.len() == reference.len() && c.signature() == reference => {
                    Some(c)
                }
                _ => None,
            })
            .collect();
    }
    if !(args.stroke_width > 0.0 && args.unit_px > 0.0) {
        return Err(CliError::usage(
            "--stroke-width and --unit-px must be positive",
        ));
    }
    let opts = RenderOptions {
        side: match args.side {
            SideArg::Front => RenderSide::Front,
            SideArg::Back => RenderSide::Back,
            SideArg::Both => RenderSide::Both,
        },
        mirror_back: args.mirror_back,
        show_grid_dots: args.dots,
        show_empty_vertices: args.show_empty,
        highlight,
        stroke_width: args.stroke_width,
        unit_px: args.unit_px,
    };
    write_file(&args.out, &to_svg(&design, &opts))?;
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> std::result::Result<(), CliError> {
    let (pattern, window, _) = args.pattern.resolve()?;
    let report = analyze(&pattern, window, !args.skip_self_dual)?;
    write_file(&args.report, report.to_json()?.as_bytes())?;
    let inconclusive = report
        .wallpaper
        .as_ref()
        .is_some_and(|w| w.front.error.is_some() || w.back.error.is_some())
        || report.self_dual.as_ref().is_some_and(|s| s.error.is_some());
    if inconclusive {
        return Err(CliError {
            code: exit::INCONCLUSIVE,
            message: "window too small for symmetry analysis; report written with Unknown".into(),
        });
    }
    Ok(())
}

fn cmd_verify_koch(args: &VerifyKochArgs) -> std::result::Result<(), CliError> {
    if !(1..=6).contains(&args.order) {
        return Err(CliError::usage(format!(
            "--order must be in 1..=6, got {}",
            args.order
        )));
    }
    let order = KochOrder::new(args.order)?;
    if order.get() >= 5 && !args.long_running {
        return Err(CliError::usage("orders 5 and 6 need --long-running"));
    }
    let window = match &args.window {
        Some(w) => w.parse()?,
        None => auto_window(order)?,
    };
    let result = verify_koch(order, window, args.phase_search)?;
    let pattern = StitchPattern::koch(order, result.phases);
    let design = generate_design(window, &pattern)?;
    let report = AnalysisReport {
        tool_version: TOOL_VERSION.to_string(),
        pattern,
        window,
        invariant_results: check_invariants(&design),
        census: PerSide {
            front: motif_census(&design, Side::Front),
            back: motif_census(&design, Side::Back),
        },
        wallpaper: None,
        self_dual: None,
        koch: Some(result.clone()),
    };
    write_file(&args.report, report.to_json()?.as_bytes())?;
    if !result.found {
        return Err(CliError {
            code: exit::NOT_FOUND,
            message: format!(
                "no order-{order} snowflake found in {} candidate(s)",
                result.candidates_tested
            ),
        });
    }
    Ok(())
}

fn cmd_calibrate(args: &CalibrateArgs) -> std::result::Result<(), CliError> {
    let cal = calibrate()?;
    for conv in &cal.accepting {
        println!(
            "accept base={:?} slope={:?}",
            (conv.phase_base.a, conv.phase_base.b, conv.phase_base.c),
            (conv.phase_slope.a, conv.phase_slope.b, conv.phase_slope.c)
        );
    }
    println!(
        "chosen base={:?} slope={:?}",
        (
            cal.chosen.phase_base.a,
            cal.chosen.phase_base.b,
            cal.chosen.phase_base.c
        ),
        (
            cal.chosen.phase_slope.a,
            cal.chosen.phase_slope.b,
            cal.chosen.phase_slope.c
        )
    );
    if let Some(out) = &args.out {
        let mut json = serde_json::to_string_pretty(&cal).map_err(Error::from)?;
        json.push('\n');
        write_file(out, json.as_bytes())?;
    }
    Ok(())
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit::USAGE
            } else {
                exit::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Render(a) => cmd_render(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::VerifyKoch(a) => cmd_verify_koch(a),
        Command::Calibrate(a) => cmd_calibrate(a),
    };
    match result {
        Ok(()) => exit::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
