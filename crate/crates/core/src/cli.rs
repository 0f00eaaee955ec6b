//! The `stitchlab` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad arguments, 3 I/O.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cycloid::{classify, CurveKind};
use crate::dances::{mmt_chords, PlanetDance, StitchGraph};
use crate::error::Error;
use crate::kernel::Rational;
use crate::oracle::{verify_all_with, VerificationReport, VerifyOptions};
use crate::overlay::{overlay_decompose, FamilyKind, OverlayDecomposition};
use crate::render::{
    render_dance_with_curve, render_gallery, render_grid, render_stitch, RenderStyle, SvgDocument,
};

pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const CANVAS_ENV: &str = "STITCHLAB_CANVAS_PX";

pub const GALLERY_PAIRS: [(i64, i64); 8] = [
    (200, 21),
    (50, 25),
    (100, 34),
    (100, 51),
    (90, 31),
    (400, 115),
    (100, 49),
    (206, 21),
];

#[derive(Parser, Debug)]
#[command(
    name = "stitchlab",
    version,
    about = "Modular stitch graphs, planet dances and their envelopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct StyleArgs {
    /// Draw chords as full lines across the canvas.
    #[arg(long)]
    extend: bool,
    /// Omit the boundary points.
    #[arg(long)]
    no_points: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render the stitch graph MMT(m, a).
    Stitch {
        #[arg(short = 'm', long)]
        modulus: i64,
        #[arg(short = 'a', long, allow_negative_numbers = true)]
        multiplier: i64,
        /// Output file; standard output when omitted.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Report the natural alias, overlay cosets and envelope of MMT(m, a).
    Analyze {
        #[arg(short = 'm', long)]
        modulus: i64,
        #[arg(short = 'a', long, allow_negative_numbers = true)]
        multiplier: i64,
        #[arg(long)]
        json: bool,
    },
    /// Render an n-sample of the dance <alpha, beta> with its envelope.
    Dance {
        #[arg(short = 'a', long, allow_negative_numbers = true)]
        alpha: i64,
        #[arg(short = 'b', long, allow_negative_numbers = true)]
        beta: i64,
        #[arg(short = 'n', long)]
        rate: i64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Render MMT(m, ceil(m/b)) (or floor) for every b <= B and 0 < r < b.
    Grid {
        #[arg(short = 'm', long = "m-target")]
        m_target: i64,
        #[arg(short = 'B', long = "b-max")]
        b_max: i64,
        #[arg(long, value_enum, default_value_t = Kind::Ceiling)]
        kind: Kind,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Render torus diagram and stitch graph side by side for each pair.
    Gallery {
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        /// Render only this pair, given as `m,a`; repeatable.
        #[arg(long, value_parser = parse_pair)]
        only: Vec<(i64, i64)>,
    },
    /// Run every brute-force cross-check; exits 1 if any fails.
    Verify {
        #[arg(long = "max-m", default_value_t = 300)]
        max_m: i64,
        #[arg(long, default_value_t = 8)]
        bound: i64,
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Ceiling,
    Floor,
}

impl From<Kind> for FamilyKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Ceiling => FamilyKind::Ceiling,
            Kind::Floor => FamilyKind::Floor,
        }
    }
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (m, a) = s
        .split_once(',')
        .ok_or_else(|| format!("expected m,a but got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(m)?, parse(a)?))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match execute(cli.command, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_IO
        }
        Err(Failure::Verify) => EXIT_VERIFY,
    }
}

fn base_style(args: Option<&StyleArgs>) -> Result<RenderStyle, Failure> {
    let mut style = RenderStyle::default();
    if let Ok(raw) = std::env::var(CANVAS_ENV) {
        style.canvas_px = raw.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{CANVAS_ENV} must be a positive integer, got {raw:?}"
            ))
        })?;
    }
    if let Some(a) = args {
        style.extend_lines = a.extend;
        style.show_points = !a.no_points;
    }
    style.validate()?;
    Ok(style)
}

fn emit(doc: &SvgDocument, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, &doc.bytes).map_err(|e| io_failure(path, e)),
        None => stdout
            .write_all(&doc.bytes)
            .map_err(|e| Failure::Io(format!("standard output: {e}"))),
    }
}

fn prepare_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Stitch {
            modulus,
            multiplier,
            out,
            style,
        } => {
            let style = base_style(Some(&style))?;
            let g = StitchGraph::new(modulus, multiplier)?;
            emit(
                &render_stitch(&mmt_chords(g), &style)?,
                out.as_deref(),
                stdout,
            )
        }
        Command::Analyze {
            modulus,
            multiplier,
            json,
        } => {
            let report = analysis_report(modulus, multiplier)?;
            let text = if json {
                let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                s.push('\n');
                s
            } else {
                report.to_text()
            };
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(format!("standard output: {e}")))
        }
        Command::Dance {
            alpha,
            beta,
            rate,
            out,
            style,
        } => {
            let style = base_style(Some(&style))?;
            let d = PlanetDance::new(alpha, beta)?;
            emit(
                &render_dance_with_curve(d, rate, &style)?,
                out.as_deref(),
                stdout,
            )
        }
        Command::Grid {
            m_target,
            b_max,
            kind,
            out,
        } => {
            let style = base_style(None)?;
            let kind = FamilyKind::from(kind);
            let cells = render_grid(m_target, b_max, kind, &style)?;
            prepare_dir(&out)?;
            let mut index = Vec::with_capacity(cells.len());
            for c in &cells {
                let file = format!("b{}_r{}_m{}_a{}.svg", c.b, c.r, c.m, c.a);
                let path = out.join(&file);
                fs::write(&path, &c.svg.bytes).map_err(|e| io_failure(&path, e))?;
                index.push(GridEntry {
                    b: c.b,
                    r: c.r,
                    m: c.m,
                    a: c.a,
                    file,
                });
            }
            let index = GridIndex {
                m_target,
                b_max,
                kind: kind.name(),
                cells: index,
            };
            let path = out.join("index.json");
            let mut json = serde_json::to_string_pretty(&index).expect("index serializes");
            json.push('\n');
            fs::write(&path, json).map_err(|e| io_failure(&path, e))
        }
        Command::Gallery { out, only } => {
            let style = base_style(None)?;
            let pairs: Vec<(i64, i64)> = if only.is_empty() {
                GALLERY_PAIRS.to_vec()
            } else {
                only
            };
            let docs = render_gallery(&pairs, &style)?;
            prepare_dir(&out)?;
            for (&(m, a), doc) in pairs.iter().zip(&docs) {
                let path = out.join(format!("gallery_m{m}_a{a}.svg"));
                fs::write(&path, &doc.bytes).map_err(|e| io_failure(&path, e))?;
            }
            Ok(())
        }
        Command::Verify {
            max_m,
            bound,
            json,
            inject_fault,
        } => {
            let reports = verify_all_with(&VerifyOptions {
                max_m,
                dance_bound: bound,
                inject_fault,
            })?;
            let text = if json {
                let mut s = serde_json::to_string_pretty(&reports).expect("reports serialize");
                s.push('\n');
                s
            } else {
                verify_text(&reports)
            };
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(format!("standard output: {e}")))?;
            if reports.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
    }
}

fn verify_text(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        s.push_str(&format!("{status} {:<28} cases={}", r.suite, r.cases_run));
        if !r.passed() {
            s.push_str(&format!(" failures={}", r.failure_count));
        }
        s.push('\n');
        for f in &r.failures {
            s.push_str(&format!(
                "  input: {}\n    expected: {}\n    actual:   {}\n",
                f.input, f.expected, f.actual
            ));
        }
        for n in &r.notes {
            s.push_str(&format!("  note: {n}\n"));
        }
    }
    s
}

#[derive(Serialize)]
struct GridIndex {
    m_target: i64,
    b_max: i64,
    kind: &'static str,
    cells: Vec<GridEntry>,
}

#[derive(Serialize)]
struct GridEntry {
    b: i64,
    r: i64,
    m: i64,
    a: i64,
    file: String,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct DanceJson {
    pub alpha: i64,
    pub beta: i64,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct CosetJson {
    pub k: i64,
    pub rotation: Option<String>,
    pub line_offset: String,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
#[serde(untagged)]
pub enum EnvelopeJson {
    Curve {
        kind: &'static str,
        fixed_radius: String,
        rolling_radius: String,
        cusps: i64,
    },
    Degenerate {
        kind: &'static str,
    },
}

/// Machine-readable analysis of one stitch graph. Field order is the
/// serialization order.
#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub m: i64,
    pub a: i64,
    pub fundamental_dance: DanceJson,
    pub shortest_vector: [i64; 2],
    pub natural_dance: DanceJson,
    pub tie: bool,
    pub d: i64,
    pub reduced_rate: i64,
    pub cosets: Vec<CosetJson>,
    pub envelope: EnvelopeJson,
}

fn rational_string(r: Rational) -> String {
    format!("{}/{}", r.num(), r.den())
}

pub fn analysis_report(m: i64, a: i64) -> crate::error::Result<AnalysisReport> {
    let dec: OverlayDecomposition = overlay_decompose(m, a)?;
    let an = &dec.analysis;
    let dance = an.reduced_dance;
    let spec = classify(dance);
    let envelope = match spec.kind {
        CurveKind::Epicycloid | CurveKind::Hypocycloid => EnvelopeJson::Curve {
            kind: spec.kind.name(),
            fixed_radius: rational_string(spec.fixed_radius),
            rolling_radius: rational_string(spec.rolling_radius),
            cusps: (dance.alpha() - dance.beta()).abs(),
        },
        kind => EnvelopeJson::Degenerate { kind: kind.name() },
    };
    Ok(AnalysisReport {
        m: an.m,
        a: an.a,
        fundamental_dance: DanceJson {
            alpha: 1,
            beta: an.a,
        },
        shortest_vector: [an.shortest_vector.0, an.shortest_vector.1],
        natural_dance: DanceJson {
            alpha: dance.alpha(),
            beta: dance.beta(),
        },
        tie: an.tie,
        d: an.coset_count,
        reduced_rate: an.reduced_rate,
        cosets: dec
            .cosets
            .iter()
            .map(|c| CosetJson {
                k: c.index,
                rotation: c.rotation.map(rational_string),
                line_offset: rational_string(c.line.offset()),
            })
            .collect(),
        envelope,
    })
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("MMT({}, {})\n", self.m, self.a);
        s.push_str(&format!(
            "  natural alias: <{},{}> via shortest vector ({}, {}){}\n",
            self.natural_dance.alpha,
            self.natural_dance.beta,
            self.shortest_vector[0],
            self.shortest_vector[1],
            if self.tie { " (tied)" } else { "" }
        ));
        s.push_str(&format!(
            "  cosets: {} copies of rate {}\n",
            self.d, self.reduced_rate
        ));
        for c in &self.cosets {
            s.push_str(&format!(
                "    k={} offset={} rotation={}\n",
                c.k,
                c.line_offset,
                c.rotation.as_deref().unwrap_or("none")
            ));
        }
        match &self.envelope {
            EnvelopeJson::Curve {
                kind,
                fixed_radius,
                rolling_radius,
                cusps,
            } => s.push_str(&format!(
                "  envelope: {kind}, fixed radius {fixed_radius}, rolling radius {rolling_radius}, {cusps} cusps\n"
            )),
            EnvelopeJson::Degenerate { kind } => s.push_str(&format!("  envelope: {kind}\n")),
        }
        s
    }
}
