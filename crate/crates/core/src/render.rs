//! Deterministic SVG scenes.
//!
//! Output is a pure function of the inputs: element order is fixed, every
//! real is printed with six decimals, and `-0.000000` never appears.

use std::fmt::Write as _;

use crate::cycloid::{classify, cycloid_point, CurveKind};
use crate::dances::{mmt_chords, sample_at, PlanetDance, StitchGraph};
use crate::error::{Error, Result};
use crate::kernel::{ChordSet, DirectedChord, Rational, Vec2};
use crate::overlay::{
    coset_line, nearest_residue, overlay_decompose, FamilyKind, OverlayDecomposition,
};
use crate::torusgeo::{natural_alias, AliasAnalysis, TorusLine};

pub const CURVE_SEGMENTS: usize = 1024;

const BACKGROUND: &str = "#ffffff";
const OUTLINE: &str = "#444444";
const POINT: &str = "#000000";
const FUNDAMENTAL: &str = "#b0b0b0";
const CURVE: &str = "#e6550d";

#[derive(Clone, Debug, PartialEq)]
pub struct RenderStyle {
    pub canvas_px: u32,
    pub margin_px: u32,
    pub stroke_width: f64,
    pub show_points: bool,
    pub extend_lines: bool,
    pub coset_palette: Vec<String>,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            canvas_px: 800,
            margin_px: 40,
            stroke_width: 0.75,
            show_points: true,
            extend_lines: false,
            coset_palette: [
                "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
            ]
            .iter()
            .map(|c| c.to_string())
            .collect(),
        }
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<()> {
        if self.canvas_px == 0 {
            return Err(Error::InvalidArgument(
                "canvas size must be positive".into(),
            ));
        }
        if 2 * self.margin_px >= self.canvas_px {
            return Err(Error::InvalidArgument(
                "margin leaves no drawing area".into(),
            ));
        }
        if !(self.stroke_width > 0.0 && self.stroke_width.is_finite()) {
            return Err(Error::InvalidArgument(
                "stroke width must be positive".into(),
            ));
        }
        if self.coset_palette.is_empty() {
            return Err(Error::InvalidArgument("palette must not be empty".into()));
        }
        for c in &self.coset_palette {
            let hex = c.strip_prefix('#').unwrap_or("");
            if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(Error::InvalidArgument(format!(
                    "palette color {c:?} is not #rrggbb"
                )));
            }
        }
        Ok(())
    }

    fn color(&self, k: usize) -> &str {
        &self.coset_palette[k % self.coset_palette.len()]
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SvgDocument {
    pub bytes: Vec<u8>,
}

impl SvgDocument {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.bytes).expect("documents are built from strings")
    }

    /// Number of elements carrying exactly this class attribute.
    pub fn count_class(&self, class: &str) -> usize {
        self.as_str().matches(&format!("class=\"{class}\"")).count()
    }
}

impl std::fmt::Debug for SvgDocument {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SvgDocument({} bytes)", self.bytes.len())
    }
}

fn num(v: f64) -> String {
    debug_assert!(v.is_finite());
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// A square panel of the canvas with its own world-to-pixel map.
#[derive(Clone, Copy)]
struct Frame {
    x0: f64,
    y0: f64,
    size: f64,
    margin: f64,
}

impl Frame {
    fn inner(&self) -> f64 {
        self.size - 2.0 * self.margin
    }
}

/// Maps the disc of radius `radius` onto a frame, y up.
#[derive(Clone, Copy)]
struct DiscView {
    frame: Frame,
    radius: f64,
}

impl DiscView {
    fn px(&self, p: Vec2) -> Vec2 {
        let f = self.frame;
        let scale = f.inner() / (2.0 * self.radius);
        Vec2::new(
            f.x0 + f.size / 2.0 + p.x * scale,
            f.y0 + f.size / 2.0 - p.y * scale,
        )
    }

    fn unit_px(&self) -> f64 {
        self.frame.inner() / (2.0 * self.radius)
    }
}

/// Maps the unit square onto a frame, y up.
#[derive(Clone, Copy)]
struct SquareView {
    frame: Frame,
}

impl SquareView {
    fn px(&self, x: f64, y: f64) -> Vec2 {
        let f = self.frame;
        Vec2::new(
            f.x0 + f.margin + x * f.inner(),
            f.y0 + f.size - f.margin - y * f.inner(),
        )
    }
}

struct Svg {
    body: String,
}

impl Svg {
    fn new() -> Self {
        Svg {
            body: String::new(),
        }
    }

    fn line(&mut self, class: &str, a: Vec2, b: Vec2, color: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{}"/>"#,
            num(a.x),
            num(a.y),
            num(b.x),
            num(b.y),
            num(width)
        );
    }

    fn dot(&mut self, class: &str, c: Vec2, r: f64, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{}" cy="{}" r="{}" fill="{color}"/>"#,
            num(c.x),
            num(c.y),
            num(r)
        );
    }

    fn ring(&mut self, c: Vec2, r: f64, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<circle class="outline" cx="{}" cy="{}" r="{}" fill="none" stroke="{OUTLINE}" stroke-width="{}"/>"#,
            num(c.x),
            num(c.y),
            num(r),
            num(width)
        );
    }

    fn rect(
        &mut self,
        class: &str,
        a: Vec2,
        w: f64,
        h: f64,
        fill: &str,
        stroke: Option<(&str, f64)>,
    ) {
        let stroke = match stroke {
            Some((color, width)) => format!(r#" stroke="{color}" stroke-width="{}""#, num(width)),
            None => String::new(),
        };
        let _ = writeln!(
            self.body,
            r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" fill="{fill}"{stroke}/>"#,
            num(a.x),
            num(a.y),
            num(w),
            num(h)
        );
    }

    fn polyline(&mut self, class: &str, pts: &[Vec2], color: &str, width: f64) {
        let coords: Vec<String> = pts
            .iter()
            .map(|p| format!("{},{}", num(p.x), num(p.y)))
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline class="{class}" points="{}" fill="none" stroke="{color}" stroke-width="{}"/>"#,
            coords.join(" "),
            num(width)
        );
    }

    fn finish(self, width: u32, height: u32) -> SvgDocument {
        let mut s = String::with_capacity(self.body.len() + 256);
        s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        );
        let _ = writeln!(
            s,
            r#"<rect x="0" y="0" width="{width}" height="{height}" fill="{BACKGROUND}"/>"#
        );
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        SvgDocument {
            bytes: s.into_bytes(),
        }
    }
}

fn full_frame(style: &RenderStyle) -> Frame {
    Frame {
        x0: 0.0,
        y0: 0.0,
        size: style.canvas_px as f64,
        margin: style.margin_px as f64,
    }
}

/// Clips the infinite line through `a` and `b` to the frame's box.
fn clip_to_frame(a: Vec2, b: Vec2, f: Frame) -> Option<(Vec2, Vec2)> {
    let d = b - a;
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for (p, dp, lo, hi) in [
        (a.x, d.x, f.x0, f.x0 + f.size),
        (a.y, d.y, f.y0, f.y0 + f.size),
    ] {
        if dp.abs() < 1e-12 {
            if p < lo || p > hi {
                return None;
            }
            continue;
        }
        let (ta, tb) = ((lo - p) / dp, (hi - p) / dp);
        t0 = t0.max(ta.min(tb));
        t1 = t1.min(ta.max(tb));
    }
    (t0 < t1).then(|| (a + d.scale(t0), a + d.scale(t1)))
}

fn boundary_points(chords: &ChordSet) -> Vec<Vec2> {
    let mut turns: Vec<Rational> = chords
        .iter()
        .flat_map(|c| [c.start.turn(), c.end.turn()])
        .collect();
    turns.sort();
    turns.dedup();
    turns
        .into_iter()
        .map(|t| crate::kernel::wrap(t).embed())
        .collect()
}

/// Circle, optional boundary points, then the chords in the given groups
/// and colors.
fn draw_stitch(
    svg: &mut Svg,
    view: DiscView,
    groups: &[(&ChordSet, &str)],
    style: &RenderStyle,
    extend: bool,
) {
    let w = style.stroke_width;
    svg.ring(view.px(Vec2::new(0.0, 0.0)), view.unit_px(), w);
    if style.show_points {
        let all: ChordSet = groups.iter().flat_map(|(c, _)| c.iter().copied()).collect();
        for p in boundary_points(&all) {
            svg.dot("point", view.px(p), 1.5 * w + 0.5, POINT);
        }
    }
    for (chords, color) in groups {
        for c in chords.iter() {
            draw_chord(svg, view, c, color, w, extend);
        }
    }
}

fn draw_chord(svg: &mut Svg, view: DiscView, c: &DirectedChord, color: &str, w: f64, extend: bool) {
    let (a, b) = (view.px(c.start.embed()), view.px(c.end.embed()));
    if c.is_degenerate() {
        svg.dot("degenerate", a, 2.5 * w + 1.0, color);
        return;
    }
    let (a, b) = if extend {
        clip_to_frame(a, b, view.frame).unwrap_or((a, b))
    } else {
        (a, b)
    };
    svg.line("chord", a, b, color, w);
}

pub fn render_stitch(chords: &ChordSet, style: &RenderStyle) -> Result<SvgDocument> {
    style.validate()?;
    let mut svg = Svg::new();
    let view = DiscView {
        frame: full_frame(style),
        radius: 1.0,
    };
    draw_stitch(
        &mut svg,
        view,
        &[(chords, style.color(0))],
        style,
        style.extend_lines,
    );
    Ok(svg.finish(style.canvas_px, style.canvas_px))
}

/// Pieces of a torus line inside the unit square, in order along the line.
///
/// The line is unrolled from its base point over one full period and cut
/// where either coordinate crosses an integer.
pub fn torus_segments(line: &TorusLine) -> Vec<((Rational, Rational), (Rational, Rational))> {
    let d = line.direction();
    let (alpha, beta) = (d.alpha(), d.beta());
    let c = line.offset();
    let base = if alpha == 0 {
        (c, Rational::ZERO)
    } else {
        (Rational::ZERO, c)
    };
    let at = |t: Rational| (base.0 + t * alpha, base.1 + t * beta);
    let mut cuts = vec![Rational::ZERO, Rational::ONE];
    for (speed, start) in [(alpha, base.0), (beta, base.1)] {
        if speed == 0 {
            continue;
        }
        let end = start + Rational::from_int(speed);
        let (lo, hi) = if start < end {
            (start, end)
        } else {
            (end, start)
        };
        for j in lo.floor()..=hi.floor() + 1 {
            let t = (Rational::from_int(j) - start) / speed;
            if t > Rational::ZERO && t < Rational::ONE {
                cuts.push(t);
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let mid = at((w[0] + w[1]) / 2);
            let (sx, sy) = (
                Rational::from_int(mid.0.floor()),
                Rational::from_int(mid.1.floor()),
            );
            let (p, q) = (at(w[0]), at(w[1]));
            ((p.0 - sx, p.1 - sy), (q.0 - sx, q.1 - sy))
        })
        .collect()
}

fn draw_torus(
    svg: &mut Svg,
    view: SquareView,
    analysis: &AliasAnalysis,
    style: &RenderStyle,
) -> Result<()> {
    let w = style.stroke_width;
    let f = view.frame;
    svg.rect(
        "square",
        view.px(0.0, 1.0),
        f.inner(),
        f.inner(),
        "none",
        Some((OUTLINE, w)),
    );
    let g = StitchGraph::new(analysis.m, analysis.a)?;
    let fundamental = crate::torusgeo::fundamental_line(g);
    let draw_line = |svg: &mut Svg, line: &TorusLine, class: &str, color: &str| {
        for (p, q) in torus_segments(line) {
            svg.line(
                class,
                view.px(p.0.to_f64(), p.1.to_f64()),
                view.px(q.0.to_f64(), q.1.to_f64()),
                color,
                w,
            );
        }
    };
    draw_line(svg, &fundamental, "fundamental", FUNDAMENTAL);
    for k in 0..analysis.coset_count {
        draw_line(
            svg,
            &coset_line(analysis, k),
            "alias",
            style.color(k as usize),
        );
    }
    for k in 0..analysis.m {
        let pt = g.chord(k).torus_point();
        svg.dot(
            "sample",
            view.px(pt.x.turn().to_f64(), pt.y.turn().to_f64()),
            1.5 * w + 0.5,
            POINT,
        );
    }
    Ok(())
}

/// Unit-square torus with the fundamental line, each coset's alias line
/// and the `m` sample points.
pub fn render_torus(
    m: i64,
    a: i64,
    analysis: &AliasAnalysis,
    style: &RenderStyle,
) -> Result<SvgDocument> {
    style.validate()?;
    if (analysis.m, analysis.a) != (m, a.rem_euclid(m.max(1))) {
        return Err(Error::InvalidArgument(format!(
            "analysis is for ({}, {}), not ({m}, {a})",
            analysis.m, analysis.a
        )));
    }
    let mut svg = Svg::new();
    draw_torus(
        &mut svg,
        SquareView {
            frame: full_frame(style),
        },
        analysis,
        style,
    )?;
    Ok(svg.finish(style.canvas_px, style.canvas_px))
}

/// The stitch graph with each coset in its own palette color.
pub fn render_overlay(dec: &OverlayDecomposition, style: &RenderStyle) -> Result<SvgDocument> {
    style.validate()?;
    let mut svg = Svg::new();
    let view = DiscView {
        frame: full_frame(style),
        radius: 1.0,
    };
    let groups: Vec<(&ChordSet, &str)> = dec
        .cosets
        .iter()
        .enumerate()
        .map(|(k, c)| (&c.chords, style.color(k)))
        .collect();
    draw_stitch(&mut svg, view, &groups, style, style.extend_lines);
    Ok(svg.finish(style.canvas_px, style.canvas_px))
}

/// An `n`-sample of the dance with its envelope, when the dance has one.
pub fn render_dance_with_curve(d: PlanetDance, n: i64, style: &RenderStyle) -> Result<SvgDocument> {
    style.validate()?;
    let chords = sample_at(d, n)?;
    let spec = classify(d);
    let drawable = matches!(spec.kind, CurveKind::Epicycloid | CurveKind::Hypocycloid);
    let extend = style.extend_lines || spec.kind == CurveKind::Hypocycloid;
    let view = DiscView {
        frame: full_frame(style),
        radius: if drawable {
            spec.extent().max(1.0)
        } else {
            1.0
        },
    };
    let mut svg = Svg::new();
    draw_stitch(&mut svg, view, &[(&chords, style.color(0))], style, extend);
    if drawable {
        let pts = (0..=CURVE_SEGMENTS)
            .map(|i| cycloid_point(&spec, i as f64 / CURVE_SEGMENTS as f64).map(|p| view.px(p)))
            .collect::<Result<Vec<_>>>()?;
        svg.polyline("curve", &pts, CURVE, 2.0 * style.stroke_width);
    }
    Ok(svg.finish(style.canvas_px, style.canvas_px))
}

#[derive(Clone, Debug)]
pub struct GridCell {
    pub b: i64,
    pub r: i64,
    pub m: i64,
    pub a: i64,
    pub svg: SvgDocument,
}

/// Maps `f` over `items` on scoped worker threads; output keeps input order.
fn ordered_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .max(1);
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                scope.spawn(move || c.iter().map(f).collect::<Vec<U>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("render worker panicked"))
            .collect()
    })
}

/// One stitch graph per `(b, r)` with `2 <= b <= b_max`, `1 <= r < b`, using
/// the modulus nearest `m_target` congruent to `r` mod `b`.
pub fn render_grid(
    m_target: i64,
    b_max: i64,
    kind: FamilyKind,
    style: &RenderStyle,
) -> Result<Vec<GridCell>> {
    style.validate()?;
    if b_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "b_max must be at least 2, got {b_max}"
        )));
    }
    if m_target < 1 {
        return Err(Error::InvalidArgument(format!(
            "target modulus must be positive, got {m_target}"
        )));
    }
    crate::kernel::check_magnitude("m_target", m_target)?;
    crate::kernel::check_magnitude("b_max", b_max)?;
    let mut params = Vec::new();
    for b in 2..=b_max {
        for r in 1..b {
            let m = nearest_residue(m_target, b, r);
            params.push((b, r, m, kind.multiplier(m, b)));
        }
    }
    ordered_map(&params, |&(b, r, m, a)| {
        let g = StitchGraph::new(m, a)?;
        Ok(GridCell {
            b,
            r,
            m,
            a,
            svg: render_stitch(&mmt_chords(g), style)?,
        })
    })
    .into_iter()
    .collect()
}

/// For each pair, the torus diagram beside the stitch graph on a canvas
/// twice as wide.
pub fn render_gallery(pairs: &[(i64, i64)], style: &RenderStyle) -> Result<Vec<SvgDocument>> {
    style.validate()?;
    ordered_map(pairs, |&(m, a)| {
        let g = StitchGraph::new(m, a)?;
        let analysis = natural_alias(m, a)?;
        let dec = overlay_decompose(m, a)?;
        let left = full_frame(style);
        let right = Frame {
            x0: left.size,
            ..left
        };
        let mut svg = Svg::new();
        draw_torus(&mut svg, SquareView { frame: left }, &analysis, style)?;
        let groups: Vec<(&ChordSet, &str)> = dec
            .cosets
            .iter()
            .enumerate()
            .map(|(k, c)| (&c.chords, style.color(k)))
            .collect();
        debug_assert_eq!(
            groups.iter().map(|(c, _)| c.len()).sum::<usize>(),
            mmt_chords(g).len()
        );
        draw_stitch(
            &mut svg,
            DiscView {
                frame: right,
                radius: 1.0,
            },
            &groups,
            style,
            style.extend_lines,
        );
        Ok(svg.finish(2 * style.canvas_px, style.canvas_px))
    })
    .into_iter()
    .collect()
}
