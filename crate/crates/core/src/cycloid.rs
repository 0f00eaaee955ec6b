//! Epicycloids and hypocycloids as envelopes of planet dances.
//!
//! The curve of `<α,β>` is
//!
//! ```text
//! x(s) = (α cos 2πβs + β cos 2παs) / (α + β)
//! y(s) = (α sin 2πβs + β sin 2παs) / (α + β)
//! ```
//!
//! with `s` in turns, the same parameter as the dance's time. The chord at
//! time `s` touches the curve at `(β·A + α·B)/(α+β)` where `A`, `B` are the
//! chord's endpoints; this is the curve point at `s` itself.

use std::f64::consts::TAU;

use crate::dances::{dance_chord, reduce_dance, PlanetDance};
use crate::error::{Error, Result};
use crate::kernel::{embed_turn, wrap, Rational, Vec2};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum CurveKind {
    Epicycloid,
    Hypocycloid,
    /// `α + β = 0`: every chord is perpendicular to one diameter, no curve.
    DegenerateDiameter,
    /// Exactly one speed is zero; every chord passes through `(1, 0)`.
    Pivot,
    /// `<0,0>`.
    Point,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Epicycloid => "epicycloid",
            CurveKind::Hypocycloid => "hypocycloid",
            CurveKind::DegenerateDiameter => "degenerate_diameter",
            CurveKind::Pivot => "pivot",
            CurveKind::Point => "point",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CycloidSpec {
    pub alpha: i64,
    pub beta: i64,
    pub kind: CurveKind,
    pub fixed_radius: Rational,
    pub rolling_radius: Rational,
}

impl CycloidSpec {
    /// Largest distance of the curve from the origin, `(|α| + |β|)/|α + β|`.
    pub fn extent(&self) -> f64 {
        match self.kind {
            CurveKind::Epicycloid | CurveKind::Hypocycloid | CurveKind::Pivot => {
                (self.alpha.abs() + self.beta.abs()) as f64 / (self.alpha + self.beta).abs() as f64
            }
            _ => 1.0,
        }
    }

    pub fn has_curve(&self) -> bool {
        matches!(
            self.kind,
            CurveKind::Epicycloid | CurveKind::Hypocycloid | CurveKind::Pivot
        )
    }
}

pub fn classify(d: PlanetDance) -> CycloidSpec {
    let (alpha, beta) = (d.alpha(), d.beta());
    let zero = Rational::ZERO;
    let (kind, fixed_radius, rolling_radius) = if alpha == 0 && beta == 0 {
        (CurveKind::Point, zero, zero)
    } else if alpha + beta == 0 {
        (CurveKind::DegenerateDiameter, zero, zero)
    } else if alpha == 0 || beta == 0 {
        (CurveKind::Pivot, Rational::ONE, zero)
    } else if alpha.signum() == beta.signum() {
        // The curve is symmetric in α ↔ β; radii are read off with β′ <= α′.
        let (hi, lo) = (alpha.abs().max(beta.abs()), alpha.abs().min(beta.abs()));
        (
            CurveKind::Epicycloid,
            Rational::new(hi - lo, hi + lo).expect("positive"),
            Rational::new(lo, hi + lo).expect("positive"),
        )
    } else {
        let sum = (alpha + beta).abs();
        (
            CurveKind::Hypocycloid,
            Rational::new(alpha - beta, sum).expect("nonzero"),
            Rational::new(beta.abs(), sum).expect("nonzero"),
        )
    };
    CycloidSpec {
        alpha,
        beta,
        kind,
        fixed_radius,
        rolling_radius,
    }
}

fn check_curve(alpha: i64, beta: i64) -> Result<()> {
    if alpha + beta == 0 {
        Err(Error::DegenerateCurve { alpha, beta })
    } else {
        Ok(())
    }
}

fn combine(alpha: i64, beta: i64, a: Vec2, b: Vec2) -> Vec2 {
    let sum = (alpha + beta) as f64;
    (a.scale(beta as f64) + b.scale(alpha as f64)).scale(1.0 / sum)
}

/// The curve at real parameter `s` (turns).
pub fn cycloid_point(spec: &CycloidSpec, s: f64) -> Result<Vec2> {
    check_curve(spec.alpha, spec.beta)?;
    let a = embed_turn(spec.alpha as f64 * s);
    let b = embed_turn(spec.beta as f64 * s);
    Ok(combine(spec.alpha, spec.beta, a, b))
}

/// The curve at an exact parameter, reducing both angles modulo one turn
/// before leaving exact arithmetic.
pub fn cycloid_point_exact(spec: &CycloidSpec, s: Rational) -> Result<Vec2> {
    check_curve(spec.alpha, spec.beta)?;
    let a = wrap(s * spec.alpha).embed();
    let b = wrap(s * spec.beta).embed();
    Ok(combine(spec.alpha, spec.beta, a, b))
}

/// Derivative of the curve with respect to `s`.
pub fn cycloid_velocity(spec: &CycloidSpec, s: Rational) -> Result<Vec2> {
    check_curve(spec.alpha, spec.beta)?;
    let (alpha, beta) = (spec.alpha, spec.beta);
    let a = wrap(s * alpha).embed();
    let b = wrap(s * beta).embed();
    let k = TAU * (alpha * beta) as f64 / (alpha + beta) as f64;
    Ok(Vec2::new(-(b.y + a.y), b.x + a.x).scale(k))
}

/// Second derivative of the curve with respect to `s`.
pub fn cycloid_acceleration(spec: &CycloidSpec, s: Rational) -> Result<Vec2> {
    check_curve(spec.alpha, spec.beta)?;
    let (alpha, beta) = (spec.alpha, spec.beta);
    let a = wrap(s * alpha).embed();
    let b = wrap(s * beta).embed();
    let k = -TAU * TAU * (alpha * beta) as f64 / (alpha + beta) as f64;
    Ok((b.scale(beta as f64) + a.scale(alpha as f64)).scale(k))
}

fn require_cusped(d: PlanetDance) -> Result<i64> {
    if d.alpha() == d.beta() {
        return Err(Error::AllChordsDegenerate {
            alpha: d.alpha(),
            beta: d.beta(),
        });
    }
    if reduce_dance(d) != d {
        return Err(Error::InvalidArgument(format!(
            "{d} is not in reduced form"
        )));
    }
    Ok((d.alpha() - d.beta()).abs())
}

/// Parameters of the degenerate chords, `j/|α−β|`: the `|α−β|` places where
/// both planets coincide and the envelope meets the unit circle.
pub fn cusp_parameters(d: PlanetDance) -> Result<Vec<Rational>> {
    let n = require_cusped(d)?;
    Ok((0..n)
        .map(|j| Rational::new(j, n).expect("n > 0"))
        .collect())
}

/// Parameters where the curve has zero speed, `(j + 1/2)/|α−β|`. There are
/// as many as degenerate chords, interleaved with them.
pub fn stationary_parameters(d: PlanetDance) -> Result<Vec<Rational>> {
    let n = require_cusped(d)?;
    Ok((0..n)
        .map(|j| Rational::new(2 * j + 1, 2 * n).expect("n > 0"))
        .collect())
}

fn is_stationary(d: PlanetDance, s: Rational) -> bool {
    let twice = s * (2 * (d.alpha() - d.beta()));
    twice.is_integer() && twice.num().rem_euclid(2) == 1
}

/// The point where the chord at time `s` touches the envelope.
pub fn tangency_point(d: PlanetDance, s: Rational) -> Result<Vec2> {
    check_curve(d.alpha(), d.beta())?;
    let chord = dance_chord(d, s);
    if chord.is_degenerate() {
        return Err(Error::DegenerateChord(s));
    }
    Ok(combine(
        d.alpha(),
        d.beta(),
        chord.start.embed(),
        chord.end.embed(),
    ))
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct EnvelopeReport {
    /// Chords actually checked.
    pub samples: usize,
    pub max_line_distance: f64,
    pub max_parallelism_defect: f64,
    pub skipped_degenerate: usize,
    pub tolerance: f64,
}

impl EnvelopeReport {
    pub fn passed(&self) -> bool {
        self.max_line_distance < self.tolerance && self.max_parallelism_defect < self.tolerance
    }
}

fn line_distance(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    let dir = b - a;
    (dir.cross(p - a) / dir.norm()).abs()
}

fn parallel_defect(u: Vec2, v: Vec2) -> f64 {
    (u.scale(1.0 / u.norm()))
        .cross(v.scale(1.0 / v.norm()))
        .abs()
}

/// Checks that the curve touches every chord of the `n`-sampling: the
/// tangency point lies on the chord's line and the curve's tangent there is
/// parallel to it.
pub fn verify_envelope(d: PlanetDance, n: usize, tol: f64) -> Result<EnvelopeReport> {
    check_curve(d.alpha(), d.beta())?;
    if d.alpha() == d.beta() {
        return Err(Error::AllChordsDegenerate {
            alpha: d.alpha(),
            beta: d.beta(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let spec = classify(d);
    let mut report = EnvelopeReport {
        samples: 0,
        max_line_distance: 0.0,
        max_parallelism_defect: 0.0,
        skipped_degenerate: 0,
        tolerance: tol,
    };
    for k in 0..n {
        let s = Rational::new(k as i64, n as i64)?;
        let chord = dance_chord(d, s);
        if chord.is_degenerate() {
            report.skipped_degenerate += 1;
            continue;
        }
        let (a, b) = (chord.start.embed(), chord.end.embed());
        let p = tangency_point(d, s)?;
        report.max_line_distance = report.max_line_distance.max(line_distance(a, b, p));
        // A pivot curve is a single point: there is no tangent to compare.
        if spec.kind != CurveKind::Pivot {
            let tangent = if is_stationary(d, s) {
                cycloid_acceleration(&spec, s)?
            } else {
                cycloid_velocity(&spec, s)?
            };
            report.max_parallelism_defect = report
                .max_parallelism_defect
                .max(parallel_defect(b - a, tangent));
        }
        report.samples += 1;
    }
    Ok(report)
}

/// Radius of the circle enveloped by chords of constant angular separation
/// `c` (chords from `θ` to `θ + c`): `|cos πc|`.
pub fn constant_separation_radius(c: Rational) -> f64 {
    (std::f64::consts::PI * c.to_f64()).cos().abs()
}

/// Envelope check for a family of chords from `k/n` to `k/n + c`, the shape
/// of an overlay coset whose alias is the diagonal `<1,1>`.
pub fn verify_constant_separation(c: Rational, n: usize, tol: f64) -> Result<EnvelopeReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let radius = constant_separation_radius(c);
    let mut report = EnvelopeReport {
        samples: 0,
        max_line_distance: 0.0,
        max_parallelism_defect: 0.0,
        skipped_degenerate: 0,
        tolerance: tol,
    };
    for k in 0..n {
        let s = Rational::new(k as i64, n as i64)?;
        let (start, end) = (wrap(s), wrap(s + c));
        if start == end {
            report.skipped_degenerate += 1;
            continue;
        }
        let (a, b) = (start.embed(), end.embed());
        // Foot of the perpendicular from the centre is the touching point.
        let dir = b - a;
        let t = -a.dot(dir) / dir.dot(dir);
        let foot = a + dir.scale(t);
        report.max_line_distance = report.max_line_distance.max((foot.norm() - radius).abs());
        if radius > tol {
            let tangent = Vec2::new(-foot.y, foot.x);
            report.max_parallelism_defect = report
                .max_parallelism_defect
                .max(parallel_defect(dir, tangent));
        }
        report.samples += 1;
    }
    Ok(report)
}
