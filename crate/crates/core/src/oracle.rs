//! Brute-force counterparts of the closed forms, and the suite runner behind
//! `stitchlab verify`.
//!
//! Nothing here calls the closed form it checks: nearest sample points are
//! found by scanning every sample, intersections by clipping both lines into
//! the unit square and intersecting segments, tangency by searching the curve.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cycloid::{classify, cycloid_point, verify_envelope, CurveKind};
use crate::dances::{
    dance_chord, mmt_chords, reduce_dance, sample_speeds, PlanetDance, StitchGraph,
};
use crate::error::{Error, Result};
use crate::kernel::{centered_lift, gcd, wrap, CirclePoint, Rational, TorusPoint, Vec2};
use crate::overlay::{
    nearest_residue, overlay_decompose, predict_family, rotation_class, FamilyKind,
};
use crate::torusgeo::{
    intersection_count, lattice_minimum, line_contains, LatticeMinimum, TorusLine,
};

/// Nearest sample point to the origin, found by scanning all of them.
pub fn brute_nearest(m: i64, a: i64) -> Result<(i64, i64)> {
    brute_lattice_minimum(m, a).map(|l| l.vector)
}

/// Like [`brute_nearest`] but also reports whether the minimum is shared by
/// a second direction.
pub fn brute_lattice_minimum(m: i64, a: i64) -> Result<LatticeMinimum> {
    let g = StitchGraph::new(m, a)?;
    let a = g.multiplier();
    // Scaled lifts of a residue r/m closest to zero; both signs at exactly m/2.
    let lifts = |r: i64| -> Vec<i64> {
        let c = centered_lift(wrap(Rational::new(r, m).expect("m >= 1"))) * m;
        let c = c.num();
        if 2 * c == m {
            vec![c, -c]
        } else {
            vec![c]
        }
    };
    let mut candidates: Vec<(i64, i64)> = vec![(m, 0), (0, m)];
    for k in 1..m {
        for p in lifts(k) {
            for q in lifts((a * k) % m) {
                candidates.push((p, q));
            }
        }
    }
    let oriented: BTreeSet<(i64, i64)> = candidates
        .into_iter()
        .map(|(p, q)| {
            if p < 0 || (p == 0 && q < 0) {
                (-p, -q)
            } else {
                (p, q)
            }
        })
        .collect();
    let norm = |v: &(i64, i64)| v.0 * v.0 + v.1 * v.1;
    let min = oriented.iter().map(norm).min().expect("nonempty");
    let minimizers: Vec<(i64, i64)> = oriented.into_iter().filter(|v| norm(v) == min).collect();
    let vector = *minimizers
        .iter()
        .min_by_key(|(p, q)| (!(p * q > 0), q.abs()))
        .expect("nonempty");
    Ok(LatticeMinimum {
        vector,
        tie: minimizers.len() > 1,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Intersections {
    Count(u64),
    Coincident,
}

type RPoint = (Rational, Rational);

/// The closed loop of a dance through the origin, cut into straight pieces
/// inside the unit square.
fn unit_square_segments(d: PlanetDance) -> Vec<(RPoint, RPoint)> {
    let (alpha, beta) = (d.alpha(), d.beta());
    let mut cuts: BTreeSet<Rational> = BTreeSet::new();
    cuts.insert(Rational::ZERO);
    cuts.insert(Rational::ONE);
    for speed in [alpha, beta] {
        for j in 1..speed.abs() {
            cuts.insert(Rational::new(j, speed.abs()).expect("nonzero"));
        }
    }
    let cuts: Vec<Rational> = cuts.into_iter().collect();
    cuts.windows(2)
        .map(|w| {
            let (t0, t1) = (w[0], w[1]);
            let mid = (t0 + t1) / 2;
            let sx = Rational::from_int((mid * alpha).floor());
            let sy = Rational::from_int((mid * beta).floor());
            (
                (t0 * alpha - sx, t0 * beta - sy),
                (t1 * alpha - sx, t1 * beta - sy),
            )
        })
        .collect()
}

fn cross(u: RPoint, v: RPoint) -> Rational {
    u.0 * v.1 - u.1 * v.0
}

fn sub(u: RPoint, v: RPoint) -> RPoint {
    (u.0 - v.0, u.1 - v.1)
}

fn in_unit(u: Rational) -> bool {
    u >= Rational::ZERO && u <= Rational::ONE
}

/// Counts the common points of two torus lines through the origin by
/// intersecting their pieces in the unit square.
pub fn brute_intersections(d1: PlanetDance, d2: PlanetDance) -> Result<Intersections> {
    for d in [d1, d2] {
        if d.is_null() || reduce_dance(d) != d {
            return Err(Error::InvalidArgument(format!(
                "{d} must be reduced and nonzero"
            )));
        }
    }
    let mut points: BTreeSet<TorusPoint> = BTreeSet::new();
    for &(p0, p1) in &unit_square_segments(d1) {
        let r = sub(p1, p0);
        for &(q0, q1) in &unit_square_segments(d2) {
            let s = sub(q1, q0);
            let denom = cross(r, s);
            let qp = sub(q0, p0);
            if denom.is_zero() {
                // Parallel pieces: overlapping collinear pieces mean the loops coincide.
                if cross(qp, r).is_zero() {
                    let rr = r.0 * r.0 + r.1 * r.1;
                    let t0 = (qp.0 * r.0 + qp.1 * r.1) / rr;
                    let qp1 = sub(q1, p0);
                    let t1 = (qp1.0 * r.0 + qp1.1 * r.1) / rr;
                    let (lo, hi) = (t0.min(t1), t0.max(t1));
                    if lo < Rational::ONE && hi > Rational::ZERO {
                        return Ok(Intersections::Coincident);
                    }
                }
                continue;
            }
            let u = cross(qp, s) / denom;
            let v = cross(qp, r) / denom;
            if in_unit(u) && in_unit(v) {
                points.insert(TorusPoint::new(p0.0 + r.0 * u, p0.1 + r.1 * u));
            }
        }
    }
    // Crossings on the square's boundary can pair a piece end with a
    // translate of it, so test every end against each boundary copy.
    let ends1: Vec<RPoint> = unit_square_segments(d1)
        .into_iter()
        .flat_map(|(p, q)| [p, q])
        .collect();
    let segs2 = unit_square_segments(d2);
    for p in ends1 {
        for copy in boundary_copies(p) {
            if segs2.iter().any(|&(q0, q1)| on_segment(copy, q0, q1)) {
                points.insert(TorusPoint::new(copy.0, copy.1));
            }
        }
    }
    Ok(Intersections::Count(points.len() as u64))
}

fn boundary_copies(p: RPoint) -> Vec<RPoint> {
    let shifts = |c: Rational| -> Vec<Rational> {
        if c.is_zero() {
            vec![c, Rational::ONE]
        } else if c == Rational::ONE {
            vec![c, Rational::ZERO]
        } else {
            vec![c]
        }
    };
    shifts(p.0)
        .into_iter()
        .flat_map(|x| shifts(p.1).into_iter().map(move |y| (x, y)))
        .collect()
}

fn on_segment(p: RPoint, q0: RPoint, q1: RPoint) -> bool {
    let r = sub(q1, q0);
    let w = sub(p, q0);
    if !cross(w, r).is_zero() {
        return false;
    }
    let t = (w.0 * r.0 + w.1 * r.1) / (r.0 * r.0 + r.1 * r.1);
    in_unit(t)
}

/// Membership by walking the loop: a point is on the line if one of the
/// `|α|` parameters that reproduce its x coordinate also reproduces y.
pub fn brute_line_contains(line: &TorusLine, pt: &TorusPoint) -> bool {
    let d = line.direction();
    let (alpha, beta) = (d.alpha(), d.beta());
    if alpha == 0 {
        return pt.x == wrap(line.offset());
    }
    (0..alpha).any(|j| {
        let t = (pt.x.turn() + Rational::from_int(j)) / alpha;
        wrap(t * beta + line.offset()) == pt.y
    })
}

const TANGENCY_GRID: usize = 4096;
const TANGENCY_REFINE_STEPS: usize = 40;
const STATIONARY_SPEED: f64 = 1e-2;

/// Searches the curve for the point where it touches the chord at time `s`:
/// a local minimum of the distance to the chord's line where the curve stays
/// on one side of it.
pub fn brute_tangency(d: PlanetDance, s: Rational) -> Result<Vec2> {
    let spec = classify(d);
    if d.alpha() + d.beta() == 0 {
        return Err(Error::DegenerateCurve {
            alpha: d.alpha(),
            beta: d.beta(),
        });
    }
    let chord = dance_chord(d, s);
    if chord.is_degenerate() {
        return Err(Error::DegenerateChord(s));
    }
    let (a, b) = (chord.start.embed(), chord.end.embed());
    let dir = b - a;
    let len = dir.norm();
    let curve = |u: f64| cycloid_point(&spec, u).expect("alpha + beta != 0");
    let signed = |u: f64| dir.cross(curve(u) - a) / len;

    let n = TANGENCY_GRID;
    let step = 1.0 / n as f64;
    let f: Vec<f64> = (0..n).map(|i| signed(i as f64 * step)).collect();
    // (distance, circular distance to s, parameter)
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..n {
        let (prev, here, next) = (f[(i + n - 1) % n], f[i], f[(i + 1) % n]);
        if here.abs() > prev.abs() || here.abs() > next.abs() {
            continue;
        }
        let (mut lo, mut hi) = ((i as f64 - 1.0) * step, (i as f64 + 1.0) * step);
        for _ in 0..TANGENCY_REFINE_STEPS {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if signed(m1).abs() <= signed(m2).abs() {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let u = 0.5 * (lo + hi);
        // A touch keeps the curve on one side of the line, unless the curve
        // stops there (a cusp), where its two branches straddle the tangent.
        let one_sided = signed(u - step) * signed(u + step) >= 0.0;
        let h = 1e-6;
        let speed = curve(u + h).distance(curve(u - h)) / (2.0 * h);
        if !one_sided && speed > STATIONARY_SPEED {
            continue;
        }
        let dist = signed(u).abs();
        let delta = (u - s.to_f64()).rem_euclid(1.0);
        let circular = delta.min(1.0 - delta);
        // Prefer the closest touch; among equally close touches (symmetric
        // bitangents) prefer the one nearest the chord's own time.
        let better = match best {
            None => true,
            Some((bd, bc, _)) => dist < bd - 1e-12 || (dist <= bd + 1e-12 && circular < bc),
        };
        if better {
            best = Some((dist, circular, u));
        }
    }
    best.map(|(_, _, u)| curve(u))
        .ok_or_else(|| Error::InvalidArgument(format!("no touching point found for {d} at {s}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of one verification suite. Passed iff `failures` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases_run: u64,
    /// Total number of failing cases; `failures` keeps the first few.
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    /// Observations that are reported rather than asserted.
    pub notes: Vec<String>,
}

const KEPT_FAILURES: usize = 20;

impl VerificationReport {
    fn new(suite: &str) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            cases_run: 0,
            failure_count: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(
        &mut self,
        ok: bool,
        input: impl FnOnce() -> String,
        expected: impl ToString,
        actual: impl ToString,
    ) {
        self.cases_run += 1;
        if !ok {
            self.fail(input(), expected, actual);
        }
    }

    fn fail(&mut self, input: String, expected: impl ToString, actual: impl ToString) {
        self.failure_count += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(Failure {
                input,
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub max_m: i64,
    pub dance_bound: i64,
    /// Name of a suite that records a synthetic failure; exercises the
    /// failure path of callers.
    pub inject_fault: Option<String>,
}

/// Every reduced, canonically oriented dance with coordinates in `[-bound, bound]`,
/// excluding `<0,0>`.
pub fn reduced_dances(bound: i64) -> Vec<PlanetDance> {
    let mut out = BTreeSet::new();
    for alpha in 0..=bound {
        for beta in -bound..=bound {
            if (alpha, beta) == (0, 0) {
                continue;
            }
            let d = PlanetDance::oriented(alpha, beta);
            if gcd(alpha, beta) == 1 {
                out.insert(d);
            }
        }
    }
    out.into_iter().collect()
}

pub fn suite_fundamental_correspondence(max_m: i64) -> VerificationReport {
    let mut r = VerificationReport::new("fundamental_correspondence");
    for m in 1..=max_m {
        for a in 0..m {
            let g = StitchGraph::new(m, a).expect("valid");
            let ok = mmt_chords(g) == sample_speeds(1, a, m);
            r.check(
                ok,
                || format!("MMT({m},{a})"),
                "equal to sample(<1,a>, m)",
                "differs",
            );
        }
    }
    r
}

pub fn suite_aliasing(bound: i64) -> VerificationReport {
    let mut r = VerificationReport::new("aliasing");
    let dances = reduced_dances(bound);
    for (i, &d1) in dances.iter().enumerate() {
        for &d2 in &dances[i + 1..] {
            let m = intersection_count(d1, d2).expect("reduced") as i64;
            if m < 1 {
                continue;
            }
            let ok =
                sample_speeds(d1.alpha(), d1.beta(), m) == sample_speeds(d2.alpha(), d2.beta(), m);
            r.check(
                ok,
                || format!("{d1} vs {d2} at m = {m}"),
                "equal samplings",
                "differ",
            );
        }
    }
    r
}

pub fn suite_intersections(bound: i64) -> VerificationReport {
    let mut r = VerificationReport::new("intersection_count");
    let dances = reduced_dances(bound);
    for (i, &d1) in dances.iter().enumerate() {
        for &d2 in &dances[i..] {
            let formula = intersection_count(d1, d2).expect("reduced");
            let brute = brute_intersections(d1, d2).expect("reduced");
            let expected = if formula == 0 {
                Intersections::Coincident
            } else {
                Intersections::Count(formula)
            };
            r.check(
                brute == expected,
                || format!("{d1} vs {d2}"),
                format!("{expected:?}"),
                format!("{brute:?}"),
            );
        }
    }
    r
}

pub fn suite_shift_identity(max_m: i64, bound: i64) -> VerificationReport {
    let mut r = VerificationReport::new("shift_identity");
    for m in 1..=max_m.min(60) {
        for alpha in -bound..=bound {
            for a in -bound..=bound {
                let base = sample_speeds(alpha, alpha * a, m);
                let up = sample_speeds(alpha, alpha * a + m, m);
                let down = sample_speeds(alpha, alpha * a - m, m);
                r.check(
                    base == up && base == down,
                    || format!("alpha = {alpha}, a = {a}, m = {m}"),
                    "all three samplings equal",
                    "differ",
                );
            }
        }
    }
    r
}

pub fn suite_invertibility(max_m: i64) -> VerificationReport {
    let mut r = VerificationReport::new("invertibility");
    for m in 1..=max_m.min(60) {
        for alpha in 1..=12 {
            for a in 0..m {
                let same = sample_speeds(1, a, m) == sample_speeds(alpha, alpha * a, m);
                let unit = gcd(alpha, m) == 1;
                r.check(
                    same == unit,
                    || format!("alpha = {alpha}, a = {a}, m = {m}"),
                    format!("equal = {unit}"),
                    format!("equal = {same}"),
                );
            }
        }
    }
    r
}

pub fn suite_shortest_vector(max_m: i64) -> VerificationReport {
    let mut r = VerificationReport::new("shortest_vector");
    let mut gcd_is_d = 0u64;
    for m in 1..=max_m {
        for a in 0..m {
            let fast = lattice_minimum(m, a).expect("valid");
            let slow = brute_lattice_minimum(m, a).expect("valid");
            let norm = |v: (i64, i64)| v.0 * v.0 + v.1 * v.1;
            r.check(
                norm(fast.vector) == norm(slow.vector) && fast == slow,
                || format!("({m},{a})"),
                format!("{:?}", slow),
                format!("{:?}", fast),
            );
            let alias = crate::torusgeo::natural_alias(m, a).expect("valid");
            let (p, q) = alias.shortest_vector;
            if gcd(p, q) == alias.coset_count {
                gcd_is_d += 1;
            } else {
                r.notes.push(format!("gcd(p,q) != d at ({m},{a})"));
            }
        }
    }
    r.notes.push(format!(
        "gcd of the shortest vector equals d in {gcd_is_d} of {} cases",
        r.cases_run
    ));
    r
}

pub fn suite_overlay(max_m: i64) -> VerificationReport {
    let mut r = VerificationReport::new("overlay_partition");
    for m in 1..=max_m {
        for a in 0..m {
            let g = StitchGraph::new(m, a).expect("valid");
            let dec = overlay_decompose(m, a).expect("valid");
            let d = dec.analysis.coset_count;
            let mut union: BTreeSet<_> = BTreeSet::new();
            let mut total = 0;
            let mut colinear = true;
            for c in &dec.cosets {
                total += c.chords.len();
                union.extend(c.chords.iter().copied());
                colinear &= (0..m / d)
                    .all(|j| line_contains(&c.line, &g.chord(c.index + d * j).torus_point()));
                if let Some(rot) = c.rotation {
                    colinear &= line_contains(&c.line, &TorusPoint::new(rot, rot));
                }
            }
            let all: BTreeSet<_> = mmt_chords(g).iter().copied().collect();
            let ok = total as i64 == m && union == all && colinear;
            r.check(
                ok,
                || format!("MMT({m},{a}), d = {d}"),
                "disjoint colinear cosets covering the graph",
                "violated",
            );
        }
    }
    r
}

pub fn suite_families(bound: i64) -> VerificationReport {
    let mut r = VerificationReport::new("family_predictions");
    let mut floor_mismatch = 0;
    let mut floor_cases = 0;
    for b in 2..=(bound + 1).max(2) {
        for res in 1..b {
            let m = nearest_residue(200, b, res);
            for kind in [FamilyKind::Ceiling, FamilyKind::Floor] {
                let p = predict_family(m, b, kind).expect("valid family");
                let dec = overlay_decompose(m, p.a).expect("valid");
                let dance = dec.analysis.reduced_dance;
                let d = dec.analysis.coset_count;
                let class = |rs: &mut dyn Iterator<Item = Rational>| -> BTreeSet<CirclePoint> {
                    rs.map(|x| rotation_class(dance, x)).collect()
                };
                let computed = class(&mut dec.cosets.iter().filter_map(|c| c.rotation));
                let published = class(&mut p.rotations().into_iter());
                let input = || format!("{} m = {m}, b = {b}, r = {res}", kind.name());
                match kind {
                    FamilyKind::Ceiling => r.check(
                        p.d == d && p.dance == dance && computed == published,
                        input,
                        format!("d = {}, {}, rotations {:?}", p.d, p.dance, p.rotations()),
                        format!("d = {d}, {dance}, rotations {:?}", dec.rotations()),
                    ),
                    FamilyKind::Floor => {
                        r.check(
                            p.d == d && p.dance == dance,
                            input,
                            format!("d = {}, {}", p.d, p.dance),
                            format!("d = {d}, {dance}"),
                        );
                        let overlay = class(&mut p.overlay_rotations().into_iter());
                        if computed != overlay {
                            r.fail(
                                input(),
                                "overlay rotation step 1/(b+r)",
                                format!("{:?}", dec.rotations()),
                            );
                        }
                        floor_cases += 1;
                        if computed != published {
                            floor_mismatch += 1;
                        }
                    }
                }
            }
        }
    }
    r.notes.push(format!(
        "floor family: rotation step 1/r matches the cosets in {} of {floor_cases} cases; 1/(b+r) matches in all",
        floor_cases - floor_mismatch
    ));
    r
}

pub fn suite_envelope(bound: i64) -> VerificationReport {
    let mut r = VerificationReport::new("envelope");
    for d in reduced_dances(bound) {
        if d.alpha() < 1 || d.alpha() + d.beta() == 0 || d.alpha() == d.beta() {
            continue;
        }
        match verify_envelope(d, 720, 1e-9) {
            Ok(rep) => r.check(
                rep.passed(),
                || d.to_string(),
                "distance and parallelism defect < 1e-9",
                format!(
                    "{:e}, {:e}",
                    rep.max_line_distance, rep.max_parallelism_defect
                ),
            ),
            Err(e) => r.check(false, || d.to_string(), "a report", e),
        }
    }
    r
}

pub fn suite_cusps(bound: i64) -> VerificationReport {
    let mut r = VerificationReport::new("cusp_count");
    for d in reduced_dances(bound) {
        if d.alpha() < 1
            || d.alpha() == d.beta()
            || classify(d).kind == CurveKind::DegenerateDiameter
        {
            continue;
        }
        let diff = (d.alpha() - d.beta()).abs();
        for refine in 1..=3 {
            let n = diff * refine;
            let degenerate = (0..n)
                .filter(|&k| dance_chord(d, Rational::new(k, n).expect("n > 0")).is_degenerate())
                .count() as i64;
            r.check(
                degenerate == diff,
                || format!("{d} at n = {n}"),
                diff,
                degenerate,
            );
        }
    }
    r
}

/// Runs every suite within the given bounds. Reports are ordered by suite name.
pub fn verify_all(max_m: i64, dance_bound: i64) -> Result<Vec<VerificationReport>> {
    verify_all_with(&VerifyOptions {
        max_m,
        dance_bound,
        inject_fault: None,
    })
}

pub fn verify_all_with(opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    if opts.max_m < 1 || opts.dance_bound < 1 {
        return Err(Error::InvalidArgument(
            "verification bounds must be at least 1".into(),
        ));
    }
    crate::kernel::check_magnitude("max_m", opts.max_m)?;
    crate::kernel::check_magnitude("bound", opts.dance_bound)?;
    let (max_m, bound) = (opts.max_m, opts.dance_bound);
    let suites: Vec<Box<dyn Fn() -> VerificationReport + Send + Sync>> = vec![
        Box::new(move || suite_fundamental_correspondence(max_m)),
        Box::new(move || suite_aliasing(bound)),
        Box::new(move || suite_intersections(bound)),
        Box::new(move || suite_shift_identity(max_m, bound)),
        Box::new(move || suite_invertibility(max_m)),
        Box::new(move || suite_shortest_vector(max_m)),
        Box::new(move || suite_overlay(max_m)),
        Box::new(move || suite_families(bound)),
        Box::new(move || suite_envelope(bound)),
        Box::new(move || suite_cusps(bound)),
    ];
    let mut reports: Vec<VerificationReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites.iter().map(|s| scope.spawn(s)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite panicked"))
            .collect()
    });
    if let Some(name) = &opts.inject_fault {
        for rep in reports.iter_mut().filter(|r| &r.suite == name) {
            rep.fail("injected fault".into(), "pass", "fail");
        }
    }
    reports.sort_by(|a, b| a.suite.cmp(&b.suite));
    Ok(reports)
}
