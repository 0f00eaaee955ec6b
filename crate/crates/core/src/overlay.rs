//! Splitting an under-sampled stitch graph into rotated copies of its natural
//! alias dance, and the closed-form predictions for the ceiling/floor
//! families `MMT(m, ⌈m/b⌉)` and `MMT(m, ⌊m/b⌋)`.

use crate::dances::{mmt_chords, PlanetDance, StitchGraph};
use crate::error::{Error, Result};
use crate::kernel::{gcd, wrap, ChordSet, CirclePoint, Rational};
use crate::torusgeo::{natural_alias, AliasAnalysis, TorusLine};

/// The chords of sample indices `≡ index (mod d)` and the torus line they lie on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub index: i64,
    pub line: TorusLine,
    /// Turns by which the alias dance is rotated to carry this coset; absent
    /// when the alias is diagonal (`α = β`).
    pub rotation: Option<Rational>,
    pub chords: ChordSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlayDecomposition {
    pub analysis: AliasAnalysis,
    pub cosets: Vec<Coset>,
}

impl OverlayDecomposition {
    pub fn rotations(&self) -> Vec<Option<Rational>> {
        self.cosets.iter().map(|c| c.rotation).collect()
    }
}

/// Line through the sample point of index `k`, parallel to the alias.
///
/// Its intercept is `k·u/(dα)` with `u = (αa − β)/m′`, which is `k/(dα)`
/// whenever `u ≡ 1 (mod d)`.
pub fn coset_line(analysis: &AliasAnalysis, k: i64) -> TorusLine {
    let dance = analysis.reduced_dance;
    let (alpha, beta) = (dance.alpha(), dance.beta());
    let offset = if alpha == 0 {
        Rational::new(k, analysis.m).expect("m >= 1")
    } else {
        Rational::new(k * (alpha * analysis.a - beta), alpha * analysis.m).expect("alpha*m != 0")
    };
    TorusLine::new(dance, offset).expect("alias dance is never <0,0>")
}

/// Where a coset line meets the diagonal `<1,1>`: the rotation that carries
/// the alias dance (which starts on the diagonal) onto the line.
pub fn line_rotation(line: &TorusLine) -> Option<Rational> {
    let (alpha, beta) = (line.direction().alpha(), line.direction().beta());
    if alpha == beta {
        None
    } else if alpha == 0 {
        Some(line.offset())
    } else {
        Some(wrap(line.offset() * alpha / (alpha - beta)).turn())
    }
}

/// Rotations of a dance that differ by a multiple of `1/|α−β|` give the same
/// chord family; this maps a rotation to its class, `θ·(α−β) mod 1`.
pub fn rotation_class(dance: PlanetDance, rotation: Rational) -> CirclePoint {
    wrap(rotation * (dance.alpha() - dance.beta()))
}

pub fn overlay_decompose(m: i64, a: i64) -> Result<OverlayDecomposition> {
    let analysis = natural_alias(m, a)?;
    let d = analysis.coset_count;
    let g = StitchGraph::new(m, a)?;
    let cosets = (0..d)
        .map(|k| {
            let line = coset_line(&analysis, k);
            Coset {
                index: k,
                line,
                rotation: line_rotation(&line),
                chords: residue_chords(g, d, k),
            }
        })
        .collect();
    Ok(OverlayDecomposition { analysis, cosets })
}

fn residue_chords(g: StitchGraph, d: i64, j: i64) -> ChordSet {
    (0..g.modulus() / d).map(|i| g.chord(j + d * i)).collect()
}

pub fn coset_by_residue(m: i64, a: i64, d: i64, j: i64) -> Result<ChordSet> {
    let g = StitchGraph::new(m, a)?;
    if d < 1 || m % d != 0 {
        return Err(Error::InvalidArgument(format!(
            "coset count {d} must divide m = {m}"
        )));
    }
    if !(0..d).contains(&j) {
        return Err(Error::InvalidArgument(format!(
            "residue {j} must lie in [0, {d})"
        )));
    }
    if d == 1 {
        return Ok(mmt_chords(g));
    }
    Ok(residue_chords(g, d, j))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    Ceiling,
    Floor,
}

impl FamilyKind {
    pub fn multiplier(self, m: i64, b: i64) -> i64 {
        match self {
            FamilyKind::Ceiling => m.div_euclid(b) + i64::from(m.rem_euclid(b) != 0),
            FamilyKind::Floor => m.div_euclid(b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Ceiling => "ceiling",
            FamilyKind::Floor => "floor",
        }
    }
}

/// The decomposition predicted for `MMT(m, ⌈m/b⌉)` or `MMT(m, ⌊m/b⌋)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FamilyPrediction {
    pub m: i64,
    pub b: i64,
    pub r: i64,
    pub kind: FamilyKind,
    pub a: i64,
    pub d: i64,
    pub dance: PlanetDance,
    /// The published rotation step between copies, `1/r`.
    pub rotation_step: Rational,
}

impl FamilyPrediction {
    /// `k/r` for `k = 0..d`.
    pub fn rotations(&self) -> Vec<Rational> {
        (0..self.d).map(|k| self.rotation_step * k).collect()
    }

    /// The step implied by the general overlay construction, `1/(d(α−β))`.
    /// Equals `1/r` for the ceiling family and `1/(b+r)` for the floor family.
    pub fn overlay_rotation_step(&self) -> Rational {
        Rational::new(1, self.d * (self.dance.alpha() - self.dance.beta())).expect("alpha != beta")
    }

    pub fn overlay_rotations(&self) -> Vec<Rational> {
        (0..self.d)
            .map(|k| self.overlay_rotation_step() * k)
            .collect()
    }
}

pub fn predict_family(m: i64, b: i64, kind: FamilyKind) -> Result<FamilyPrediction> {
    StitchGraph::new(m, 0)?;
    if b < 2 || b >= m {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= b < m, got b = {b}, m = {m}"
        )));
    }
    let r = m % b;
    if r == 0 {
        return Err(Error::InvalidArgument(format!("b = {b} divides m = {m}")));
    }
    let d = gcd(b, r);
    let dance = match kind {
        FamilyKind::Ceiling => PlanetDance::oriented(b / d, (b - r) / d),
        FamilyKind::Floor => PlanetDance::oriented(b / d, -r / d),
    };
    Ok(FamilyPrediction {
        m,
        b,
        r,
        kind,
        a: kind.multiplier(m, b),
        d,
        dance,
        rotation_step: Rational::new(1, r).expect("r > 0"),
    })
}

/// Nearest `m` to `target` with `m ≡ r (mod b)` and `m > b`; ties go to the smaller.
pub fn nearest_residue(target: i64, b: i64, r: i64) -> i64 {
    let below = target - (target - r).rem_euclid(b);
    let above = below + b;
    let mut best = if target - below <= above - target {
        below
    } else {
        above
    };
    while best <= b {
        best += b;
    }
    best
}
