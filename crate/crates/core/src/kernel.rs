//! Exact rational arithmetic and the shared geometric vocabulary: points on
//! the unit circle (in turns), points on the flat torus, directed chords and
//! canonical chord sets.
//!
//! Positions are exact everywhere; `f64` only shows up in [`CirclePoint::embed`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest magnitude accepted for moduli, multipliers and dance speeds.
///
/// With every input below this cap the products formed internally stay far
/// inside `i64`; intermediate arithmetic still goes through `i128`.
pub const MAX_MAGNITUDE: i64 = 1_000_000;

/// Rejects `value` if it exceeds [`MAX_MAGNITUDE`] in absolute value.
pub fn check_magnitude(name: &'static str, value: i64) -> Result<i64> {
    if value.unsigned_abs() > MAX_MAGNITUDE as u64 {
        Err(Error::OutOfRange { name, value })
    } else {
        Ok(value)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i128
}

/// A reduced fraction `num/den` with `den >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Reduces `n/d` to lowest terms with a positive denominator.
    pub fn new(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument(format!("zero denominator in {n}/0")));
        }
        Self::from_i128(n as i128, d as i128)
    }

    pub fn from_int(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    fn from_i128(n: i128, d: i128) -> Result<Self> {
        debug_assert!(d != 0);
        let g = gcd128(n, d).max(1);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(num), Ok(den)) => Ok(Rational { num, den }),
            _ => Err(Error::Overflow),
        }
    }

    // Panicking constructor for the operator impls. Callers cap their inputs at
    // MAX_MAGNITUDE, so reaching the panic means a broken internal invariant.
    fn from_i128_or_panic(n: i128, d: i128) -> Self {
        Self::from_i128(n, d).expect("rational arithmetic overflowed i64")
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn floor(self) -> i64 {
        self.num.div_euclid(self.den)
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn fract(self) -> Rational {
        Rational {
            num: self.num.rem_euclid(self.den),
            den: self.den,
        }
    }

    pub fn abs(self) -> Rational {
        Rational {
            num: self.num.abs(),
            den: self.den,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(self, rhs: Rational) -> Result<Rational> {
        let n = self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128;
        Self::from_i128(n, self.den as i128 * rhs.den as i128)
    }

    pub fn checked_mul(self, rhs: Rational) -> Result<Rational> {
        Self::from_i128(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }

    pub fn checked_div(self, rhs: Rational) -> Result<Rational> {
        if rhs.num == 0 {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        Self::from_i128(
            self.num as i128 * rhs.den as i128,
            self.den as i128 * rhs.num as i128,
        )
    }
}

/// Shorthand for `Rational::new(n, d)` with a nonzero literal denominator.
///
/// # Panics
/// If `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("ratio() requires a nonzero denominator")
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational::from_i128_or_panic(
            self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational::from_i128_or_panic(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Mul<i64> for Rational {
    type Output = Rational;
    fn mul(self, rhs: i64) -> Rational {
        Rational::from_i128_or_panic(self.num as i128 * rhs as i128, self.den as i128)
    }
}

impl Div for Rational {
    type Output = Rational;
    /// # Panics
    /// On division by zero.
    fn div(self, rhs: Rational) -> Rational {
        assert!(rhs.num != 0, "division by zero rational");
        Rational::from_i128_or_panic(
            self.num as i128 * rhs.den as i128,
            self.den as i128 * rhs.num as i128,
        )
    }
}

impl Div<i64> for Rational {
    type Output = Rational;
    fn div(self, rhs: i64) -> Rational {
        assert!(rhs != 0, "division by zero");
        Rational::from_i128_or_panic(self.num as i128, self.den as i128 * rhs as i128)
    }
}

/// A plane point in machine reals.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn scale(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

/// A position on the unit circle measured in full turns, `0 <= turn < 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CirclePoint(Rational);

impl CirclePoint {
    pub const ORIGIN: CirclePoint = CirclePoint(Rational::ZERO);

    /// Reduces `r` modulo one turn.
    pub fn wrap(r: Rational) -> Self {
        CirclePoint(r.fract())
    }

    pub fn turn(self) -> Rational {
        self.0
    }

    /// The representative of this point in `(-1/2, 1/2]`.
    pub fn centered_lift(self) -> Rational {
        if self.0 > ratio(1, 2) {
            self.0 - Rational::ONE
        } else {
            self.0
        }
    }

    /// `(cos 2πt, sin 2πt)`.
    pub fn embed(self) -> Vec2 {
        embed_turn(self.0.to_f64())
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

/// `(cos 2πs, sin 2πs)` for a real turn count.
pub fn embed_turn(s: f64) -> Vec2 {
    let theta = std::f64::consts::TAU * s;
    Vec2::new(theta.cos(), theta.sin())
}

pub fn wrap(r: Rational) -> CirclePoint {
    CirclePoint::wrap(r)
}

pub fn centered_lift(p: CirclePoint) -> Rational {
    p.centered_lift()
}

pub fn embed(p: CirclePoint) -> Vec2 {
    p.embed()
}

/// A point of the flat torus `R²/Z²`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TorusPoint {
    pub x: CirclePoint,
    pub y: CirclePoint,
}

impl TorusPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        TorusPoint {
            x: CirclePoint::wrap(x),
            y: CirclePoint::wrap(y),
        }
    }
}

/// A chord from `start` to `end`. Equal endpoints make it degenerate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedChord {
    pub start: CirclePoint,
    pub end: CirclePoint,
}

impl DirectedChord {
    pub fn new(start: CirclePoint, end: CirclePoint) -> Self {
        DirectedChord { start, end }
    }

    pub fn is_degenerate(&self) -> bool {
        self.start == self.end
    }

    /// The chord viewed as a point of the torus (start, end).
    pub fn torus_point(&self) -> TorusPoint {
        TorusPoint {
            x: self.start,
            y: self.end,
        }
    }
}

impl fmt::Debug for DirectedChord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.start.turn(), self.end.turn())
    }
}

/// A finite set of chords kept sorted by `(start, end)` without duplicates,
/// so structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct ChordSet {
    chords: Vec<DirectedChord>,
}

impl ChordSet {
    pub fn new() -> Self {
        ChordSet::default()
    }

    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DirectedChord> {
        self.chords.iter()
    }

    pub fn as_slice(&self) -> &[DirectedChord] {
        &self.chords
    }

    pub fn contains(&self, chord: &DirectedChord) -> bool {
        self.chords.binary_search(chord).is_ok()
    }

    pub fn degenerate_count(&self) -> usize {
        self.chords.iter().filter(|c| c.is_degenerate()).count()
    }

    pub fn union(&self, other: &ChordSet) -> ChordSet {
        self.chords
            .iter()
            .chain(other.chords.iter())
            .copied()
            .collect()
    }

    pub fn is_disjoint(&self, other: &ChordSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().all(|c| !large.contains(c))
    }
}

impl FromIterator<DirectedChord> for ChordSet {
    fn from_iter<I: IntoIterator<Item = DirectedChord>>(iter: I) -> Self {
        let mut chords: Vec<DirectedChord> = iter.into_iter().collect();
        chords.sort_unstable();
        chords.dedup();
        ChordSet { chords }
    }
}

impl<'a> IntoIterator for &'a ChordSet {
    type Item = &'a DirectedChord;
    type IntoIter = std::slice::Iter<'a, DirectedChord>;
    fn into_iter(self) -> Self::IntoIter {
        self.chords.iter()
    }
}
