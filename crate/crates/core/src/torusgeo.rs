//! Dances as closed lines on the flat torus, samplings as point subgroups,
//! and the search for the dance a stitch graph most naturally samples.
//!
//! The sample points of `MMT(m, a)` are `(k/m, ak/m)`. Scaled by `m` they form
//! the lattice spanned by `(1, a)` and `(0, m)`, so the sample point closest to
//! the origin is a shortest nonzero vector of that lattice. We find it with
//! Lagrange–Gauss reduction in exact integer arithmetic.

use crate::dances::{reduce_dance, PlanetDance, StitchGraph};
use crate::error::{Error, Result};
use crate::kernel::{check_magnitude, gcd, Rational, TorusPoint};

/// A closed line on the torus.
///
/// For `alpha != 0` the line is `y = (β/α)x + offset`; since shifting the
/// intercept by `1/α` gives the same closed loop, `offset` is kept in
/// `[0, 1/α)`. For the vertical direction `<0,1>` the line is `x = offset`
/// with `offset` in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TorusLine {
    direction: PlanetDance,
    offset: Rational,
}

impl TorusLine {
    pub fn new(direction: PlanetDance, offset: Rational) -> Result<Self> {
        let direction = reduce_dance(direction);
        if direction.is_null() {
            return Err(Error::InvalidArgument(
                "<0,0> does not define a torus line".into(),
            ));
        }
        let alpha = direction.alpha();
        let offset = if alpha == 0 {
            offset.fract()
        } else {
            (offset * alpha).fract() / alpha
        };
        Ok(TorusLine { direction, offset })
    }

    pub fn through_origin(direction: PlanetDance) -> Result<Self> {
        Self::new(direction, Rational::ZERO)
    }

    pub fn direction(&self) -> PlanetDance {
        self.direction
    }

    pub fn offset(&self) -> Rational {
        self.offset
    }
}

pub fn fundamental_line(g: StitchGraph) -> TorusLine {
    TorusLine::through_origin(PlanetDance::oriented(1, g.multiplier()))
        .expect("<1,a> is never null")
}

/// Exact membership of a torus point in a line.
pub fn line_contains(l: &TorusLine, pt: &TorusPoint) -> bool {
    let (alpha, beta) = (l.direction.alpha(), l.direction.beta());
    let (x, y) = (pt.x.turn(), pt.y.turn());
    if alpha == 0 {
        (x - l.offset).is_integer()
    } else {
        (x * beta - y * alpha + l.offset * alpha).is_integer()
    }
}

fn require_reduced_line(d: PlanetDance) -> Result<()> {
    if d.is_null() || !d.is_reduced() {
        return Err(Error::InvalidArgument(format!(
            "{d} must be in reduced form with a nonzero coordinate"
        )));
    }
    Ok(())
}

/// Number of intersection points of two torus lines through the origin,
/// `|αδ − βγ|`. Zero means the lines coincide.
pub fn intersection_count(d1: PlanetDance, d2: PlanetDance) -> Result<u64> {
    require_reduced_line(d1)?;
    require_reduced_line(d2)?;
    let det = d1.alpha() as i128 * d2.beta() as i128 - d1.beta() as i128 * d2.alpha() as i128;
    Ok(det.unsigned_abs() as u64)
}

/// Shortest vector of the sample lattice together with its ambiguity flag.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LatticeMinimum {
    pub vector: (i64, i64),
    /// Another, non-equivalent direction reaches the same norm.
    pub tie: bool,
}

type V2 = (i128, i128);

fn norm2(v: V2) -> i128 {
    v.0 * v.0 + v.1 * v.1
}

fn dot(u: V2, v: V2) -> i128 {
    u.0 * v.0 + u.1 * v.1
}

/// Nearest integer to `n/d` for `d > 0`, halves rounded up.
fn round_div(n: i128, d: i128) -> i128 {
    (2 * n + d).div_euclid(2 * d)
}

fn orient(v: V2) -> V2 {
    if v.0 < 0 || (v.0 == 0 && v.1 < 0) {
        (-v.0, -v.1)
    } else {
        v
    }
}

/// Ordering used to pick among equal-norm minimizers: positive dances first,
/// then smaller `|q|`.
pub(crate) fn tie_break_key(p: i64, q: i64) -> (u8, u64) {
    (u8::from(p.signum() * q.signum() <= 0), q.unsigned_abs())
}

/// Lagrange–Gauss reduction of the lattice spanned by `(1, a)` and `(0, m)`.
pub fn lattice_minimum(m: i64, a: i64) -> Result<LatticeMinimum> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!(
            "modulus must be positive, got {m}"
        )));
    }
    check_magnitude("m", m)?;
    check_magnitude("a", a)?;
    let mut b1: V2 = (1, a.rem_euclid(m) as i128);
    let mut b2: V2 = (0, m as i128);
    if norm2(b1) > norm2(b2) {
        std::mem::swap(&mut b1, &mut b2);
    }
    loop {
        let mu = round_div(dot(b1, b2), norm2(b1));
        b2 = (b2.0 - mu * b1.0, b2.1 - mu * b1.1);
        if norm2(b2) >= norm2(b1) {
            break;
        }
        std::mem::swap(&mut b1, &mut b2);
    }
    // In a reduced basis every shortest vector is ±b1, ±b2 or ±(b1 ± b2).
    let min = norm2(b1);
    let mut candidates: Vec<V2> = [
        b1,
        b2,
        (b1.0 + b2.0, b1.1 + b2.1),
        (b1.0 - b2.0, b1.1 - b2.1),
    ]
    .into_iter()
    .filter(|&v| norm2(v) == min)
    .map(orient)
    .collect();
    candidates.sort_unstable();
    candidates.dedup();
    let best = candidates
        .iter()
        .map(|&(p, q)| (p as i64, q as i64))
        .min_by_key(|&(p, q)| tie_break_key(p, q))
        .expect("b1 is always a candidate");
    Ok(LatticeMinimum {
        vector: best,
        tie: candidates.len() > 1,
    })
}

pub fn shortest_sample_vector(m: i64, a: i64) -> Result<(i64, i64)> {
    lattice_minimum(m, a).map(|l| l.vector)
}

/// Everything needed to answer which dance `MMT(m, a)` most naturally samples.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AliasAnalysis {
    pub m: i64,
    pub a: i64,
    pub shortest_vector: (i64, i64),
    pub reduced_dance: PlanetDance,
    /// Number of rotated copies, `d = m / m′`.
    pub coset_count: i64,
    /// Sample points per copy, `m′ = gcd(αa − β, m)`.
    pub reduced_rate: i64,
    pub tie: bool,
}

impl AliasAnalysis {
    /// `(αa − β) / m′`. Coprime to `d`; equal to 1 in the families where the
    /// overlay offsets take the textbook form `k/(dα)`.
    pub fn coset_unit(&self) -> i64 {
        (self.reduced_dance.alpha() * self.a - self.reduced_dance.beta()) / self.reduced_rate
    }
}

pub fn natural_alias(m: i64, a: i64) -> Result<AliasAnalysis> {
    let LatticeMinimum {
        vector: (p, q),
        tie,
    } = lattice_minimum(m, a)?;
    let a = a.rem_euclid(m);
    let reduced_dance = reduce_dance(PlanetDance::oriented(p, q));
    let reduced_rate = gcd(reduced_dance.alpha() * a - reduced_dance.beta(), m);
    Ok(AliasAnalysis {
        m,
        a,
        shortest_vector: (p, q),
        reduced_dance,
        coset_count: m / reduced_rate,
        reduced_rate,
        tie,
    })
}

/// A sampling rate at which a dance coincides with a stitch graph.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RealizableRate {
    pub rate: i64,
    pub multiplier: i64,
}

/// The rates `m′` nearest `m_target` for which `sample(d, m′)` is a stitch
/// graph, i.e. `m′ ≡ ±β (mod α)`, with the matching multiplier.
pub fn realizable_rates(d: PlanetDance, m_target: i64) -> Result<Vec<RealizableRate>> {
    let (alpha, beta) = (d.alpha(), d.beta());
    if alpha == 0 {
        return Err(Error::InvalidArgument(format!(
            "{d} has alpha = 0; no stitch graph samples it"
        )));
    }
    if !d.is_reduced() {
        return Err(Error::InvalidArgument(format!(
            "{d} is not in reduced form"
        )));
    }
    if m_target < 1 {
        return Err(Error::InvalidArgument(format!(
            "target rate must be positive, got {m_target}"
        )));
    }
    check_magnitude("m_target", m_target)?;
    // m′ = αa − β  or  m′ = β − αa.
    let multiplier = |rate: i64| -> Option<i64> {
        if (rate + beta).rem_euclid(alpha) == 0 {
            Some(((rate + beta) / alpha).rem_euclid(rate))
        } else if (beta - rate).rem_euclid(alpha) == 0 {
            Some(((beta - rate) / alpha).rem_euclid(rate))
        } else {
            None
        }
    };
    for delta in 0..=alpha {
        let mut found: Vec<RealizableRate> = [m_target - delta, m_target + delta]
            .into_iter()
            .filter(|&r| r >= 1)
            .filter_map(|rate| {
                multiplier(rate).map(|multiplier| RealizableRate { rate, multiplier })
            })
            .collect();
        found.dedup();
        if !found.is_empty() {
            return Ok(found);
        }
    }
    unreachable!("one of any alpha consecutive integers satisfies the congruence")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dances::{mmt_chords, sample_at};
    use crate::kernel::ratio;
    use crate::oracle::{brute_intersections, brute_line_contains, brute_nearest, Intersections};
    use proptest::prelude::*;

    fn dance(a: i64, b: i64) -> PlanetDance {
        PlanetDance::new(a, b).unwrap()
    }

    fn pt(x: Rational, y: Rational) -> TorusPoint {
        TorusPoint::new(x, y)
    }

    #[test]
    fn fundamental_line_examples() {
        let l = fundamental_line(StitchGraph::new(25, 9).unwrap());
        assert_eq!((l.direction(), l.offset()), (dance(1, 9), Rational::ZERO));
        let l = fundamental_line(StitchGraph::new(40, 0).unwrap());
        assert_eq!(l.direction(), dance(1, 0));
        let l = fundamental_line(StitchGraph::new(100, 34).unwrap());
        assert_eq!(l.direction(), dance(1, 34));
    }

    #[test]
    fn line_offset_is_normalized() {
        let l = TorusLine::new(dance(3, 2), ratio(1, 2)).unwrap();
        assert_eq!(l.offset(), ratio(1, 6));
        let l = TorusLine::new(dance(0, 4), ratio(5, 4)).unwrap();
        assert_eq!((l.direction(), l.offset()), (dance(0, 1), ratio(1, 4)));
        assert!(TorusLine::new(dance(0, 0), Rational::ZERO).is_err());
    }

    #[test]
    fn line_contains_examples() {
        // Sample 3 of MMT(206, 35): 2·3 − 3·105 = −309 and −309/206 = −3/2, so it
        // is off the line through the origin but on the copy shifted by 1/6.
        let p = pt(ratio(3, 206), ratio(105, 206));
        let origin = TorusLine::through_origin(dance(3, 2)).unwrap();
        let shifted = TorusLine::new(dance(3, 2), ratio(1, 6)).unwrap();
        assert!(!line_contains(&origin, &p));
        assert!(!brute_line_contains(&origin, &p));
        assert!(line_contains(&shifted, &p));
        assert!(brute_line_contains(&shifted, &p));

        let diag = TorusLine::through_origin(dance(1, 1)).unwrap();
        assert!(line_contains(&diag, &pt(ratio(1, 2), ratio(1, 2))));
        let axis = TorusLine::through_origin(dance(1, 0)).unwrap();
        assert!(!line_contains(&axis, &pt(ratio(1, 3), ratio(1, 2))));
        let vertical = TorusLine::new(dance(0, 1), ratio(1, 3)).unwrap();
        assert!(line_contains(&vertical, &pt(ratio(1, 3), ratio(5, 7))));
        assert!(!line_contains(&vertical, &pt(ratio(1, 2), ratio(5, 7))));
    }

    #[test]
    fn intersection_count_examples() {
        assert_eq!(intersection_count(dance(1, 34), dance(3, 2)).unwrap(), 100);
        assert_eq!(intersection_count(dance(1, 0), dance(0, 1)).unwrap(), 1);
        assert_eq!(intersection_count(dance(2, 3), dance(1, 9)).unwrap(), 15);
        assert_eq!(
            brute_intersections(dance(2, 3), dance(1, 9)).unwrap(),
            Intersections::Count(15)
        );
        assert_eq!(intersection_count(dance(1, 2), dance(1, 2)).unwrap(), 0);
        assert!(intersection_count(dance(2, 4), dance(1, 0)).is_err());
        assert!(intersection_count(dance(0, 0), dance(1, 0)).is_err());
    }

    #[test]
    fn shortest_vector_examples() {
        assert_eq!(shortest_sample_vector(100, 34).unwrap(), (3, 2));
        assert_eq!(brute_nearest(100, 34).unwrap(), (3, 2));
        assert_eq!(shortest_sample_vector(206, 35).unwrap(), (6, 4));
        assert_eq!(brute_nearest(206, 35).unwrap(), (6, 4));
        assert_eq!(shortest_sample_vector(5, 2).unwrap(), (1, 2));
        assert_eq!(brute_nearest(5, 2).unwrap(), (1, 2));
        assert!(lattice_minimum(5, 2).unwrap().tie);
        assert!(!lattice_minimum(100, 34).unwrap().tie);
        assert_eq!(shortest_sample_vector(1, 0).unwrap(), (1, 0));
        assert!(shortest_sample_vector(0, 3).is_err());
        assert!(shortest_sample_vector(-4, 3).is_err());
    }

    #[test]
    fn natural_alias_examples() {
        let n = natural_alias(100, 34).unwrap();
        assert_eq!(
            (n.reduced_dance, n.coset_count, n.reduced_rate),
            (dance(3, 2), 1, 100)
        );
        let chords = mmt_chords(StitchGraph::new(100, 34).unwrap());
        assert_eq!(sample_at(n.reduced_dance, 100).unwrap(), chords);

        let n = natural_alias(206, 35).unwrap();
        assert_eq!(
            (n.reduced_dance, n.coset_count, n.reduced_rate),
            (dance(3, 2), 2, 103)
        );

        let n = natural_alias(50, 25).unwrap();
        assert_eq!(n.shortest_vector, (2, 0));
        assert_eq!(
            (n.reduced_dance, n.coset_count, n.reduced_rate),
            (dance(1, 0), 2, 25)
        );

        // MMT(9, 6) is three copies of a fan whose coset unit is 2, not 1.
        let n = natural_alias(9, 6).unwrap();
        assert_eq!(
            (n.reduced_dance, n.coset_count, n.coset_unit()),
            (dance(1, 0), 3, 2)
        );
    }

    #[test]
    fn alias_is_consistent_for_small_moduli() {
        for m in 1..=120 {
            for a in 0..m {
                let n = natural_alias(m, a).unwrap();
                let (p, q) = n.shortest_vector;
                assert_eq!(n.coset_count * n.reduced_rate, m);
                assert_eq!((q - a * p).rem_euclid(m), 0);
                assert_eq!(
                    gcd(p, q),
                    n.coset_count,
                    "gcd of shortest vector vs d at ({m},{a})"
                );
                let line = TorusLine::through_origin(n.reduced_dance).unwrap();
                let g = StitchGraph::new(m, a).unwrap();
                let on_line = (0..m)
                    .filter(|&k| line_contains(&line, &g.chord(k).torus_point()))
                    .count();
                assert_eq!(on_line as i64, n.reduced_rate, "({m},{a})");
                if n.coset_count == 1 {
                    assert_eq!(sample_at(n.reduced_dance, m).unwrap(), mmt_chords(g));
                }
            }
        }
    }

    #[test]
    fn realizable_rate_examples() {
        let r = realizable_rates(dance(3, 2), 100).unwrap();
        assert_eq!(
            r,
            vec![RealizableRate {
                rate: 100,
                multiplier: 34
            }]
        );

        for (beta, m) in [(7, 50), (-3, 11), (0, 9)] {
            let r = realizable_rates(dance(1, beta), m).unwrap();
            assert_eq!(
                r,
                vec![RealizableRate {
                    rate: m,
                    multiplier: beta.rem_euclid(m)
                }]
            );
        }

        let r = realizable_rates(dance(5, 2), 100).unwrap();
        assert_eq!(
            r,
            vec![
                RealizableRate {
                    rate: 98,
                    multiplier: 20
                },
                RealizableRate {
                    rate: 102,
                    multiplier: 82
                },
            ]
        );
        for rr in r {
            let g = StitchGraph::new(rr.rate, rr.multiplier).unwrap();
            assert_eq!(sample_at(dance(5, 2), rr.rate).unwrap(), mmt_chords(g));
        }

        assert!(realizable_rates(dance(0, 1), 10).is_err());
        assert!(realizable_rates(dance(2, 4), 10).is_err());
    }

    fn reduced_dance() -> impl Strategy<Value = PlanetDance> {
        (-12i64..=12, -12i64..=12)
            .prop_filter("nonzero", |&(a, b)| (a, b) != (0, 0))
            .prop_map(|(a, b)| reduce_dance(dance(a, b)))
    }

    proptest! {
        #[test]
        fn realizable_rates_are_stitch_graphs(d in reduced_dance(), target in 1i64..300) {
            prop_assume!(d.alpha() != 0);
            for rr in realizable_rates(d, target).unwrap() {
                let g = StitchGraph::new(rr.rate, rr.multiplier).unwrap();
                prop_assert!((rr.rate - target).abs() <= d.alpha());
                prop_assert_eq!(sample_at(d, rr.rate).unwrap(), mmt_chords(g));
            }
        }

        #[test]
        fn reduction_preserves_the_point_set(
            alpha in -15i64..=15,
            beta in -15i64..=15,
            times in proptest::collection::vec((0i64..1000, 1i64..1000), 1000),
        ) {
            let d = dance(alpha, beta);
            prop_assume!(!d.is_null());
            let r = reduce_dance(d);
            let g = gcd(alpha, beta);
            let line = TorusLine::through_origin(r).unwrap();
            for (n, den) in times {
                let t = ratio(n, den);
                // Every point of d lies on the reduced line...
                prop_assert!(line_contains(&line, &pt(t * d.alpha(), t * d.beta())));
                // ...and every point of the reduced dance is reached by d.
                let target = pt(t * r.alpha(), t * r.beta());
                let reached = (0..g).any(|j| {
                    let s = (t + Rational::from_int(j)) / g;
                    pt(s * d.alpha(), s * d.beta()) == target
                });
                prop_assert!(reached);
            }
        }

        #[test]
        fn line_membership_matches_brute_oracle(
            d in reduced_dance(),
            c in (0i64..30, 1i64..30),
            p in (0i64..60, 0i64..60, 1i64..60),
        ) {
            let line = TorusLine::new(d, ratio(c.0, c.1)).unwrap();
            let point = pt(ratio(p.0, p.2), ratio(p.1, p.2));
            prop_assert_eq!(line_contains(&line, &point), brute_line_contains(&line, &point));
            // Points generated on the line must be members.
            let t = ratio(p.0, p.2);
            let on = if d.alpha() == 0 {
                pt(line.offset(), t)
            } else {
                pt(t * d.alpha(), t * d.beta() + line.offset())
            };
            prop_assert!(line_contains(&line, &on));
        }
    }
}
