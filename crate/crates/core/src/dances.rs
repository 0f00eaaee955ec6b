//! Modular stitch graphs `MMT(m, a)`, planet dances `<alpha, beta>` and their
//! `m`-samplings.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{check_magnitude, gcd, wrap, ChordSet, DirectedChord, Rational};

/// A planet dance: chords from `e^{2πiαt}` to `e^{2πiβt}`.
///
/// Stored canonically oriented (`alpha >= 0`, and `beta >= 0` when
/// `alpha == 0`); `<α,β>` and `<-α,-β>` trace the same chord family.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanetDance {
    alpha: i64,
    beta: i64,
}

impl PlanetDance {
    pub fn new(alpha: i64, beta: i64) -> Result<Self> {
        check_magnitude("alpha", alpha)?;
        check_magnitude("beta", beta)?;
        Ok(Self::oriented(alpha, beta))
    }

    // Callers guarantee the magnitude cap.
    pub(crate) fn oriented(alpha: i64, beta: i64) -> Self {
        if alpha < 0 || (alpha == 0 && beta < 0) {
            PlanetDance {
                alpha: -alpha,
                beta: -beta,
            }
        } else {
            PlanetDance { alpha, beta }
        }
    }

    pub fn alpha(self) -> i64 {
        self.alpha
    }

    pub fn beta(self) -> i64 {
        self.beta
    }

    pub fn is_reduced(self) -> bool {
        reduce_dance(self) == self
    }

    pub fn is_null(self) -> bool {
        self.alpha == 0 && self.beta == 0
    }
}

impl fmt::Debug for PlanetDance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.alpha, self.beta)
    }
}

impl fmt::Display for PlanetDance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The modular stitch graph `MMT(m, a)`, with `a` reduced into `[0, m)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct StitchGraph {
    m: i64,
    a: i64,
}

impl StitchGraph {
    pub fn new(m: i64, a: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidArgument(format!(
                "modulus must be positive, got {m}"
            )));
        }
        check_magnitude("m", m)?;
        check_magnitude("a", a)?;
        Ok(StitchGraph {
            m,
            a: a.rem_euclid(m),
        })
    }

    pub fn modulus(self) -> i64 {
        self.m
    }

    pub fn multiplier(self) -> i64 {
        self.a
    }

    /// Chord `k`: from `k/m` to `ak/m`.
    pub fn chord(self, k: i64) -> DirectedChord {
        let t = Rational::new(k, self.m).expect("m >= 1");
        DirectedChord::new(wrap(t), wrap(t * self.a))
    }
}

/// The `rate`-sampling of a dance at `t = k/rate`, `k = 0..rate`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Sampling {
    pub dance: PlanetDance,
    rate: i64,
}

impl Sampling {
    pub fn new(dance: PlanetDance, rate: i64) -> Result<Self> {
        if rate < 1 {
            return Err(Error::InvalidArgument(format!(
                "sampling rate must be positive, got {rate}"
            )));
        }
        check_magnitude("rate", rate)?;
        Ok(Sampling { dance, rate })
    }

    pub fn rate(self) -> i64 {
        self.rate
    }
}

pub fn mmt_chords(g: StitchGraph) -> ChordSet {
    (0..g.m).map(|k| g.chord(k)).collect()
}

pub fn dance_chord(d: PlanetDance, t: Rational) -> DirectedChord {
    speeds_chord(d.alpha, d.beta, t)
}

fn speeds_chord(alpha: i64, beta: i64, t: Rational) -> DirectedChord {
    DirectedChord::new(wrap(t * alpha), wrap(t * beta))
}

pub fn sample(s: Sampling) -> ChordSet {
    sample_speeds(s.dance.alpha, s.dance.beta, s.rate)
}

/// Samples the raw speed pair without orienting it first.
pub fn sample_speeds(alpha: i64, beta: i64, rate: i64) -> ChordSet {
    assert!(rate >= 1, "sampling rate must be positive");
    (0..rate)
        .map(|k| speeds_chord(alpha, beta, Rational::new(k, rate).expect("rate >= 1")))
        .collect()
}

/// Convenience wrapper: `sample(Sampling::new(d, rate))`.
pub fn sample_at(d: PlanetDance, rate: i64) -> Result<ChordSet> {
    Ok(sample(Sampling::new(d, rate)?))
}

pub fn reduce_dance(d: PlanetDance) -> PlanetDance {
    let g = gcd(d.alpha, d.beta);
    if g <= 1 {
        return d;
    }
    PlanetDance::oriented(d.alpha / g, d.beta / g)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DanceSign {
    Positive,
    Negative,
    /// Exactly one speed is zero.
    Axial,
    /// Both speeds are zero.
    Null,
}

pub fn dance_sign(d: PlanetDance) -> DanceSign {
    match (
        d.alpha.signum() * d.beta.signum(),
        d.alpha == 0 && d.beta == 0,
    ) {
        (_, true) => DanceSign::Null,
        (1, _) => DanceSign::Positive,
        (-1, _) => DanceSign::Negative,
        _ => DanceSign::Axial,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ratio;
    use proptest::prelude::*;

    fn dance(a: i64, b: i64) -> PlanetDance {
        PlanetDance::new(a, b).unwrap()
    }

    fn mmt(m: i64, a: i64) -> ChordSet {
        mmt_chords(StitchGraph::new(m, a).unwrap())
    }

    #[test]
    fn mmt_chord_examples() {
        let g = StitchGraph::new(12, 2).unwrap();
        let c = g.chord(7);
        assert_eq!((c.start.turn(), c.end.turn()), (ratio(7, 12), ratio(2, 12)));
        assert_eq!(mmt_chords(g).len(), 12);

        let c = StitchGraph::new(100, 34).unwrap().chord(3);
        assert_eq!(
            (c.start.turn(), c.end.turn()),
            (ratio(3, 100), ratio(2, 100))
        );

        let id = mmt(17, 1);
        assert_eq!(id.len(), 17);
        assert!(id.iter().all(|c| c.is_degenerate()));
    }

    #[test]
    fn stitch_graph_normalizes_multiplier() {
        assert_eq!(
            StitchGraph::new(12, 14).unwrap(),
            StitchGraph::new(12, 2).unwrap()
        );
        assert_eq!(StitchGraph::new(12, -10).unwrap().multiplier(), 2);
        assert!(StitchGraph::new(0, 1).is_err());
        assert!(StitchGraph::new(2_000_000, 1).is_err());
    }

    #[test]
    fn dance_chord_examples() {
        let c = dance_chord(dance(3, 2), Rational::ZERO);
        assert!(c.is_degenerate());
        let c = dance_chord(dance(1, 2), ratio(1, 4));
        assert_eq!((c.start.turn(), c.end.turn()), (ratio(1, 4), ratio(1, 2)));
        let c = dance_chord(dance(5, -3), ratio(1, 10));
        // Brute evaluation: 5/10 and -3/10 + 1.
        assert_eq!(
            (c.start.turn(), c.end.turn()),
            (ratio(5, 10), ratio(-3, 10) + Rational::ONE)
        );
    }

    #[test]
    fn sample_examples() {
        assert_eq!(sample_at(dance(1, 7), 30).unwrap(), mmt(30, 7));
        let null = sample_at(dance(0, 0), 5).unwrap();
        assert_eq!(null.len(), 1);
        assert!(null.as_slice()[0].is_degenerate());
        assert_eq!(sample_at(dance(3, 2), 100).unwrap(), mmt(100, 34));
        assert!(Sampling::new(dance(1, 1), 0).is_err());
    }

    #[test]
    fn reduce_dance_examples() {
        assert_eq!(reduce_dance(dance(2, 4)), dance(1, 2));
        assert_eq!(reduce_dance(dance(0, 5)), dance(0, 1));
        assert_eq!(reduce_dance(dance(-3, 6)), dance(1, -2));
        assert_eq!(dance(-3, 6).alpha(), 3);
        assert_eq!(reduce_dance(dance(0, 0)), dance(0, 0));
        assert_eq!(reduce_dance(dance(7, 0)), dance(1, 0));
        assert_eq!(reduce_dance(dance(0, -4)), dance(0, 1));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(dance_sign(dance(3, 2)), DanceSign::Positive);
        assert_eq!(dance_sign(dance(5, -3)), DanceSign::Negative);
        assert_eq!(dance_sign(dance(-5, 3)), DanceSign::Negative);
        assert_eq!(dance_sign(dance(1, 0)), DanceSign::Axial);
        assert_eq!(dance_sign(dance(0, -2)), DanceSign::Axial);
        assert_eq!(dance_sign(dance(0, 0)), DanceSign::Null);
    }

    #[test]
    fn fundamental_correspondence_small() {
        for m in 1..=60 {
            for a in 0..m {
                assert_eq!(
                    mmt(m, a),
                    sample_at(dance(1, a), m).unwrap(),
                    "MMT({m},{a})"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn modulus_periodicity(m in 1i64..200, a in -400i64..400) {
            prop_assert_eq!(mmt(m, a), mmt(m, a + m));
        }

        #[test]
        fn orientation_quotient(alpha in -20i64..20, beta in -20i64..20, m in 1i64..80) {
            prop_assert_eq!(sample_speeds(alpha, beta, m), sample_speeds(-alpha, -beta, m));
        }

        #[test]
        fn reduce_is_idempotent(alpha in -50i64..50, beta in -50i64..50) {
            let r = reduce_dance(dance(alpha, beta));
            prop_assert_eq!(reduce_dance(r), r);
            prop_assert!(r.alpha() >= 0);
            let g = gcd(r.alpha(), r.beta());
            prop_assert!(g <= 1);
        }
    }
}
