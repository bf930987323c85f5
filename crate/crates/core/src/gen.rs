//! Random spaces, maps and subsets for property tests.
//!
//! Valid level spaces come from metrics: a family `d_λ = g(λ) · m` with `g`
//! nonincreasing satisfies (UT) for every t-norm, and the pointwise maximum
//! of two valid families is valid again. Invalid spaces are obtained by
//! pushing one distance above every route through a third point, or by
//! zeroing a pair while keeping the separated flag.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::bridge::{path_metric, MetricSpace};
use crate::constructions::{PointMap, PointSet};
use crate::numeric::{ExtReal, UnitVal};
use crate::spaces::{LevelSpace, PointId, Space};
use crate::stepfn::{pointwise_sup, LevelFunction};
use crate::tnorm::TNorm;

const DENOMINATORS: [u64; 6] = [1, 2, 3, 4, 6, 8];
const LEVEL_DENOMINATORS: [u64; 7] = [2, 3, 4, 5, 6, 8, 12];

pub fn ids(n: usize) -> Vec<PointId> {
    (0..n).map(|i| alloc::format!("p{i}")).collect()
}

pub fn tnorm<R: Rng>(rng: &mut R) -> TNorm {
    *TNorm::ALL.choose(rng).expect("nonempty")
}

/// A positive rational with a small denominator, at most `max`.
pub fn positive<R: Rng>(rng: &mut R, max: u64) -> ExtReal {
    let q = *DENOMINATORS.choose(rng).expect("nonempty");
    ExtReal::ratio(rng.gen_range(1..=max * q), q)
}

/// A level in `(0, 1)`.
pub fn inner_level<R: Rng>(rng: &mut R) -> UnitVal {
    let q = *LEVEL_DENOMINATORS.choose(rng).expect("nonempty");
    UnitVal::ratio(rng.gen_range(1..q), q)
}

/// An extended metric on `n` points, occasionally with infinite distances;
/// with `pseudo`, one point may duplicate another.
pub fn metric<R: Rng>(rng: &mut R, n: usize, pseudo: bool) -> MetricSpace {
    let raw = MetricSpace::from_fn(ids(n), false, |_, _| {
        if rng.gen_ratio(1, 12) {
            ExtReal::Infinite
        } else {
            positive(rng, 4)
        }
    })
    .expect("sized table");
    let mut m = path_metric(&raw);
    if pseudo && n >= 2 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            // b becomes a copy of a
            m = MetricSpace::from_fn(ids(n), false, |i, j| {
                let f = |k| if k == b { a } else { k };
                m.dist(f(i), f(j))
            })
            .expect("sized table");
        }
    }
    let separated = m.table().iter().all(|w| !w.is_zero());
    m.with_separated(separated)
}

/// `g(λ)` as at most three pieces with nonincreasing rational factors; the
/// last factor may be `0`.
pub fn profile<R: Rng>(rng: &mut R) -> Vec<(UnitVal, BigRational)> {
    let mut cuts: Vec<UnitVal> = (0..rng.gen_range(0..=2)).map(|_| inner_level(rng)).collect();
    cuts.sort();
    cuts.dedup();
    cuts.push(UnitVal::one());
    let mut factor = BigRational::new(BigInt::from(rng.gen_range(2..=6u32)), BigInt::from(2u32));
    let mut out = Vec::with_capacity(cuts.len());
    for (k, cut) in cuts.into_iter().enumerate() {
        if k > 0 {
            let shrink = BigRational::new(BigInt::from(rng.gen_range(0..=3u32)), BigInt::from(4u32));
            factor *= shrink;
        }
        out.push((cut, factor.clone()));
    }
    out
}

/// `d_λ = g(λ) · m`.
pub fn scaled_family(m: &MetricSpace, g: &[(UnitVal, BigRational)], tnorm: TNorm) -> LevelSpace {
    Space::from_fn(m.points().to_vec(), tnorm, false, |i, j| {
        let w = m.dist(i, j);
        LevelFunction::new(g.iter().map(|(cut, k)| (cut.clone(), w.scale(k))).collect())
            .expect("nonincreasing profile")
    })
    .expect("sized table")
}

/// A level space passing every axiom, with at most `max_points` points and at
/// most five breakpoints per pair. Separated whenever the data allow.
pub fn valid_level_space<R: Rng>(rng: &mut R, max_points: usize, tnorm: TNorm) -> LevelSpace {
    let n = rng.gen_range(0..=max_points);
    let pseudo = rng.gen_ratio(1, 3);
    let m = metric(rng, n, pseudo);
    let g = profile(rng);
    let mut s = scaled_family(&m, &g, tnorm);
    if rng.gen_bool(0.5) {
        let pseudo2 = pseudo && rng.gen_bool(0.5);
        let m2 = metric(rng, n, pseudo2);
        let other = scaled_family(&m2, &profile(rng), tnorm);
        s = Space::from_fn(m.points().to_vec(), tnorm, false, |i, j| {
            pointwise_sup(&[s.dist(i, j), other.dist(i, j)]).expect("nonempty")
        })
        .expect("sized table");
    }
    let separated = s.pairs().all(|(_, _, d)| !d.is_zero());
    s.with_separated(separated)
}

/// A space that fails (UT) or (UH), or `None` if `s` is too small or too
/// infinite to corrupt.
pub fn corrupt<R: Rng>(rng: &mut R, s: &LevelSpace) -> Option<LevelSpace> {
    let n = s.len();
    if n >= 2 && (n < 3 || rng.gen_ratio(1, 4)) {
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        let mut bad = s.clone().with_separated(true);
        bad.set_dist(i, j, LevelFunction::zero());
        return Some(bad);
    }
    let mut triples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in x + 1..n {
                if y != x && y != z {
                    let bound = s.dist(x, y).first_value() + s.dist(y, z).first_value();
                    if bound.is_finite() {
                        triples.push((x, z, bound));
                    }
                }
            }
        }
    }
    let (x, z, bound) = triples.choose(rng)?.clone();
    let mut bad = s.clone();
    bad.set_dist(x, z, LevelFunction::constant(&bound + &positive(rng, 2)));
    Some(bad)
}

pub fn map<R: Rng>(rng: &mut R, source: &[PointId], target: &[PointId]) -> Option<PointMap> {
    if target.is_empty() && !source.is_empty() {
        return None;
    }
    let assign = (0..source.len()).map(|_| rng.gen_range(0..target.len())).collect();
    Some(PointMap::new(source.to_vec(), target.to_vec(), assign).expect("indices in range"))
}

pub fn subset<R: Rng>(rng: &mut R, n: usize) -> PointSet {
    (0..n).filter(|_| rng.gen_bool(0.4)).collect()
}
