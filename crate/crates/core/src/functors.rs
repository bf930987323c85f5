//! The isomorphism between distribution spaces and level spaces.
//!
//! [`delta`] sends `α` to `d_λ(x, y) = inf { γ < ∞ | α(x, y, γ) > 1 - λ }`;
//! [`phi`] sends `d` to `β(x, y, γ) = sup { 1 - λ | d_λ(x, y) < γ }` for
//! finite `γ`, with `β(x, y, ∞) = 1`. On step functions the two are mutually
//! inverse bijections of canonical forms:
//!
//! | distribution jump `(p_i, v_i)`  | level piece                        |
//! |---------------------------------|------------------------------------|
//! | value `v_i` from `p_i` onward   | `d = p_i` on `(1 - v_i, 1 - v_{i-1}]` |
//! | final value `v_k < 1`           | `d = ∞` on `(0, 1 - v_k]`           |
//!
//! with `v_0 = 0`. Both directions preserve the t-norm tag and the separated
//! flag. Neither re-validates its input: the conversions are total on
//! canonical tables, and axiom transport is the caller's concern.

use alloc::string::String;
use alloc::vec::Vec;

use crate::constructions::PointMap;
use crate::error::Error;
use crate::numeric::{ExtReal, UnitVal};
use crate::spaces::{PointId, Space};
use crate::stepfn::{Distance, DistanceDistribution, LevelFunction};

pub fn ddf_to_levels(alpha: &DistanceDistribution) -> LevelFunction {
    let jumps = alpha.jumps();
    let mut pieces = Vec::with_capacity(jumps.len() + 1);
    match jumps.last() {
        Some((_, v)) if v.is_one() => {}
        Some((_, v)) => pieces.push((v.complement(), ExtReal::Infinite)),
        None => pieces.push((UnitVal::one(), ExtReal::Infinite)),
    }
    for i in (0..jumps.len()).rev() {
        let upper = match i {
            0 => UnitVal::one(),
            _ => jumps[i - 1].1.complement(),
        };
        pieces.push((upper, jumps[i].0.clone()));
    }
    LevelFunction::from_sorted(pieces)
}

pub fn levels_to_ddf(d: &LevelFunction) -> DistanceDistribution {
    let jumps = d
        .intervals()
        .filter(|p| p.value.is_finite())
        .map(|p| (p.value.clone(), p.lower_value().complement()))
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    DistanceDistribution::from_sorted(jumps)
}

/// Distribution space to level space.
pub fn delta(s: &Space<DistanceDistribution>) -> Space<LevelFunction> {
    s.map_table(ddf_to_levels)
}

/// Level space to distribution space.
pub fn phi(s: &Space<LevelFunction>) -> Space<DistanceDistribution> {
    s.map_table(levels_to_ddf)
}

/// Where a map fails to be non-expansive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Offending {
    /// `d'_λ(f x, f x') > d_λ(x, x')`.
    Level(UnitVal),
    /// `α(x, x', t) > β(f x, f x', t)`.
    Abscissa(ExtReal),
}

impl core::fmt::Display for Offending {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Offending::Level(l) => write!(f, "lambda={l}"),
            Offending::Abscissa(t) => write!(f, "t={t}"),
        }
    }
}

/// Distance types that know their own non-expansiveness criterion.
pub trait Contraction: Distance {
    /// `None` if a map sending a pair at distance `source` to a pair at
    /// distance `target` is non-expansive on that pair.
    fn violation(source: &Self, target: &Self) -> Option<Offending>;
}

impl Contraction for LevelFunction {
    fn violation(source: &Self, target: &Self) -> Option<Offending> {
        target.first_exceeding(source).map(Offending::Level)
    }
}

impl Contraction for DistanceDistribution {
    fn violation(source: &Self, target: &Self) -> Option<Offending> {
        source.first_exceeding(target).map(Offending::Abscissa)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapWitness {
    pub x: usize,
    pub y: usize,
    pub at: Offending,
}

/// Verdict of [`is_nonexpansive`], with the first offending pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub witness: Option<MapWitness>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    pub fn render(&self, source_points: &[PointId]) -> String {
        match &self.witness {
            None => String::from("verdict: pass (map is non-expansive)\n"),
            Some(w) => alloc::format!(
                "verdict: fail\nwitness nonexpansive x={} y={} {}\n",
                source_points[w.x],
                source_points[w.y],
                w.at
            ),
        }
    }
}

/// Checks `f: X → Y` pair by pair on the common refinement of the two step
/// functions.
pub fn is_nonexpansive<F: Contraction>(
    f: &PointMap,
    x: &Space<F>,
    y: &Space<F>,
) -> Result<MorphismReport, Error> {
    if x.tnorm() != y.tnorm() {
        return Err(Error::TNormMismatch(x.tnorm().name(), y.tnorm().name()));
    }
    f.check_fits(x.points(), y.points())?;
    let witness = x.pairs().find_map(|(i, j, d)| {
        let target = y.dist(f.apply(i), f.apply(j));
        F::violation(d, target).map(|at| MapWitness { x: i, y: j, at })
    });
    Ok(MorphismReport { witness })
}
