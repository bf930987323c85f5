//! Canonical step functions.
//!
//! A [`LevelFunction`] is `λ ↦ d_λ(x, y)` on `(0, 1]`: nonincreasing,
//! left-continuous, constant on finitely many intervals `(a, b]`.
//! A [`DistanceDistribution`] is `γ ↦ α(x, y, γ)` on `[0, ∞]`: nondecreasing,
//! left-continuous, with finitely many jumps.
//!
//! Both are kept in canonical form (no two adjacent pieces with the same
//! value), so equality of functions is structural equality.

use alloc::vec::Vec;

use crate::error::StepError;
use crate::numeric::{ExtReal, UnitVal};

/// One constancy interval `(lower, upper]` of a [`LevelFunction`].
#[derive(Clone, Copy, Debug)]
pub struct Piece<'a> {
    /// `None` for the first interval, whose lower end is 0.
    pub lower: Option<&'a UnitVal>,
    pub upper: &'a UnitVal,
    pub value: &'a ExtReal,
}

impl Piece<'_> {
    pub fn lower_value(&self) -> UnitVal {
        self.lower.cloned().unwrap_or_else(UnitVal::zero)
    }
}

/// Nonincreasing left-continuous step function `(0, 1] → [0, ∞]`.
///
/// Stored as `(right endpoint, value)` pairs: the value `w_i` holds on
/// `(b_{i-1}, b_i]` with `b_{-1} = 0`. Endpoints strictly increase and end at
/// `1`; values strictly decrease.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelFunction {
    pieces: Vec<(UnitVal, ExtReal)>,
}

impl LevelFunction {
    /// Builds from `(right endpoint, value)` pairs, merging equal neighbours.
    pub fn new(pieces: Vec<(UnitVal, ExtReal)>) -> Result<Self, StepError> {
        if pieces.is_empty() {
            return Err(StepError::EmptyLevelFunction);
        }
        let mut prev = UnitVal::zero();
        for (i, (b, _)) in pieces.iter().enumerate() {
            if *b <= prev {
                return Err(StepError::EndpointOrder(i));
            }
            prev = b.clone();
        }
        if !prev.is_one() {
            return Err(StepError::LastEndpoint);
        }
        for (i, w) in pieces.windows(2).enumerate() {
            if w[1].1 > w[0].1 {
                return Err(StepError::LevelNotMonotone(i + 1));
            }
        }
        Ok(Self::canonicalize(pieces))
    }

    pub fn constant(value: ExtReal) -> Self {
        LevelFunction {
            pieces: alloc::vec![(UnitVal::one(), value)],
        }
    }

    pub fn zero() -> Self {
        Self::constant(ExtReal::zero())
    }

    /// Drops the endpoint between adjacent pieces of equal value.
    /// Input must already have ordered endpoints and monotone values.
    fn canonicalize(pieces: Vec<(UnitVal, ExtReal)>) -> Self {
        let mut out: Vec<(UnitVal, ExtReal)> = Vec::with_capacity(pieces.len());
        for (b, w) in pieces {
            match out.last_mut() {
                Some(last) if last.1 == w => last.0 = b,
                _ => out.push((b, w)),
            }
        }
        LevelFunction { pieces: out }
    }

    pub fn pieces(&self) -> &[(UnitVal, ExtReal)] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Iterates the constancy intervals with their lower endpoints.
    pub fn intervals(&self) -> impl Iterator<Item = Piece<'_>> + '_ {
        self.pieces.iter().enumerate().map(move |(i, (b, w))| Piece {
            lower: i.checked_sub(1).map(|j| &self.pieces[j].0),
            upper: b,
            value: w,
        })
    }

    /// The right endpoints `b_0 < … < b_{m-1} = 1`.
    pub fn endpoints(&self) -> impl Iterator<Item = &UnitVal> + '_ {
        self.pieces.iter().map(|(b, _)| b)
    }

    /// `d_λ`; a breakpoint takes the value of the interval on its left.
    pub fn eval(&self, level: &UnitVal) -> Result<&ExtReal, StepError> {
        if level.is_zero() {
            return Err(StepError::ZeroLevel);
        }
        Ok(self.eval_positive(level))
    }

    pub(crate) fn eval_positive(&self, level: &UnitVal) -> &ExtReal {
        let i = self.pieces.partition_point(|(b, _)| b < level);
        &self.pieces[i.min(self.pieces.len() - 1)].1
    }

    /// `lim_{ρ ↓ λ} d_ρ` for `λ ∈ [0, 1)`; `None` at `λ = 1`.
    pub fn eval_right(&self, level: &UnitVal) -> Option<&ExtReal> {
        let i = self.pieces.partition_point(|(b, _)| b <= level);
        self.pieces.get(i).map(|(_, w)| w)
    }

    /// `sup_λ d_λ`, the value near `λ = 0`.
    pub fn first_value(&self) -> &ExtReal {
        &self.pieces[0].1
    }

    /// `d_1`.
    pub fn last_value(&self) -> &ExtReal {
        &self.pieces[self.pieces.len() - 1].1
    }

    pub fn is_zero(&self) -> bool {
        self.first_value().is_zero()
    }

    /// Is `self_λ <= other_λ` for every level? On failure returns the first
    /// right endpoint of the common refinement where it breaks.
    pub fn first_exceeding(&self, other: &LevelFunction) -> Option<UnitVal> {
        merged_endpoints(&[self, other])
            .into_iter()
            .find(|b| self.eval_positive(b) > other.eval_positive(b))
    }

    pub fn le(&self, other: &LevelFunction) -> bool {
        self.first_exceeding(other).is_none()
    }

    /// Applies `f` to the value on every interval (which must keep the
    /// result nonincreasing) and re-canonicalizes.
    pub fn map_values(&self, mut f: impl FnMut(&ExtReal) -> ExtReal) -> LevelFunction {
        let pieces: Vec<_> = self.pieces.iter().map(|(b, w)| (b.clone(), f(w))).collect();
        debug_assert!(is_nonincreasing(&pieces));
        Self::canonicalize(pieces)
    }

    /// Builds from pieces already known to be ordered and monotone.
    pub(crate) fn from_sorted(pieces: Vec<(UnitVal, ExtReal)>) -> Self {
        debug_assert!(is_nonincreasing(&pieces));
        Self::canonicalize(pieces)
    }
}

fn is_nonincreasing(pieces: &[(UnitVal, ExtReal)]) -> bool {
    pieces.windows(2).all(|w| w[1].1 <= w[0].1 && w[0].0 < w[1].0)
}

/// Sorted union of the right endpoints of all inputs.
pub fn merged_endpoints(ds: &[&LevelFunction]) -> Vec<UnitVal> {
    let mut all: Vec<UnitVal> = ds.iter().flat_map(|d| d.endpoints().cloned()).collect();
    all.sort();
    all.dedup();
    all
}

fn combine(
    ds: &[&LevelFunction],
    pick: impl Fn(&ExtReal, &ExtReal) -> bool,
) -> Result<LevelFunction, StepError> {
    let first = ds.first().ok_or(StepError::EmptyList)?;
    if ds.len() == 1 {
        return Ok((*first).clone());
    }
    let pieces = merged_endpoints(ds)
        .into_iter()
        .map(|b| {
            let mut best = first.eval_positive(&b);
            for d in &ds[1..] {
                let v = d.eval_positive(&b);
                if pick(v, best) {
                    best = v;
                }
            }
            let best = best.clone();
            (b, best)
        })
        .collect();
    Ok(LevelFunction::from_sorted(pieces))
}

/// Levelwise maximum on the common refinement.
pub fn pointwise_sup(ds: &[&LevelFunction]) -> Result<LevelFunction, StepError> {
    combine(ds, |v, best| v > best)
}

/// Levelwise minimum on the common refinement.
pub fn pointwise_min(ds: &[&LevelFunction]) -> Result<LevelFunction, StepError> {
    combine(ds, |v, best| v < best)
}

/// Nondecreasing left-continuous step function `[0, ∞] → [0, 1]`.
///
/// Stored as jumps `(p_i, v_i)` with finite `p_1 < … < p_k` and
/// `0 < v_1 < … < v_k <= 1`: the value is `v_i` on `(p_i, p_{i+1}]`, `0` on
/// `[0, p_1]`, and `1` at `∞`. When `v_k < 1` the remaining mass jumps at `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistanceDistribution {
    jumps: Vec<(ExtReal, UnitVal)>,
}

impl DistanceDistribution {
    pub fn new(jumps: Vec<(ExtReal, UnitVal)>) -> Result<Self, StepError> {
        let mut prev_point: Option<&ExtReal> = None;
        let mut prev_value = UnitVal::zero();
        for (i, (p, v)) in jumps.iter().enumerate() {
            if p.is_infinite() || prev_point.is_some_and(|q| p <= q) {
                return Err(StepError::JumpOrder(i));
            }
            if *v <= prev_value {
                return Err(StepError::DistributionNotMonotone(i));
            }
            prev_point = Some(p);
            prev_value = v.clone();
        }
        Ok(DistanceDistribution { jumps })
    }

    pub(crate) fn from_sorted(jumps: Vec<(ExtReal, UnitVal)>) -> Self {
        debug_assert!(Self::new(jumps.clone()).is_ok());
        DistanceDistribution { jumps }
    }

    /// `ε_0`: jumps straight to 1 at 0; the distribution of a point to itself.
    pub fn epsilon_zero() -> Self {
        DistanceDistribution {
            jumps: alloc::vec![(ExtReal::zero(), UnitVal::one())],
        }
    }

    pub fn is_epsilon_zero(&self) -> bool {
        *self == Self::epsilon_zero()
    }

    pub fn jumps(&self) -> &[(ExtReal, UnitVal)] {
        &self.jumps
    }

    /// `φ(γ)`, with `φ(0) = 0` and `φ(∞) = 1`.
    pub fn eval(&self, gamma: &ExtReal) -> UnitVal {
        if gamma.is_infinite() {
            return UnitVal::one();
        }
        let i = self.jumps.partition_point(|(p, _)| p < gamma);
        if i == 0 {
            UnitVal::zero()
        } else {
            self.jumps[i - 1].1.clone()
        }
    }

    /// `lim_{s ↓ γ} φ(s)` for finite `γ`.
    pub fn eval_right(&self, gamma: &ExtReal) -> UnitVal {
        debug_assert!(gamma.is_finite());
        let i = self.jumps.partition_point(|(p, _)| p <= gamma);
        if i == 0 {
            UnitVal::zero()
        } else {
            self.jumps[i - 1].1.clone()
        }
    }

    /// Smallest jump point strictly above `gamma`.
    pub fn next_jump_after(&self, gamma: &ExtReal) -> Option<&ExtReal> {
        let i = self.jumps.partition_point(|(p, _)| p <= gamma);
        self.jumps.get(i).map(|(p, _)| p)
    }

    /// Is `self(t) <= other(t)` for every `t`? On failure returns an abscissa
    /// where it breaks.
    pub fn first_exceeding(&self, other: &DistanceDistribution) -> Option<ExtReal> {
        let mut points: Vec<&ExtReal> = self
            .jumps
            .iter()
            .chain(other.jumps.iter())
            .map(|(p, _)| p)
            .collect();
        points.sort();
        points.dedup();
        // Both functions are constant on (p_i, p_{i+1}], so testing each
        // point and a point just right of it covers every t.
        for (i, p) in points.iter().enumerate() {
            if self.eval(p) > other.eval(p) {
                return Some((*p).clone());
            }
            if self.eval_right(p) > other.eval_right(p) {
                let t = match points.get(i + 1) {
                    Some(q) => p.midpoint(q).expect("finite jump points"),
                    None => *p + &ExtReal::from_integer(1),
                };
                return Some(t);
            }
        }
        None
    }

    pub fn le(&self, other: &DistanceDistribution) -> bool {
        self.first_exceeding(other).is_none()
    }
}

/// Distance-like values stored in a space table.
pub trait Distance: Clone + Eq + core::fmt::Debug {
    /// The self-distance placed on the diagonal.
    fn self_distance() -> Self;
}

impl Distance for LevelFunction {
    fn self_distance() -> Self {
        LevelFunction::zero()
    }
}

impl Distance for DistanceDistribution {
    fn self_distance() -> Self {
        DistanceDistribution::epsilon_zero()
    }
}
