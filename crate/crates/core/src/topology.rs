//! Strong uniformity and topology of a level space, its closure operator,
//! and the morphism classes it determines.
//!
//! The strong uniformity is generated by the entourages
//! `U_λ^γ = {(x, y) | d_λ(x, y) < γ}`. On a finite carrier the neighbourhood
//! filter of `y` has a least member, `N(y) = {x | d_λ(x, y) = 0 for all λ}`,
//! so the strong topology is determined by these sets and
//! `y ∈ cl(A) ⇔ N(y) ∩ A ≠ ∅ ⇔ inf_{a ∈ A} d_λ(y, a) = 0 for every λ`.
//! [`closure`] decides the last form on the pointwise minimum of the step
//! functions; [`oracle`] recomputes it along the other characterizations.
//!
//! On a separated finite space every `N(y)` is `{y}`, so the topology is
//! discrete and every subset is closed. Non-trivial closures only show up on
//! pseudo spaces, which [`closure`] accepts as well.
//!
//! The regular closure quantifies over every pair of morphisms into every
//! separated space. [`reg_closure_sampled`] can only intersect over a finite
//! family of such pairs; it is exact when the family contains a
//! [`cospan_witness`] for each point outside the closure.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::constructions::{initial_lift, t0_quotient, PointMap, PointSet, StructuredSource};
use crate::error::Error;
use crate::functors::is_nonexpansive;
use crate::numeric::{ExtReal, UnitVal};
use crate::spaces::{validate_level_space, LevelSpace, PointId, Space};
use crate::stepfn::{merged_endpoints, pointwise_min, LevelFunction};

/// Id given to the point that [`cospan_witness`] adds, primed until fresh.
pub const COLLAPSED_POINT: &str = "⊥";

/// The entourage `U_λ^γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entourage {
    pub level: UnitVal,
    pub radius: ExtReal,
}

impl Entourage {
    pub fn contains(&self, s: &LevelSpace, x: usize, y: usize) -> bool {
        s.dist(x, y).eval_positive(&self.level) < &self.radius
    }
}

/// Entourages whose intersection is the intersection of all entourages:
/// one per breakpoint level, with a radius below every positive distance.
pub fn entourage_grid(s: &LevelSpace) -> Vec<Entourage> {
    let all: Vec<&LevelFunction> = s.table().iter().collect();
    let smallest = s
        .table()
        .iter()
        .flat_map(|d| d.pieces().iter().map(|(_, w)| w))
        .filter(|w| !w.is_zero() && w.is_finite())
        .min()
        .cloned();
    let radius = match smallest {
        Some(w) => w.midpoint(&ExtReal::zero()).expect("finite"),
        None => ExtReal::from_integer(1),
    };
    let mut levels = merged_endpoints(&all);
    if levels.is_empty() {
        levels.push(UnitVal::one());
    }
    levels
        .into_iter()
        .map(|level| Entourage {
            level,
            radius: radius.clone(),
        })
        .collect()
}

/// A topology on `{0, .., n-1}` given by the least open neighbourhood of
/// each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    minimal: Vec<PointSet>,
}

impl FiniteTopology {
    /// Panics unless each point lies in its own neighbourhood and
    /// neighbourhoods are nested along membership.
    pub fn from_minimal(minimal: Vec<PointSet>) -> Self {
        for (y, n) in minimal.iter().enumerate() {
            assert!(n.contains(&y), "point {y} outside its neighbourhood");
            for &x in n {
                assert!(minimal[x].is_subset(n), "neighbourhoods not nested at {x}");
            }
        }
        FiniteTopology { minimal }
    }

    pub fn len(&self) -> usize {
        self.minimal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minimal.is_empty()
    }

    pub fn neighbourhood(&self, y: usize) -> &PointSet {
        &self.minimal[y]
    }

    pub fn is_open(&self, set: &PointSet) -> bool {
        set.iter().all(|&y| self.minimal[y].is_subset(set))
    }

    /// All open sets, ordered by their bitmask. Only for small carriers.
    pub fn opens(&self) -> Vec<PointSet> {
        assert!(self.len() < 20, "too many subsets to enumerate");
        (0u32..1 << self.len())
            .map(|mask| (0..self.len()).filter(|i| mask >> i & 1 == 1).collect())
            .filter(|set| self.is_open(set))
            .collect()
    }

    pub fn closure(&self, set: &PointSet) -> PointSet {
        (0..self.len())
            .filter(|&y| !self.minimal[y].is_disjoint(set))
            .collect()
    }

    pub fn is_t0(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (x + 1..n).all(|y| !(self.minimal[x].contains(&y) && self.minimal[y].contains(&x)))
        })
    }

    pub fn is_discrete(&self) -> bool {
        self.minimal.iter().all(|n| n.len() == 1)
    }

    pub fn is_indiscrete(&self) -> bool {
        self.minimal.iter().all(|n| n.len() == self.len())
    }
}

/// The strong topology, with neighbourhoods cut out by [`entourage_grid`].
pub fn strong_topology(s: &LevelSpace) -> FiniteTopology {
    let grid = entourage_grid(s);
    let minimal = (0..s.len())
        .map(|y| {
            (0..s.len())
                .filter(|&x| grid.iter().all(|u| u.contains(s, x, y)))
                .collect()
        })
        .collect();
    FiniteTopology::from_minimal(minimal)
}

/// `inf_{a ∈ A} d(y, a)` as a step function; `∞` for empty `A`.
pub fn distance_to_set(s: &LevelSpace, y: usize, set: &PointSet) -> LevelFunction {
    let ds: Vec<&LevelFunction> = set.iter().map(|&a| s.dist(y, a)).collect();
    if ds.is_empty() {
        return LevelFunction::constant(ExtReal::Infinite);
    }
    pointwise_min(&ds).expect("nonempty")
}

fn check_set(s: &LevelSpace, set: &PointSet) -> Result<(), Error> {
    set.iter().try_for_each(|&i| s.check_index(i))
}

/// Closure in the strong topology: the points at distance `0` from `set`
/// on every level.
pub fn closure(s: &LevelSpace, set: &PointSet) -> Result<PointSet, Error> {
    check_set(s, set)?;
    Ok((0..s.len())
        .filter(|&y| distance_to_set(s, y, set).is_zero())
        .collect())
}

/// Which characterization of the T0 property was evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T0Report {
    /// Every map from the two-point indiscrete space is constant.
    pub indiscrete_maps: bool,
    /// Distinct points are at positive distance on some level.
    pub separation: bool,
    /// The entourages intersect to the diagonal.
    pub uniformity: bool,
    /// The strong topology is T0.
    pub topology: bool,
    /// A non-constant non-expansive map from the indiscrete pair, if any.
    pub witness: Option<(usize, usize)>,
}

impl T0Report {
    pub fn holds(&self) -> bool {
        self.separation
    }

    pub fn render(&self, points: &[PointId]) -> String {
        let mut out = String::from(if self.holds() {
            "verdict: pass (T0)\n"
        } else {
            "verdict: fail\n"
        });
        for (name, v) in [
            ("indiscrete-maps", self.indiscrete_maps),
            ("separation", self.separation),
            ("uniformity", self.uniformity),
            ("topology", self.topology),
        ] {
            out.push_str(&format!("t0 {name}: {}\n", if v { "pass" } else { "fail" }));
        }
        if let Some((x, y)) = self.witness {
            out.push_str(&format!("witness t0 0->{} 1->{}\n", points[x], points[y]));
        }
        out
    }
}

/// Evaluates the four equivalent T0 characterizations and insists they agree.
pub fn is_t0(s: &LevelSpace) -> Result<T0Report, Error> {
    let pair: Vec<PointId> = ["0", "1"].iter().map(|p| String::from(*p)).collect();
    let indiscrete = Space::new(
        pair.clone(),
        s.tnorm(),
        false,
        alloc::vec![LevelFunction::zero()],
    )?;
    let mut witness = None;
    'maps: for x in 0..s.len() {
        for y in 0..s.len() {
            if x == y {
                continue;
            }
            let f = PointMap::new(pair.clone(), s.points().to_vec(), alloc::vec![x, y])?;
            if is_nonexpansive(&f, &indiscrete, s)?.passed() {
                witness = Some((x, y));
                break 'maps;
            }
        }
    }
    let separation = s.pairs().all(|(_, _, d)| !d.is_zero());
    let grid = entourage_grid(s);
    let uniformity = s
        .pairs()
        .all(|(x, y, _)| grid.iter().any(|u| !u.contains(s, x, y)));
    let topology = strong_topology(s).is_t0();
    let report = T0Report {
        indiscrete_maps: witness.is_none(),
        separation,
        uniformity,
        topology,
        witness,
    };
    let verdicts = [report.indiscrete_maps, separation, uniformity, topology];
    if verdicts.iter().any(|&v| v != separation) {
        return Err(Error::T0Disagreement(format!("{verdicts:?}")));
    }
    Ok(report)
}

/// Morphism classes of a non-expansive map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// Dense image.
    pub epi: bool,
    /// Injective.
    pub mono: bool,
    /// Injective, initial and with closed image.
    pub regular_mono: bool,
}

impl Classification {
    pub fn render(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        format!(
            "epi: {}\nmono: {}\nregular-mono: {}\n",
            yn(self.epi),
            yn(self.mono),
            yn(self.regular_mono)
        )
    }
}

pub fn classify_morphism(f: &PointMap, x: &LevelSpace, y: &LevelSpace) -> Result<Classification, Error> {
    if !is_nonexpansive(f, x, y)?.passed() {
        return Err(Error::NotNonExpansive);
    }
    let image = f.image();
    let closed = closure(y, &image)?;
    let epi = closed.len() == y.len();
    let mono = f.is_injective();
    let regular_mono = mono && closed == image && {
        let src = StructuredSource::new(x.points().to_vec(), alloc::vec![(f.clone(), y.clone())])?;
        initial_lift(&src)?.table() == x.table()
    };
    Ok(Classification {
        epi,
        mono,
        regular_mono,
    })
}

/// Two maps `u, v: Y → target` meant to agree on a subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cospan {
    pub target: LevelSpace,
    pub u: PointMap,
    pub v: PointMap,
}

fn fresh_bottom(s: &LevelSpace) -> PointId {
    let mut bottom = String::from(COLLAPSED_POINT);
    while s.points().contains(&bottom) {
        bottom.push('\'');
    }
    bottom
}

fn flag_separated(z: LevelSpace) -> LevelSpace {
    let separated = z.pairs().all(|(_, _, d)| !d.is_zero());
    z.with_separated(separated)
}

/// `(Y ∖ cl(A)) ∪ {⊥}` with `e(p, q) = d(p, q)` off `⊥` and
/// `e(p, ⊥) = d(p, A)`, together with the collapsing map.
///
/// This space can fail (UT) once `A` has two points: `d(p, q)` is only
/// bounded by `d(p, a) + d(a, q)` for a common `a`, not by
/// `d(p, A) + d(q, A)`.
pub fn collapse_closure(s: &LevelSpace, set: &PointSet) -> Result<(LevelSpace, PointMap), Error> {
    let closed = closure(s, set)?;
    let outside: Vec<usize> = (0..s.len()).filter(|i| !closed.contains(i)).collect();
    let mut points: Vec<PointId> = outside.iter().map(|&i| s.points()[i].clone()).collect();
    points.push(fresh_bottom(s));
    let k = outside.len();
    let z = Space::from_fn(points, s.tnorm(), false, |a, b| {
        if b == k {
            distance_to_set(s, outside[a], set)
        } else {
            s.dist(outside[a], outside[b]).clone()
        }
    })?;
    let z = flag_separated(z);
    let assign = (0..s.len())
        .map(|i| outside.binary_search(&i).unwrap_or(k))
        .collect();
    let u = PointMap::new(s.points().to_vec(), z.points().to_vec(), assign)?;
    Ok((z, u))
}

/// Separates `y` from `cl(A)` by two non-expansive maps into a valid space
/// that agree on `cl(A)`: `u` collapses `cl(A)` onto a new point `⊥` and `v`
/// is constant at `⊥`.
///
/// The target is [`collapse_closure`] when that space passes every axiom,
/// with points at distance identically `0` identified so that it is
/// separated even when `s` is not. Otherwise it is the two-point space `{y, ⊥}` at distance
/// `min { d(p, a) | p ∉ cl(A), a ∈ cl(A) }`, with `u` sending everything
/// outside `cl(A)` to `y`.
pub fn cospan_witness(s: &LevelSpace, set: &PointSet, y: usize) -> Result<Cospan, Error> {
    s.check_index(y)?;
    let closed = closure(s, set)?;
    if closed.contains(&y) {
        return Err(Error::PointInClosure(String::from(s.id(y))));
    }
    let (z, u) = collapse_closure(s, set)?;
    if validate_level_space(&z).passed() {
        let bottom = z.len() - 1;
        let (z, q) = t0_quotient(&z)?;
        let v = PointMap::constant(s.points(), z.points(), q.apply(bottom));
        return Ok(Cospan { target: z, u: u.then(&q)?, v });
    }
    let across: Vec<&LevelFunction> = (0..s.len())
        .filter(|p| !closed.contains(p))
        .flat_map(|p| closed.iter().map(move |&a| s.dist(p, a)))
        .collect();
    let gap = match across.is_empty() {
        true => LevelFunction::constant(ExtReal::Infinite),
        false => pointwise_min(&across)?,
    };
    let points = alloc::vec![String::from(s.id(y)), fresh_bottom(s)];
    let z = flag_separated(Space::new(points, s.tnorm(), false, alloc::vec![gap])?);
    let assign = (0..s.len()).map(|p| usize::from(closed.contains(&p))).collect();
    let u = PointMap::new(s.points().to_vec(), z.points().to_vec(), assign)?;
    let v = PointMap::constant(s.points(), z.points(), 1);
    Ok(Cospan { target: z, u, v })
}

/// Points on which every supplied pair agrees. Each pair must be
/// non-expansive and agree on `set`.
pub fn reg_closure_sampled(
    s: &LevelSpace,
    set: &PointSet,
    cospans: &[Cospan],
) -> Result<PointSet, Error> {
    check_set(s, set)?;
    let mut result: PointSet = (0..s.len()).collect();
    for (k, c) in cospans.iter().enumerate() {
        for m in [&c.u, &c.v] {
            if !is_nonexpansive(m, s, &c.target)?.passed() {
                return Err(Error::NotNonExpansive);
            }
        }
        if set.iter().any(|&a| c.u.apply(a) != c.v.apply(a)) {
            return Err(Error::CospanDisagrees(k));
        }
        result.retain(|&y| c.u.apply(y) == c.v.apply(y));
    }
    Ok(result)
}

/// The other characterizations of closure membership, computed without
/// [`closure`]'s step-function minimum.
pub mod oracle {
    use super::*;

    /// Every neighbourhood of `y` in the strong topology meets `set`.
    pub fn by_neighbourhoods(s: &LevelSpace, set: &PointSet, y: usize) -> bool {
        !strong_topology(s).neighbourhood(y).is_disjoint(set)
    }

    /// `d_λ(y, A) < γ` for all levels and all finite radii, probed at every
    /// breakpoint level with radii just above zero.
    pub fn by_radii(s: &LevelSpace, set: &PointSet, y: usize) -> bool {
        let ds: Vec<&LevelFunction> = set.iter().map(|&a| s.dist(y, a)).collect();
        let mut levels = merged_endpoints(&ds);
        levels.push(UnitVal::one());
        levels.iter().all(|l| {
            let inf = ds.iter().map(|d| d.eval_positive(l)).min();
            let Some(inf) = inf else { return false };
            // below every positive value the infimum could take
            let radius = match inf {
                ExtReal::Finite(_) if !inf.is_zero() => inf.midpoint(&ExtReal::zero()).unwrap(),
                _ => ExtReal::from_integer(1),
            };
            inf < &radius
        })
    }

    /// `d_ρ(y, A) < ρ` for every `ρ ∈ (0, 1]`. On a constancy interval
    /// `(a, b]` with value `w` this says `w ≤ a`.
    pub fn by_diagonal(s: &LevelSpace, set: &PointSet, y: usize) -> bool {
        if set.is_empty() {
            return false;
        }
        let ds: Vec<&LevelFunction> = set.iter().map(|&a| s.dist(y, a)).collect();
        let mut lower = UnitVal::zero();
        for upper in merged_endpoints(&ds) {
            let w = ds.iter().map(|d| d.eval_positive(&upper)).min().unwrap();
            if *w > ExtReal::from(lower.clone()) {
                return false;
            }
            lower = upper;
        }
        true
    }
}
