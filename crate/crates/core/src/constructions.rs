//! Maps between carriers, initial lifts, products, subspaces and the
//! separation quotient.
//!
//! Lifts are computed for finite sources only. There the pointwise supremum
//! `e_ξ(x, y) = max_i d^i_ξ(f_i x, f_i y)` is already a left-continuous step
//! function, so the regularization `d_λ = inf_{ξ<λ} e_ξ` leaves it unchanged
//! and the lift is just [`pointwise_sup`] per pair.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::spaces::{LevelSpace, PointId, Space};
use crate::stepfn::{pointwise_sup, LevelFunction};

/// A set of point indices.
pub type PointSet = BTreeSet<usize>;

/// Products larger than this many points are refused.
pub const DEFAULT_PRODUCT_CAP: usize = 4096;

/// A total function between two finite carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    source: Vec<PointId>,
    target: Vec<PointId>,
    assign: Vec<usize>,
}

impl PointMap {
    pub fn new(source: Vec<PointId>, target: Vec<PointId>, assign: Vec<usize>) -> Result<Self, Error> {
        if assign.len() != source.len() {
            return Err(Error::MapMismatch(format!(
                "{} images for {} source points",
                assign.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assign.iter().find(|&&t| t >= target.len()) {
            return Err(Error::PointOutOfRange(bad));
        }
        Ok(PointMap {
            source,
            target,
            assign,
        })
    }

    /// Builds from `(source id, target id)` pairs; every source id must
    /// appear exactly once.
    pub fn from_ids<'a>(
        source: &[PointId],
        target: &[PointId],
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, Error> {
        let mut assign: Vec<Option<usize>> = alloc::vec![None; source.len()];
        for (s, t) in pairs {
            let i = position(source, s)?;
            let j = position(target, t)?;
            if assign[i].replace(j).is_some() {
                return Err(Error::MapMismatch(format!("`{s}` mapped twice")));
            }
        }
        let assign = assign
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| Error::MapMismatch(format!("`{}` has no image", source[i]))))
            .collect::<Result<_, _>>()?;
        Self::new(source.to_vec(), target.to_vec(), assign)
    }

    pub fn identity(points: &[PointId]) -> Self {
        PointMap {
            source: points.to_vec(),
            target: points.to_vec(),
            assign: (0..points.len()).collect(),
        }
    }

    pub fn constant(source: &[PointId], target: &[PointId], to: usize) -> Self {
        assert!(to < target.len());
        PointMap {
            source: source.to_vec(),
            target: target.to_vec(),
            assign: alloc::vec![to; source.len()],
        }
    }

    pub fn source(&self) -> &[PointId] {
        &self.source
    }

    pub fn target(&self) -> &[PointId] {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn apply(&self, i: usize) -> usize {
        self.assign[i]
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &PointMap) -> Result<PointMap, Error> {
        if self.target != then.source {
            return Err(Error::MapMismatch(String::from(
                "composition across different carriers",
            )));
        }
        Ok(PointMap {
            source: self.source.clone(),
            target: then.target.clone(),
            assign: self.assign.iter().map(|&j| then.assign[j]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.assign.iter().all(|t| seen.insert(*t))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.len()
    }

    pub fn image(&self) -> PointSet {
        self.assign.iter().copied().collect()
    }

    /// Image of a subset of the source.
    pub fn image_of(&self, set: &PointSet) -> PointSet {
        set.iter().map(|&i| self.assign[i]).collect()
    }

    pub fn check_fits(&self, source: &[PointId], target: &[PointId]) -> Result<(), Error> {
        if self.source != source {
            return Err(Error::MapMismatch(String::from("source carrier differs")));
        }
        if self.target != target {
            return Err(Error::MapMismatch(String::from("target carrier differs")));
        }
        Ok(())
    }
}

fn position(points: &[PointId], id: &str) -> Result<usize, Error> {
    points
        .iter()
        .position(|p| p == id)
        .ok_or_else(|| Error::UnknownPoint(String::from(id)))
}

/// Maps out of a common domain into level spaces sharing one t-norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredSource {
    domain: Vec<PointId>,
    legs: Vec<(PointMap, LevelSpace)>,
}

impl StructuredSource {
    pub fn new(domain: Vec<PointId>, legs: Vec<(PointMap, LevelSpace)>) -> Result<Self, Error> {
        let (_, first) = legs.first().ok_or(Error::EmptySource)?;
        for (f, space) in &legs {
            if space.tnorm() != first.tnorm() {
                return Err(Error::TNormMismatch(first.tnorm().name(), space.tnorm().name()));
            }
            f.check_fits(&domain, space.points())?;
        }
        Ok(StructuredSource { domain, legs })
    }

    pub fn domain(&self) -> &[PointId] {
        &self.domain
    }

    pub fn legs(&self) -> &[(PointMap, LevelSpace)] {
        &self.legs
    }

    /// Do the maps jointly tell every two domain points apart?
    pub fn is_point_separating(&self) -> bool {
        let n = self.domain.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| self.legs.iter().any(|(f, _)| f.apply(i) != f.apply(j)))
        })
    }
}

/// The coarsest level structure on the domain making every leg
/// non-expansive. Flagged separated iff the source is point-separating and
/// every codomain is separated.
pub fn initial_lift(src: &StructuredSource) -> Result<LevelSpace, Error> {
    let tnorm = src.legs[0].1.tnorm();
    let separated =
        src.legs.iter().all(|(_, s)| s.separated()) && src.is_point_separating();
    Space::from_fn(src.domain.clone(), tnorm, separated, |i, j| {
        let pulled: Vec<&LevelFunction> = src
            .legs
            .iter()
            .map(|(f, s)| s.dist(f.apply(i), f.apply(j)))
            .collect();
        pointwise_sup(&pulled).expect("source is nonempty")
    })
}

/// Product with the default size cap; see [`product_with_cap`].
pub fn product(spaces: &[LevelSpace]) -> Result<(LevelSpace, Vec<PointMap>), Error> {
    product_with_cap(spaces, DEFAULT_PRODUCT_CAP)
}

/// Cartesian product carrying the initial structure of its projections.
///
/// Points are the tuples in lexicographic order of factor indices; a tuple of
/// ids `a, b` is named `(a;b)`.
pub fn product_with_cap(
    spaces: &[LevelSpace],
    cap: usize,
) -> Result<(LevelSpace, Vec<PointMap>), Error> {
    if spaces.is_empty() {
        return Err(Error::EmptySource);
    }
    let size = spaces
        .iter()
        .try_fold(1usize, |acc, s| acc.checked_mul(s.len()))
        .unwrap_or(usize::MAX);
    if size > cap {
        return Err(Error::ProductTooLarge { size, cap });
    }
    let mut tuples: Vec<Vec<usize>> = Vec::with_capacity(size);
    if size > 0 {
        let mut cur = alloc::vec![0usize; spaces.len()];
        loop {
            tuples.push(cur.clone());
            let mut k = spaces.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < spaces[k].len() {
                    break;
                }
                cur[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX {
                break;
            }
        }
    }
    let ids: Vec<PointId> = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().zip(spaces).map(|(&i, s)| s.id(i)).collect();
            format!("({})", parts.join(";"))
        })
        .collect();
    let projections: Vec<PointMap> = spaces
        .iter()
        .enumerate()
        .map(|(k, s)| PointMap {
            source: ids.clone(),
            target: s.points().to_vec(),
            assign: tuples.iter().map(|t| t[k]).collect(),
        })
        .collect();
    let legs = projections.iter().cloned().zip(spaces.iter().cloned()).collect();
    let src = StructuredSource::new(ids, legs)?;
    let lifted = initial_lift(&src)?;
    Ok((lifted, projections))
}

/// Restriction to `subset`, in carrier order.
pub fn subspace(s: &LevelSpace, subset: &PointSet) -> Result<LevelSpace, Error> {
    for &i in subset {
        s.check_index(i)?;
    }
    let keep: Vec<usize> = subset.iter().copied().collect();
    let points = keep.iter().map(|&i| s.points()[i].clone()).collect();
    Space::from_fn(points, s.tnorm(), s.separated(), |a, b| {
        s.dist(keep[a], keep[b]).clone()
    })
}

/// Classes of points at distance `0` on every level, each named after its
/// first member in carrier order.
pub fn zero_distance_classes(s: &LevelSpace) -> Vec<usize> {
    let n = s.len();
    let mut rep: Vec<usize> = (0..n).collect();
    fn find(rep: &mut [usize], mut i: usize) -> usize {
        while rep[i] != i {
            rep[i] = rep[rep[i]];
            i = rep[i];
        }
        i
    }
    for (i, j, d) in s.pairs() {
        if d.is_zero() {
            let (a, b) = (find(&mut rep, i), find(&mut rep, j));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            rep[hi] = lo;
        }
    }
    (0..n).map(|i| find(&mut rep, i)).collect()
}

/// Identifies points at distance `0` on every level and returns the separated
/// quotient with its quotient map. Requires (UT), which makes the relation
/// an equivalence and the quotient distances independent of representatives.
pub fn t0_quotient(s: &LevelSpace) -> Result<(LevelSpace, PointMap), Error> {
    let class = zero_distance_classes(s);
    let reps: Vec<usize> = (0..s.len()).filter(|&i| class[i] == i).collect();
    let points: Vec<PointId> = reps.iter().map(|&r| s.points()[r].clone()).collect();
    let quotient = Space::from_fn(points.clone(), s.tnorm(), true, |a, b| {
        s.dist(reps[a], reps[b]).clone()
    })?;
    let assign = class
        .iter()
        .map(|c| reps.binary_search(c).expect("class root is a representative"))
        .collect();
    let map = PointMap::new(s.points().to_vec(), points, assign)?;
    Ok((quotient, map))
}
