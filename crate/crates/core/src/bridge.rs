//! Extended metric spaces inside the level spaces.
//!
//! A metric `m` becomes the constant family `d_λ = m`. Going back there are
//! two canonical choices: [`coreflect`] takes `sup_λ d_λ`, the value on the
//! first level interval, and [`reflect`] takes `d_1`, closes it under the
//! triangle inequality with [`path_metric`] and identifies points at
//! distance zero.

use alloc::format;
use alloc::vec::Vec;

use crate::constructions::PointMap;
use crate::error::Error;
use crate::numeric::ExtReal;
use crate::spaces::{pair_index, validate_level_space, LevelSpace, PointId, Space};
use crate::stepfn::LevelFunction;
use crate::tnorm::TNorm;

/// A symmetric table of extended distances with zero diagonal. The triangle
/// inequality is not enforced on construction; see [`MetricSpace::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSpace {
    points: Vec<PointId>,
    table: Vec<ExtReal>,
    separated: bool,
}

impl MetricSpace {
    /// `table` lists the pairs `i < j` row by row.
    pub fn new(points: Vec<PointId>, table: Vec<ExtReal>, separated: bool) -> Result<Self, Error> {
        let n = points.len();
        let expected = n * n.saturating_sub(1) / 2;
        if table.len() != expected {
            return Err(Error::TableSize {
                expected,
                found: table.len(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        Ok(MetricSpace {
            points,
            table,
            separated,
        })
    }

    pub fn from_fn(
        points: Vec<PointId>,
        separated: bool,
        mut f: impl FnMut(usize, usize) -> ExtReal,
    ) -> Result<Self, Error> {
        let n = points.len();
        let mut table = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                table.push(f(i, j));
            }
        }
        Self::new(points, table, separated)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn table(&self) -> &[ExtReal] {
        &self.table
    }

    pub fn separated(&self) -> bool {
        self.separated
    }

    pub fn with_separated(mut self, separated: bool) -> Self {
        self.separated = separated;
        self
    }

    pub fn dist(&self, i: usize, j: usize) -> ExtReal {
        match i.cmp(&j) {
            core::cmp::Ordering::Equal => ExtReal::zero(),
            core::cmp::Ordering::Less => self.table[pair_index(self.len(), i, j)].clone(),
            core::cmp::Ordering::Greater => self.table[pair_index(self.len(), j, i)].clone(),
        }
    }

    /// Checks the triangle inequality and, if flagged, separation.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.dist(x, z) > &self.dist(x, y) + &self.dist(y, z) {
                        return Err(Error::InvalidMetric(format!(
                            "d({0},{2}) > d({0},{1}) + d({1},{2})",
                            self.points[x], self.points[y], self.points[z]
                        )));
                    }
                }
            }
        }
        if self.separated {
            for x in 0..n {
                for y in x + 1..n {
                    if self.dist(x, y).is_zero() {
                        return Err(Error::InvalidMetric(format!(
                            "distinct points {} and {} at distance 0",
                            self.points[x], self.points[y]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The constant family `d_λ = m`.
pub fn embed_metric(m: &MetricSpace, tnorm: TNorm) -> Result<LevelSpace, Error> {
    m.validate()?;
    Space::from_fn(m.points.clone(), tnorm, m.separated, |i, j| {
        LevelFunction::constant(m.dist(i, j))
    })
}

fn require_valid(s: &LevelSpace) -> Result<(), Error> {
    let report = validate_level_space(s);
    match report.witnesses.first() {
        None => Ok(()),
        Some(w) => Err(Error::InvalidSpace(w.render(s.points()))),
    }
}

/// `sup_λ d_λ` on the same carrier, with the identity map from the embedded
/// metric back into `s`.
pub fn coreflect(s: &LevelSpace) -> Result<(MetricSpace, PointMap), Error> {
    require_valid(s)?;
    let m = MetricSpace {
        points: s.points().to_vec(),
        table: s.table().iter().map(|d| d.first_value().clone()).collect(),
        separated: s.separated(),
    };
    Ok((m, PointMap::identity(s.points())))
}

/// The largest pseudometric below `m`: shortest paths, relaxed to a fixpoint.
pub fn path_metric(m: &MetricSpace) -> MetricSpace {
    let n = m.len();
    let mut d: Vec<Vec<ExtReal>> = (0..n).map(|i| (0..n).map(|j| m.dist(i, j)).collect()).collect();
    for _ in 0..n {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = &d[i][k] + &d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let table: Vec<ExtReal> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| d[i][j].clone())
        .collect();
    let separated = table.iter().all(|w| !w.is_zero());
    MetricSpace {
        points: m.points.clone(),
        table,
        separated,
    }
}

/// `d_1` completed by [`path_metric`] and separated by identifying points at
/// distance `0`, each block named after its first member. Returns the
/// quotient metric and the quotient map.
pub fn reflect(s: &LevelSpace) -> Result<(MetricSpace, PointMap), Error> {
    require_valid(s)?;
    let d1 = MetricSpace {
        points: s.points().to_vec(),
        table: s.table().iter().map(|d| d.last_value().clone()).collect(),
        separated: false,
    };
    let full = path_metric(&d1);
    let n = full.len();
    // the completed distance is a pseudometric, so zero distance is already
    // an equivalence and the first zero-distance partner names the block
    let block: Vec<usize> = (0..n)
        .map(|i| (0..=i).find(|&j| full.dist(j, i).is_zero()).expect("d(i,i) = 0"))
        .collect();
    let reps: Vec<usize> = (0..n).filter(|&i| block[i] == i).collect();
    for i in 0..n {
        for j in 0..n {
            debug_assert_eq!(full.dist(i, j), full.dist(block[i], block[j]));
        }
    }
    let points: Vec<PointId> = reps.iter().map(|&r| full.points[r].clone()).collect();
    let quotient = MetricSpace::from_fn(points.clone(), true, |a, b| full.dist(reps[a], reps[b]))?;
    let assign = block
        .iter()
        .map(|b| reps.binary_search(b).expect("block root is a representative"))
        .collect();
    let map = PointMap::new(s.points().to_vec(), points, assign)?;
    Ok((quotient, map))
}
