//! Finite probabilistic metric spaces in both presentations, and the axiom
//! verifiers.
//!
//! A [`LevelSpace`] assigns each pair of distinct points a [`LevelFunction`]
//! `λ ↦ d_λ(x, y)`; a [`DdfSpace`] assigns a [`DistanceDistribution`]. In
//! both, the diagonal is implicit (`0`, resp. `ε_0`) and every unordered pair
//! is stored once, so symmetry holds by construction. What remains to check
//! is the mixed triangle inequality (UT) and separation (UH) for level
//! spaces, and (P4)/(P5) for distribution spaces.
//!
//! # Deciding (UT) exactly
//!
//! (UT) asks, for all real `ε, λ, λ' ∈ (0, 1]` with
//! `(1 - λ') ∗ (1 - λ) > 1 - ε`, that `d_ε(x, z) <= d_λ(x, y) + d_λ'(y, z)`.
//!
//! Fix a constancy interval `(a, b]` of `d(x, y)` and `(a', b']` of
//! `d(y, z)`. The right-hand side is constant there. The guard reads
//! `ε > r(λ, λ')` with `r(λ, λ') = 1 - (1 - λ') ∗ (1 - λ)`, which is
//! nondecreasing and continuous in both arguments, so the set of levels `ε`
//! activated by some `λ ∈ (a, b]`, `λ' ∈ (a', b']` is exactly
//! `(r(a, a'), 1]`. Since `d_ε(x, z)` is nonincreasing in `ε`, its supremum
//! over that set is the right limit of `d(x, z)` at `r(a, a')`. Comparing this
//! single value against the interval sum, for every pair of intervals and
//! every triple, is therefore equivalent to (UT) over the continuum.
//!
//! (P5) reduces the same way: on jump intervals `(p_i, p_{i+1}]` and
//! `(q_j, q_{j+1}]` the product `α(y, z, r) ∗ α(x, y, s)` is constant, and the
//! infimum of `α(x, z, r + s)` is the right limit at `p_i + q_j`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::Error;
use crate::numeric::{ExtReal, UnitVal};
use crate::stepfn::{Distance, DistanceDistribution, LevelFunction};
use crate::tnorm::TNorm;

pub type PointId = String;

/// Finite carrier, symmetric distance table and t-norm tag.
///
/// `separated = true` places the space in ProbMet (verifiers then check
/// (UH)/(P4)); `false` makes it a pseudo space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space<F> {
    points: Vec<PointId>,
    table: Vec<F>,
    tnorm: TNorm,
    separated: bool,
    diagonal: F,
}

pub type LevelSpace = Space<LevelFunction>;
pub type DdfSpace = Space<DistanceDistribution>;

/// Position of the unordered pair `{i, j}`, `i < j`, in a table over `n` points.
pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl<F: Distance> Space<F> {
    /// `table` lists the pairs `(0,1), (0,2), …, (0,n-1), (1,2), …`.
    pub fn new(
        points: Vec<PointId>,
        tnorm: TNorm,
        separated: bool,
        table: Vec<F>,
    ) -> Result<Self, Error> {
        let n = points.len();
        let expected = n * n.saturating_sub(1) / 2;
        if table.len() != expected {
            return Err(Error::TableSize {
                expected,
                found: table.len(),
            });
        }
        let mut seen = BTreeMap::new();
        for p in &points {
            if seen.insert(p.as_str(), ()).is_some() {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        Ok(Space {
            points,
            table,
            tnorm,
            separated,
            diagonal: F::self_distance(),
        })
    }

    /// Builds the table from `f(i, j)` for `i < j`.
    pub fn from_fn(
        points: Vec<PointId>,
        tnorm: TNorm,
        separated: bool,
        mut f: impl FnMut(usize, usize) -> F,
    ) -> Result<Self, Error> {
        let n = points.len();
        let mut table = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                table.push(f(i, j));
            }
        }
        Self::new(points, tnorm, separated, table)
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

    pub fn id(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize, Error> {
        self.points
            .iter()
            .position(|p| p == id)
            .ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    pub fn check_index(&self, i: usize) -> Result<(), Error> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange(i))
        }
    }

    pub fn tnorm(&self) -> TNorm {
        self.tnorm
    }

    pub fn separated(&self) -> bool {
        self.separated
    }

    pub fn with_separated(mut self, separated: bool) -> Self {
        self.separated = separated;
        self
    }

    pub fn with_tnorm(mut self, tnorm: TNorm) -> Self {
        self.tnorm = tnorm;
        self
    }

    /// Distance between points `i` and `j`, the diagonal included.
    pub fn dist(&self, i: usize, j: usize) -> &F {
        match i.cmp(&j) {
            core::cmp::Ordering::Equal => &self.diagonal,
            core::cmp::Ordering::Less => &self.table[pair_index(self.len(), i, j)],
            core::cmp::Ordering::Greater => &self.table[pair_index(self.len(), j, i)],
        }
    }

    pub fn set_dist(&mut self, i: usize, j: usize, value: F) {
        assert!(i != j, "the diagonal is fixed");
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let k = pair_index(self.len(), i, j);
        self.table[k] = value;
    }

    /// Unordered pairs `(i, j, d(i, j))` with `i < j`, in table order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &F)> + '_ {
        let n = self.len();
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.table.iter())
            .map(|((i, j), f)| (i, j, f))
    }

    pub fn table(&self) -> &[F] {
        &self.table
    }

    /// Same carrier, tag and flag; table transformed pair by pair.
    pub fn map_table<G: Distance>(&self, f: impl FnMut(&F) -> G) -> Space<G> {
        Space {
            points: self.points.clone(),
            table: self.table.iter().map(f).collect(),
            tnorm: self.tnorm,
            separated: self.separated,
            diagonal: G::self_distance(),
        }
    }
}

/// Axioms reported on by the verifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    /// Mixed triangle inequality of a level space.
    Ut,
    /// Separation of a level space.
    Uh,
    /// Separation of a distribution space.
    P4,
    /// Probabilistic triangle inequality of a distribution space.
    P5,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Ut => "UT",
            Axiom::Uh => "UH",
            Axiom::P4 => "P4",
            Axiom::P5 => "P5",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Separation on a space flagged as pseudo.
    NotApplicable,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "n/a",
        }
    }
}

/// A concrete counterexample; indices refer to the checked space's carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `(1 - λ') ∗ (1 - λ) > 1 - ε` but `d_ε(x, z) > d_λ(x, y) + d_λ'(y, z)`.
    MixedTriangle {
        x: usize,
        y: usize,
        z: usize,
        eps: UnitVal,
        lambda: UnitVal,
        lambda2: UnitVal,
        lhs: ExtReal,
        rhs: ExtReal,
    },
    /// Distinct points that the structure cannot tell apart.
    Separation { axiom: Axiom, x: usize, y: usize },
    /// `α(y, z, r) ∗ α(x, y, s) > α(x, z, r + s)`.
    ProbTriangle {
        x: usize,
        y: usize,
        z: usize,
        r: ExtReal,
        s: ExtReal,
        lhs: UnitVal,
        rhs: UnitVal,
    },
}

impl Witness {
    pub fn axiom(&self) -> Axiom {
        match self {
            Witness::MixedTriangle { .. } => Axiom::Ut,
            Witness::Separation { axiom, .. } => *axiom,
            Witness::ProbTriangle { .. } => Axiom::P5,
        }
    }

    /// Re-evaluates the violated inequality on `s` from scratch.
    pub fn replay_levels(&self, s: &LevelSpace) -> bool {
        match self {
            Witness::MixedTriangle {
                x,
                y,
                z,
                eps,
                lambda,
                lambda2,
                ..
            } => ut_check_point(s, *x, *y, *z, eps, lambda, lambda2).is_some(),
            Witness::Separation { axiom: Axiom::Uh, x, y } => {
                s.separated() && x != y && s.dist(*x, *y).is_zero()
            }
            _ => false,
        }
    }

    pub fn replay_ddf(&self, s: &DdfSpace) -> bool {
        match self {
            Witness::ProbTriangle { x, y, z, r, s: t, .. } => {
                p5_check_point(s, *x, *y, *z, r, t).is_some()
            }
            Witness::Separation { axiom: Axiom::P4, x, y } => {
                s.separated() && x != y && s.dist(*x, *y).is_epsilon_zero()
            }
            _ => false,
        }
    }

    /// One-line rendering with point ids, e.g.
    /// `UT x=a y=b z=c eps=1/2 lambda=1/4 lambda'=1/4 lhs=1 rhs=0`.
    pub fn render(&self, points: &[PointId]) -> String {
        match self {
            Witness::MixedTriangle {
                x,
                y,
                z,
                eps,
                lambda,
                lambda2,
                lhs,
                rhs,
            } => format!(
                "UT x={} y={} z={} eps={} lambda={} lambda'={} lhs={} rhs={}",
                points[*x], points[*y], points[*z], eps, lambda, lambda2, lhs, rhs
            ),
            Witness::Separation { axiom, x, y } => {
                format!("{} x={} y={}", axiom.name(), points[*x], points[*y])
            }
            Witness::ProbTriangle {
                x,
                y,
                z,
                r,
                s,
                lhs,
                rhs,
            } => format!(
                "P5 x={} y={} z={} r={} s={} lhs={} rhs={}",
                points[*x], points[*y], points[*z], r, s, lhs, rhs
            ),
        }
    }
}

/// Per-axiom verdicts plus witnesses. Fails iff `witnesses` is nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<(Axiom, Status)>,
    pub witnesses: Vec<Witness>,
}

impl Report {
    fn from_checks(axioms: &[(Axiom, bool)], witnesses: Vec<Witness>) -> Self {
        let checks = axioms
            .iter()
            .map(|&(ax, applicable)| {
                let status = if !applicable {
                    Status::NotApplicable
                } else if witnesses.iter().any(|w| w.axiom() == ax) {
                    Status::Fail
                } else {
                    Status::Pass
                };
                (ax, status)
            })
            .collect();
        Report { checks, witnesses }
    }

    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn status(&self, axiom: Axiom) -> Option<Status> {
        self.checks.iter().find(|(a, _)| *a == axiom).map(|(_, s)| *s)
    }

    /// Passes on everything except possibly the given axiom.
    pub fn passed_except(&self, axiom: Axiom) -> bool {
        self.witnesses.iter().all(|w| w.axiom() == axiom)
    }

    /// Plain-text report: a verdict line, one line per axiom, then one
    /// `witness ...` line per counterexample.
    pub fn render(&self, points: &[PointId]) -> String {
        let mut out = String::new();
        if self.passed() {
            out.push_str("verdict: pass (all axioms pass)\n");
        } else {
            out.push_str("verdict: fail\n");
        }
        for (ax, st) in &self.checks {
            out.push_str(&format!("axiom {}: {}\n", ax.name(), st.name()));
        }
        for w in &self.witnesses {
            out.push_str("witness ");
            out.push_str(&w.render(points));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn distinct_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |x| {
        (0..n).flat_map(move |y| {
            (0..n)
                .filter(move |&z| x != y && y != z && x != z)
                .map(move |z| (x, y, z))
        })
    })
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// Evaluates (UT) at one concrete parameter choice; `Some` on violation.
pub fn ut_check_point(
    s: &LevelSpace,
    x: usize,
    y: usize,
    z: usize,
    eps: &UnitVal,
    lambda: &UnitVal,
    lambda2: &UnitVal,
) -> Option<Witness> {
    if eps.is_zero() || lambda.is_zero() || lambda2.is_zero() {
        return None;
    }
    let guard = s.tnorm().apply(&lambda2.complement(), &lambda.complement());
    if guard <= eps.complement() {
        return None;
    }
    let lhs = s.dist(x, z).eval_positive(eps).clone();
    let rhs = s.dist(x, y).eval_positive(lambda) + s.dist(y, z).eval_positive(lambda2);
    (lhs > rhs).then(|| Witness::MixedTriangle {
        x,
        y,
        z,
        eps: eps.clone(),
        lambda: lambda.clone(),
        lambda2: lambda2.clone(),
        lhs,
        rhs,
    })
}

/// Evaluates (P5) at one concrete `(r, s)`; `Some` on violation.
pub fn p5_check_point(
    sp: &DdfSpace,
    x: usize,
    y: usize,
    z: usize,
    r: &ExtReal,
    s: &ExtReal,
) -> Option<Witness> {
    let lhs = sp
        .tnorm()
        .apply(&sp.dist(y, z).eval(r), &sp.dist(x, y).eval(s));
    let rhs = sp.dist(x, z).eval(&(r + s));
    (lhs > rhs).then(|| Witness::ProbTriangle {
        x,
        y,
        z,
        r: r.clone(),
        s: s.clone(),
        lhs,
        rhs,
    })
}

/// Turns a violated interval pair into concrete levels.
///
/// `lower`/`upper` bound the two level intervals, `eps_hat` is the
/// threshold at their lower ends and `eps_top` the right end of the piece of
/// `d(x, z)` just above it.
fn concrete_ut_levels(
    t: TNorm,
    (a, b): (&UnitVal, &UnitVal),
    (a2, b2): (&UnitVal, &UnitVal),
    eps_hat: &UnitVal,
    eps_top: &UnitVal,
) -> (UnitVal, UnitVal, UnitVal) {
    let eps = eps_hat.midpoint(eps_top);
    let mut step = BigRational::one();
    loop {
        let lambda = a.lerp(b, &step);
        let lambda2 = a2.lerp(b2, &step);
        if t.residual_threshold(&lambda, &lambda2) < eps {
            return (eps, lambda, lambda2);
        }
        // r is continuous with r(a, a') = eps_hat < eps, so this halving
        // reaches the guard after finitely many steps.
        step *= half();
    }
}

/// Exact (UT) verdict for one ordered triple: the first violating interval
/// pair, turned into a concrete witness.
fn ut_triple(s: &LevelSpace, x: usize, y: usize, z: usize) -> Option<Witness> {
    let (dxy, dyz, dxz) = (s.dist(x, y), s.dist(y, z), s.dist(x, z));
    for p in dxy.intervals() {
        for q in dyz.intervals() {
            let (a, a2) = (p.lower_value(), q.lower_value());
            let eps_hat = s.tnorm().residual_threshold(&a, &a2);
            if eps_hat.is_one() {
                continue;
            }
            let lhs = dxz.eval_right(&eps_hat).expect("eps_hat < 1");
            let rhs = p.value + q.value;
            if *lhs > rhs {
                let top = dxz
                    .endpoints()
                    .find(|e| **e > eps_hat)
                    .expect("eps_hat < 1");
                let (eps, lambda, lambda2) =
                    concrete_ut_levels(s.tnorm(), (&a, p.upper), (&a2, q.upper), &eps_hat, top);
                let w = ut_check_point(s, x, y, z, &eps, &lambda, &lambda2);
                debug_assert!(w.is_some());
                return w;
            }
        }
    }
    None
}

/// Decides (UT) exactly over the continuum of levels, and (UH) when the
/// space is flagged separated. One witness per violating triple or pair, in
/// lexicographic order.
pub fn validate_level_space(s: &LevelSpace) -> Report {
    let mut witnesses: Vec<Witness> = distinct_triples(s.len())
        .filter_map(|(x, y, z)| ut_triple(s, x, y, z))
        .collect();
    if s.separated() {
        witnesses.extend(
            s.pairs()
                .filter(|(_, _, d)| d.is_zero())
                .map(|(x, y, _)| Witness::Separation {
                    axiom: Axiom::Uh,
                    x,
                    y,
                }),
        );
    }
    Report::from_checks(&[(Axiom::Ut, true), (Axiom::Uh, s.separated())], witnesses)
}

fn p5_triple(sp: &DdfSpace, x: usize, y: usize, z: usize) -> Option<Witness> {
    let (ayz, axy, axz) = (sp.dist(y, z), sp.dist(x, y), sp.dist(x, z));
    let (jy, jx) = (ayz.jumps(), axy.jumps());
    for (i, (p, v)) in jy.iter().enumerate() {
        for (j, (q, u)) in jx.iter().enumerate() {
            let c = p + q;
            let lhs = sp.tnorm().apply(v, u);
            if axz.eval_right(&c) >= lhs {
                continue;
            }
            let gaps = [
                jy.get(i + 1).map(|(n, _)| (n, p)),
                jx.get(j + 1).map(|(n, _)| (n, q)),
                axz.next_jump_after(&c).map(|n| (n, &c)),
            ];
            let delta = gaps
                .iter()
                .flatten()
                .map(|(hi, lo)| hi.as_rational().unwrap() - lo.as_rational().unwrap())
                .min()
                .unwrap_or_else(BigRational::one)
                / BigRational::from_integer(BigInt::from(4));
            let delta = ExtReal::Finite(delta);
            let w = p5_check_point(sp, x, y, z, &(p + &delta), &(q + &delta));
            debug_assert!(w.is_some());
            return w;
        }
    }
    None
}

/// Checks (P4) when flagged separated, and (P5) exactly.
pub fn validate_ddf_space(s: &DdfSpace) -> Report {
    let mut witnesses: Vec<Witness> = Vec::new();
    if s.separated() {
        witnesses.extend(
            s.pairs()
                .filter(|(_, _, d)| d.is_epsilon_zero())
                .map(|(x, y, _)| Witness::Separation {
                    axiom: Axiom::P4,
                    x,
                    y,
                }),
        );
    }
    witnesses.extend(distinct_triples(s.len()).filter_map(|(x, y, z)| p5_triple(s, x, y, z)));
    Report::from_checks(&[(Axiom::P4, s.separated()), (Axiom::P5, true)], witnesses)
}

/// Brute-force (UT) check restricted to levels `ε, λ, λ' ∈ {1/n, …, 1}`.
///
/// For each grid pair `(λ, λ')` only the smallest activated grid `ε` is
/// evaluated: larger `ε` satisfy the guard too but can only lower `d_ε`.
/// Never reports a violation the exact verifier would not.
pub fn ut_oracle_grid(s: &LevelSpace, n: u64) -> Report {
    assert!(n >= 2, "grid resolution must be at least 2");
    let grid: Vec<UnitVal> = (1..=n).map(|k| UnitVal::ratio(k, n)).collect();
    // first activated ε index per (λ, λ'), if any
    let first_eps: Vec<Option<usize>> = grid
        .iter()
        .flat_map(|l| grid.iter().map(move |l2| (l, l2)))
        .map(|(l, l2)| {
            let r = s.tnorm().residual_threshold(l, l2);
            grid.iter().position(|e| *e > r)
        })
        .collect();
    let m = s.len();
    let values: Vec<Vec<Vec<ExtReal>>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| grid.iter().map(|l| s.dist(i, j).eval_positive(l).clone()).collect())
                .collect()
        })
        .collect();
    let g = grid.len();
    let mut witnesses = Vec::new();
    for (x, y, z) in distinct_triples(m) {
        'triple: for k in 0..g {
            for l in 0..g {
                if let Some(e) = first_eps[k * g + l] {
                    let rhs = &values[x][y][k] + &values[y][z][l];
                    if values[x][z][e] > rhs {
                        witnesses.push(Witness::MixedTriangle {
                            x,
                            y,
                            z,
                            eps: grid[e].clone(),
                            lambda: grid[k].clone(),
                            lambda2: grid[l].clone(),
                            lhs: values[x][z][e].clone(),
                            rhs,
                        });
                        break 'triple;
                    }
                }
            }
        }
    }
    Report::from_checks(&[(Axiom::Ut, true)], witnesses)
}
