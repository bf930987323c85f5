//! Continuous t-norms on rational levels.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numeric::UnitVal;

/// A binary operation on `[0, 1]` meant to be a continuous t-norm.
///
/// Implementations used with the exact verifiers must map rationals to
/// rationals and be continuous; only the algebraic laws can be checked
/// mechanically (see [`tnorm_laws_check`]).
pub trait TriangularNorm {
    fn apply(&self, a: &UnitVal, b: &UnitVal) -> UnitVal;
}

/// The three built-in continuous t-norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TNorm {
    Minimum,
    Product,
    Lukasiewicz,
}

impl TNorm {
    pub const ALL: [TNorm; 3] = [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz];

    /// File tag: `min`, `product` or `lukasiewicz`.
    pub fn name(self) -> &'static str {
        match self {
            TNorm::Minimum => "min",
            TNorm::Product => "product",
            TNorm::Lukasiewicz => "lukasiewicz",
        }
    }

    pub fn apply(self, a: &UnitVal, b: &UnitVal) -> UnitVal {
        let (x, y) = (a.as_rational(), b.as_rational());
        let r = match self {
            TNorm::Minimum => core::cmp::min(x, y).clone(),
            TNorm::Product => x * y,
            TNorm::Lukasiewicz => {
                let s = x + y - BigRational::one();
                if s > BigRational::zero() {
                    s
                } else {
                    BigRational::zero()
                }
            }
        };
        UnitVal::new(r).expect("t-norms stay in [0, 1]")
    }

    /// `1 - (1 - λ') ∗ (1 - λ)`: the mixed triangle inequality for levels
    /// `λ, λ'` constrains exactly the levels `ε` strictly above this value.
    pub fn residual_threshold(self, lambda: &UnitVal, lambda2: &UnitVal) -> UnitVal {
        self.apply(&lambda2.complement(), &lambda.complement()).complement()
    }
}

impl TriangularNorm for TNorm {
    fn apply(&self, a: &UnitVal, b: &UnitVal) -> UnitVal {
        TNorm::apply(*self, a, b)
    }
}

impl fmt::Display for TNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTNorm;

impl fmt::Display for UnknownTNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("t-norm must be one of \"min\", \"product\", \"lukasiewicz\"")
    }
}

impl FromStr for TNorm {
    type Err = UnknownTNorm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TNorm::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or(UnknownTNorm)
    }
}

/// Which t-norm law a grid tuple violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Commutativity,
    Associativity,
    Unit,
    Monotonicity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: Law,
    pub args: Vec<UnitVal>,
}

/// Outcome of [`tnorm_laws_check`]: the first violating tuple, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub violation: Option<LawViolation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks commutativity, associativity, the unit law and monotonicity over
/// every tuple drawn from `grid`.
pub fn tnorm_laws_check<T: TriangularNorm + ?Sized>(t: &T, grid: &[UnitVal]) -> LawReport {
    let fail = |law, args: Vec<&UnitVal>| LawReport {
        violation: Some(LawViolation {
            law,
            args: args.into_iter().cloned().collect(),
        }),
    };
    let one = UnitVal::one();
    for a in grid {
        if t.apply(a, &one) != *a || t.apply(&one, a) != *a {
            return fail(Law::Unit, vec![a]);
        }
    }
    for a in grid {
        for b in grid {
            let ab = t.apply(a, b);
            if ab != t.apply(b, a) {
                return fail(Law::Commutativity, vec![a, b]);
            }
            for c in grid {
                if t.apply(&ab, c) != t.apply(a, &t.apply(b, c)) {
                    return fail(Law::Associativity, vec![a, b, c]);
                }
            }
        }
    }
    for a in grid {
        for a2 in grid.iter().filter(|a2| a <= *a2) {
            for b in grid {
                for b2 in grid.iter().filter(|b2| b <= *b2) {
                    if t.apply(a, b) > t.apply(a2, b2) {
                        return fail(Law::Monotonicity, vec![a, b, a2, b2]);
                    }
                }
            }
        }
    }
    LawReport { violation: None }
}
