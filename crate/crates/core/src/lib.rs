//! Exact finite probabilistic metric spaces.
//!
//! Two presentations of the same objects are supported: distance
//! distributions `α(x, y, γ)` governed by a continuous t-norm, and families of
//! distances `d_λ` indexed by levels `λ ∈ (0, 1]` satisfying a mixed triangle
//! inequality. [`functors`] converts between them losslessly. On top of the
//! level presentation the crate builds initial lifts and products
//! ([`constructions`]), the strong topology and its closure ([`topology`]),
//! and the embeddings of extended metric spaces ([`bridge`]).
//!
//! All arithmetic is exact ([`numeric`]), so every verifier is a decision
//! procedure and every counterexample it reports replays exactly.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bridge;
pub mod constructions;
pub mod error;
pub mod functors;
#[cfg(feature = "gen")]
pub mod gen;
pub mod numeric;
pub mod spaces;
pub mod stepfn;
pub mod tnorm;
pub mod topology;

pub use bridge::{coreflect, embed_metric, path_metric, reflect, MetricSpace};
pub use constructions::{
    initial_lift, product, product_with_cap, subspace, t0_quotient, PointMap, PointSet,
    StructuredSource,
};
pub use error::{Error, ParseValueError, StepError};
pub use functors::{delta, is_nonexpansive, phi, Contraction, MorphismReport};
pub use numeric::{ext_add, ext_cmp, ExtReal, UnitVal};
pub use spaces::{
    ut_oracle_grid, validate_ddf_space, validate_level_space, Axiom, DdfSpace, LevelSpace,
    PointId, Report, Space, Status, Witness,
};
pub use stepfn::{pointwise_min, pointwise_sup, Distance, DistanceDistribution, LevelFunction};
pub use tnorm::{tnorm_laws_check, TNorm, TriangularNorm};
pub use topology::{
    classify_morphism, closure, cospan_witness, is_t0, reg_closure_sampled, strong_topology,
    Classification, Cospan, Entourage, FiniteTopology, T0Report,
};
