//! Exact groupoid cardinality and the statistics of cycles in random permutations.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`]: finite groups (cyclic, symmetric, direct products, validated Cayley tables).
//! * [`permutation`]: permutations of `{0, .., n-1}`, cycle decompositions, cycle types,
//!   exhaustive enumeration and falling powers.
//! * [`groupoid`]: finite groupoids represented by skeletons, group actions and weak
//!   quotients `S // G`.
//! * [`cycle_stats`]: expectations of products of falling powers of cycle counts, computed
//!   by two independent exact methods and by Monte Carlo sampling.
//! * [`categorified`]: the groupoid of permutations decorated with ordered tuples of
//!   distinct cycles, built as an action groupoid and compared against
//!   `Perm_{n-|p|} x prod_k B(Z/k)^{p_k}`.
//! * [`functor`]: conjugation-equivariant structures `F: G // G -> FinSet` and their
//!   category of elements.
//!
//! Cardinalities and expectations are generic over [`Scalar`]; the exact instance is
//! [`Rational`], and `f64`/`f32` give fast approximate answers.

pub mod categorified;
pub mod cycle_stats;
pub mod error;
pub mod functor;
pub mod group;
pub mod groupoid;
pub mod limits;
pub mod permutation;
pub mod scalar;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupElement};
pub use groupoid::{GroupAction, GroupoidSkeleton};
pub use limits::Limits;
pub use permutation::{Cycle, CycleType, PVector, Permutation};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational; the scalar every report is stated in.
pub type Rational = num_rational::BigRational;

/// Groupoid cardinality in exact arithmetic.
pub type Cardinality = Rational;

/// Groupoid cardinality in double precision.
pub type ApproxCardinality = f64;
