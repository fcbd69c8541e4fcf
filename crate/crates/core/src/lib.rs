//! Primal separation and closure approximation for `{0, 1/2}`-cuts.
//!
//! All arithmetic is exact. The crate provides:
//!
//! * [`model`]: instances, multipliers, derived cuts, tightness and violation
//!   predicates;
//! * [`sep_col`] / [`sep_row`]: polynomial primal separation when every column
//!   (respectively row) of `A` has at most two odd entries;
//! * [`oracle`]: exhaustive enumeration used as ground truth;
//! * [`closure`]: the bounded-support `(1 + eps)`-approximation of the
//!   `{0, 1/2}`- and mod-`q` closures;
//! * [`matching`]: a primal cutting-plane maximum-weight matching solver that
//!   only uses the column separator.

pub mod closure;
pub mod gen;
pub mod graph;
pub mod lp;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod sep_col;
pub mod sep_row;

pub use model::{
    compute_context, derive_cut, is_tight_nontrivial, parity_profile, violation, Bound, Cut,
    IlpInstance, ModelError, Multipliers, ParityProfile, Point, Rounding, Separated,
    SeparationContext,
};
pub use rational::Rational;
