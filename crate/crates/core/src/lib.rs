//! Exact-arithmetic construction and certification of the polyhedral cones
//! of linear entropic formulas that are monotonic under local operations.
//!
//! The crate builds the single-system monotonicity facets indexed by lower
//! sets, intersects them into the full monotonicity cone, enumerates extremal
//! rays with an exact double description method, describes the closed-form
//! symmetric cone, and emits machine-checkable membership and violation
//! certificates backed by explicit classical probability distributions.

pub mod catalog;
pub mod cddio;
pub mod cone;
pub mod monotonicity;
pub mod symmetric;
pub mod witness;
pub mod functional;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod simplex;

pub use cone::{DdOptions, HRep, VRep};
pub use functional::Functional;
pub use lattice::{LowerSetFamily, Permutation, SystemSet};
pub use rational::{QVec, Rat};
