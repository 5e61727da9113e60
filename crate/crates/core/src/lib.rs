//! Exact computation of nilpotent and solvable approximations of
//! almost-Riemannian structures given by polynomial frames on ℝⁿ.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`], [`field`] and [`linalg`]: exact rational polynomials, polynomial
//!   vector fields with Lie brackets, and exact linear algebra over ℚ.
//! * [`grading`]: weights, growth vector, privileged-coordinate checks and
//!   weighted-homogeneous components.
//! * [`approx`]: the selection procedure producing the approximating frame.
//! * [`liealg`]: Lie closure, the ideal generated by the fields that do not
//!   vanish at the base point, nilpotency/solvability and classification.
//! * [`locus`]: the frame determinant, corank strata and genericity formulas.
//! * [`flows`]: exact Lie-series flows and an RK4 cross-check.
//! * [`frontend`]: the frame description language, the analysis pipeline and
//!   the JSON report.

pub mod approx;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod flows;
pub mod frontend;
pub mod grading;
pub mod liealg;
pub mod linalg;
pub mod locus;
pub mod poly;
pub mod rational;

pub use approx::{build_approximation, ApproximationSet};
pub use error::{Error, Result};
pub use field::{frame_rank_at, lie_bracket, Frame, VectorField};
pub use grading::{growth_vector, GrowthVector, Order, WeightVector};
pub use liealg::{Classification, FieldKind, LieBasis};
pub use poly::{Monomial, Polynomial};
pub use rational::Rational;
