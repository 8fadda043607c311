//! Measure-theoretic kinematics for smooth trajectories on surfaces in ℝ³.
//!
//! Speeds here are ratios of measures: the length of the part of the image
//! that lies inside a neighborhood, over the time the trajectory spends
//! inside it. Instantaneous speed is the limit of that ratio along a ladder
//! of shrinking metric balls. The classical derivative norm `|ζ′(t)|` is
//! carried alongside every estimate as a cross-check.
//!
//! Layout:
//!
//! * [`curve`]: trajectories, jets, the catalog, surfaces and sample-based
//!   validation.
//! * [`expr`]: the scalar expression language and its order-3 jet evaluator.
//! * [`measure`]: preimages of balls, traversal arc length, quadrature and
//!   the multiplicity-1 image measure.
//! * [`kinematics`]: average, neighborhood and instantaneous speed,
//!   acceleration through the derived curve, and the Newton operator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod error;
pub mod expr;
pub mod kinematics;
pub mod measure;
mod vec3;

pub use error::{Error, Result};
pub use vec3::Vec3;
