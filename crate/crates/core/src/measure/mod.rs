//! The three measures behind the kinematics: Lebesgue measure of time sets,
//! traversal arc length, and the length of image sets.
//!
//! "Length of a subset of the image" means one-dimensional Hausdorff
//! measure: a piece of curve traced twice counts once. Under
//! three-dimensional Lebesgue measure every smooth curve would have measure
//! zero. Traversal length ([`partition_arc_length`]) counts multiplicity and
//! agrees with [`image_measure`] only for injective trajectories; neither is
//! ever substituted for the other.

mod arclength;
mod image;
mod intervals;
mod options;
mod preimage;

pub use arclength::{partition_arc_length, quadrature_arc_length, LengthEstimate};
pub use image::{image_measure, ImageMeasure};
pub use intervals::{lebesgue_measure_1d, IntervalSet};
pub use options::MeasureOptions;
pub use preimage::preimage_ball_intervals;
