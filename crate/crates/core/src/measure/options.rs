use crate::error::{Error, Result};

/// Resolution and tolerance knobs shared by the measure routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureOptions {
    /// Coarse scan density for preimage solving.
    pub scan_points_per_unit_time: usize,
    /// Bisection stops once the root bracket is this narrow (in t).
    pub root_tol: f64,
    pub rel_tol: f64,
    pub max_refinement_depth: usize,
    /// Ambient distance below which two polyline pieces count as the same set.
    pub coincide_tol: f64,
    /// Largest parameter step of the image-measure polyline.
    pub discretization_step: f64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            scan_points_per_unit_time: 4096,
            root_tol: 1e-12,
            rel_tol: 1e-8,
            max_refinement_depth: 40,
            coincide_tol: 1e-7,
            discretization_step: 1e-3,
        }
    }
}

impl MeasureOptions {
    pub fn validate(&self) -> Result<()> {
        let reals = [
            ("root_tol", self.root_tol),
            ("rel_tol", self.rel_tol),
            ("coincide_tol", self.coincide_tol),
            ("discretization_step", self.discretization_step),
        ];
        for (name, v) in reals {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive (got {v})")));
            }
        }
        if self.scan_points_per_unit_time == 0 || self.max_refinement_depth == 0 {
            return Err(Error::InvalidArgument(
                "scan_points_per_unit_time and max_refinement_depth must be positive".into(),
            ));
        }
        Ok(())
    }
}
