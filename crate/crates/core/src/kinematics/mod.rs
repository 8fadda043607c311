//! Speeds as ratios of measures.
//!
//! The neighborhood speed of a set `V` around a point of the image is
//! `m(V) / m(ζ⁻¹(V))`: length of image inside `V` over time spent in `V`.
//! Neighborhoods are metric balls intersected with the image. Instantaneous
//! speed is taken along a ladder of shrinking balls (see [`net`]).
//!
//! The numerator is the multiplicity-1 image measure by default
//! ([`MeasureMode::Set`]). [`MeasureMode::Traversal`] uses traversal arc
//! length over the preimage instead, which recovers the classical speed
//! sum at retraced points.

mod net;

pub use net::{
    acceleration_magnitude, estimate_diameter, fit_power_law, instantaneous_speed, NetOptions,
    PowerFit, Rung, SpeedEstimate,
};

use std::fmt;
use std::str::FromStr;

use crate::curve::Trajectory;
use crate::error::{Error, Result};
use crate::measure::{
    image_measure, lebesgue_measure_1d, partition_arc_length, preimage_ball_intervals,
    IntervalSet, MeasureOptions,
};
use crate::Vec3;

/// How the length of an image set is counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MeasureMode {
    /// Each point of the set once.
    #[default]
    Set,
    /// With multiplicity, as the traversal arc length of the preimage.
    Traversal,
}

impl fmt::Display for MeasureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureMode::Set => "set",
            MeasureMode::Traversal => "traversal",
        })
    }
}

impl FromStr for MeasureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "set" => Ok(MeasureMode::Set),
            "traversal" => Ok(MeasureMode::Traversal),
            other => Err(Error::InvalidArgument(format!(
                "unknown measure mode `{other}` (expected set or traversal)"
            ))),
        }
    }
}

/// Length of `ζ(restrict)` under `mode`, with its convergence flag.
fn numerator(
    traj: &Trajectory,
    restrict: Option<&IntervalSet>,
    mode: MeasureMode,
    opts: &MeasureOptions,
) -> Result<(f64, bool)> {
    Ok(match mode {
        MeasureMode::Set => {
            let m = image_measure(traj, restrict, opts)?;
            (m.value, m.converged)
        }
        MeasureMode::Traversal => {
            let l = partition_arc_length(traj, restrict, opts)?;
            (l.value, l.converged)
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AverageSpeed {
    pub value: f64,
    pub image_meas: f64,
    /// `b − a`, which is `m(ζ⁻¹(ζ([a, b])))`.
    pub duration: f64,
    pub converged: bool,
}

/// Length of the whole image over the length of the time domain.
pub fn average_speed(traj: &Trajectory, mode: MeasureMode, opts: &MeasureOptions) -> Result<AverageSpeed> {
    let (image_meas, converged) = numerator(traj, None, mode, opts)?;
    let duration = traj.duration();
    Ok(AverageSpeed {
        value: image_meas / duration,
        image_meas,
        duration,
        converged,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NeighborhoodSpeed {
    pub speed: f64,
    pub image_meas: f64,
    pub preimage_meas: f64,
    pub converged: bool,
}

/// Average speed in `B(ζ(t), eps) ∩ ζ([a, b])`.
pub fn neighborhood_speed(
    traj: &Trajectory,
    t: f64,
    eps: f64,
    mode: MeasureMode,
    opts: &MeasureOptions,
) -> Result<NeighborhoodSpeed> {
    let center = traj.position(t)?;
    ball_speed(traj, center, eps, mode, opts)
}

pub(crate) fn ball_speed(
    traj: &Trajectory,
    center: Vec3,
    eps: f64,
    mode: MeasureMode,
    opts: &MeasureOptions,
) -> Result<NeighborhoodSpeed> {
    let pre = preimage_ball_intervals(traj, center, eps, opts)?;
    let preimage_meas = lebesgue_measure_1d(&pre);
    if !(preimage_meas > 0.0) {
        return Err(Error::Internal(format!(
            "empty preimage for a ball of radius {eps} centered on the curve"
        )));
    }
    let (image_meas, converged) = numerator(traj, Some(&pre), mode, opts)?;
    Ok(NeighborhoodSpeed {
        speed: image_meas / preimage_meas,
        image_meas,
        preimage_meas,
        converged,
    })
}

/// `mass · ζ″(t)` for `t` in the open interval `(a, b)`.
pub fn newton_force(traj: &Trajectory, mass: f64, t: f64) -> Result<Vec3> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::InvalidArgument(format!("mass must be positive (got {mass})")));
    }
    if !(t > traj.a() && t < traj.b()) {
        return Err(Error::OutOfDomain {
            t,
            a: traj.a(),
            b: traj.b(),
        });
    }
    let jet = traj.evaluate_jet(t, 2)?;
    let d2 = jet.d2.ok_or(Error::OrderUnavailable {
        requested: 2,
        available: traj.max_jet_order(),
    })?;
    Ok(d2 * mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_catalog_trajectory, make_expression_trajectory};
    use std::f64::consts::PI;

    fn opts() -> MeasureOptions {
        MeasureOptions::default()
    }

    #[test]
    fn average_speeds() {
        let c = make_catalog_trajectory("circle", &[1.0], 0.0, 2.0 * PI).unwrap();
        let avg = average_speed(&c, MeasureMode::Set, &opts()).unwrap();
        assert!((avg.value - 1.0).abs() < 1e-4);
        assert!(avg.converged);

        let d = make_catalog_trajectory("double_circle", &[1.0], 0.0, 4.0 * PI).unwrap();
        let set = average_speed(&d, MeasureMode::Set, &opts()).unwrap();
        assert!((set.value - 0.5).abs() < 1e-4, "{set:?}");
        let trav = average_speed(&d, MeasureMode::Traversal, &opts()).unwrap();
        assert!((trav.value - 1.0).abs() < 1e-4, "{trav:?}");

        let h = make_catalog_trajectory("helix", &[1.0, 1.0], 0.0, 2.0 * PI).unwrap();
        let avg = average_speed(&h, MeasureMode::Set, &opts()).unwrap();
        assert!((avg.value - 2f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn unit_circle_ball_speed() {
        let c = make_catalog_trajectory("circle", &[1.0], 0.0, 2.0 * PI).unwrap();
        let ns = neighborhood_speed(&c, PI / 2.0, 0.5, MeasureMode::Set, &opts()).unwrap();
        assert!((ns.speed - 1.0).abs() < 1e-4);
        // arc inside the ball: 2 · 2 asin(ε/2)
        assert!((ns.preimage_meas - 4.0 * 0.25f64.asin()).abs() < 1e-10);
    }

    #[test]
    fn cubic_line_ball_speed() {
        let c = make_catalog_trajectory("cubic_line", &[], -1.0, 1.0).unwrap();
        let ns = neighborhood_speed(&c, 0.0, 1e-3, MeasureMode::Set, &opts()).unwrap();
        assert!((ns.image_meas - 2e-3).abs() < 1e-12);
        assert!((ns.preimage_meas - 0.2).abs() < 1e-10);
        assert!((ns.speed - 1e-2).abs() < 1e-4);
    }

    #[test]
    fn crossing_point_ball_speed_gerono() {
        // both branches through the origin move at √2
        let g = make_catalog_trajectory("gerono", &[1.0], 0.0, 2.0 * PI).unwrap();
        let ns = neighborhood_speed(&g, PI, 1e-2, MeasureMode::Set, &opts()).unwrap();
        let s = 2f64.sqrt();
        assert!((ns.speed - s).abs() <= 0.02 * s, "{ns:?}");
    }

    #[test]
    fn forces() {
        let c = make_catalog_trajectory("circle", &[1.0], -1.0, 2.0 * PI).unwrap();
        let f = newton_force(&c, 2.0, 0.0).unwrap();
        assert_eq!(f, Vec3::new(-2.0, -0.0, 0.0));
        let l = make_expression_trajectory("t", "t", "t", 0.0, 1.0).unwrap();
        assert_eq!(newton_force(&l, 5.0, 0.3).unwrap(), Vec3::ZERO);
        let cubic = make_catalog_trajectory("cubic_line", &[], -1.0, 2.0).unwrap();
        assert_eq!(newton_force(&cubic, 1.0, 1.0).unwrap(), Vec3::new(6.0, 0.0, 0.0));
    }

    #[test]
    fn force_needs_open_interval_and_positive_mass() {
        let c = make_catalog_trajectory("circle", &[1.0], 0.0, 2.0 * PI).unwrap();
        assert!(matches!(newton_force(&c, 1.0, 0.0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(newton_force(&c, 1.0, 2.0 * PI), Err(Error::OutOfDomain { .. })));
        assert!(newton_force(&c, 0.0, 1.0).is_err());
        assert!(newton_force(&c, -1.0, 1.0).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("set".parse::<MeasureMode>().unwrap(), MeasureMode::Set);
        assert_eq!("traversal".parse::<MeasureMode>().unwrap(), MeasureMode::Traversal);
        assert!("both".parse::<MeasureMode>().is_err());
    }
}
