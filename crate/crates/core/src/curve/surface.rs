use std::fmt;

use crate::error::{Error, Result};
use crate::Vec3;

/// Ambient surface given by a membership residual that vanishes on it.
///
/// The catalog surfaces are measurable, locally homeomorphic to ℝ² and sit
/// in ℝ³ by construction; only containment of a trajectory is checked at
/// runtime. `None` is the unconstrained ambient space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Surface {
    Sphere { radius: f64, center: Vec3 },
    /// Axis along z.
    Cylinder { radius: f64 },
    /// Centered at the origin, axis along z.
    Torus { major: f64, minor: f64 },
    /// Horizontal plane `z = z0`.
    Plane { z0: f64 },
    None,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive (got {v})")))
    }
}

impl Surface {
    pub fn sphere(radius: f64, center: Vec3) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidArgument("sphere center must be finite".into()));
        }
        Ok(Surface::Sphere {
            radius: positive("sphere radius", radius)?,
            center,
        })
    }

    pub fn cylinder(radius: f64) -> Result<Self> {
        Ok(Surface::Cylinder {
            radius: positive("cylinder radius", radius)?,
        })
    }

    pub fn torus(major: f64, minor: f64) -> Result<Self> {
        Ok(Surface::Torus {
            major: positive("torus major radius", major)?,
            minor: positive("torus minor radius", minor)?,
        })
    }

    pub fn plane(z0: f64) -> Result<Self> {
        if !z0.is_finite() {
            return Err(Error::InvalidArgument("plane height must be finite".into()));
        }
        Ok(Surface::Plane { z0 })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Surface::Sphere { .. } => "sphere",
            Surface::Cylinder { .. } => "cylinder",
            Surface::Torus { .. } => "torus",
            Surface::Plane { .. } => "plane",
            Surface::None => "none",
        }
    }

    pub fn residual(&self, p: Vec3) -> f64 {
        let [x, y, z] = p.0;
        match *self {
            Surface::Sphere { radius, center } => (p - center).norm_squared() - radius * radius,
            Surface::Cylinder { radius } => x * x + y * y - radius * radius,
            Surface::Torus { major, minor } => {
                let rho = (x * x + y * y).sqrt() - major;
                rho * rho + z * z - minor * minor
            }
            Surface::Plane { z0 } => z - z0,
            Surface::None => 0.0,
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surface::Sphere { radius, center } => {
                write!(f, "sphere radius={radius} center={},{},{}", center[0], center[1], center[2])
            }
            Surface::Cylinder { radius } => write!(f, "cylinder radius={radius}"),
            Surface::Torus { major, minor } => write!(f, "torus major={major} minor={minor}"),
            Surface::Plane { z0 } => write!(f, "plane z={z0}"),
            Surface::None => f.write_str("none"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_vanish_on_catalog_points() {
        let s = Surface::sphere(2.0, Vec3::ZERO).unwrap();
        assert_eq!(s.residual(Vec3::new(2.0, 0.0, 0.0)), 0.0);
        let s = Surface::sphere(1.0, Vec3::new(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(s.residual(Vec3::new(1.0, 1.0, 2.0)), 0.0);
        let c = Surface::cylinder(3.0).unwrap();
        assert_eq!(c.residual(Vec3::new(0.0, 3.0, -7.0)), 0.0);
        let t = Surface::torus(2.0, 0.5).unwrap();
        assert_eq!(t.residual(Vec3::new(2.5, 0.0, 0.0)), 0.0);
        assert_eq!(t.residual(Vec3::new(0.0, 2.0, 0.5)), 0.0);
        let p = Surface::plane(1.5).unwrap();
        assert_eq!(p.residual(Vec3::new(9.0, -4.0, 1.5)), 0.0);
    }

    #[test]
    fn none_is_unconstrained() {
        for p in [Vec3::ZERO, Vec3::new(1e6, -3.0, 2.0)] {
            assert_eq!(Surface::None.residual(p), 0.0);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Surface::sphere(0.0, Vec3::ZERO).is_err());
        assert!(Surface::cylinder(-1.0).is_err());
        assert!(Surface::torus(1.0, f64::NAN).is_err());
        assert!(Surface::plane(f64::INFINITY).is_err());
    }
}
