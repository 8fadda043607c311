use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::Vec3;

/// Closed-form trajectories with jets up to order 3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CatalogCurve {
    /// `(R cos t, R sin t, 0)`
    Circle { radius: f64 },
    /// `(R cos t, R sin t, c t)`
    Helix { radius: f64, pitch: f64 },
    /// `(t³, 0, 0)`, stationary at `t = 0`
    CubicLine,
    /// Same map as [`CatalogCurve::Circle`]; meant for domains longer than 2π.
    DoubleCircle { radius: f64 },
    /// Lemniscate of Gerono `(A sin t, A sin t cos t, 0)`
    Gerono { amplitude: f64 },
    /// Unit circle at angle `t² / 2π`, so the angular speed is `t / π`.
    AcceleratingCircle,
}

pub const CATALOG_NAMES: [&str; 6] = [
    "circle",
    "helix",
    "cubic_line",
    "double_circle",
    "gerono",
    "accelerating_circle",
];

impl CatalogCurve {
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let arity = match name {
            "circle" | "double_circle" | "gerono" => 1,
            "helix" => 2,
            "cubic_line" | "accelerating_circle" => 0,
            _ => return Err(Error::UnknownCatalog(name.to_owned())),
        };
        if params.len() != arity {
            return Err(Error::Arity {
                name: name.to_owned(),
                expected: arity,
                got: params.len(),
            });
        }
        if let Some(p) = params.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite parameter {p}")));
        }
        Ok(match name {
            "circle" => CatalogCurve::Circle { radius: params[0] },
            "double_circle" => CatalogCurve::DoubleCircle { radius: params[0] },
            "gerono" => CatalogCurve::Gerono {
                amplitude: params[0],
            },
            "helix" => CatalogCurve::Helix {
                radius: params[0],
                pitch: params[1],
            },
            "cubic_line" => CatalogCurve::CubicLine,
            _ => CatalogCurve::AcceleratingCircle,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CatalogCurve::Circle { .. } => "circle",
            CatalogCurve::Helix { .. } => "helix",
            CatalogCurve::CubicLine => "cubic_line",
            CatalogCurve::DoubleCircle { .. } => "double_circle",
            CatalogCurve::Gerono { .. } => "gerono",
            CatalogCurve::AcceleratingCircle => "accelerating_circle",
        }
    }

    /// Position and derivatives 1..=3 at `t`.
    pub fn derivatives(&self, t: f64) -> [Vec3; 4] {
        match *self {
            CatalogCurve::Circle { radius } | CatalogCurve::DoubleCircle { radius } => {
                circle(radius, t)
            }
            CatalogCurve::Helix { radius, pitch } => {
                let mut d = circle(radius, t);
                d[0].0[2] = pitch * t;
                d[1].0[2] = pitch;
                d
            }
            CatalogCurve::CubicLine => [
                Vec3::new(t * t * t, 0.0, 0.0),
                Vec3::new(3.0 * t * t, 0.0, 0.0),
                Vec3::new(6.0 * t, 0.0, 0.0),
                Vec3::new(6.0, 0.0, 0.0),
            ],
            CatalogCurve::Gerono { amplitude: a } => {
                let (s, c) = t.sin_cos();
                let (s2, c2) = (2.0 * t).sin_cos();
                // y = (A/2) sin 2t
                [
                    Vec3::new(a * s, 0.5 * a * s2, 0.0),
                    Vec3::new(a * c, a * c2, 0.0),
                    Vec3::new(-a * s, -2.0 * a * s2, 0.0),
                    Vec3::new(-a * c, -4.0 * a * c2, 0.0),
                ]
            }
            CatalogCurve::AcceleratingCircle => {
                let th = t * t / (2.0 * PI);
                let w = t / PI;
                let w1 = 1.0 / PI;
                let (s, c) = th.sin_cos();
                [
                    Vec3::new(c, s, 0.0),
                    Vec3::new(-s * w, c * w, 0.0),
                    Vec3::new(-c * w * w - s * w1, -s * w * w + c * w1, 0.0),
                    Vec3::new(
                        s * w * w * w - 3.0 * c * w * w1,
                        -c * w * w * w - 3.0 * s * w * w1,
                        0.0,
                    ),
                ]
            }
        }
    }
}

fn circle(r: f64, t: f64) -> [Vec3; 4] {
    let (s, c) = t.sin_cos();
    [
        Vec3::new(r * c, r * s, 0.0),
        Vec3::new(-r * s, r * c, 0.0),
        Vec3::new(-r * c, -r * s, 0.0),
        Vec3::new(r * s, -r * c, 0.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_and_names() {
        assert!(matches!(
            CatalogCurve::from_name("helix", &[1.0]),
            Err(Error::Arity { expected: 2, got: 1, .. })
        ));
        assert!(matches!(
            CatalogCurve::from_name("spiral", &[]),
            Err(Error::UnknownCatalog(_))
        ));
        for name in CATALOG_NAMES {
            let n = match name {
                "helix" => 2,
                "cubic_line" | "accelerating_circle" => 0,
                _ => 1,
            };
            let c = CatalogCurve::from_name(name, &vec![1.0; n]).unwrap();
            assert_eq!(c.name(), name);
        }
    }

    #[test]
    fn accelerating_circle_branch_speeds() {
        let c = CatalogCurve::AcceleratingCircle;
        let d = c.derivatives(PI);
        assert!((d[0] - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        assert!((d[1].norm() - 1.0).abs() < 1e-15);
        let t2 = PI * 5f64.sqrt();
        let d = c.derivatives(t2);
        assert!((d[0] - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-14);
        assert!((d[1].norm() - 5f64.sqrt()).abs() < 1e-14);
    }
}
