//! Trajectories, their jets, and the surfaces they live on.

mod catalog;
mod surface;
mod validate;

use std::sync::Arc;

pub use catalog::{CatalogCurve, CATALOG_NAMES};
pub use surface::Surface;
pub use validate::{validate_on_surface, validate_smoothness, ValidationReport};

use crate::error::{Error, Result};
use crate::expr::{eval_scalar_jet, parse_expression, Expr};
use crate::Vec3;

/// Position and derivatives of a trajectory at one time. Derivatives above
/// the requested order are `None`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub t: f64,
    pub d0: Vec3,
    pub d1: Option<Vec3>,
    pub d2: Option<Vec3>,
    pub d3: Option<Vec3>,
}

impl Jet {
    pub fn order(&self) -> usize {
        [self.d1, self.d2, self.d3]
            .iter()
            .take_while(|d| d.is_some())
            .count()
    }
}

#[derive(Clone, Debug)]
enum Source {
    Catalog(CatalogCurve),
    Expression(Arc<[Expr; 3]>),
    Derived(Arc<Trajectory>),
}

/// A smooth map from the closed interval `[a, b]` into ℝ³.
///
/// Cloning is cheap; expression trees and parent trajectories are shared.
#[derive(Clone, Debug)]
pub struct Trajectory {
    a: f64,
    b: f64,
    max_jet_order: usize,
    label: String,
    source: Source,
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "interval bounds must be finite (got {a}, {b})"
        )));
    }
    if a >= b {
        return Err(Error::InvalidInterval { a, b });
    }
    Ok(())
}

/// Builds one of the closed-form catalog trajectories on `[a, b]`.
pub fn make_catalog_trajectory(name: &str, params: &[f64], a: f64, b: f64) -> Result<Trajectory> {
    let curve = CatalogCurve::from_name(name, params)?;
    check_interval(a, b)?;
    let label = if params.is_empty() {
        name.to_owned()
    } else {
        let p: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        format!("{name}({})", p.join(","))
    };
    Ok(Trajectory {
        a,
        b,
        max_jet_order: 3,
        label,
        source: Source::Catalog(curve),
    })
}

/// Builds a trajectory from three coordinate expressions in `t`.
///
/// The expressions are evaluated at `a`, the midpoint and `b` before the
/// trajectory is returned, so domain errors at those points surface here.
pub fn make_expression_trajectory(
    x_src: &str,
    y_src: &str,
    z_src: &str,
    a: f64,
    b: f64,
) -> Result<Trajectory> {
    let exprs = [
        parse_expression(x_src)?,
        parse_expression(y_src)?,
        parse_expression(z_src)?,
    ];
    Trajectory::from_exprs(exprs, a, b)
}

impl Trajectory {
    pub fn from_exprs(exprs: [Expr; 3], a: f64, b: f64) -> Result<Trajectory> {
        check_interval(a, b)?;
        let label = format!("({}, {}, {})", exprs[0], exprs[1], exprs[2]);
        let traj = Trajectory {
            a,
            b,
            max_jet_order: 3,
            label,
            source: Source::Expression(Arc::new(exprs)),
        };
        for t in [a, 0.5 * (a + b), b] {
            traj.derivatives(t)?;
        }
        Ok(traj)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn duration(&self) -> f64 {
        self.b - self.a
    }

    pub fn max_jet_order(&self) -> usize {
        self.max_jet_order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.a && t <= self.b
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Position and derivatives 1..=3 at `t`. Entries above
    /// [`Self::max_jet_order`] are meaningless.
    pub(crate) fn derivatives(&self, t: f64) -> Result<[Vec3; 4]> {
        if !self.contains(t) {
            return Err(Error::OutOfDomain {
                t,
                a: self.a,
                b: self.b,
            });
        }
        let d = match &self.source {
            Source::Catalog(c) => c.derivatives(t),
            Source::Expression(exprs) => {
                let mut d = [Vec3::ZERO; 4];
                for (axis, e) in exprs.iter().enumerate() {
                    let j = eval_scalar_jet(e, t)?.as_array();
                    for (k, v) in j.into_iter().enumerate() {
                        d[k].0[axis] = v;
                    }
                }
                d
            }
            Source::Derived(parent) => {
                let p = parent.derivatives(t)?;
                [p[1], p[2], p[3], Vec3::ZERO]
            }
        };
        if !d[..=self.max_jet_order].iter().all(Vec3::is_finite) {
            return Err(Error::NonFinite { t });
        }
        Ok(d)
    }

    pub fn position(&self, t: f64) -> Result<Vec3> {
        Ok(self.derivatives(t)?[0])
    }

    /// Jet of order `order` at `t`.
    pub fn evaluate_jet(&self, t: f64, order: usize) -> Result<Jet> {
        if order > self.max_jet_order {
            return Err(Error::OrderUnavailable {
                requested: order,
                available: self.max_jet_order,
            });
        }
        let d = self.derivatives(t)?;
        let pick = |k: usize| (k <= order).then_some(d[k]);
        Ok(Jet {
            t,
            d0: d[0],
            d1: pick(1),
            d2: pick(2),
            d3: pick(3),
        })
    }

    /// The velocity curve `t ↦ ζ′(t)` on the same domain, as a trajectory of
    /// order 2.
    pub fn derived(&self) -> Result<Trajectory> {
        if self.max_jet_order < 3 {
            return Err(Error::OrderUnavailable {
                requested: 3,
                available: self.max_jet_order,
            });
        }
        Ok(Trajectory {
            a: self.a,
            b: self.b,
            max_jet_order: 2,
            label: format!("d/dt {}", self.label),
            source: Source::Derived(Arc::new(self.clone())),
        })
    }
}

pub fn evaluate_jet(traj: &Trajectory, t: f64, order: usize) -> Result<Jet> {
    traj.evaluate_jet(t, order)
}

pub fn derived_trajectory(traj: &Trajectory) -> Result<Trajectory> {
    traj.derived()
}
