//! Instantaneous speed as the limit of neighborhood speeds over the ladder
//! of balls `eps_k = eps0 · ratio^k`.
//!
//! Balls form a neighborhood base at every point, so the ladder is cofinal
//! in the system of all neighborhoods. The result reports both the ladder
//! limit and the infimum over the rungs actually computed; they are not
//! assumed to coincide.

use super::{ball_speed, MeasureMode};
use crate::curve::Trajectory;
use crate::error::{Error, Result};
use crate::measure::MeasureOptions;

/// Samples used by [`estimate_diameter`].
const DIAMETER_SAMPLES: usize = 256;
/// Rungs computed before any stopping rule is consulted.
const MIN_RUNGS: usize = 3;
/// Rungs required before stability of the extrapolated limit alone may stop
/// the ladder (this is what stops it at stationary points, where rung
/// speeds keep shrinking geometrically).
const MIN_RUNGS_EXTRAPOLATED_STOP: usize = 5;
/// Admissible exponents for `v(ε) = v* + c·ε^p`.
const EXPONENT_RANGE: (f64, f64) = (0.25, 3.0);
/// Rung differences below this relative size are treated as roundoff.
const NOISE_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetOptions {
    /// First ball radius; `None` picks `0.1 · min(1, diameter)`.
    pub eps0: Option<f64>,
    pub ratio: f64,
    pub max_rungs: usize,
    /// Relative agreement between consecutive rungs that ends the ladder.
    pub conv_tol: f64,
    pub extrapolate: bool,
}

impl Default for NetOptions {
    fn default() -> Self {
        NetOptions {
            eps0: None,
            ratio: 0.5,
            max_rungs: 30,
            conv_tol: 1e-4,
            extrapolate: true,
        }
    }
}

impl NetOptions {
    pub fn validate(&self) -> Result<()> {
        if let Some(e) = self.eps0 {
            if !(e.is_finite() && e > 0.0) {
                return Err(Error::InvalidArgument(format!("eps0 must be positive (got {e})")));
            }
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "ratio must lie in (0, 1) (got {})",
                self.ratio
            )));
        }
        if self.max_rungs < MIN_RUNGS {
            return Err(Error::InvalidArgument(format!(
                "max_rungs must be at least {MIN_RUNGS}"
            )));
        }
        if !(self.conv_tol.is_finite() && self.conv_tol > 0.0) {
            return Err(Error::InvalidArgument("conv_tol must be positive".into()));
        }
        Ok(())
    }
}

/// One ball of the ladder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rung {
    pub eps: f64,
    pub speed: f64,
    pub image_meas: f64,
    pub preimage_meas: f64,
    pub measures_converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpeedEstimate {
    pub value: f64,
    /// In order of decreasing `eps`.
    pub rungs: Vec<Rung>,
    pub converged: bool,
    pub inf_over_rungs: f64,
    /// `|ζ′(t)|`, the classical speed.
    pub oracle_speed: Option<f64>,
    pub extrapolated: bool,
    /// Exponent `p` of the last accepted power-law fit.
    pub exponent: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFit {
    pub limit: f64,
    pub exponent: f64,
}

/// Fits `v(ε) = v* + c·ε^p` through three rungs at `ε, rε, r²ε`.
///
/// Returns `None` when the differences change sign, vanish into roundoff,
/// or give an exponent outside `[0.25, 3]`.
pub fn fit_power_law(v0: f64, v1: f64, v2: f64, ratio: f64) -> Option<PowerFit> {
    let d1 = v0 - v1;
    let d2 = v1 - v2;
    let scale = v0.abs().max(v1.abs()).max(v2.abs());
    if d1.abs() <= NOISE_FLOOR * scale || d2.abs() <= NOISE_FLOOR * scale {
        return None;
    }
    if d1.signum() != d2.signum() {
        return None;
    }
    let q = d2 / d1;
    let exponent = q.ln() / ratio.ln();
    if !(exponent >= EXPONENT_RANGE.0 && exponent <= EXPONENT_RANGE.1) {
        return None;
    }
    Some(PowerFit {
        limit: v2 - d2 * q / (1.0 - q),
        exponent,
    })
}

/// Largest distance between `256` equally spaced samples of the curve.
pub fn estimate_diameter(traj: &Trajectory) -> Result<f64> {
    let n = DIAMETER_SAMPLES;
    let pts = (0..n)
        .map(|i| {
            let t = if i == n - 1 {
                traj.b()
            } else {
                traj.a() + traj.duration() * (i as f64) / ((n - 1) as f64)
            };
            traj.position(t)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut diam = 0.0f64;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            diam = diam.max(p.distance(q));
        }
    }
    Ok(diam)
}

fn default_eps0(traj: &Trajectory) -> Result<f64> {
    let diam = estimate_diameter(traj)?;
    Ok(if diam > 0.0 { 0.1 * diam.min(1.0) } else { 0.1 })
}

/// Limit of neighborhood speeds at `ζ(t)` along the ball ladder.
///
/// The ladder stops when two consecutive rung speeds agree to `conv_tol`
/// relatively, or when the extrapolated limit has settled to `conv_tol`
/// (relative to the first rung's speed) over the last fits. The value is
/// the extrapolated limit when a stable power-law fit exists, else the last
/// rung's speed.
pub fn instantaneous_speed(
    traj: &Trajectory,
    t: f64,
    net: &NetOptions,
    mode: MeasureMode,
    opts: &MeasureOptions,
) -> Result<SpeedEstimate> {
    net.validate()?;
    opts.validate()?;
    if !traj.contains(t) {
        return Err(Error::OutOfDomain {
            t,
            a: traj.a(),
            b: traj.b(),
        });
    }
    let eps0 = match net.eps0 {
        Some(e) => e,
        None => default_eps0(traj)?,
    };
    let d = traj.derivatives(t)?;
    let center = d[0];
    let oracle_speed = (traj.max_jet_order() >= 1).then(|| d[1].norm());

    let mut rungs: Vec<Rung> = Vec::with_capacity(net.max_rungs);
    let mut fits: Vec<Option<PowerFit>> = Vec::with_capacity(net.max_rungs);
    let mut converged = false;
    for k in 0..net.max_rungs {
        let eps = eps0 * net.ratio.powi(k as i32);
        let ns = ball_speed(traj, center, eps, mode, opts)?;
        rungs.push(Rung {
            eps,
            speed: ns.speed,
            image_meas: ns.image_meas,
            preimage_meas: ns.preimage_meas,
            measures_converged: ns.converged,
        });
        let v: Vec<f64> = rungs.iter().map(|r| r.speed).collect();
        fits.push(if net.extrapolate && k >= 2 {
            fit_power_law(v[k - 2], v[k - 1], v[k], net.ratio)
        } else {
            None
        });
        if k + 1 < MIN_RUNGS {
            continue;
        }
        let rung_agree = (v[k] - v[k - 1]).abs() <= net.conv_tol * v[k].abs();
        let limit_settled = k + 1 >= MIN_RUNGS_EXTRAPOLATED_STOP
            && settled(&fits[k - 1], &fits[k], v[0], net.conv_tol);
        if rung_agree || limit_settled {
            converged = true;
            break;
        }
    }

    let last = rungs.len() - 1;
    let first_speed = rungs[0].speed;
    let fit = fits[last].filter(|f| last < 3 || settled(&fits[last - 1], &Some(*f), first_speed, net.conv_tol));
    let (value, extrapolated) = match fit {
        Some(f) => (f.limit, true),
        None => (rungs[last].speed, false),
    };
    let inf_over_rungs = rungs.iter().map(|r| r.speed).fold(f64::INFINITY, f64::min);
    Ok(SpeedEstimate {
        value: value.max(0.0),
        converged: converged && rungs[last].measures_converged,
        inf_over_rungs,
        oracle_speed,
        extrapolated,
        exponent: fit.map(|f| f.exponent),
        rungs,
    })
}

fn settled(prev: &Option<PowerFit>, cur: &Option<PowerFit>, first_speed: f64, tol: f64) -> bool {
    match (prev, cur) {
        (Some(p), Some(c)) => {
            (c.limit - p.limit).abs() <= tol * c.limit.abs().max(first_speed.abs())
        }
        _ => false,
    }
}

/// Instantaneous speed of the velocity curve `ζ′`, i.e. the magnitude of
/// the acceleration; the oracle is `|ζ″(t)|`.
pub fn acceleration_magnitude(
    traj: &Trajectory,
    t: f64,
    net: &NetOptions,
    mode: MeasureMode,
    opts: &MeasureOptions,
) -> Result<SpeedEstimate> {
    let velocity = traj.derived()?;
    instantaneous_speed(&velocity, t, net, mode, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_catalog_trajectory, make_expression_trajectory};
    use std::f64::consts::PI;

    fn speed(traj: &Trajectory, t: f64) -> SpeedEstimate {
        instantaneous_speed(traj, t, &NetOptions::default(), MeasureMode::Set, &MeasureOptions::default())
            .unwrap()
    }

    #[test]
    fn power_law_fit_recovers_parameters() {
        let v = |e: f64| 0.7 + 3.0 * e.powf(1.5);
        let f = fit_power_law(v(0.1), v(0.05), v(0.025), 0.5).unwrap();
        assert!((f.exponent - 1.5).abs() < 1e-9);
        assert!((f.limit - 0.7).abs() < 1e-12);
        assert!(fit_power_law(1.0, 1.0, 1.0, 0.5).is_none());
        assert!(fit_power_law(1.0, 0.9, 1.0, 0.5).is_none());
        // p = 5 is outside the admissible range
        let v = |e: f64| 1.0 + e.powi(5);
        assert!(fit_power_law(v(0.1), v(0.05), v(0.025), 0.5).is_none());
    }

    #[test]
    fn circle_speed_is_one() {
        let c = make_catalog_trajectory("circle", &[1.0], 0.0, 2.0 * PI).unwrap();
        let s = speed(&c, PI / 3.0);
        assert!(s.converged);
        assert!((s.value - 1.0).abs() < 1e-4, "{s:?}");
        assert!((s.oracle_speed.unwrap() - 1.0).abs() < 1e-15);
        for r in &s.rungs {
            assert!((r.speed - 1.0).abs() < 1e-6);
            assert!(s.inf_over_rungs <= r.speed);
        }
    }

    #[test]
    fn stationary_point() {
        let c = make_catalog_trajectory("cubic_line", &[], -1.0, 1.0).unwrap();
        let s = speed(&c, 0.0);
        assert!(s.converged, "{s:?}");
        assert!(s.value.abs() < 1e-4, "{s:?}");
        assert_eq!(s.oracle_speed, Some(0.0));
        assert!((s.exponent.unwrap() - 2.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn endpoint_speed_is_one_sided() {
        let h = make_catalog_trajectory("helix", &[1.0, 0.5], 0.0, 3.0).unwrap();
        let s = speed(&h, 0.0);
        assert!((s.value - 1.25f64.sqrt()).abs() < 1e-3, "{s:?}");
    }

    #[test]
    fn acceleration() {
        let c = make_catalog_trajectory("circle", &[1.0], 0.0, 2.0 * PI).unwrap();
        let a = acceleration_magnitude(&c, 1.0, &NetOptions::default(), MeasureMode::Set, &MeasureOptions::default())
            .unwrap();
        assert!((a.value - 1.0).abs() < 1e-3);
        assert!((a.oracle_speed.unwrap() - 1.0).abs() < 1e-15);

        let l = make_expression_trajectory("t", "2*t", "0", 0.0, 1.0).unwrap();
        let a = acceleration_magnitude(&l, 0.4, &NetOptions::default(), MeasureMode::Set, &MeasureOptions::default())
            .unwrap();
        assert!(a.value.abs() < 1e-4);
        assert!(a.converged);
    }

    #[test]
    fn option_checks() {
        let c = make_catalog_trajectory("circle", &[1.0], 0.0, 1.0).unwrap();
        let bad = [
            NetOptions { ratio: 1.0, ..NetOptions::default() },
            NetOptions { eps0: Some(0.0), ..NetOptions::default() },
            NetOptions { max_rungs: 2, ..NetOptions::default() },
        ];
        for net in bad {
            assert!(instantaneous_speed(&c, 0.5, &net, MeasureMode::Set, &MeasureOptions::default()).is_err());
        }
        assert!(matches!(
            instantaneous_speed(&c, 1.5, &NetOptions::default(), MeasureMode::Set, &MeasureOptions::default()),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn max_rungs_cap_reports_non_convergence() {
        let c = make_catalog_trajectory("gerono", &[1.0], 0.0, 2.0 * PI).unwrap();
        let net = NetOptions {
            max_rungs: 3,
            conv_tol: 1e-14,
            ..NetOptions::default()
        };
        let s = instantaneous_speed(&c, 1.0, &net, MeasureMode::Set, &MeasureOptions::default()).unwrap();
        assert!(!s.converged);
        assert_eq!(s.rungs.len(), 3);
    }
}
