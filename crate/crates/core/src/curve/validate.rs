use super::{Surface, Trajectory};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// `max_residual <= tol` for the tolerance given to the check.
    pub passed: bool,
    pub max_residual: f64,
    pub worst_t: f64,
    pub samples_checked: usize,
    pub messages: Vec<String>,
}

fn sample_times(traj: &Trajectory, n: usize) -> impl Iterator<Item = f64> + '_ {
    let (a, b) = (traj.a(), traj.b());
    let last = n - 1;
    (0..n).map(move |i| {
        if i == last {
            b
        } else {
            a + (b - a) * (i as f64) / (last as f64)
        }
    })
}

/// Checks `ζ(t) ∈ M` at `n_samples` equally spaced times, endpoints included.
pub fn validate_on_surface(
    traj: &Trajectory,
    surf: &Surface,
    n_samples: usize,
    tol: f64,
) -> Result<ValidationReport> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument("n_samples must be at least 2".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut max_residual = 0.0f64;
    let mut worst_t = traj.a();
    for t in sample_times(traj, n_samples) {
        let r = surf.residual(traj.position(t)?).abs();
        if r > max_residual {
            max_residual = r;
            worst_t = t;
        }
    }
    let passed = max_residual <= tol;
    let mut messages = Vec::new();
    if !passed {
        messages.push(format!(
            "trajectory leaves the {} surface: |residual| = {max_residual} at t = {worst_t} exceeds {tol:e}",
            surf.kind()
        ));
    }
    Ok(ValidationReport {
        passed,
        max_residual,
        worst_t,
        samples_checked: n_samples,
        messages,
    })
}

/// Compares the reported first and second derivatives against central
/// differences of the next-lower order at interior sample points.
pub fn validate_smoothness(
    traj: &Trajectory,
    n_samples: usize,
    fd_step: f64,
    fd_tol: f64,
) -> Result<ValidationReport> {
    if n_samples < 3 {
        return Err(Error::InvalidArgument("n_samples must be at least 3".into()));
    }
    if !(fd_step > 0.0 && fd_tol > 0.0) {
        return Err(Error::InvalidArgument("fd_step and fd_tol must be positive".into()));
    }
    if traj.duration() <= 4.0 * fd_step {
        return Err(Error::InvalidArgument(format!(
            "domain of length {} is too short for finite-difference step {fd_step}",
            traj.duration()
        )));
    }
    if traj.max_jet_order() < 2 {
        return Err(Error::OrderUnavailable {
            requested: 2,
            available: traj.max_jet_order(),
        });
    }
    let h = fd_step;
    let mut max_err = 0.0f64;
    let mut worst_t = traj.a();
    let mut checked = 0;
    for t in sample_times(traj, n_samples) {
        if t - h < traj.a() || t + h > traj.b() {
            continue;
        }
        let lo = traj.derivatives(t - h)?;
        let mid = traj.derivatives(t)?;
        let hi = traj.derivatives(t + h)?;
        for k in 0..2 {
            let fd = (hi[k] - lo[k]) / (2.0 * h);
            let err = (fd - mid[k + 1]).max_abs();
            if err > max_err {
                max_err = err;
                worst_t = t;
            }
        }
        checked += 1;
    }
    let passed = max_err <= fd_tol;
    let mut messages = Vec::new();
    if !passed {
        messages.push(format!(
            "derivative mismatch {max_err} at t = {worst_t} exceeds {fd_tol:e}"
        ));
    }
    Ok(ValidationReport {
        passed,
        max_residual: max_err,
        worst_t,
        samples_checked: checked,
        messages,
    })
}
