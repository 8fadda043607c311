use super::{IntervalSet, MeasureOptions};
use crate::curve::Trajectory;
use crate::error::{Error, Result};
use crate::Vec3;

/// Recursion limit for refining a single coarse scan cell.
const MAX_CELL_DEPTH: usize = 64;
/// Safety factor on the local speed bound used to discard scan cells.
const SPEED_BOUND_FACTOR: f64 = 1.5;

#[derive(Clone, Copy, Debug)]
struct Sample {
    t: f64,
    /// `|ζ(t) − c|² − r²`
    g: f64,
    dist: f64,
    speed: f64,
    accel: f64,
}

impl Sample {
    fn inside(&self) -> bool {
        self.g < 0.0
    }
}

struct BallProblem<'a> {
    traj: &'a Trajectory,
    center: Vec3,
    radius: f64,
    root_tol: f64,
}

impl BallProblem<'_> {
    fn sample(&self, t: f64) -> Result<Sample> {
        let d = self.traj.derivatives(t)?;
        let order = self.traj.max_jet_order();
        let delta = d[0] - self.center;
        let dist2 = delta.norm_squared();
        let g = dist2 - self.radius * self.radius;
        if !g.is_finite() {
            return Err(Error::NonFinite { t });
        }
        Ok(Sample {
            t,
            g,
            dist: dist2.sqrt(),
            speed: if order >= 1 { d[1].norm() } else { 0.0 },
            accel: if order >= 2 { d[2].norm() } else { 0.0 },
        })
    }

    /// Pushes, in increasing `t`, extra samples strictly inside `(l.t, r.t)`
    /// until the cell either shows a sign change or is provably of one sign.
    ///
    /// The bound uses `|d/dt |ζ − c|| ≤ |ζ′|`, with `|ζ′|` over the cell
    /// estimated from the endpoint speeds and accelerations.
    fn refine(&self, l: Sample, r: Sample, depth: usize, out: &mut Vec<Sample>) -> Result<()> {
        if l.inside() != r.inside() {
            return Ok(());
        }
        let h = r.t - l.t;
        if h <= self.root_tol || depth >= MAX_CELL_DEPTH {
            return Ok(());
        }
        let v = SPEED_BOUND_FACTOR * (l.speed.max(r.speed) + 0.5 * h * l.accel.max(r.accel));
        let settled = if l.inside() {
            0.5 * (l.dist + r.dist + v * h) < self.radius
        } else {
            0.5 * (l.dist + r.dist - v * h) >= self.radius
        };
        if settled {
            return Ok(());
        }
        let m = self.sample(0.5 * (l.t + r.t))?;
        if m.inside() != l.inside() {
            out.push(m);
            return Ok(());
        }
        self.refine(l, m, depth + 1, out)?;
        out.push(m);
        self.refine(m, r, depth + 1, out)
    }

    /// Bisection on a bracket with exactly one endpoint inside the ball.
    fn bisect(&self, l: Sample, r: Sample) -> Result<f64> {
        let (mut lo, mut hi) = (l.t, r.t);
        let lo_inside = l.inside();
        while hi - lo > self.root_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sample(mid)?.inside() == lo_inside {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `{t ∈ [a, b] : |ζ(t) − center| < radius}`.
///
/// `g(t) = |ζ(t) − center|² − radius²` is scanned on a uniform grid. Cells
/// without a sign change are subdivided only while a local speed bound still
/// allows `g` to change sign inside them, which catches balls far smaller
/// than the grid spacing. Every sign change is then refined by bisection to
/// `root_tol`. A tangential touch (`g` reaching 0 without crossing)
/// contributes nothing.
pub fn preimage_ball_intervals(
    traj: &Trajectory,
    center: Vec3,
    radius: f64,
    opts: &MeasureOptions,
) -> Result<IntervalSet> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive (got {radius})")));
    }
    if !center.is_finite() {
        return Err(Error::InvalidArgument("ball center must be finite".into()));
    }
    opts.validate()?;
    let problem = BallProblem {
        traj,
        center,
        radius,
        root_tol: opts.root_tol,
    };
    let (a, b) = (traj.a(), traj.b());
    let cells = ((opts.scan_points_per_unit_time as f64) * (b - a)).ceil().max(1.0) as usize;

    let mut samples = Vec::with_capacity(cells + 1);
    let mut prev = problem.sample(a)?;
    samples.push(prev);
    for i in 1..=cells {
        let t = if i == cells {
            b
        } else {
            a + (b - a) * (i as f64) / (cells as f64)
        };
        let cur = problem.sample(t)?;
        problem.refine(prev, cur, 0, &mut samples)?;
        samples.push(cur);
        prev = cur;
    }

    let mut pieces = Vec::new();
    let mut start = samples[0].inside().then_some(a);
    for w in samples.windows(2) {
        let (l, r) = (w[0], w[1]);
        if l.inside() == r.inside() {
            continue;
        }
        let root = problem.bisect(l, r)?;
        match start.take() {
            Some(lo) => {
                if root > lo {
                    pieces.push((lo, root));
                }
            }
            None => start = Some(root),
        }
    }
    if let Some(lo) = start {
        if b > lo {
            pieces.push((lo, b));
        }
    }
    IntervalSet::new(pieces)
}
