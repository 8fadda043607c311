use super::{IntervalSet, MeasureOptions};
use crate::curve::Trajectory;
use crate::error::{Error, Result};
use crate::Vec3;

/// Passes always performed before the relative-increase test may stop the
/// refinement. Closed curves can have vanishing chord sums on the first few
/// dyadic partitions.
const MIN_PASSES: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct LengthEstimate {
    pub value: f64,
    /// Chord sums are lower bounds for the length of a rectifiable curve, so
    /// this equals `value`.
    pub lower_bound: f64,
    /// Number of bisection passes performed; every piece ends with
    /// `2^refinement_depth` chords.
    pub refinement_depth: usize,
    pub converged: bool,
    /// Chord sum after each pass, starting with the unrefined endpoints.
    pub history: Vec<f64>,
}

pub(crate) fn pieces(traj: &Trajectory, restrict: Option<&IntervalSet>) -> Result<Vec<(f64, f64)>> {
    match restrict {
        None => Ok(vec![(traj.a(), traj.b())]),
        Some(set) => {
            if let Some(&(lo, hi)) = set
                .intervals()
                .iter()
                .find(|&&(lo, hi)| !traj.contains(lo) || !traj.contains(hi))
            {
                return Err(Error::InvalidArgument(format!(
                    "interval ({lo}, {hi}) is not inside the domain [{}, {}]",
                    traj.a(),
                    traj.b()
                )));
            }
            Ok(set.intervals().to_vec())
        }
    }
}

/// Dyadic refinement of one parameter interval.
///
/// `levels[j][i]` is the chord over the `i`-th of `2^j` equal subintervals.
/// The sum is folded along the bisection tree with
/// `node = max(left + right, chord)`, so a refinement can never lower it,
/// not even by a rounding error.
struct DyadicPiece {
    points: Vec<Vec3>,
    levels: Vec<Vec<f64>>,
    lo: f64,
    hi: f64,
}

impl DyadicPiece {
    fn new(traj: &Trajectory, lo: f64, hi: f64) -> Result<Self> {
        let p0 = traj.position(lo)?;
        let p1 = traj.position(hi)?;
        Ok(DyadicPiece {
            points: vec![p0, p1],
            levels: vec![vec![p0.distance(&p1)]],
            lo,
            hi,
        })
    }

    fn refine(&mut self, traj: &Trajectory) -> Result<()> {
        let n = self.points.len() - 1;
        let fine = 2 * n;
        let mut points = Vec::with_capacity(fine + 1);
        for i in 0..n {
            points.push(self.points[i]);
            let t = self.lo + (self.hi - self.lo) * ((2 * i + 1) as f64) / (fine as f64);
            points.push(traj.position(t)?);
        }
        points.push(self.points[n]);
        self.levels
            .push(points.windows(2).map(|w| w[0].distance(&w[1])).collect());
        self.points = points;
        Ok(())
    }

    fn chord_sum(&self) -> f64 {
        let mut acc = self.levels.last().cloned().unwrap_or_default();
        for chords in self.levels.iter().rev().skip(1) {
            acc = chords
                .iter()
                .enumerate()
                .map(|(i, &c)| (acc[2 * i] + acc[2 * i + 1]).max(c))
                .collect();
        }
        acc[0]
    }
}

/// Traversal length as a supremum of chord sums over partitions.
///
/// Every restricted piece is bisected in lockstep; the chord sum of the
/// whole set is non-decreasing from pass to pass. Refinement stops once one
/// full pass raises it by at most `rel_tol` relatively, or after
/// `max_refinement_depth` passes.
pub fn partition_arc_length(
    traj: &Trajectory,
    restrict: Option<&IntervalSet>,
    opts: &MeasureOptions,
) -> Result<LengthEstimate> {
    opts.validate()?;
    let mut work = pieces(traj, restrict)?
        .into_iter()
        .map(|(lo, hi)| DyadicPiece::new(traj, lo, hi))
        .collect::<Result<Vec<_>>>()?;
    let total = |work: &[DyadicPiece]| work.iter().map(DyadicPiece::chord_sum).fold(0.0, |s, c| s + c);

    let mut history = vec![total(&work)];
    let mut converged = false;
    let mut depth = 0;
    while depth < opts.max_refinement_depth {
        for piece in &mut work {
            piece.refine(traj)?;
        }
        depth += 1;
        let prev = history[history.len() - 1];
        let cur = total(&work);
        if !cur.is_finite() {
            return Err(Error::NonFinite { t: f64::NAN });
        }
        history.push(cur);
        if depth >= MIN_PASSES && cur - prev <= opts.rel_tol * cur {
            converged = true;
            break;
        }
    }
    let value = history[history.len() - 1];
    Ok(LengthEstimate {
        value,
        lower_bound: value,
        refinement_depth: depth,
        converged,
        history,
    })
}

// Gauss–Kronrod 7/15 on [-1, 1]; nodes and weights for the non-negative half.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    depth: usize,
}

fn gauss_kronrod(f: &impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, depth: usize) -> Result<Panel> {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let pair = f(c - h * x)? + f(c + h * x)?;
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Panel {
        lo,
        hi,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
        depth,
    })
}

/// Adaptive Gauss–Kronrod integral of `f` over `[lo, hi]` to relative
/// tolerance `rel_tol`, splitting the panel with the largest error estimate
/// first. Returns `(value, error_estimate, converged)`.
pub(crate) fn integrate(
    f: impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_depth: usize,
) -> Result<(f64, f64, bool)> {
    let mut panels = vec![gauss_kronrod(&f, lo, hi, 0)?];
    loop {
        // summed in panel order so the result does not depend on split order
        panels.sort_by(|p, q| p.lo.total_cmp(&q.lo));
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= rel_tol * value.abs() || error <= f64::MIN_POSITIVE {
            return Ok((value, error, true));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.error.total_cmp(&q.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = panels[worst];
        let mid = 0.5 * (p.lo + p.hi);
        if p.depth >= max_depth || mid <= p.lo || mid >= p.hi {
            return Ok((value, error, false));
        }
        panels[worst] = gauss_kronrod(&f, p.lo, mid, p.depth + 1)?;
        panels.push(gauss_kronrod(&f, mid, p.hi, p.depth + 1)?);
    }
}

/// Arc length as `∫ |ζ′(t)| dt` over the restricted set.
///
/// This is the classical formula; it serves as an independent check on
/// [`partition_arc_length`].
pub fn quadrature_arc_length(
    traj: &Trajectory,
    restrict: Option<&IntervalSet>,
    opts: &MeasureOptions,
) -> Result<f64> {
    opts.validate()?;
    if traj.max_jet_order() < 1 {
        return Err(Error::OrderUnavailable {
            requested: 1,
            available: traj.max_jet_order(),
        });
    }
    let speed = |t: f64| -> Result<f64> { Ok(traj.derivatives(t)?[1].norm()) };
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut ok = true;
    for (lo, hi) in pieces(traj, restrict)? {
        let (v, e, c) = integrate(speed, lo, hi, opts.rel_tol, opts.max_refinement_depth)?;
        total += v;
        total_err += e;
        ok &= c;
    }
    if !ok {
        return Err(Error::QuadratureNonConvergence {
            estimate: total,
            error: total_err,
        });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_catalog_trajectory, make_expression_trajectory};
    use std::f64::consts::PI;

    #[test]
    fn kronrod_is_exact_for_polynomials() {
        let (v, _, ok) = integrate(|t| Ok(t.powi(9) - 2.0 * t * t), -1.0, 2.0, 1e-12, 10).unwrap();
        let exact = (2f64.powi(10) - 1.0) / 10.0 - 2.0 * (8.0 + 1.0) / 3.0;
        assert!(ok);
        assert!((v - exact).abs() < 1e-12);
        let (v, _, _) = integrate(|t| Ok(t.cos()), 0.0, PI / 2.0, 1e-13, 20).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn circle_lengths() {
        let c = make_catalog_trajectory("circle", &[1.0], 0.0, 2.0 * PI).unwrap();
        let opts = MeasureOptions::default();
        let l = partition_arc_length(&c, None, &opts).unwrap();
        assert!(l.converged);
        assert!(l.value <= 2.0 * PI && l.value >= 2.0 * PI * (1.0 - 1e-6), "{}", l.value);
        let q = quadrature_arc_length(&c, None, &opts).unwrap();
        assert!((q - 2.0 * PI).abs() <= 2.0 * PI * 1e-8);
    }

    #[test]
    fn cubic_line_quadrature() {
        let c = make_catalog_trajectory("cubic_line", &[], -1.0, 1.0).unwrap();
        let q = quadrature_arc_length(&c, None, &MeasureOptions::default()).unwrap();
        assert!((q - 2.0).abs() < 1e-8);
    }

    #[test]
    fn double_traversal_counts_twice() {
        let c = make_catalog_trajectory("double_circle", &[1.0], 0.0, 4.0 * PI).unwrap();
        let l = partition_arc_length(&c, None, &MeasureOptions::default()).unwrap();
        assert!((l.value - 4.0 * PI).abs() < 1e-6, "{}", l.value);
        // the dyadic partitions of [0, 4π] start with repeated points
        assert!(l.history[0] < 1e-12);
    }

    #[test]
    fn helix_length() {
        let h = make_catalog_trajectory("helix", &[1.0, 1.0], 0.0, 2.0 * PI).unwrap();
        let l = partition_arc_length(&h, None, &MeasureOptions::default()).unwrap();
        assert!((l.value - 2.0 * PI * 2f64.sqrt()).abs() < 1e-5);
    }

    #[test]
    fn restricted_length() {
        let c = make_catalog_trajectory("circle", &[2.0], 0.0, 2.0 * PI).unwrap();
        let set = IntervalSet::new(vec![(0.0, 1.0), (2.0, 2.5)]).unwrap();
        let opts = MeasureOptions::default();
        let l = partition_arc_length(&c, Some(&set), &opts).unwrap();
        assert!((l.value - 3.0).abs() < 1e-7);
        let q = quadrature_arc_length(&c, Some(&set), &opts).unwrap();
        assert!((q - 3.0).abs() < 1e-12);
        let outside = IntervalSet::single(6.0, 7.0).unwrap();
        assert!(partition_arc_length(&c, Some(&outside), &opts).is_err());
    }

    #[test]
    fn refinement_never_lowers_the_sum_on_a_straight_line() {
        // collinear points are where a naive chord sum can drop by an ulp
        let l = make_expression_trajectory("0.1*t + 3", "0.7*t", "-0.3*t", -2.0, 3.3).unwrap();
        let est = partition_arc_length(&l, None, &MeasureOptions::default()).unwrap();
        assert!(est.history.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn depth_cap_reports_non_convergence() {
        let c = make_catalog_trajectory("circle", &[1.0], 0.0, 2.0 * PI).unwrap();
        let opts = MeasureOptions {
            max_refinement_depth: 3,
            ..MeasureOptions::default()
        };
        let l = partition_arc_length(&c, None, &opts).unwrap();
        assert!(!l.converged);
        assert_eq!(l.refinement_depth, 3);
        assert_eq!(l.history.len(), 4);
    }

    #[test]
    fn quadrature_non_convergence_carries_estimate() {
        let c = make_catalog_trajectory("gerono", &[1.0], 0.0, 2.0 * PI).unwrap();
        let opts = MeasureOptions {
            max_refinement_depth: 1,
            rel_tol: 1e-15,
            ..MeasureOptions::default()
        };
        match quadrature_arc_length(&c, None, &opts) {
            Err(Error::QuadratureNonConvergence { estimate, .. }) => assert!(estimate > 6.0),
            other => panic!("{other:?}"),
        }
    }
}
