use std::collections::HashMap;

use super::arclength::pieces;
use super::{IntervalSet, MeasureOptions};
use crate::curve::Trajectory;
use crate::error::Result;
use crate::Vec3;

/// Halvings of the discretization step tried after the first one before the
/// estimate is reported as non-converged.
const MAX_STEP_HALVINGS: usize = 4;

/// One-dimensional measure of the image set, counted without multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageMeasure {
    pub value: f64,
    /// Whether the last two discretizations agreed to `10 · rel_tol`.
    pub converged: bool,
    /// Parameter step of the discretization that produced `value`.
    pub step: f64,
    pub segments: usize,
}

struct Segment {
    p: Vec3,
    q: Vec3,
    len: f64,
    /// Distance from the curve's midpoint to the chord midpoint.
    sag: f64,
}

/// Part of segment `seg`, as an arc-length range `[lo, hi]` along it, that
/// lies within `tol` of `other`.
///
/// `other` is clipped to the slab over `seg`; the clipped piece counts when
/// both its ends are within `tol` of the line through `seg`. Retraced pieces
/// pass, transversal crossings do not.
fn covered_span(seg: &Segment, dir: Vec3, other: &Segment, tol: f64) -> Option<(f64, f64)> {
    let alpha = (other.p - seg.p).dot(&dir);
    let beta = (other.q - seg.p).dot(&dir);
    if alpha == beta {
        return None;
    }
    let lo = alpha.min(beta).max(0.0);
    let hi = alpha.max(beta).min(seg.len);
    if hi <= lo {
        return None;
    }
    let at = |x: f64| {
        let s = (x - alpha) / (beta - alpha);
        let w = other.p + (other.q - other.p) * s - seg.p;
        (w - dir * w.dot(&dir)).norm()
    };
    (at(lo) <= tol && at(hi) <= tol).then_some((lo, hi))
}

fn cell_of(p: Vec3, cell: f64) -> [i64; 3] {
    p.0.map(|c| (c / cell).floor() as i64)
}

fn polyline_measure(traj: &Trajectory, pieces: &[(f64, f64)], step: f64, coincide_tol: f64) -> Result<(f64, usize)> {
    let mut segments = Vec::new();
    for &(lo, hi) in pieces {
        let n = ((hi - lo) / step).ceil().max(1.0) as usize;
        let time = |k: usize| {
            if k == 2 * n {
                hi
            } else {
                lo + (hi - lo) * (k as f64) / ((2 * n) as f64)
            }
        };
        let mut p = traj.position(lo)?;
        for i in 0..n {
            let m = traj.position(time(2 * i + 1))?;
            let q = traj.position(time(2 * i + 2))?;
            segments.push(Segment {
                p,
                q,
                len: p.distance(&q),
                sag: m.distance(&((p + q) * 0.5)),
            });
            p = q;
        }
    }
    let count = segments.len();
    let max_len = segments.iter().fold(0.0f64, |m, s| m.max(s.len));
    if max_len == 0.0 {
        return Ok((0.0, count));
    }
    let max_sag = segments.iter().fold(0.0f64, |m, s| m.max(s.sag));
    // chords of two retraced pieces can differ by both sagittas
    let tol_for = |i: &Segment, j: &Segment| coincide_tol + 1.5 * (i.sag + j.sag);
    let reach = coincide_tol + 1.5 * 2.0 * max_sag;
    let cell = max_len.max(2.0 * reach);

    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    let mut candidates = Vec::new();
    let mut spans = Vec::new();
    let mut total = 0.0;
    for (idx, seg) in segments.iter().enumerate() {
        let lo_corner = Vec3(std::array::from_fn(|k| seg.p[k].min(seg.q[k])));
        let hi_corner = Vec3(std::array::from_fn(|k| seg.p[k].max(seg.q[k])));
        let query_lo = cell_of(lo_corner.map(|c| c - reach), cell);
        let query_hi = cell_of(hi_corner.map(|c| c + reach), cell);
        if seg.len > 0.0 {
            candidates.clear();
            for x in query_lo[0]..=query_hi[0] {
                for y in query_lo[1]..=query_hi[1] {
                    for z in query_lo[2]..=query_hi[2] {
                        if let Some(list) = grid.get(&[x, y, z]) {
                            candidates.extend_from_slice(list);
                        }
                    }
                }
            }
            candidates.sort_unstable();
            candidates.dedup();
            let dir = (seg.q - seg.p) / seg.len;
            spans.clear();
            spans.extend(candidates.iter().filter_map(|&j| {
                let other = &segments[j];
                if other.len == 0.0 {
                    return None;
                }
                covered_span(seg, dir, other, tol_for(seg, other))
            }));
            spans.sort_by(|a: &(f64, f64), b| a.0.total_cmp(&b.0));
            let mut covered = 0.0;
            let mut reach_end = f64::NEG_INFINITY;
            for &(lo, hi) in spans.iter() {
                let lo = lo.max(reach_end);
                if hi > lo {
                    covered += hi - lo;
                }
                reach_end = reach_end.max(hi);
            }
            total += (seg.len - covered).max(0.0);
        }
        let lo_cell = cell_of(lo_corner, cell);
        let hi_cell = cell_of(hi_corner, cell);
        for x in lo_cell[0]..=hi_cell[0] {
            for y in lo_cell[1]..=hi_cell[1] {
                for z in lo_cell[2]..=hi_cell[2] {
                    grid.entry([x, y, z]).or_default().push(idx);
                }
            }
        }
    }
    Ok((total, count))
}

/// Length of the set `ζ(restrict)`, each point counted once.
///
/// The restricted pieces are sampled into a polyline with parameter step at
/// most `discretization_step`. Walking the segments in order, the part of a
/// segment that retraces an earlier one (in either orientation, within
/// `coincide_tol` plus the local chord sagittas) is not counted again.
/// The step is then halved until two successive estimates agree to
/// `10 · rel_tol`.
pub fn image_measure(
    traj: &Trajectory,
    restrict: Option<&IntervalSet>,
    opts: &MeasureOptions,
) -> Result<ImageMeasure> {
    opts.validate()?;
    let pieces = pieces(traj, restrict)?;
    let mut step = opts.discretization_step;
    let (mut prev, mut segs) = polyline_measure(traj, &pieces, step, opts.coincide_tol)?;
    for _ in 0..MAX_STEP_HALVINGS {
        step *= 0.5;
        let (cur, n) = polyline_measure(traj, &pieces, step, opts.coincide_tol)?;
        let agree = (cur - prev).abs() <= 10.0 * opts.rel_tol * cur.abs().max(prev.abs());
        prev = cur;
        segs = n;
        if agree {
            return Ok(ImageMeasure {
                value: cur,
                converged: true,
                step,
                segments: segs,
            });
        }
    }
    Ok(ImageMeasure {
        value: prev,
        converged: false,
        step,
        segments: segs,
    })
}
