//! Brute-force references that share no code with the measure engine.
//!
//! Curves are given as plain closures; balls are resolved by testing every
//! point of a dense uniform grid.

#![allow(dead_code)]

pub type Curve = dyn Fn(f64) -> [f64; 3];

fn dist(p: [f64; 3], q: [f64; 3]) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
}

/// Grid samples `(t, ζ(t), inside)` at cell midpoints.
fn scan(curve: &Curve, a: f64, b: f64, center: [f64; 3], eps: f64, n: usize) -> Vec<(f64, [f64; 3], bool)> {
    let dt = (b - a) / n as f64;
    (0..n)
        .map(|i| {
            let t = a + (i as f64 + 0.5) * dt;
            let p = curve(t);
            (t, p, dist(p, center) < eps)
        })
        .collect()
}

/// Time spent inside the ball.
pub fn preimage_measure(curve: &Curve, a: f64, b: f64, center: [f64; 3], eps: f64, n: usize) -> f64 {
    let dt = (b - a) / n as f64;
    scan(curve, a, b, center, eps, n).iter().filter(|s| s.2).count() as f64 * dt
}

/// Length travelled inside the ball, with multiplicity. Equals the set
/// measure when the branches inside the ball only cross transversally.
pub fn inside_path_length(curve: &Curve, a: f64, b: f64, center: [f64; 3], eps: f64, n: usize) -> f64 {
    let s = scan(curve, a, b, center, eps, n);
    s.windows(2)
        .filter(|w| w[0].2 && w[1].2)
        .map(|w| dist(w[0].1, w[1].1))
        .sum()
}

/// Set measure of the part of a curve lying on the unit circle in the
/// xy-plane that falls inside the ball, by angular occupancy.
pub fn circle_arc_occupancy(
    curve: &Curve,
    a: f64,
    b: f64,
    center: [f64; 3],
    eps: f64,
    n: usize,
    bins: usize,
) -> f64 {
    let mut hit = vec![false; bins];
    let two_pi = 2.0 * std::f64::consts::PI;
    for (_, p, inside) in scan(curve, a, b, center, eps, n) {
        if inside {
            let ang = p[1].atan2(p[0]).rem_euclid(two_pi);
            let k = ((ang / two_pi) * bins as f64) as usize;
            hit[k.min(bins - 1)] = true;
        }
    }
    hit.iter().filter(|h| **h).count() as f64 * two_pi / bins as f64
}
