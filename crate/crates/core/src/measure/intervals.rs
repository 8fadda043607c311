use crate::error::{Error, Result};

/// Sorted, pairwise-disjoint subintervals of a trajectory's domain.
///
/// Whether an endpoint belongs to a piece does not affect any measure, so
/// pieces are stored as plain `(lo, hi)` pairs with `lo < hi`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &intervals {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidArgument(format!("bad interval ({lo}, {hi})")));
            }
        }
        if intervals.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::InvalidArgument(
                "intervals must be sorted and pairwise disjoint".into(),
            ));
        }
        Ok(IntervalSet { intervals })
    }

    pub fn single(lo: f64, hi: f64) -> Result<Self> {
        IntervalSet::new(vec![(lo, hi)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= t && t <= hi)
    }
}

/// Total length of the pieces.
pub fn lebesgue_measure_1d(s: &IntervalSet) -> f64 {
    s.intervals.iter().map(|(lo, hi)| hi - lo).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn measures() {
        assert_eq!(lebesgue_measure_1d(&IntervalSet::empty()), 0.0);
        let s = IntervalSet::new(vec![(0.0, PI / 3.0), (5.0 * PI / 3.0, 2.0 * PI)]).unwrap();
        assert!((lebesgue_measure_1d(&s) - 2.0 * PI / 3.0).abs() < 1e-15);
        let s = IntervalSet::single(-0.1, 0.1).unwrap();
        assert!((lebesgue_measure_1d(&s) - 0.2).abs() < 1e-16);
    }

    #[test]
    fn rejects_invalid() {
        assert!(IntervalSet::new(vec![(1.0, 1.0)]).is_err());
        assert!(IntervalSet::new(vec![(0.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(IntervalSet::new(vec![(2.0, 3.0), (0.0, 1.0)]).is_err());
        assert!(IntervalSet::new(vec![(0.0, f64::NAN)]).is_err());
    }
}
