use super::rational::{RationalFunction, DEFAULT_EXCLUSION};
use crate::error::{Error, Result};

pub const DEFAULT_POINTS: usize = 2000;

/// Sampled frequency axis used to discretise "for all ω" conditions.
///
/// `exclusion_radius` is relative: a point is dropped when it lies within
/// `exclusion_radius * max(1, |p|)` of an imaginary-axis pole `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
    pub exclusion_radius: f64,
}

impl FrequencyGrid {
    pub fn new(points: Vec<f64>, exclusion_radius: f64) -> Result<Self> {
        if points.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument(
                "grid frequencies must be finite and nonnegative".into(),
            ));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "grid frequencies must be strictly increasing".into(),
            ));
        }
        if !(exclusion_radius >= 0.0) {
            return Err(Error::InvalidArgument("exclusion radius must be >= 0".into()));
        }
        Ok(FrequencyGrid {
            points,
            exclusion_radius,
        })
    }

    /// `n` logarithmically spaced points on `[lo, hi]`.
    pub fn logspace(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) || n < 2 {
            return Err(Error::InvalidArgument(format!(
                "log grid needs 0 < lo < hi and at least 2 points (got {lo}, {hi}, {n})"
            )));
        }
        let (a, b) = (lo.log10(), hi.log10());
        let step = (b - a) / (n - 1) as f64;
        let mut pts: Vec<f64> = (0..n).map(|i| 10f64.powf(a + step * i as f64)).collect();
        pts[0] = lo;
        pts[n - 1] = hi;
        FrequencyGrid::new(pts, DEFAULT_EXCLUSION)
    }

    /// 2000 log-spaced points spanning three decades beyond the smallest and
    /// largest nonzero pole/zero magnitude; `[1e-3, 1e6]` when there are none.
    pub fn default_for(rf: &RationalFunction) -> Result<Self> {
        let r = rf.reduce()?;
        let mut mags: Vec<f64> = r.den().roots()?.iter().map(|z| z.norm()).collect();
        if !r.is_zero() {
            mags.extend(r.num().roots()?.iter().map(|z| z.norm()));
        }
        let nonzero: Vec<f64> = mags.into_iter().filter(|m| *m > 0.0).collect();
        if nonzero.is_empty() {
            return FrequencyGrid::logspace(1e-3, 1e6, DEFAULT_POINTS);
        }
        let lo = nonzero.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = nonzero.iter().cloned().fold(0.0, f64::max);
        FrequencyGrid::logspace(1e-3 * lo, 1e3 * hi, DEFAULT_POINTS)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted() {
        assert!(FrequencyGrid::new(vec![1.0, 1.0], 0.0).is_err());
        assert!(FrequencyGrid::new(vec![-1.0, 1.0], 0.0).is_err());
        assert!(FrequencyGrid::new(vec![0.0, 1.0], 0.0).is_ok());
    }

    #[test]
    fn logspace_endpoints() {
        let g = FrequencyGrid::logspace(0.1, 1000.0, 5).unwrap();
        assert_eq!(g.points().first(), Some(&0.1));
        assert_eq!(g.points().last(), Some(&1000.0));
        assert!((g.points()[2] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn default_brackets_poles() {
        let g = RationalFunction::from_coeffs(&[1.0], &[1.0, 11.0, 10.0]).unwrap();
        let grid = FrequencyGrid::default_for(&g).unwrap();
        assert_eq!(grid.len(), DEFAULT_POINTS);
        assert!((grid.points()[0] - 1e-3).abs() < 1e-12);
        assert!((grid.points()[DEFAULT_POINTS - 1] - 1e4).abs() < 1e-8);
        let c = FrequencyGrid::default_for(&RationalFunction::constant(2.0)).unwrap();
        assert_eq!(c.points()[0], 1e-3);
    }
}
