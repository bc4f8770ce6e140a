//! Uniform inclusive grids on symmetric windows `[-T, T]`.

use alloc::vec::Vec;

use crate::{Error, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// The grid `{-T, -T + step, ..., T}`.
///
/// When `2T/step` is within `1e-9` of an integer `m` the spacing is snapped to
/// `2T/m` so that both endpoints are hit exactly; otherwise the last regular
/// point is followed by `T` itself.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Grid {
    pub half_width: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(half_width: f64, step: f64) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::parameter("window half-width T must be positive and finite"));
        }
        if !(step > 0.0) || step > half_width {
            return Err(Error::parameter("grid step must satisfy 0 < step <= T"));
        }
        Ok(Self { half_width, step })
    }

    /// A grid on `[-T, T]` with `n >= 2` equally spaced points.
    pub fn with_points(half_width: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::parameter("grid needs at least 3 points"));
        }
        Self::new(half_width, 2.0 * half_width / (n - 1) as f64)
    }

    pub fn points(&self) -> Vec<f64> {
        let t = self.half_width;
        let ratio = 2.0 * t / self.step;
        let m = libm::round(ratio);
        if libm::fabs(ratio - m) <= 1e-9 * m {
            let m = m as usize;
            let h = 2.0 * t / m as f64;
            (0..=m)
                .map(|i| {
                    // Mirror the upper half so the grid is exactly symmetric.
                    if 2 * i <= m {
                        -t + i as f64 * h
                    } else {
                        t - (m - i) as f64 * h
                    }
                })
                .collect()
        } else {
            let m = libm::floor(ratio) as usize;
            let mut pts: Vec<f64> = (0..=m).map(|i| -t + i as f64 * self.step).collect();
            pts.push(t);
            pts
        }
    }

    pub fn len(&self) -> usize {
        self.points().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Points of `grid` with `|t| <= limit`, plus `±limit` themselves.
pub(crate) fn clipped_points(grid: &Grid, limit: f64) -> Vec<f64> {
    let slack = 1e-12 * grid.half_width;
    let mut pts: Vec<f64> = grid
        .points()
        .into_iter()
        .filter(|t| libm::fabs(*t) <= limit + slack)
        .collect();
    if limit > 0.0 {
        if pts.first().is_none_or(|&p| p > -limit + slack) {
            pts.insert(0, -limit);
        }
        if pts.last().is_none_or(|&p| p < limit - slack) {
            pts.push(limit);
        }
    } else if pts.is_empty() {
        pts.push(0.0);
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapped_grid_hits_endpoints_and_zero() {
        let g = Grid::new(2.0, 0.05).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 81);
        assert_eq!(p[0], -2.0);
        assert_eq!(p[80], 2.0);
        assert_eq!(p[40], 0.0);
        for i in 0..p.len() {
            assert_eq!(p[i], -p[p.len() - 1 - i]);
        }
    }

    #[test]
    fn irregular_step_appends_endpoint() {
        let p = Grid::new(1.0, 0.3).unwrap().points();
        assert_eq!(p.len(), 8);
        assert_eq!(*p.last().unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Grid::new(0.0, 0.1).is_err());
        assert!(Grid::new(1.0, 0.0).is_err());
        assert!(Grid::new(1.0, 1.5).is_err());
        assert!(Grid::new(f64::INFINITY, 0.1).is_err());
    }

    #[test]
    fn clipping_keeps_limits() {
        let g = Grid::new(1.0, 0.25).unwrap();
        let p = clipped_points(&g, 0.6);
        assert_eq!(p, [-0.6, -0.5, -0.25, 0.0, 0.25, 0.5, 0.6]);
        assert_eq!(clipped_points(&g, 0.0), [0.0]);
    }
}
