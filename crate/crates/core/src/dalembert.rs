//! Defects of the d'Alembert equation `H(t+u) + H(t-u) = 2 H(t) H(u)` and of
//! its ratio-domain form, the composition law
//! `F(xy) + F(x/y) = 2 F(x) F(y) + 2 F(x) + 2 F(y)`.
//!
//! Suprema are taken over explicit uniform grids (see [`Grid`]); reports carry
//! the grid so the discretization is visible to consumers.

use alloc::format;
use alloc::vec::Vec;

use crate::grid::Grid;
use crate::{Domain, Error, FunctionHandle, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// `Δ_H(t, u) = H(t+u) + H(t-u) - 2 H(t) H(u)`.
pub fn defect_log(h: &FunctionHandle, t: f64, u: f64) -> Result<f64> {
    h.expect_domain(Domain::LogLine)?;
    Ok(h.eval(t + u)? + h.eval(t - u)? - 2.0 * h.eval(t)? * h.eval(u)?)
}

/// `F(xy) + F(x/y) - 2 F(x) F(y) - 2 F(x) - 2 F(y)`.
pub fn defect_ratio(f: &FunctionHandle, x: f64, y: f64) -> Result<f64> {
    f.expect_domain(Domain::PositiveRatios)?;
    let (fx, fy) = (f.eval(x)?, f.eval(y)?);
    let prod = x * y;
    let quot = x / y;
    if !(prod > 0.0 && prod.is_finite() && quot > 0.0 && quot.is_finite()) {
        return Err(Error::domain(format!("xy or x/y not representable for ({x}, {y})")));
    }
    Ok(f.eval(prod)? + f.eval(quot)? - 2.0 * fx * fy - 2.0 * fx - 2.0 * fy)
}

/// `H(t) = F(e^t) + 1`; the composition law for `F` is the d'Alembert
/// equation for `H`.
pub fn lift_to_log(f: &FunctionHandle) -> Result<FunctionHandle> {
    f.lift()
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DefectSample {
    pub t: f64,
    pub u: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DefectReport {
    /// `max |Δ_H|` over the grid.
    pub epsilon: f64,
    /// First grid point (row-major in `t`, then `u`) attaining `epsilon`.
    pub argmax: (f64, f64),
    pub grid: Grid,
    /// Number of `(t, u)` pairs evaluated.
    pub count: usize,
}

fn require_window(h: &FunctionHandle, reach: f64) -> Result<()> {
    if !h.covers(-reach, reach) {
        let (lo, hi) = h.support();
        return Err(Error::domain(format!(
            "handle {} evaluable on [{lo}, {hi}], need [{}, {reach}]",
            h.label(),
            -reach
        )));
    }
    Ok(())
}

/// Values of `h` on the grid, plus `h(t ± u)` through a lookup into the doubled grid.
struct GridValues {
    pts: Vec<f64>,
    vals: Vec<f64>,
}

impl GridValues {
    fn new(h: &FunctionHandle, grid: &Grid) -> Result<Self> {
        let pts = grid.points();
        let vals = pts.iter().map(|&t| h.eval(t)).collect::<Result<Vec<_>>>()?;
        Ok(Self { pts, vals })
    }
}

/// Grid supremum of `|Δ_H|` over `{-T, ..., T}^2`.
pub fn sup_defect(h: &FunctionHandle, half_width: f64, step: f64) -> Result<DefectReport> {
    h.expect_domain(Domain::LogLine)?;
    let grid = Grid::new(half_width, step)?;
    require_window(h, 2.0 * half_width)?;
    let g = GridValues::new(h, &grid)?;

    let mut best = DefectSample {
        t: g.pts[0],
        u: g.pts[0],
        delta: 0.0,
    };
    let mut first = true;
    for (i, &t) in g.pts.iter().enumerate() {
        for (j, &u) in g.pts.iter().enumerate() {
            let delta = h.eval(t + u)? + h.eval(t - u)? - 2.0 * g.vals[i] * g.vals[j];
            if !delta.is_finite() {
                return Err(Error::overflow(format!("defect not finite at ({t}, {u})")));
            }
            if first || delta.abs() > best.delta.abs() {
                best = DefectSample { t, u, delta };
                first = false;
            }
        }
    }
    let n = g.pts.len();
    Ok(DefectReport {
        epsilon: best.delta.abs(),
        argmax: (best.t, best.u),
        grid,
        count: n * n,
    })
}

/// Grid suprema of the absolute violations of the identities every
/// normalized (`H(0) = 1`) d'Alembert solution satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct IdentityViolations {
    /// `H(t+u) H(t-u) = H(t)^2 + H(u)^2 - 1`.
    pub product_identity: f64,
    /// `(H(t+u) - H(t-u))^2 = 4 (H(t)^2 - 1)(H(u)^2 - 1)`.
    pub difference_square: f64,
    /// `H(2t) = 2 H(t)^2 - 1`.
    pub double_angle: f64,
    /// `H(-u) = H(u)`.
    pub evenness: f64,
}

impl IdentityViolations {
    pub fn max(&self) -> f64 {
        self.product_identity
            .max(self.difference_square)
            .max(self.double_angle)
            .max(self.evenness)
    }
}

pub fn identity_report(h: &FunctionHandle, half_width: f64, step: f64) -> Result<IdentityViolations> {
    h.expect_domain(Domain::LogLine)?;
    let grid = Grid::new(half_width, step)?;
    require_window(h, 2.0 * half_width)?;
    let g = GridValues::new(h, &grid)?;

    let mut out = IdentityViolations {
        product_identity: 0.0,
        difference_square: 0.0,
        double_angle: 0.0,
        evenness: 0.0,
    };
    for (i, &t) in g.pts.iter().enumerate() {
        let ht = g.vals[i];
        out.double_angle = out.double_angle.max((h.eval(2.0 * t)? - (2.0 * ht * ht - 1.0)).abs());
        out.evenness = out.evenness.max((h.eval(-t)? - ht).abs());
        for (j, &u) in g.pts.iter().enumerate() {
            let hu = g.vals[j];
            let a = h.eval(t + u)?;
            let b = h.eval(t - u)?;
            out.product_identity = out.product_identity.max((a * b - (ht * ht + hu * hu - 1.0)).abs());
            let d = a - b;
            out.difference_square = out
                .difference_square
                .max((d * d - 4.0 * (ht * ht - 1.0) * (hu * hu - 1.0)).abs());
        }
    }
    Ok(out)
}

/// `sup_t |D_s H(t) - a H(t)|` where `D_s` is the central second difference
/// with spacing `fd_step`. Small exactly when `H'' = a H` on the window.
pub fn ode_residual(
    h: &FunctionHandle,
    a: f64,
    half_width: f64,
    step: f64,
    fd_step: f64,
) -> Result<f64> {
    h.expect_domain(Domain::LogLine)?;
    if !(fd_step > 0.0) || !fd_step.is_finite() {
        return Err(Error::parameter("finite-difference step must be positive"));
    }
    if !a.is_finite() {
        return Err(Error::parameter("ODE coefficient must be finite"));
    }
    let grid = Grid::new(half_width, step)?;
    require_window(h, half_width + fd_step)?;
    let mut sup = 0.0_f64;
    for t in grid.points() {
        let c = h.eval(t)?;
        let d2 = (h.eval(t + fd_step)? - 2.0 * c + h.eval(t - fd_step)?) / (fd_step * fd_step);
        sup = sup.max((d2 - a * c).abs());
    }
    Ok(sup)
}
