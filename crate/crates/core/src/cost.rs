//! The canonical reciprocal cost and its elementary reformulations.
//!
//! `J(x) = (x + 1/x)/2 - 1 = (x - 1)^2 / (2x) = cosh(ln x) - 1`.
//!
//! Evaluation always goes through the cancellation-free forms: `(x-1)^2/(2x)`
//! in ratio coordinates and `2 sinh^2(t/2)` in log coordinates.

use crate::{Error, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Largest `|t|` accepted by the log-coordinate forms; `cosh` overflows an
/// `f64` shortly after 710.
pub const MAX_LOG_COORD: f64 = 700.0;

/// A strictly positive, finite ratio `x`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub struct PositiveRatio(f64);

impl PositiveRatio {
    pub fn new(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::domain("ratio must be finite"));
        }
        if x <= 0.0 {
            return Err(Error::domain("ratio must be strictly positive"));
        }
        Ok(Self(x))
    }

    /// `e^t`, rejecting results that underflow to zero or overflow.
    pub fn from_log(t: LogCoord) -> Result<Self> {
        let x = libm::exp(t.get());
        if !x.is_finite() || x == 0.0 {
            return Err(Error::overflow("exp(t) not representable as a positive ratio"));
        }
        Ok(Self(x))
    }

    pub const fn one() -> Self {
        Self(1.0)
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    pub fn ln(self) -> LogCoord {
        LogCoord(libm::log(self.0))
    }

    pub fn recip(self) -> Result<Self> {
        Self::new(1.0 / self.0)
    }
}

impl TryFrom<f64> for PositiveRatio {
    type Error = Error;

    fn try_from(x: f64) -> Result<Self> {
        Self::new(x)
    }
}

impl From<PositiveRatio> for f64 {
    fn from(x: PositiveRatio) -> f64 {
        x.0
    }
}

/// A finite logarithmic coordinate `t = ln x`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub struct LogCoord(f64);

impl LogCoord {
    pub fn new(t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::domain("log coordinate must be finite"));
        }
        Ok(Self(t))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    fn checked(self) -> Result<f64> {
        if libm::fabs(self.0) > MAX_LOG_COORD {
            return Err(Error::overflow(alloc::format!(
                "|t| = {} exceeds {MAX_LOG_COORD}; cosh(t) is not representable",
                libm::fabs(self.0)
            )));
        }
        Ok(self.0)
    }
}

impl TryFrom<f64> for LogCoord {
    type Error = Error;

    fn try_from(t: f64) -> Result<Self> {
        Self::new(t)
    }
}

impl From<LogCoord> for f64 {
    fn from(t: LogCoord) -> f64 {
        t.0
    }
}

/// A nonnegative cost value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct CostValue(f64);

impl CostValue {
    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// `J(x)` on raw floats; callers guarantee `x > 0`.
#[inline]
pub(crate) fn j_raw(x: f64) -> f64 {
    let d = x - 1.0;
    // d * (d / 2x) instead of d^2 / 2x keeps large x from overflowing.
    d * (d / (2.0 * x))
}

/// `cosh(t) - 1` without cancellation near zero.
#[inline]
pub(crate) fn cosh_m1(t: f64) -> f64 {
    let s = libm::sinh(0.5 * t);
    2.0 * s * s
}

/// The canonical reciprocal cost `J(x) = (x - 1)^2 / (2x)`.
pub fn canonical_cost(x: PositiveRatio) -> Result<CostValue> {
    let value = j_raw(x.get());
    if !value.is_finite() {
        return Err(Error::overflow("J(x) not representable"));
    }
    Ok(CostValue(value))
}

/// `G(t) = J(e^t) = cosh t - 1` and `H(t) = G(t) + 1 = cosh t`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LogForms {
    pub g: f64,
    pub h: f64,
}

pub fn log_forms(t: LogCoord) -> Result<LogForms> {
    let t = t.checked()?;
    Ok(LogForms {
        g: cosh_m1(t),
        h: libm::cosh(t),
    })
}

/// `J(x)` as the gap between the arithmetic and geometric means of `x` and `1/x`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AmGm {
    pub am: f64,
    pub gm: f64,
    pub diff: CostValue,
}

pub fn am_gm_decomposition(x: PositiveRatio) -> Result<AmGm> {
    let xv = x.get();
    let am = 0.5 * (xv + 1.0 / xv);
    if !am.is_finite() {
        return Err(Error::overflow("AM(x, 1/x) not representable"));
    }
    // GM(x, 1/x) = sqrt(x * 1/x) is identically one.
    Ok(AmGm {
        am,
        gm: 1.0,
        diff: canonical_cost(x)?,
    })
}

/// Bregman divergence of the generator `cosh` between `t` and the reference
/// point 0: `cosh t - cosh 0 - sinh(0) t`. Coincides with `G(t)`.
pub fn bregman_divergence(t: LogCoord) -> Result<f64> {
    Ok(log_forms(t)?.g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GoldenResult {
    pub phi: f64,
    pub iterations: usize,
    pub cost_at_phi: f64,
}

/// Iterates `x -> 1 + 1/x` from `x0` until successive iterates differ by at
/// most `tol`. The map contracts to the golden ratio from every positive start.
pub fn golden_fixed_point(x0: PositiveRatio, tol: f64, max_iter: usize) -> Result<GoldenResult> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::parameter("tol must be positive and finite"));
    }
    if max_iter < 1 {
        return Err(Error::parameter("max_iter must be at least 1"));
    }
    let mut x = x0.get();
    let mut step = f64::INFINITY;
    for i in 1..=max_iter {
        let next = 1.0 + 1.0 / x;
        step = libm::fabs(next - x);
        x = next;
        if step <= tol {
            return Ok(GoldenResult {
                phi: x,
                iterations: i,
                cost_at_phi: j_raw(x),
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        last_step: step,
    })
}
