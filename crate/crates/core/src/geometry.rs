//! Geometry and Chebyshev structure of `J`.
//!
//! The Hessian of the generator `cosh` gives the line element
//! `ds^2 = cosh(t) dt^2` in log coordinates, or `(x^2 + 1)/(2 x^3) dx^2` in
//! ratio coordinates. Its distance `d_J(x, y) = |∫_{ln x}^{ln y} √cosh u du|`
//! has no elementary closed form and is evaluated by adaptive Simpson
//! quadrature.
//!
//! `J(x^n) = T_n(J(x) + 1) - 1`, where `T_n` is the Chebyshev polynomial; the
//! values `H_n = J(x^n) + 1` obey `H_{n+1} = 2 H_1 H_n - H_{n-1}`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cost::{j_raw, LogCoord, PositiveRatio};
use crate::{Error, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

pub const DEFAULT_EVAL_BUDGET: usize = 1_000_000;

/// Largest `|t|` for which `√cosh t` is representable.
pub const MAX_METRIC_LOG_COORD: f64 = 1400.0;

/// `√cosh t`, evaluated as `e^{|t|/2} √((1 + e^{-2|t|}) / 2)` so that it stays
/// finite up to `|t| = 1400`.
pub fn metric_weight(t: LogCoord) -> Result<f64> {
    let a = t.get().abs();
    if a > MAX_METRIC_LOG_COORD {
        return Err(Error::overflow(format!("|t| = {a} exceeds {MAX_METRIC_LOG_COORD}")));
    }
    Ok(weight(a))
}

#[inline]
fn weight(t: f64) -> f64 {
    let a = t.abs();
    if a < 20.0 {
        libm::sqrt(libm::cosh(a))
    } else {
        libm::exp(0.5 * a) * libm::sqrt(0.5 * (1.0 + libm::exp(-2.0 * a)))
    }
}

/// `√((x^2 + 1) / (2 x^3))`, the weight in ratio coordinates.
pub fn metric_weight_ratio(x: PositiveRatio) -> Result<f64> {
    let x = x.get();
    let w = libm::sqrt(0.5 * (x + 1.0 / x)) / x;
    if !w.is_finite() {
        return Err(Error::overflow(format!("metric weight at x = {x} not representable")));
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DistanceResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Log-coordinate endpoints `(ln x, ln y)`.
    pub endpoints: (f64, f64),
    pub evaluations: usize,
}

pub fn distance(x: PositiveRatio, y: PositiveRatio, tol: f64) -> Result<DistanceResult> {
    distance_with_budget(x, y, tol, DEFAULT_EVAL_BUDGET)
}

pub fn distance_with_budget(
    x: PositiveRatio,
    y: PositiveRatio,
    tol: f64,
    budget: usize,
) -> Result<DistanceResult> {
    log_distance(x.ln().get(), y.ln().get(), tol, budget)
}

/// `|∫_a^b √cosh u du|` by adaptive Simpson.
pub fn log_distance(a: f64, b: f64, tol: f64, budget: usize) -> Result<DistanceResult> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::parameter("tol must be positive"));
    }
    for t in [a, b] {
        if !t.is_finite() || t.abs() > MAX_METRIC_LOG_COORD {
            return Err(Error::overflow(format!("endpoint t = {t} out of range")));
        }
    }
    if a == b {
        return Ok(DistanceResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            endpoints: (a, b),
            evaluations: 0,
        });
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (value, err, evaluations) = adaptive_simpson(weight, lo, hi, tol, budget)?;
    Ok(DistanceResult {
        value,
        abs_error_estimate: err,
        endpoints: (a, b),
        evaluations,
    })
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

const MAX_DEPTH: u32 = 60;
/// Panels are always split at least this many times, so a coincidentally
/// small first difference cannot end the recursion.
const MIN_DEPTH: u32 = 4;

/// Stack-based adaptive Simpson. Each panel is accepted when the two-half
/// estimate differs from the whole-panel estimate by at most `15 tol_panel`;
/// the accepted value carries the Richardson correction and the error
/// estimate is the sum of `|S_2 - S_1| / 15` over accepted panels.
fn adaptive_simpson(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Result<(f64, f64, usize)> {
    let simpson = |a: f64, b: f64, fa: f64, fm: f64, fb: f64| (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let mut evals = 3;
    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
        tol,
        depth: 0,
    }];
    let mut total = 0.0;
    let mut err = 0.0;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let (flm, frm) = (f(lm), f(rm));
        evals += 2;
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let diff = left + right - p.whole;
        if (p.depth >= MIN_DEPTH && diff.abs() <= 15.0 * p.tol) || p.depth >= MAX_DEPTH {
            total += left + right + diff / 15.0;
            err += diff.abs() / 15.0;
            continue;
        }
        if evals >= budget {
            return Err(Error::ToleranceNotAchieved {
                tol,
                estimate: err + diff.abs() / 15.0,
                evaluations: evals,
            });
        }
        let half_tol = 0.5 * p.tol;
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            tol: half_tol,
            depth: p.depth + 1,
        });
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            tol: half_tol,
            depth: p.depth + 1,
        });
    }
    if err > tol {
        return Err(Error::ToleranceNotAchieved {
            tol,
            estimate: err,
            evaluations: evals,
        });
    }
    Ok((total, err, evals))
}

/// `d_J(x, y) / |ln y - ln x|`; tends to 1 as `x, y -> 1`.
pub fn local_equivalence_ratio(x: PositiveRatio, y: PositiveRatio, tol: f64) -> Result<f64> {
    let (a, b) = (x.ln().get(), y.ln().get());
    if a == b {
        return Err(Error::domain("local equivalence ratio needs x != y"));
    }
    let d = log_distance(a, b, tol, DEFAULT_EVAL_BUDGET)?;
    Ok(d.value / (b - a).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ChebyshevCheck {
    pub x: f64,
    pub n: u32,
    /// `H_n - 1` from the three-term recursion.
    pub via_identity: f64,
    /// `J(exp(n ln x))`.
    pub direct: f64,
    pub rel_discrepancy: f64,
}

pub fn chebyshev_cost(x: PositiveRatio, n: u32) -> Result<ChebyshevCheck> {
    let lx = x.ln().get();
    let nl = n as f64 * lx;
    if nl.abs() > crate::cost::MAX_LOG_COORD {
        return Err(Error::overflow(format!("n ln x = {nl} out of range")));
    }
    let h1 = j_raw(x.get()) + 1.0;
    let seq = recurrence(h1, n as usize)?;
    let via_identity = seq[n as usize] - 1.0;
    let direct = j_raw(libm::exp(nl));
    if !direct.is_finite() || !via_identity.is_finite() {
        return Err(Error::overflow("J(x^n) not representable"));
    }
    Ok(ChebyshevCheck {
        x: x.get(),
        n,
        via_identity,
        direct,
        rel_discrepancy: (via_identity - direct).abs() / (1.0 + direct.abs()),
    })
}

fn recurrence(h1: f64, n: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(h1);
    }
    for i in 1..n {
        let next = 2.0 * h1 * out[i] - out[i - 1];
        if !next.is_finite() {
            return Err(Error::overflow(format!("H_{} overflows", i + 1)));
        }
        out.push(next);
    }
    Ok(out)
}

/// `(H_0, ..., H_N)` with `H_0 = 1`, `H_{n+1} = 2 H_1 H_n - H_{n-1}`, so that
/// `H_n = T_n(H_1) = cosh(n arcosh H_1)`. Only the hyperbolic branch
/// `H_1 >= 1` is accepted.
pub fn chebyshev_sequence(h1: f64, n: usize) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::parameter("sequence length N must be at least 1"));
    }
    if !h1.is_finite() {
        return Err(Error::domain("H_1 must be finite"));
    }
    if h1 < 1.0 {
        return Err(Error::domain(format!(
            "H_1 = {h1} < 1 lies on the oscillatory branch, which no reciprocal cost reaches"
        )));
    }
    recurrence(h1, n)
}
