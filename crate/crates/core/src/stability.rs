//! Quantitative stability certificates for approximate d'Alembert solutions.
//!
//! For an even `H` on `[-T, T]` with `H(0) = 1` and `a = H''(0) > 0`, let
//! `ε` bound the defect on `[-T, T]^2`, `B = sup |H|` and `K = sup |H'''|`.
//! Then for every `0 < h <= T` and `|t| <= T - h`
//!
//! ```text
//! |H(t) - cosh(√a t)| <= (δ(h) / a) (cosh(√a |t|) - 1),   δ(h) = ε/h² + (1+B) K h / 3.
//! ```
//!
//! [`certify`] measures `ε`, `B`, `K` and `a` on grids, evaluates the envelope
//! and checks it against the observed error pointwise. The verdict is only
//! as good as the grid estimates of the suprema; certificates record the
//! grids and whether `K` came from closed-form derivatives.

use alloc::format;
use alloc::vec::Vec;

use crate::calibration::{estimate_kappa, DEFAULT_H0, DEFAULT_LEVELS};
use crate::cost::cosh_m1;
use crate::dalembert::sup_defect;
use crate::grid::{clipped_points, Grid};
use crate::{Domain, Error, FunctionHandle, HandleKind, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Tolerance for the evenness and normalization hypotheses.
pub const HYPOTHESIS_TOL: f64 = 1e-6;

/// Points used for the `B` and `K` sweeps.
pub const BOUNDS_GRID_POINTS: usize = 2001;

/// `|a - 1|` below which ratio certificates use the simplified `δ J(x)` form.
pub const UNIT_CURVATURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ThirdDerivativeSource {
    Analytic,
    /// Third central differences with the recorded spacing; an estimate.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Bounds {
    pub b: f64,
    pub k: f64,
    pub k_source: ThirdDerivativeSource,
    /// Spacing of the third differences when `k_source` is finite-difference.
    pub fd_step: Option<f64>,
    /// Third differences with a spacing this coarse relative to `T` are unreliable.
    pub ill_conditioned: bool,
}

/// `B = sup |H|` and `K = sup |H'''|` over `[-T, T]`.
///
/// Handles without closed-form third derivatives fall back to
/// `H'''(t) ≈ (H(t+2s) - 2H(t+s) + 2H(t-s) - H(t-2s)) / (2 s^3)` with `s`
/// four times the table spacing, the stencil shifted inward near the ends
/// of the table.
pub fn estimate_bounds(h: &FunctionHandle, half_width: f64) -> Result<Bounds> {
    h.expect_domain(Domain::LogLine)?;
    let grid = Grid::with_points(half_width, BOUNDS_GRID_POINTS)?;
    if !h.covers(-half_width, half_width) {
        return Err(Error::domain(format!(
            "{} is not evaluable on [-{half_width}, {half_width}]",
            h.label()
        )));
    }
    let pts = grid.points();
    let mut b = 0.0_f64;
    for &t in &pts {
        b = b.max(h.eval(t)?.abs());
    }

    if h.derivative_capability() >= 3 {
        let mut k = 0.0_f64;
        for &t in &pts {
            k = k.max(h.log_derivative(t, 3)?.abs());
        }
        return Ok(Bounds {
            b,
            k,
            k_source: ThirdDerivativeSource::Analytic,
            fd_step: None,
            ill_conditioned: false,
        });
    }

    let s = match h.log_spacing() {
        Some(sp) => 4.0 * sp,
        // Analytic handles without derivatives: balance truncation and round-off.
        None => libm::cbrt(f64::EPSILON) * half_width.max(1.0) * 4.0,
    };
    let (lo, hi) = h.support();
    if hi - lo < 4.0 * s {
        return Err(Error::domain(format!(
            "support of {} too narrow for third differences with spacing {s}",
            h.label()
        )));
    }
    let mut k = 0.0_f64;
    for &t in &pts {
        let c = t.clamp(lo + 2.0 * s, hi - 2.0 * s);
        let d3 = (h.eval(c + 2.0 * s)? - 2.0 * h.eval(c + s)? + 2.0 * h.eval(c - s)?
            - h.eval(c - 2.0 * s)?)
            / (2.0 * s * s * s);
        k = k.max(d3.abs());
    }
    Ok(Bounds {
        b,
        k,
        k_source: ThirdDerivativeSource::FiniteDifference,
        fd_step: Some(s),
        ill_conditioned: 8.0 * s > half_width,
    })
}

/// `δ(h) = ε/h² + (1+B) K h / 3`.
pub fn delta_of_h(epsilon: f64, b: f64, k: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::domain(format!("h must be positive, got {h}")));
    }
    if !(epsilon >= 0.0 && b >= 0.0 && k >= 0.0) {
        return Err(Error::parameter("epsilon, B and K must be nonnegative"));
    }
    Ok(epsilon / (h * h) + (1.0 + b) * k * h / 3.0)
}

/// Minimizer of `δ` on `(0, T]`: `h* = (6ε / ((1+B)K))^(1/3)` clamped to `T`.
/// With `(1+B)K = 0` returns `T`; with `ε = 0` returns `T/100`, since `δ`
/// then decreases all the way to `h -> 0` and the grid defect is never truly zero.
pub fn optimal_h(epsilon: f64, b: f64, k: f64, half_width: f64) -> Result<f64> {
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::domain("window half-width T must be positive"));
    }
    if !(epsilon >= 0.0 && b >= 0.0 && k >= 0.0) {
        return Err(Error::parameter("epsilon, B and K must be nonnegative"));
    }
    let c = (1.0 + b) * k;
    if c == 0.0 {
        return Ok(half_width);
    }
    if epsilon == 0.0 {
        return Ok(half_width / 100.0);
    }
    Ok(libm::cbrt(6.0 * epsilon / c).min(half_width))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StabilityInputs {
    pub half_width: f64,
    pub h: f64,
    pub epsilon: f64,
    pub b: f64,
    pub k: f64,
    pub a: f64,
}

/// The envelope `t -> (δ/a)(cosh(√a |t|) - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Envelope {
    pub delta: f64,
    pub a: f64,
}

impl Envelope {
    pub fn at(&self, t: f64) -> f64 {
        self.delta / self.a * cosh_m1(libm::sqrt(self.a) * t.abs())
    }
}

/// One row of the envelope sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SweepPoint {
    pub t: f64,
    pub value: f64,
    pub branch: f64,
    pub envelope: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StabilityCertificate {
    pub inputs: StabilityInputs,
    pub delta: f64,
    pub envelope: Envelope,
    pub max_observed_error: f64,
    /// `min (envelope - |error|)` over the sweep grid.
    pub max_envelope_margin: f64,
    pub verified: bool,
    pub defect_grid: Grid,
    pub defect_argmax: (f64, f64),
    pub k_source: ThirdDerivativeSource,
    pub kappa_uncertainty: f64,
    /// Set by [`certify_ratio`] when `|a - 1| <= 1e-10` and the envelope is `δ J(x)`.
    pub simplified_unit_form: bool,
    pub sweep: Vec<SweepPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CertifyOptions {
    /// Fixed `h`; `None` uses [`optimal_h`].
    pub h: Option<f64>,
    /// Override for the curvature `a`; `None` estimates it.
    pub a: Option<f64>,
}

struct Prepared {
    inputs: StabilityInputs,
    delta: f64,
    defect_grid: Grid,
    defect_argmax: (f64, f64),
    k_source: ThirdDerivativeSource,
    kappa_uncertainty: f64,
}

fn prepare(h: &FunctionHandle, half_width: f64, step: f64, opts: &CertifyOptions) -> Result<Prepared> {
    h.expect_domain(Domain::LogLine)?;
    let grid = Grid::new(half_width, step)?;
    if !h.covers(-2.0 * half_width, 2.0 * half_width) {
        return Err(Error::domain(format!(
            "{} must be evaluable on [-{0}, {0}]",
            2.0 * half_width
        )));
    }

    let h0 = h.eval(0.0)?;
    if (h0 - 1.0).abs() > HYPOTHESIS_TOL {
        return Err(Error::precondition(format!("H(0) = {h0}, expected 1")));
    }
    for t in grid.points() {
        let (p, m) = (h.eval(t)?, h.eval(-t)?);
        if (p - m).abs() > HYPOTHESIS_TOL * p.abs().max(1.0) {
            return Err(Error::precondition(format!(
                "H is not even: H({t}) - H({}) = {:e}",
                -t,
                p - m
            )));
        }
    }

    let (a, kappa_uncertainty) = match opts.a {
        Some(a) => (a, 0.0),
        None => {
            let est = estimate_kappa(h, DEFAULT_H0.min(half_width), DEFAULT_LEVELS)?;
            (est.kappa, est.uncertainty)
        }
    };
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::precondition(format!(
            "curvature a = H''(0) = {a} must be positive"
        )));
    }

    let defect = sup_defect(h, half_width, step)?;
    let bounds = estimate_bounds(h, half_width)?;
    let hh = match opts.h {
        Some(v) => {
            if !(v > 0.0 && v <= half_width) {
                return Err(Error::parameter(format!("h = {v} must lie in (0, T]")));
            }
            v
        }
        None => optimal_h(defect.epsilon, bounds.b, bounds.k, half_width)?,
    };
    let delta = delta_of_h(defect.epsilon, bounds.b, bounds.k, hh)?;
    Ok(Prepared {
        inputs: StabilityInputs {
            half_width,
            h: hh,
            epsilon: defect.epsilon,
            b: bounds.b,
            k: bounds.k,
            a,
        },
        delta,
        defect_grid: grid,
        defect_argmax: defect.argmax,
        k_source: bounds.k_source,
        kappa_uncertainty,
    })
}

fn assemble(
    p: Prepared,
    sweep: Vec<SweepPoint>,
    simplified_unit_form: bool,
) -> StabilityCertificate {
    let max_observed_error = sweep.iter().map(|s| s.error).fold(0.0, f64::max);
    let margin = sweep
        .iter()
        .map(|s| s.envelope - s.error)
        .fold(f64::INFINITY, f64::min);
    StabilityCertificate {
        inputs: p.inputs,
        delta: p.delta,
        envelope: Envelope {
            delta: p.delta,
            a: p.inputs.a,
        },
        max_observed_error,
        max_envelope_margin: margin,
        verified: margin >= 0.0,
        defect_grid: p.defect_grid,
        defect_argmax: p.defect_argmax,
        k_source: p.k_source,
        kappa_uncertainty: p.kappa_uncertainty,
        simplified_unit_form,
        sweep,
    }
}

/// Certificate for a log-line handle on `[-T, T]` with defect grid spacing `step`.
pub fn certify(
    h: &FunctionHandle,
    half_width: f64,
    step: f64,
    opts: &CertifyOptions,
) -> Result<StabilityCertificate> {
    let p = prepare(h, half_width, step, opts)?;
    let env = Envelope {
        delta: p.delta,
        a: p.inputs.a,
    };
    let root_a = libm::sqrt(p.inputs.a);
    let mut sweep = Vec::new();
    for t in clipped_points(&p.defect_grid, half_width - p.inputs.h) {
        let value = h.eval(t)?;
        let branch = libm::cosh(root_a * t);
        sweep.push(SweepPoint {
            t,
            value,
            branch,
            envelope: env.at(t),
            error: (value - branch).abs(),
        });
    }
    Ok(assemble(p, sweep, false))
}

/// Ratio-domain certificate: `|F(x) - (cosh(√a ln x) - 1)|` against the same
/// envelope at `t = ln x`, for `x ∈ [e^-(T-h), e^(T-h)]`. Sweep rows carry
/// `t = ln x`, `value = F(x)` and `branch = cosh(√a t) - 1`.
pub fn certify_ratio(
    f: &FunctionHandle,
    half_width: f64,
    step: f64,
    opts: &CertifyOptions,
) -> Result<StabilityCertificate> {
    f.expect_domain(Domain::PositiveRatios)?;
    let h = f.lift()?;
    let p = prepare(&h, half_width, step, opts)?;
    let unit = (p.inputs.a - 1.0).abs() <= UNIT_CURVATURE_TOL;
    let env = Envelope {
        delta: p.delta,
        a: p.inputs.a,
    };
    let root_a = libm::sqrt(p.inputs.a);
    let mut sweep = Vec::new();
    for t in clipped_points(&p.defect_grid, half_width - p.inputs.h) {
        let x = libm::exp(t);
        let value = f.eval(x)?;
        let branch = cosh_m1(root_a * t);
        let envelope = if unit {
            p.delta * crate::cost::j_raw(x)
        } else {
            env.at(t)
        };
        sweep.push(SweepPoint {
            t,
            value,
            branch,
            envelope,
            error: (value - branch).abs(),
        });
    }
    Ok(assemble(p, sweep, unit))
}

/// Whether `K` in a certificate came from a sample table.
pub fn k_is_estimated(h: &FunctionHandle) -> bool {
    h.kind() == HandleKind::SampleTable || h.derivative_capability() < 3
}
