//! Evaluable real functions of one real variable.
//!
//! A [`FunctionHandle`] lives on one of two domains: the log line `t ∈ ℝ`
//! (functions `H`) or the positive ratios `x > 0` (costs `F`). Handles are
//! immutable and cheap to clone; composite handles share their parts
//! through `Arc`.
//!
//! Derivatives are always taken in the log coordinate. For a ratio-domain
//! handle they are derivatives of its log form `H(t) = F(e^t) + 1`, which is
//! what the stability bounds consume.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::fixtures::PerturbMode;
use crate::spline::CubicSpline;
use crate::{Error, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Domain {
    /// Functions `H(t)` of the log coordinate.
    LogLine,
    /// Functions `F(x)` of a positive ratio.
    PositiveRatios,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::LogLine => "log-line",
            Domain::PositiveRatios => "positive-ratios",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum HandleKind {
    BuiltinFamily,
    SampleTable,
}

/// Closed-form building blocks. Ratio families are evaluated with their own
/// formula, not through the log form, so the two coordinate systems stay
/// independent routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Family {
    /// `J(x) = (x-1)^2 / 2x`.
    Canonical,
    /// `cosh(λ ln x) - 1`.
    CoshLambda(f64),
    /// `(W + 1/W)/2 - 1` with `W = x^λ`.
    PowerLaw(f64),
    /// `(ln x)^2 / 2`.
    QuadLog,
    /// `cosh(k t)`.
    CoshK(f64),
    /// `cos(k t)`.
    CosK(f64),
    ConstantOne,
    Zero,
}

impl Family {
    fn domain(self) -> Domain {
        match self {
            Family::Canonical | Family::CoshLambda(_) | Family::PowerLaw(_) | Family::QuadLog => {
                Domain::PositiveRatios
            }
            Family::CoshK(_) | Family::CosK(_) | Family::ConstantOne | Family::Zero => {
                Domain::LogLine
            }
        }
    }

    fn value(self, arg: f64) -> f64 {
        match self {
            Family::Canonical => crate::cost::j_raw(arg),
            Family::CoshLambda(l) => crate::cost::cosh_m1(l * libm::log(arg)),
            Family::PowerLaw(l) => crate::cost::j_raw(libm::pow(arg, l)),
            Family::QuadLog => {
                let t = libm::log(arg);
                0.5 * t * t
            }
            Family::CoshK(k) => libm::cosh(k * arg),
            Family::CosK(k) => libm::cos(k * arg),
            Family::ConstantOne => 1.0,
            Family::Zero => 0.0,
        }
    }

    /// `d^n/dt^n` of the log form.
    fn log_derivative(self, t: f64, order: u8) -> f64 {
        let cosh_k = |k: f64| {
            let kn = libm::pow(k, order as f64);
            if order.is_multiple_of(2) {
                kn * libm::cosh(k * t)
            } else {
                kn * libm::sinh(k * t)
            }
        };
        match self {
            Family::Canonical => cosh_k(1.0),
            Family::CoshLambda(l) | Family::PowerLaw(l) | Family::CoshK(l) => cosh_k(l),
            Family::QuadLog => match order {
                0 => 1.0 + 0.5 * t * t,
                1 => t,
                2 => 1.0,
                _ => 0.0,
            },
            Family::CosK(k) => {
                let kn = libm::pow(k, order as f64);
                match order % 4 {
                    0 => kn * libm::cos(k * t),
                    1 => -kn * libm::sin(k * t),
                    2 => -kn * libm::cos(k * t),
                    _ => kn * libm::sin(k * t),
                }
            }
            Family::ConstantOne => {
                if order == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Zero => 0.0,
        }
    }
}

/// A smooth, even perturbation `amplitude * p(t)` in the log coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Perturbation {
    pub(crate) mode: PerturbMode,
    pub(crate) amplitude: f64,
}

impl Perturbation {
    fn derivative(&self, t: f64, order: u8) -> f64 {
        let a = self.amplitude;
        match self.mode {
            PerturbMode::Poly4 => match order {
                0 => a * t * t * t * t,
                1 => 4.0 * a * t * t * t,
                2 => 12.0 * a * t * t,
                3 => 24.0 * a * t,
                4 => 24.0 * a,
                _ => 0.0,
            },
            PerturbMode::Sine { freq: w } => {
                let wn = a * libm::pow(w, order as f64);
                match order {
                    // 1 - cos(w t) without cancellation.
                    0 => 2.0 * a * sq(libm::sin(0.5 * w * t)),
                    _ => match order % 4 {
                        1 => wn * libm::sin(w * t),
                        2 => wn * libm::cos(w * t),
                        3 => -wn * libm::sin(w * t),
                        _ => -wn * libm::cos(w * t),
                    },
                }
            }
        }
    }
}

#[inline]
fn sq(x: f64) -> f64 {
    x * x
}

type AnalyticFn = dyn Fn(f64, u8) -> f64 + Send + Sync;

#[derive(Clone)]
pub(crate) struct Analytic {
    f: Arc<AnalyticFn>,
    max_order: u8,
}

#[derive(Clone)]
enum Repr {
    Family(Family),
    Table(Arc<CubicSpline>),
    Lifted(Arc<FunctionHandle>),
    Perturbed {
        base: Arc<FunctionHandle>,
        perturbation: Perturbation,
    },
    Analytic(Analytic),
}

/// An evaluable real function tagged with its domain.
#[derive(Clone)]
pub struct FunctionHandle {
    domain: Domain,
    label: String,
    repr: Repr,
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("domain", &self.domain)
            .field("label", &self.label)
            .finish()
    }
}

impl FunctionHandle {
    pub(crate) fn family(family: Family, label: String) -> Self {
        Self {
            domain: family.domain(),
            label,
            repr: Repr::Family(family),
        }
    }

    /// The canonical cost `J` on positive ratios.
    pub fn canonical_cost() -> Self {
        Self::family(Family::Canonical, "J".into())
    }

    /// `cosh(k t)` on the log line.
    pub fn cosh(k: f64) -> Result<Self> {
        check_positive("k", k)?;
        Ok(Self::family(Family::CoshK(k), format!("cosh(k={k})")))
    }

    /// `cos(k t)` on the log line.
    pub fn cos(k: f64) -> Result<Self> {
        check_positive("k", k)?;
        Ok(Self::family(Family::CosK(k), format!("cos(k={k})")))
    }

    /// A user-supplied analytic function. `f(arg, n)` returns the `n`-th
    /// derivative in the native coordinate for `n <= max_order`.
    pub fn analytic<F>(domain: Domain, label: impl Into<String>, max_order: u8, f: F) -> Self
    where
        F: Fn(f64, u8) -> f64 + Send + Sync + 'static,
    {
        Self {
            domain,
            label: label.into(),
            repr: Repr::Analytic(Analytic {
                f: Arc::new(f),
                max_order,
            }),
        }
    }

    /// A cubic-spline interpolant through `(abscissas[i], ordinates[i])`.
    /// Queries outside `[abscissas[0], abscissas[n-1]]` are domain errors.
    pub fn sample_table(domain: Domain, abscissas: Vec<f64>, ordinates: Vec<f64>) -> Result<Self> {
        if domain == Domain::PositiveRatios {
            if let Some(i) = abscissas.iter().position(|&x| !(x > 0.0)) {
                return Err(Error::parameter(format!(
                    "ratio abscissa at node {i} is not strictly positive"
                )));
            }
        }
        let n = abscissas.len();
        let spline = CubicSpline::new(abscissas, ordinates)?;
        Ok(Self {
            domain,
            label: format!("table({n} nodes)"),
            repr: Repr::Table(Arc::new(spline)),
        })
    }

    /// `H(t) = F(e^t) + 1`. Requires a ratio-domain handle.
    pub fn lift(&self) -> Result<Self> {
        self.expect_domain(Domain::PositiveRatios)?;
        Ok(Self {
            domain: Domain::LogLine,
            label: format!("lift({})", self.label),
            repr: Repr::Lifted(Arc::new(self.clone())),
        })
    }

    pub(crate) fn perturbed(&self, perturbation: Perturbation, label: String) -> Self {
        Self {
            domain: self.domain,
            label,
            repr: Repr::Perturbed {
                base: Arc::new(self.clone()),
                perturbation,
            },
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> HandleKind {
        match &self.repr {
            Repr::Table(_) => HandleKind::SampleTable,
            Repr::Lifted(b) | Repr::Perturbed { base: b, .. } => b.kind(),
            Repr::Family(_) | Repr::Analytic(_) => HandleKind::BuiltinFamily,
        }
    }

    /// Highest log-coordinate derivative order available in closed form.
    pub fn derivative_capability(&self) -> u8 {
        match &self.repr {
            Repr::Family(_) => 4,
            Repr::Table(_) => 0,
            Repr::Lifted(b) => b.derivative_capability(),
            Repr::Perturbed { base, .. } => base.derivative_capability(),
            Repr::Analytic(a) => a.max_order,
        }
    }

    /// Sample nodes `(abscissas, ordinates)` when this is a bare table.
    pub fn table_nodes(&self) -> Option<(&[f64], &[f64])> {
        match &self.repr {
            Repr::Table(s) => Some(s.nodes()),
            _ => None,
        }
    }

    /// Largest node spacing in the log coordinate, for table-backed handles.
    pub fn log_spacing(&self) -> Option<f64> {
        match &self.repr {
            Repr::Table(s) => match self.domain {
                Domain::LogLine => Some(s.max_spacing()),
                Domain::PositiveRatios => {
                    let (xs, _) = s.nodes();
                    Some(xs.windows(2).map(|w| libm::log(w[1] / w[0])).fold(0.0, f64::max))
                }
            },
            Repr::Lifted(b) | Repr::Perturbed { base: b, .. } => b.log_spacing(),
            Repr::Family(_) | Repr::Analytic(_) => None,
        }
    }

    /// Closed interval of native arguments on which the handle evaluates.
    /// Infinite ends mean "limited only by overflow".
    pub fn support(&self) -> (f64, f64) {
        match &self.repr {
            Repr::Table(s) => s.range(),
            Repr::Lifted(b) => {
                let (lo, hi) = b.support();
                let lo = if lo > 0.0 { libm::log(lo) } else { f64::NEG_INFINITY };
                (lo, libm::log(hi))
            }
            Repr::Perturbed { base, .. } => base.support(),
            Repr::Family(_) | Repr::Analytic(_) => match self.domain {
                Domain::LogLine => (f64::NEG_INFINITY, f64::INFINITY),
                Domain::PositiveRatios => (0.0, f64::INFINITY),
            },
        }
    }

    /// Whether `[lo, hi]` (native coordinates) lies inside the support.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        let (a, b) = self.support();
        match self.domain {
            Domain::PositiveRatios if a == 0.0 => lo > 0.0 && hi <= b,
            _ => lo >= a && hi <= b,
        }
    }

    pub(crate) fn expect_domain(&self, domain: Domain) -> Result<()> {
        if self.domain != domain {
            return Err(Error::domain(format!(
                "expected a {domain} handle, got {} ({})",
                self.domain, self.label
            )));
        }
        Ok(())
    }

    /// Evaluates at a native argument (`t` or `x`).
    pub fn eval(&self, arg: f64) -> Result<f64> {
        match self.domain {
            Domain::LogLine if !arg.is_finite() => {
                return Err(Error::domain(format!("t = {arg} is not finite")))
            }
            Domain::PositiveRatios if !(arg > 0.0 && arg.is_finite()) => {
                return Err(Error::domain(format!("x = {arg} is not a positive ratio")))
            }
            _ => {}
        }
        let v = match &self.repr {
            Repr::Family(f) => f.value(arg),
            Repr::Table(s) => s.eval(arg).ok_or_else(|| {
                let (lo, hi) = s.range();
                Error::domain(format!("{arg} outside sample range [{lo}, {hi}]"))
            })?,
            Repr::Lifted(b) => {
                let x = libm::exp(arg);
                if x == 0.0 || !x.is_finite() {
                    return Err(Error::overflow(format!("e^{arg} not representable")));
                }
                b.eval(x)? + 1.0
            }
            Repr::Perturbed { base, perturbation } => {
                let t = match self.domain {
                    Domain::LogLine => arg,
                    Domain::PositiveRatios => libm::log(arg),
                };
                base.eval(arg)? + perturbation.derivative(t, 0)
            }
            Repr::Analytic(a) => (a.f)(arg, 0),
        };
        if !v.is_finite() {
            return Err(Error::overflow(format!("{} at {arg} is not finite", self.label)));
        }
        Ok(v)
    }

    /// `d^order/dt^order` of the log form at `t`.
    pub fn log_derivative(&self, t: f64, order: u8) -> Result<f64> {
        if order == 0 {
            return match self.domain {
                Domain::LogLine => self.eval(t),
                Domain::PositiveRatios => Ok(self.eval(libm::exp(t))? + 1.0),
            };
        }
        if order > self.derivative_capability() {
            return Err(Error::domain(format!(
                "{} has no closed-form derivative of order {order}",
                self.label
            )));
        }
        let v = match &self.repr {
            Repr::Family(f) => f.log_derivative(t, order),
            Repr::Lifted(b) => b.log_derivative(t, order)?,
            Repr::Perturbed { base, perturbation } => {
                base.log_derivative(t, order)? + perturbation.derivative(t, order)
            }
            Repr::Analytic(a) => match self.domain {
                Domain::LogLine => (a.f)(t, order),
                Domain::PositiveRatios => {
                    // Chain rule for F(e^t).
                    let x = libm::exp(t);
                    let d = |n| (a.f)(x, n);
                    match order {
                        1 => x * d(1),
                        2 => x * d(1) + x * x * d(2),
                        3 => x * d(1) + 3.0 * x * x * d(2) + x * x * x * d(3),
                        _ => {
                            return Err(Error::domain(
                                "ratio-domain analytic handles expose log derivatives up to order 3",
                            ))
                        }
                    }
                }
            },
            Repr::Table(_) => unreachable!("tables have derivative capability 0"),
        };
        if !v.is_finite() {
            return Err(Error::overflow(format!(
                "derivative of {} at {t} is not finite",
                self.label
            )));
        }
        Ok(v)
    }
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::parameter(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}
