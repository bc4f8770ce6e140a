//! Built-in function families, counterexamples and controlled perturbations.
//!
//! Textual form (used by the command line): a family name optionally
//! prefixed by `family=`, followed by comma-separated `key=value` pairs:
//!
//! ```text
//! cosh-lambda,lambda=2
//! family=cos-k, k=0.7
//! noisy-cosh,lambda=1,amplitude=1e-3,mode=sine,freq=5,seed=7
//! power-law-w,lambda=2
//! quad-log | constant-one | zero | cosh | j
//! ```
//!
//! `cosh` is shorthand for `noisy-cosh` with zero amplitude (the log-line
//! function `cosh(t)`), and `j` for `cosh-lambda,lambda=1`.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::handle::{check_positive, Family, Perturbation};
use crate::{Error, FunctionHandle, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "mode", rename_all = "kebab-case"))]
pub enum PerturbMode {
    /// Adds `amplitude * t^4`.
    Poly4,
    /// Adds `amplitude * (1 - cos(freq * t))`.
    Sine { freq: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "kebab-case"))]
pub enum FamilySpec {
    /// `F_λ(x) = cosh(λ ln x) - 1` on positive ratios.
    CoshLambda { lambda: f64 },
    /// `cos(k t)` on the log line.
    CosK { k: f64 },
    /// `H ≡ 1` on the log line.
    ConstantOne,
    /// `H ≡ 0` on the log line.
    Zero,
    /// `F(x) = (ln x)^2 / 2` on positive ratios.
    QuadLog,
    /// `cosh(λ t)` plus a smooth even perturbation, on the log line.
    NoisyCosh {
        lambda: f64,
        amplitude: f64,
        mode: PerturbMode,
        seed: u64,
    },
    /// `F_W(x) = (W + 1/W)/2 - 1` with `W(x) = x^λ`, on positive ratios.
    PowerLawW { lambda: f64 },
}

pub fn make_family(spec: FamilySpec) -> Result<FunctionHandle> {
    Ok(match spec {
        FamilySpec::CoshLambda { lambda } => {
            check_positive("lambda", lambda)?;
            if lambda == 1.0 {
                FunctionHandle::family(Family::Canonical, spec.to_string())
            } else {
                FunctionHandle::family(Family::CoshLambda(lambda), spec.to_string())
            }
        }
        FamilySpec::CosK { k } => {
            check_positive("k", k)?;
            FunctionHandle::family(Family::CosK(k), spec.to_string())
        }
        FamilySpec::ConstantOne => FunctionHandle::family(Family::ConstantOne, spec.to_string()),
        FamilySpec::Zero => FunctionHandle::family(Family::Zero, spec.to_string()),
        FamilySpec::QuadLog => FunctionHandle::family(Family::QuadLog, spec.to_string()),
        FamilySpec::NoisyCosh {
            lambda,
            amplitude,
            mode,
            seed,
        } => {
            check_positive("lambda", lambda)?;
            let base = FunctionHandle::family(Family::CoshK(lambda), format!("cosh(k={lambda})"));
            perturb(&base, mode, amplitude, seed)?
        }
        FamilySpec::PowerLawW { lambda } => {
            check_positive("lambda", lambda)?;
            FunctionHandle::family(Family::PowerLaw(lambda), spec.to_string())
        }
    })
}

/// Closed-form defect of `H(t) = 1 + t^2/2`, the log form of `(ln x)^2 / 2`.
pub fn quadlog_defect_oracle(t: f64, u: f64) -> f64 {
    -0.5 * t * t * u * u
}

/// Adds an even perturbation in the log coordinate (for ratio-domain bases,
/// at `t = ln x`). Both modes vanish at `t = 0` and are even, so
/// normalization and evenness of the base carry over.
///
/// Both modes are closed forms; `seed` is recorded in the label so runs can
/// be reproduced from reports but does not change values.
pub fn perturb(
    base: &FunctionHandle,
    mode: PerturbMode,
    amplitude: f64,
    seed: u64,
) -> Result<FunctionHandle> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::parameter(format!(
            "amplitude must be finite and nonnegative, got {amplitude}"
        )));
    }
    if let PerturbMode::Sine { freq } = mode {
        check_positive("freq", freq)?;
    }
    if amplitude == 0.0 {
        return Ok(base.clone());
    }
    let label = match mode {
        PerturbMode::Poly4 => format!("{} + {amplitude}*t^4 [seed={seed}]", base.label()),
        PerturbMode::Sine { freq } => {
            format!("{} + {amplitude}*(1-cos({freq}t)) [seed={seed}]", base.label())
        }
    };
    Ok(base.perturbed(Perturbation { mode, amplitude }, label))
}

impl fmt::Display for PerturbMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PerturbMode::Poly4 => f.write_str("mode=poly4"),
            PerturbMode::Sine { freq } => write!(f, "mode=sine,freq={freq}"),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::CoshLambda { lambda } => write!(f, "cosh-lambda,lambda={lambda}"),
            FamilySpec::CosK { k } => write!(f, "cos-k,k={k}"),
            FamilySpec::ConstantOne => f.write_str("constant-one"),
            FamilySpec::Zero => f.write_str("zero"),
            FamilySpec::QuadLog => f.write_str("quad-log"),
            FamilySpec::NoisyCosh {
                lambda,
                amplitude,
                mode,
                seed,
            } => write!(
                f,
                "noisy-cosh,lambda={lambda},amplitude={amplitude},{mode},seed={seed}"
            ),
            FamilySpec::PowerLawW { lambda } => write!(f, "power-law-w,lambda={lambda}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(',').map(str::trim).filter(|p| !p.is_empty());
        let head = parts
            .next()
            .ok_or_else(|| Error::parameter("empty family spec"))?;
        let name = head.strip_prefix("family=").unwrap_or(head).trim();

        let mut lambda = None;
        let mut k = None;
        let mut amplitude = None;
        let mut mode = None;
        let mut freq = None;
        let mut seed = None;
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::parameter(format!("expected key=value, got `{part}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || -> Result<f64> {
                value
                    .parse::<f64>()
                    .map_err(|_| Error::parameter(format!("`{key}` is not a number: `{value}`")))
            };
            match key {
                "lambda" => lambda = Some(num()?),
                "k" => k = Some(num()?),
                "amplitude" => amplitude = Some(num()?),
                "freq" => freq = Some(num()?),
                "seed" => {
                    seed = Some(value.parse::<u64>().map_err(|_| {
                        Error::parameter(format!("`seed` is not an unsigned integer: `{value}`"))
                    })?)
                }
                "mode" => mode = Some(String::from(value)),
                _ => return Err(Error::parameter(format!("unknown family parameter `{key}`"))),
            }
        }

        let required = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::parameter(format!("family `{name}` requires `{key}`")))
        };
        let spec = match name {
            "cosh-lambda" => FamilySpec::CoshLambda {
                lambda: required(lambda, "lambda")?,
            },
            "j" | "canonical" => FamilySpec::CoshLambda { lambda: 1.0 },
            "cos-k" | "cos" => FamilySpec::CosK {
                k: k.or(lambda).unwrap_or(1.0),
            },
            "constant-one" => FamilySpec::ConstantOne,
            "zero" => FamilySpec::Zero,
            "quad-log" => FamilySpec::QuadLog,
            "noisy-cosh" | "cosh" => {
                let mode = match (mode.as_deref(), freq) {
                    (None | Some("poly4"), None) => PerturbMode::Poly4,
                    (Some("sine"), Some(freq)) => PerturbMode::Sine { freq },
                    (Some("sine"), None) => return Err(Error::parameter("mode=sine requires `freq`")),
                    (None | Some("poly4"), Some(_)) => {
                        return Err(Error::parameter("`freq` only applies to mode=sine"))
                    }
                    (Some(other), _) => {
                        return Err(Error::parameter(format!("unknown perturbation mode `{other}`")))
                    }
                };
                FamilySpec::NoisyCosh {
                    lambda: lambda.or(k).unwrap_or(1.0),
                    amplitude: amplitude.unwrap_or(0.0),
                    mode,
                    seed: seed.unwrap_or(0),
                }
            }
            "power-law-w" => FamilySpec::PowerLawW {
                lambda: required(lambda, "lambda")?,
            },
            other => return Err(Error::parameter(format!("unknown family `{other}`"))),
        };
        Ok(spec)
    }
}
