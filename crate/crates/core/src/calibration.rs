//! Log-curvature estimation and branch classification.
//!
//! The log-curvature of a normalized `H` is `κ = lim 2 (H(t) - 1) / t^2` as
//! `t -> 0`. From point evaluations we form the symmetrized quotient
//! `q(s) = ((H(s) - 1) + (H(-s) - 1)) / s^2` on a halving sequence
//! `s_k = s_0 2^-k` and Richardson-extrapolate under the even expansion
//! `q(s) = κ + c_2 s^2 + c_4 s^4 + ...`.
//!
//! Error model: truncation after `j` extrapolation steps is `O(s^(2j+2))`,
//! while round-off in `q` grows like `u / s^2` (`u` the unit round-off).
//! The defaults `s_0 = 0.25` with six levels put the smallest spacing near
//! `0.008`, where round-off in `q` is around `1e-12` and the tableau has
//! removed every term through `s^10`. Extrapolation stops early when the
//! level-to-level change starts growing, which is the signature of round-off
//! taking over.
//!
//! A continuous normalized solution is `1`, `cos(k t)` or `cosh(k t)` with
//! `k^2 = |κ|`; [`classify`] picks the branch from the sign of `κ`, refines `k`
//! by a global least-squares fit and accepts only if the sup residual is below
//! a threshold.

use alloc::format;
use alloc::vec::Vec;

use crate::grid::Grid;
use crate::{Domain, Error, FunctionHandle, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

pub const DEFAULT_H0: f64 = 0.25;
pub const DEFAULT_LEVELS: usize = 6;
pub const DEFAULT_CONST_TOL: f64 = 1e-8;

/// `q(s) = 2 (H(s) - 1) / s^2` with `H(s)` replaced by `(H(s) + H(-s)) / 2`.
pub fn quad_ratio(h: &FunctionHandle, step: f64) -> Result<f64> {
    h.expect_domain(Domain::LogLine)?;
    if step == 0.0 || !step.is_finite() {
        return Err(Error::parameter("quotient step must be finite and nonzero"));
    }
    let plus = h.eval(step)? - 1.0;
    let minus = h.eval(-step)? - 1.0;
    Ok((plus + minus) / (step * step))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CurvatureEstimate {
    pub kappa: f64,
    /// `|D_k - D_{k-1}|` for the last accepted diagonal extrapolant `D_k`.
    pub uncertainty: f64,
    /// `(s_k, q(s_k))` for every level evaluated, `s_k` strictly decreasing.
    pub ratio_table: Vec<(f64, f64)>,
    /// Number of levels whose extrapolants were accepted.
    pub levels: usize,
    /// Set when extrapolation stopped early because round-off dominated.
    pub noise_limited: bool,
}

pub fn estimate_kappa(h: &FunctionHandle, h0: f64, levels: usize) -> Result<CurvatureEstimate> {
    h.expect_domain(Domain::LogLine)?;
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(Error::parameter("initial step h0 must be positive"));
    }
    if levels < 2 {
        return Err(Error::parameter("at least two levels are needed to extrapolate"));
    }

    let mut ratio_table = Vec::with_capacity(levels);
    // tableau[k][j]: row k, j extrapolation steps.
    let mut prev_row: Vec<f64> = Vec::new();
    let mut diag = Vec::with_capacity(levels);
    for k in 0..levels {
        let s = h0 / (1u64 << k) as f64;
        let q = quad_ratio(h, s)?;
        ratio_table.push((s, q));
        let mut row = Vec::with_capacity(k + 1);
        row.push(q);
        let mut factor = 1.0;
        for j in 1..=k {
            factor *= 4.0;
            let r = row[j - 1] + (row[j - 1] - prev_row[j - 1]) / (factor - 1.0);
            row.push(r);
        }
        diag.push(row[k]);
        prev_row = row;
    }

    let mut best = 1;
    let mut uncertainty = (diag[1] - diag[0]).abs();
    let mut noise_limited = false;
    for k in 2..levels {
        let u = (diag[k] - diag[k - 1]).abs();
        if u > uncertainty {
            noise_limited = true;
            break;
        }
        best = k;
        uncertainty = u;
    }
    Ok(CurvatureEstimate {
        kappa: diag[best],
        uncertainty,
        ratio_table,
        levels: best + 1,
        noise_limited,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Branch {
    Zero,
    ConstantOne,
    Cos,
    Cosh,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Zero => "zero",
            Branch::ConstantOne => "constant-one",
            Branch::Cos => "cos",
            Branch::Cosh => "cosh",
        }
    }

    /// The branch function with scale `k` at `t`.
    pub fn eval(self, k: f64, t: f64) -> f64 {
        match self {
            Branch::Zero => 0.0,
            Branch::ConstantOne => 1.0,
            Branch::Cos => libm::cos(k * t),
            Branch::Cosh => libm::cosh(k * t),
        }
    }

    fn dk(self, k: f64, t: f64) -> f64 {
        match self {
            Branch::Cos => -t * libm::sin(k * t),
            Branch::Cosh => t * libm::sinh(k * t),
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BranchClassification {
    pub branch: Branch,
    /// Scale of the `cos`/`cosh` branch.
    pub k: Option<f64>,
    /// Sup of `|H - branch|` on the classification grid.
    pub residual: f64,
    pub kappa_used: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClassifyOptions {
    pub window_t: f64,
    /// Tolerance on `|H(0)|`, `|H(0) - 1|` and `|κ|` for the constant branches.
    pub const_tol: f64,
    pub residual_step: f64,
    /// Acceptance threshold for the sup residual; `None` means
    /// `1e-6 * cosh(window_t)`.
    pub acceptance: Option<f64>,
    pub h0: f64,
    pub levels: usize,
}

impl ClassifyOptions {
    pub fn new(window_t: f64) -> Self {
        Self {
            window_t,
            const_tol: DEFAULT_CONST_TOL,
            residual_step: window_t / 200.0,
            acceptance: None,
            h0: DEFAULT_H0,
            levels: DEFAULT_LEVELS,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.acceptance
            .unwrap_or_else(|| 1e-6 * libm::cosh(self.window_t))
    }
}

fn sup_residual(branch: Branch, k: f64, pts: &[f64], vals: &[f64]) -> f64 {
    pts.iter()
        .zip(vals)
        .map(|(&t, &v)| (v - branch.eval(k, t)).abs())
        .fold(0.0, f64::max)
}

fn sum_squares(branch: Branch, k: f64, pts: &[f64], vals: &[f64]) -> f64 {
    pts.iter()
        .zip(vals)
        .map(|(&t, &v)| {
            let r = branch.eval(k, t) - v;
            r * r
        })
        .sum()
}

/// Damped Gauss-Newton on `sum (branch_k(t_i) - H(t_i))^2` starting at `k0`.
fn refine_k(branch: Branch, k0: f64, pts: &[f64], vals: &[f64]) -> f64 {
    let mut k = k0;
    let mut ss = sum_squares(branch, k, pts, vals);
    for _ in 0..50 {
        let (mut num, mut den) = (0.0, 0.0);
        for (&t, &v) in pts.iter().zip(vals) {
            let jac = branch.dk(k, t);
            num += (branch.eval(k, t) - v) * jac;
            den += jac * jac;
        }
        if den == 0.0 {
            break;
        }
        let mut delta = num / den;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = k - delta;
            if cand > 0.0 {
                let cand_ss = sum_squares(branch, cand, pts, vals);
                if cand_ss <= ss {
                    k = cand;
                    ss = cand_ss;
                    accepted = true;
                    break;
                }
            }
            delta *= 0.5;
        }
        if !accepted || delta.abs() <= 4.0 * f64::EPSILON * k {
            break;
        }
    }
    k
}

pub fn classify(h: &FunctionHandle, opts: &ClassifyOptions) -> Result<BranchClassification> {
    h.expect_domain(Domain::LogLine)?;
    if !(opts.const_tol >= 0.0) {
        return Err(Error::parameter("const_tol must be nonnegative"));
    }
    let grid = Grid::new(opts.window_t, opts.residual_step)?;
    if !h.covers(-opts.window_t, opts.window_t) {
        return Err(Error::domain(format!(
            "{} is not evaluable on [-{0}, {0}]",
            opts.window_t
        )));
    }
    let threshold = opts.threshold();
    let pts = grid.points();
    let vals = pts.iter().map(|&t| h.eval(t)).collect::<Result<Vec<_>>>()?;

    let h_at_0 = h.eval(0.0)?;
    if h_at_0.abs() <= opts.const_tol {
        let residual = sup_residual(Branch::Zero, 0.0, &pts, &vals);
        if residual > opts.const_tol {
            return Err(Error::Classification(format!(
                "H(0) = {h_at_0:e} but sup |H| = {residual:e}; a solution with H(0) = 0 vanishes identically"
            )));
        }
        return Ok(BranchClassification {
            branch: Branch::Zero,
            k: None,
            residual,
            kappa_used: 0.0,
            threshold,
        });
    }
    if (h_at_0 - 1.0).abs() > opts.const_tol {
        return Err(Error::precondition(format!(
            "H(0) = {h_at_0} is neither 0 nor 1 within {:e}",
            opts.const_tol
        )));
    }
    let asymmetry = pts
        .iter()
        .zip(&vals)
        .map(|(&t, &v)| h.eval(-t).map(|m| (m - v).abs()))
        .try_fold(0.0_f64, |acc, d| d.map(|d| acc.max(d)))?;
    if asymmetry > threshold {
        return Err(Error::precondition(format!(
            "H is not even: sup |H(t) - H(-t)| = {asymmetry:e}"
        )));
    }

    let kappa = estimate_kappa(h, opts.h0.min(opts.window_t), opts.levels)?.kappa;
    if kappa.abs() <= opts.const_tol {
        let residual = sup_residual(Branch::ConstantOne, 0.0, &pts, &vals);
        if residual > threshold {
            return Err(Error::NotNearBranch {
                branch: Branch::ConstantOne.name(),
                residual,
                threshold,
            });
        }
        return Ok(BranchClassification {
            branch: Branch::ConstantOne,
            k: None,
            residual,
            kappa_used: kappa,
            threshold,
        });
    }

    let branch = if kappa > 0.0 { Branch::Cosh } else { Branch::Cos };
    let k0 = libm::sqrt(kappa.abs());
    let r0 = sup_residual(branch, k0, &pts, &vals);
    let k1 = refine_k(branch, k0, &pts, &vals);
    let r1 = sup_residual(branch, k1, &pts, &vals);
    let (k, residual) = if r1 <= r0 { (k1, r1) } else { (k0, r0) };
    if residual > threshold {
        return Err(Error::NotNearBranch {
            branch: branch.name(),
            residual,
            threshold,
        });
    }
    Ok(BranchClassification {
        branch,
        k: Some(k),
        residual,
        kappa_used: kappa,
        threshold,
    })
}
