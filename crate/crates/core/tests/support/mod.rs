//! Invariant checks shared by the per-module test targets and the acceptance
//! harness. Each check returns `Err(description)` on the first violation.
#![allow(dead_code, clippy::neg_cmp_op_on_partial_ord)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use reccost_core::calibration::{
    classify, estimate_kappa, Branch, ClassifyOptions, DEFAULT_H0, DEFAULT_LEVELS,
};
use reccost_core::cost::{
    bregman_divergence, canonical_cost, golden_fixed_point, log_forms, LogCoord, PositiveRatio,
};
use reccost_core::dalembert::{defect_log, defect_ratio, identity_report, sup_defect};
use reccost_core::fixtures::{make_family, perturb, FamilySpec, PerturbMode};
use reccost_core::geometry::{chebyshev_cost, distance, local_equivalence_ratio};
use reccost_core::stability::{certify, certify_ratio, delta_of_h, optimal_h, CertifyOptions};
use reccost_core::{Domain, FunctionHandle};

pub type Check = Result<(), String>;
pub type Named = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn ratio(x: f64) -> PositiveRatio {
    PositiveRatio::new(x).unwrap()
}

pub fn lc(t: f64) -> LogCoord {
    LogCoord::new(t).unwrap()
}

pub fn family(spec: FamilySpec) -> FunctionHandle {
    make_family(spec).unwrap()
}

pub fn cosh_line(k: f64) -> FunctionHandle {
    FunctionHandle::cosh(k).unwrap()
}

pub fn cos_line(k: f64) -> FunctionHandle {
    FunctionHandle::cos(k).unwrap()
}

pub fn cosh_plus_t4(eta: f64) -> FunctionHandle {
    perturb(&cosh_line(1.0), PerturbMode::Poly4, eta, 0).unwrap()
}

/// Ratio-domain fixtures used by the lift and reciprocity checks.
pub fn ratio_fixtures() -> Vec<FunctionHandle> {
    vec![
        FunctionHandle::canonical_cost(),
        family(FamilySpec::CoshLambda { lambda: 0.5 }),
        family(FamilySpec::CoshLambda { lambda: 2.0 }),
        family(FamilySpec::PowerLawW { lambda: 1.3 }),
        family(FamilySpec::QuadLog),
        perturb(&FunctionHandle::canonical_cost(), PerturbMode::Sine { freq: 3.0 }, 1e-2, 5).unwrap(),
    ]
}

/// Normalized (`H(0) = 1`) log-line fixtures.
pub fn normalized_line_fixtures() -> Vec<FunctionHandle> {
    vec![
        cosh_line(1.0),
        cosh_line(2.0),
        cos_line(0.7),
        family(FamilySpec::ConstantOne),
        FunctionHandle::canonical_cost().lift().unwrap(),
        family(FamilySpec::QuadLog).lift().unwrap(),
        cosh_plus_t4(1e-3),
        family(FamilySpec::NoisyCosh {
            lambda: 1.0,
            amplitude: 1e-3,
            mode: PerturbMode::Sine { freq: 5.0 },
            seed: 9,
        }),
    ]
}

fn log_uniform(r: &mut StdRng, lo: f64, hi: f64) -> f64 {
    r.gen_range(lo.ln()..hi.ln()).exp()
}

// ---------------------------------------------------------------- cost

pub fn cost_reciprocity() -> Check {
    let mut r = rng(1);
    for _ in 0..10_000 {
        let x = log_uniform(&mut r, 1e-6, 1e6);
        let a = canonical_cost(ratio(x)).unwrap().get();
        let b = canonical_cost(ratio(1.0 / x)).unwrap().get();
        ensure!((a - b).abs() <= 1e-12 * (1.0 + a), "J({x}) = {a} but J(1/x) = {b}");
    }
    Ok(())
}

pub fn cost_nonnegative_unique_minimum() -> Check {
    let mut r = rng(2);
    let mut xs: Vec<f64> = (0..10_000).map(|_| log_uniform(&mut r, 1e-6, 1e6)).collect();
    let mut up = 1.0_f64;
    let mut down = 1.0_f64;
    for _ in 0..64 {
        xs.push(up);
        xs.push(down);
        up = f64::from_bits(up.to_bits() + 1);
        down = f64::from_bits(down.to_bits() - 1);
    }
    for x in xs {
        let j = canonical_cost(ratio(x)).unwrap().get();
        ensure!(j >= 0.0, "J({x}) = {j} < 0");
        // J < 1e-30 holds exactly for |x - 1| < sqrt(2x) 1e-15, so the
        // window cannot be tighter than that.
        if j < 1e-30 {
            let window = (2.0 * x).sqrt() * 1e-15 * (1.0 + 1e-12);
            ensure!((x - 1.0).abs() < window, "J({x}) = {j} below 1e-30 away from 1");
        }
    }
    Ok(())
}

pub fn cost_coordinate_consistency() -> Check {
    for i in 0..=4000 {
        let t = -20.0 + 0.01 * i as f64;
        let f = log_forms(lc(t)).unwrap();
        let j = canonical_cost(ratio(t.exp())).unwrap().get();
        ensure!((j - (f.h - 1.0)).abs() <= 1e-12 * f.h, "t = {t}: J(e^t) = {j}, H - 1 = {}", f.h - 1.0);
    }
    Ok(())
}

pub fn cost_quadratic_calibration() -> Check {
    for i in 0..=1000 {
        let t = -0.5 + 0.001 * i as f64;
        let g = log_forms(lc(t)).unwrap().g;
        ensure!((g - 0.5 * t * t).abs() <= t.powi(4) / 20.0, "t = {t}: G = {g}");
    }
    Ok(())
}

pub fn cost_bregman_equals_g() -> Check {
    let mut r = rng(3);
    for _ in 0..2000 {
        let t = r.gen_range(-50.0..50.0);
        let b = bregman_divergence(lc(t)).unwrap();
        let g = log_forms(lc(t)).unwrap().g;
        ensure!(b == g, "t = {t}: Bregman {b} != G {g}");
    }
    Ok(())
}

pub fn cost_golden_residual() -> Check {
    let mut r = rng(4);
    for tol in [1e-6, 1e-9, 1e-12] {
        for _ in 0..50 {
            let x0 = log_uniform(&mut r, 1e-3, 1e3);
            let g = golden_fixed_point(ratio(x0), tol, 500).map_err(|e| e.to_string())?;
            let res = (g.phi * g.phi - g.phi - 1.0).abs();
            ensure!(res <= 10.0 * tol, "x0 = {x0}, tol = {tol}: |phi^2 - phi - 1| = {res}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- dalembert

pub fn dalembert_lift_consistency() -> Check {
    let mut r = rng(5);
    for f in ratio_fixtures() {
        let h = f.lift().unwrap();
        for _ in 0..1000 {
            let (t, u) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let dl = defect_log(&h, t, u).map_err(|e| e.to_string())?;
            let dr = defect_ratio(&f, t.exp(), u.exp()).map_err(|e| e.to_string())?;
            ensure!(
                (dl - dr).abs() <= 1e-10 * (1.0 + dl.abs()),
                "{}: ({t}, {u}) log {dl} vs ratio {dr}",
                f.label()
            );
        }
    }
    Ok(())
}

pub fn dalembert_reciprocity_forced() -> Check {
    let xs: Vec<f64> = (0..=60).map(|i| (-3.0 + 0.1 * i as f64).exp()).collect();
    let mut exercised = 0;
    for f in ratio_fixtures() {
        ensure!(f.eval(1.0).unwrap() == 0.0, "{} is not normalized", f.label());
        let scale = xs.iter().map(|&x| f.eval(x).unwrap().abs()).fold(1.0, f64::max);
        let solves = xs.iter().all(|&x| {
            xs.iter()
                .all(|&y| defect_ratio(&f, x, y).unwrap().abs() <= 1e-10 * scale * scale)
        });
        if !solves {
            continue;
        }
        exercised += 1;
        for &x in &xs {
            let d = (f.eval(x).unwrap() - f.eval(1.0 / x).unwrap()).abs();
            ensure!(d <= 1e-10, "{}: |F({x}) - F(1/x)| = {d}", f.label());
        }
    }
    ensure!(exercised >= 4, "only {exercised} fixtures solved the composition law");
    Ok(())
}

pub fn dalembert_defect_symmetry() -> Check {
    let mut r = rng(6);
    for h in normalized_line_fixtures() {
        for _ in 0..500 {
            let (t, u) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let a = defect_log(&h, t, u).unwrap();
            let b = defect_log(&h, t, -u).unwrap();
            let scale = 1.0 + h.eval(t).unwrap().abs() * h.eval(u).unwrap().abs();
            ensure!((a - b).abs() <= 1e-12 * scale, "{}: Δ({t},{u}) = {a}, Δ({t},{}) = {b}", h.label(), -u);
        }
    }
    Ok(())
}

pub fn dalembert_zero_branch() -> Check {
    let z = family(FamilySpec::Zero);
    ensure!(z.eval(0.0).unwrap() == 0.0, "zero fixture has H(0) != 0");
    let rep = sup_defect(&z, 2.0, 0.05).unwrap();
    ensure!(rep.epsilon == 0.0, "zero fixture has defect {}", rep.epsilon);
    for i in 0..=80 {
        let t = -2.0 + 0.05 * i as f64;
        ensure!(z.eval(t).unwrap() == 0.0, "zero fixture nonzero at {t}");
    }
    Ok(())
}

pub fn dalembert_identities_iff_zero_defect() -> Check {
    let (t_half, step) = (1.5, 0.1);
    for h in normalized_line_fixtures() {
        let scale = (0..=60)
            .map(|i| h.eval(-3.0 + 0.1 * i as f64).unwrap().abs())
            .fold(1.0, f64::max)
            .powi(2);
        let eps = sup_defect(&h, t_half, step).unwrap().epsilon;
        let ids = identity_report(&h, t_half, step).unwrap().max();
        let solves = eps <= 1e-10 * scale;
        let identities = ids <= 1e-10 * scale;
        ensure!(
            solves == identities,
            "{}: epsilon = {eps:e}, identity violation = {ids:e} (scale {scale})",
            h.label()
        );
    }
    Ok(())
}

// ---------------------------------------------------------------- calibration

pub fn calibration_branch_recovery() -> Check {
    let opts = ClassifyOptions::new(2.0);
    let mut cases: Vec<(FunctionHandle, Branch, f64)> = Vec::new();
    for lambda in [0.5, 1.0, 2.0] {
        cases.push((family(FamilySpec::CoshLambda { lambda }).lift().unwrap(), Branch::Cosh, lambda));
    }
    for k in [0.7, 1.0, 3.0] {
        cases.push((cos_line(k), Branch::Cos, k));
    }
    for (h, branch, k) in cases {
        let c = classify(&h, &opts).map_err(|e| format!("{}: {e}", h.label()))?;
        ensure!(c.branch == branch, "{}: got {:?}", h.label(), c.branch);
        let k_est = c.k.unwrap();
        ensure!((k_est - k).abs() <= 1e-6 * k, "{}: k = {k_est}", h.label());
        ensure!(c.residual <= 1e-8, "{}: residual {}", h.label(), c.residual);
    }
    Ok(())
}

pub fn calibration_fixes_family() -> Check {
    let opts = ClassifyOptions::new(2.0);
    for lambda in [0.5, 0.8, 1.0, 1.7, 2.0] {
        let h = family(FamilySpec::CoshLambda { lambda }).lift().unwrap();
        let kappa = estimate_kappa(&h, DEFAULT_H0, DEFAULT_LEVELS).unwrap().kappa;
        let c = classify(&h, &opts).map_err(|e| e.to_string())?;
        let k = c.k.unwrap();
        ensure!((k * k - kappa).abs() <= 1e-6 * kappa, "lambda = {lambda}: k^2 = {}, kappa = {kappa}", k * k);
    }
    let unit = classify(&FunctionHandle::canonical_cost().lift().unwrap(), &opts).map_err(|e| e.to_string())?;
    ensure!(unit.branch == Branch::Cosh, "unit calibration gave {:?}", unit.branch);
    ensure!((unit.k.unwrap() - 1.0).abs() <= 1e-6, "unit calibration k = {:?}", unit.k);
    Ok(())
}

pub fn calibration_extrapolation_order() -> Check {
    for (h, kappa) in [(cosh_line(1.0), 1.0), (cosh_line(2.0), 4.0), (cos_line(0.7), -0.49)] {
        let est = estimate_kappa(&h, DEFAULT_H0, DEFAULT_LEVELS).unwrap();
        let pts: Vec<(f64, f64)> = est
            .ratio_table
            .iter()
            .map(|&(s, q)| (s.ln(), (q - kappa).abs().ln()))
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        ensure!((1.8..=2.2).contains(&slope), "{}: slope {slope}", h.label());
    }
    Ok(())
}

pub fn calibration_symmetrization() -> Check {
    for (name, base) in [("cosh", cosh_line(1.0)), ("cos 0.7t", cos_line(0.7))] {
        let reference = estimate_kappa(&base, DEFAULT_H0, DEFAULT_LEVELS).unwrap().kappa;
        for c in [-1e-3, -3e-4, 1e-4, 5e-4, 1e-3] {
            let b = base.clone();
            let odd = FunctionHandle::analytic(Domain::LogLine, "odd", 0, move |t, _| {
                b.eval(t).unwrap() + c * t * t * t
            });
            let k = estimate_kappa(&odd, DEFAULT_H0, DEFAULT_LEVELS).unwrap().kappa;
            ensure!((k - reference).abs() <= 1e-12, "{name} + {c} t^3: {k} vs {reference}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- stability

pub fn stability_soundness_on_exact_solutions() -> Check {
    let t_half = 2.0;
    let members: Vec<FunctionHandle> = vec![
        cosh_line(0.5),
        cosh_line(1.0),
        cosh_line(1.5),
        cosh_line(2.0),
        family(FamilySpec::CoshLambda { lambda: 0.7 }).lift().unwrap(),
        family(FamilySpec::CoshLambda { lambda: 1.0 }).lift().unwrap(),
        family(FamilySpec::PowerLawW { lambda: 1.4 }).lift().unwrap(),
    ];
    for h in members {
        let c = certify(&h, t_half, 0.05, &CertifyOptions::default()).map_err(|e| format!("{}: {e}", h.label()))?;
        ensure!(c.verified, "{}: margin {}", h.label(), c.max_envelope_margin);
        let bound = 1e-9 * (c.inputs.a.sqrt() * t_half).cosh();
        ensure!(c.max_observed_error <= bound, "{}: error {} > {bound}", h.label(), c.max_observed_error);
    }
    Ok(())
}

pub fn stability_envelope_monotone() -> Check {
    for h in [cosh_line(1.0), cosh_plus_t4(1e-3), cosh_line(1.5)] {
        let c = certify(&h, 1.5, 0.05, &CertifyOptions::default()).unwrap();
        let sweep = &c.sweep;
        let mid = sweep.iter().position(|s| s.t == 0.0).ok_or("sweep misses t = 0")?;
        ensure!(sweep[mid].envelope == 0.0, "envelope at 0 is {}", sweep[mid].envelope);
        for (i, s) in sweep.iter().enumerate() {
            let mirror = &sweep[sweep.len() - 1 - i];
            ensure!(s.t == -mirror.t, "sweep not symmetric at {}", s.t);
            ensure!(s.envelope == mirror.envelope, "envelope not even at {}", s.t);
            ensure!(c.envelope.at(s.t) == s.envelope, "envelope record mismatch at {}", s.t);
        }
        for w in sweep[mid..].windows(2) {
            ensure!(w[1].envelope > w[0].envelope, "envelope not increasing at {}", w[1].t);
        }
    }
    Ok(())
}

pub fn stability_delta_convexity() -> Check {
    let mut r = rng(7);
    for _ in 0..500 {
        let eps = 10f64.powf(r.gen_range(-12.0..-2.0));
        let b = r.gen_range(1.0..20.0);
        let k = r.gen_range(0.1..20.0);
        let t_half = 10.0;
        let h = optimal_h(eps, b, k, t_half).unwrap();
        if 2.0 * h > t_half {
            continue;
        }
        let d = |x| delta_of_h(eps, b, k, x).unwrap();
        let dh = d(h);
        ensure!(dh <= d(0.5 * h) + 1e-12 * dh && dh <= d(2.0 * h) + 1e-12 * dh, "eps {eps}, B {b}, K {k}");
    }
    Ok(())
}

pub fn perturbation_epsilons(etas: &[f64]) -> Vec<f64> {
    etas.iter()
        .map(|&eta| sup_defect(&cosh_plus_t4(eta), 1.0, 0.02).unwrap().epsilon)
        .collect()
}

pub fn stability_perturbation_scaling() -> Check {
    let etas = [1e-4, 1e-3, 1e-2];
    let eps = perturbation_epsilons(&etas);
    let base = eps[0] / etas[0];
    for (eta, e) in etas.iter().zip(&eps) {
        let rel = (e / eta / base - 1.0).abs();
        ensure!(rel <= 0.05, "eta = {eta}: epsilon/eta off by {rel}");
    }
    Ok(())
}

pub fn stability_certificate_consistency() -> Check {
    let fixtures = [
        FunctionHandle::canonical_cost(),
        family(FamilySpec::CoshLambda { lambda: 1.2 }),
        family(FamilySpec::PowerLawW { lambda: 0.8 }),
        perturb(&FunctionHandle::canonical_cost(), PerturbMode::Poly4, 1e-3, 2).unwrap(),
    ];
    for f in fixtures {
        let a = certify_ratio(&f, 1.5, 0.05, &CertifyOptions::default()).unwrap();
        let b = certify(&f.lift().unwrap(), 1.5, 0.05, &CertifyOptions::default()).unwrap();
        ensure!(a.verified == b.verified, "{}: verdicts differ", f.label());
        ensure!(
            (a.delta - b.delta).abs() <= 1e-12 * a.delta.abs().max(f64::MIN_POSITIVE),
            "{}: delta {} vs {}",
            f.label(),
            a.delta,
            b.delta
        );
    }
    Ok(())
}

// ---------------------------------------------------------------- geometry

const GEO_TOL: f64 = 1e-10;

fn random_ratio(r: &mut StdRng) -> f64 {
    r.gen_range(-3.0..3.0f64).exp()
}

pub fn geometry_reciprocal_symmetry() -> Check {
    let mut r = rng(8);
    for _ in 0..1000 {
        let (x, y) = (random_ratio(&mut r), random_ratio(&mut r));
        let a = distance(ratio(x), ratio(y), GEO_TOL).unwrap().value;
        let b = distance(ratio(1.0 / x), ratio(1.0 / y), GEO_TOL).unwrap().value;
        ensure!((a - b).abs() <= 10.0 * GEO_TOL, "d({x},{y}) = {a}, d(1/x,1/y) = {b}");
    }
    Ok(())
}

pub fn geometry_triangle_inequality() -> Check {
    let mut r = rng(9);
    for _ in 0..1000 {
        let (x, y, z) = (random_ratio(&mut r), random_ratio(&mut r), random_ratio(&mut r));
        let d = |a, b| distance(ratio(a), ratio(b), GEO_TOL).unwrap().value;
        let (xz, xy, yz) = (d(x, z), d(x, y), d(y, z));
        ensure!(xz <= xy + yz + 10.0 * GEO_TOL, "({x},{y},{z}): {xz} > {xy} + {yz}");
    }
    Ok(())
}

pub fn geometry_additivity() -> Check {
    let mut r = rng(10);
    for _ in 0..1000 {
        let mut v = [random_ratio(&mut r), random_ratio(&mut r), random_ratio(&mut r)];
        v.sort_by(f64::total_cmp);
        if r.gen_bool(0.5) {
            v.reverse();
        }
        let [x, y, z] = v;
        let d = |a, b| distance(ratio(a), ratio(b), GEO_TOL).unwrap().value;
        let (xz, xy, yz) = (d(x, z), d(x, y), d(y, z));
        ensure!((xz - xy - yz).abs() <= 10.0 * GEO_TOL, "({x},{y},{z}): {xz} vs {}", xy + yz);
    }
    Ok(())
}

pub fn geometry_local_equivalence() -> Check {
    let mut r = rng(11);
    for _ in 0..500 {
        let (x, y) = (r.gen_range(0.99..1.01), r.gen_range(0.99..1.01));
        if x == y {
            continue;
        }
        let q = local_equivalence_ratio(ratio(x), ratio(y), 1e-14).unwrap();
        ensure!((q - 1.0).abs() <= 1e-3, "({x},{y}): ratio {q}");
    }
    Ok(())
}

pub fn geometry_asymptotic_growth() -> Check {
    let big_r: f64 = 1e4;
    let d = distance(ratio(1.0), ratio(big_r), 1e-8).unwrap().value;
    let lower = 2f64.sqrt() * (big_r.sqrt() - 1.0);
    ensure!(d >= lower, "d(1,R) = {d} below oracle bound {lower}");
    let rel = (d / (2f64.sqrt() * big_r.sqrt()) - 1.0).abs();
    ensure!(rel <= 0.02, "d(1,R)/(sqrt2 sqrtR) off by {rel}");
    Ok(())
}

pub fn geometry_chebyshev_consistency() -> Check {
    for x in [1.1, 2.0, 5.0] {
        for n in 0..=15 {
            let c = chebyshev_cost(ratio(x), n).unwrap();
            ensure!(c.rel_discrepancy <= 1e-9, "x = {x}, n = {n}: {}", c.rel_discrepancy);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- fixtures

pub fn fixtures_cosh_lambda_matches_power_law() -> Check {
    for lambda in [0.5, 2.0] {
        let a = family(FamilySpec::CoshLambda { lambda });
        let b = family(FamilySpec::PowerLawW { lambda });
        for i in 0..=600 {
            let x = (-3.0 + 0.01 * i as f64).exp();
            let (fa, fb) = (a.eval(x).unwrap(), b.eval(x).unwrap());
            ensure!((fa - fb).abs() <= 1e-12 * (3.0 * lambda).cosh(), "lambda {lambda}, x {x}: {fa} vs {fb}");
        }
    }
    Ok(())
}

pub fn fixtures_cosh_lambda_solves_law() -> Check {
    for lambda in [0.5, 1.0, 1.5, 2.0] {
        let h = family(FamilySpec::CoshLambda { lambda }).lift().unwrap();
        let scale = (3.0 * lambda).cosh().powi(2);
        let eps = sup_defect(&h, 1.5, 0.05).unwrap().epsilon;
        ensure!(eps <= 1e-10 * scale, "lambda {lambda}: epsilon {eps}");
    }
    Ok(())
}

pub fn fixtures_quadlog_three_way() -> Check {
    let f = family(FamilySpec::QuadLog);
    ensure!(f.eval(1.0).unwrap() == 0.0, "QuadLog not normalized");
    let kappa = estimate_kappa(&f.lift().unwrap(), DEFAULT_H0, DEFAULT_LEVELS).unwrap().kappa;
    ensure!((kappa - 1.0).abs() <= 1e-8, "QuadLog kappa = {kappa}");
    let d = defect_log(&f.lift().unwrap(), 1.0, 1.0).unwrap();
    ensure!(d == -0.5, "QuadLog defect at (1,1) = {d}");
    Ok(())
}

pub fn fixtures_perturbations_keep_hypotheses() -> Check {
    let bases = [cosh_line(1.0), cosh_line(1.7), family(FamilySpec::ConstantOne)];
    let modes = [PerturbMode::Poly4, PerturbMode::Sine { freq: 5.0 }, PerturbMode::Sine { freq: 0.3 }];
    for base in &bases {
        for mode in modes {
            for amp in [1e-4, 1e-2, 1.0] {
                let p = perturb(base, mode, amp, 11).unwrap();
                ensure!((p.eval(0.0).unwrap() - 1.0).abs() <= 1e-15, "{}: H(0) != 1", p.label());
                for i in 0..=40 {
                    let t = 0.05 * i as f64;
                    let (a, b) = (p.eval(t).unwrap(), p.eval(-t).unwrap());
                    ensure!((a - b).abs() <= 1e-15 * a.abs().max(1.0), "{}: odd part at {t}", p.label());
                }
            }
        }
    }
    Ok(())
}

/// Every invariant, by module.
pub fn all() -> Vec<Named> {
    vec![
        ("cost: reciprocity", cost_reciprocity),
        ("cost: nonnegativity and unique minimum", cost_nonnegative_unique_minimum),
        ("cost: coordinate consistency", cost_coordinate_consistency),
        ("cost: quadratic calibration", cost_quadratic_calibration),
        ("cost: Bregman equals G", cost_bregman_equals_g),
        ("cost: golden residual", cost_golden_residual),
        ("dalembert: lift consistency", dalembert_lift_consistency),
        ("dalembert: reciprocity forced", dalembert_reciprocity_forced),
        ("dalembert: defect symmetry", dalembert_defect_symmetry),
        ("dalembert: zero branch", dalembert_zero_branch),
        ("dalembert: identities iff zero defect", dalembert_identities_iff_zero_defect),
        ("calibration: branch recovery", calibration_branch_recovery),
        ("calibration: calibration fixes family", calibration_fixes_family),
        ("calibration: extrapolation order", calibration_extrapolation_order),
        ("calibration: symmetrization", calibration_symmetrization),
        ("stability: soundness on exact solutions", stability_soundness_on_exact_solutions),
        ("stability: envelope monotonicity", stability_envelope_monotone),
        ("stability: delta convexity", stability_delta_convexity),
        ("stability: perturbation scaling", stability_perturbation_scaling),
        ("stability: certificate consistency", stability_certificate_consistency),
        ("geometry: reciprocal symmetry", geometry_reciprocal_symmetry),
        ("geometry: triangle inequality", geometry_triangle_inequality),
        ("geometry: additivity", geometry_additivity),
        ("geometry: local equivalence", geometry_local_equivalence),
        ("geometry: asymptotic growth", geometry_asymptotic_growth),
        ("geometry: Chebyshev consistency", geometry_chebyshev_consistency),
        ("fixtures: cosh-lambda equals power-law", fixtures_cosh_lambda_matches_power_law),
        ("fixtures: cosh-lambda solves the law", fixtures_cosh_lambda_solves_law),
        ("fixtures: quad-log normalized, calibrated, not a solution", fixtures_quadlog_three_way),
        ("fixtures: perturbations keep hypotheses", fixtures_perturbations_keep_hypotheses),
    ]
}
