//! Subcommand execution.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use reccost_core::calibration::{classify, estimate_kappa, BranchClassification, ClassifyOptions, DEFAULT_H0, DEFAULT_LEVELS};
use reccost_core::cost::{am_gm_decomposition, canonical_cost, golden_fixed_point, log_forms, LogCoord, PositiveRatio};
use reccost_core::dalembert::{defect_log, defect_ratio, identity_report, sup_defect};
use reccost_core::fixtures::{make_family, FamilySpec};
use reccost_core::geometry::{chebyshev_cost, chebyshev_sequence, distance_with_budget, DEFAULT_EVAL_BUDGET};
use reccost_core::stability::{certify, certify_ratio, CertifyOptions, StabilityCertificate, ThirdDerivativeSource};
use reccost_core::{Domain, Error, FunctionHandle};

use crate::args::*;
use crate::samples::load_samples;
use crate::{Object, PlotRow, Status, EVAL_BUDGET_ENV};

pub struct Outcome {
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Object,
    pub warnings: Vec<String>,
    pub status: Status,
    pub plot: Option<Vec<PlotRow>>,
    pub plot_path: Option<PathBuf>,
}

pub struct Failure {
    pub inputs: Value,
    pub message: String,
}

/// Per-run state: the echoed inputs and accumulated diagnostics.
struct Ctx {
    inputs: Value,
    diagnostics: Object,
    warnings: Vec<String>,
}

impl Ctx {
    fn new(args: &impl Serialize) -> Self {
        Ctx {
            inputs: serde_json::to_value(args).unwrap_or_else(|_| json!({})),
            diagnostics: Object::new(),
            warnings: Vec::new(),
        }
    }

    fn fail(self, message: impl ToString) -> Failure {
        Failure {
            inputs: self.inputs,
            message: message.to_string(),
        }
    }

    fn finish(self, results: Value, status: Status) -> Outcome {
        Outcome {
            inputs: self.inputs,
            results,
            diagnostics: self.diagnostics,
            warnings: self.warnings,
            status,
            plot: None,
            plot_path: None,
        }
    }

    fn set_input(&mut self, key: &str, value: Value) {
        if let Value::Object(map) = &mut self.inputs {
            map.insert(key.to_owned(), value);
        }
    }

    /// Builds the handle named by `--family` or `--input` and records its
    /// canonical form in the echoed inputs.
    fn resolve(&mut self, src: &SourceArgs) -> Result<FunctionHandle, String> {
        if let Some(text) = &src.family {
            let spec: FamilySpec = text.parse().map_err(|e: Error| format!("--family: {e}"))?;
            self.set_input("family", json!(spec.to_string()));
            return make_family(spec).map_err(|e| format!("--family: {e}"));
        }
        let path = src.input.as_ref().ok_or("one of --family or --input is required")?;
        let h = load_samples(path, src.domain.map(Domain::from)).map_err(|e| format!("{}: {e}", path.display()))?;
        self.set_input("domain", json!(h.domain()));
        Ok(h)
    }

    /// Lifts ratio-domain handles to the log line.
    fn log_line(&mut self, h: FunctionHandle) -> Result<FunctionHandle, Error> {
        match h.domain() {
            Domain::LogLine => Ok(h),
            Domain::PositiveRatios => {
                self.warnings
                    .push(format!("{} lifted to the log line as H(t) = F(e^t) + 1", h.label()));
                h.lift()
            }
        }
    }

    fn grid(&mut self, half_width: f64, step: f64) {
        self.diagnostics
            .insert("grid".into(), json!({ "half_width": half_width, "step": step }));
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn ratio(flag: &str, x: f64) -> Result<PositiveRatio, String> {
    PositiveRatio::new(x).map_err(|e| format!("--{flag}: {e}"))
}

macro_rules! tryf {
    ($ctx:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return Err($ctx.fail(e)),
        }
    };
}

pub fn execute(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Eval(a) => eval(a),
        Command::Defect(a) => defect(a),
        Command::SupDefect(a) => window(a, false),
        Command::Identities(a) => window(a, true),
        Command::Calibrate(a) => calibrate(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Certify(a) => certify_cmd(a, false),
        Command::CertifyRatio(a) => certify_cmd(a, true),
        Command::Distance(a) => distance(a),
        Command::Chebyshev(a) => chebyshev(a),
        Command::Golden(a) => golden(a),
        Command::Report(a) => report(a),
    }
}

fn eval(a: &EvalArgs) -> Result<Outcome, Failure> {
    let mut ctx = Ctx::new(a);
    let results = if let Some(x) = a.x {
        let r = tryf!(ctx, ratio("x", x));
        let j = tryf!(ctx, canonical_cost(r));
        let f = tryf!(ctx, log_forms(r.ln()));
        let m = tryf!(ctx, am_gm_decomposition(r));
        json!({ "x": x, "J": j.get(), "t": r.ln().get(), "G": f.g, "H": f.h,
                "am": m.am, "gm": m.gm, "diff": m.diff })
    } else if let Some(t) = a.t {
        let lc = tryf!(ctx, LogCoord::new(t));
        let f = tryf!(ctx, log_forms(lc));
        let r = tryf!(ctx, PositiveRatio::from_log(lc));
        let j = tryf!(ctx, canonical_cost(r));
        json!({ "t": t, "G": f.g, "H": f.h, "x": r.get(), "J": j.get() })
    } else if let Some(src) = a.source.clone().into_source() {
        let h = tryf!(ctx, ctx.resolve(&src));
        let at = tryf!(ctx, a.at.ok_or("--at is required with a function source"));
        let value = tryf!(ctx, h.eval(at));
        json!({ "label": h.label(), "domain": h.domain(), "at": at, "value": value })
    } else {
        return Err(ctx.fail("eval needs --x, --t, or a function source with --at"));
    };
    Ok(ctx.finish(results, Status::Ok))
}

fn defect(a: &DefectArgs) -> Result<Outcome, Failure> {
    let mut ctx = Ctx::new(a);
    let h = tryf!(ctx, ctx.resolve(&a.source));
    let results = match (a.t, a.u, a.x, a.y) {
        (Some(t), Some(u), _, _) => {
            let hl = tryf!(ctx, ctx.log_line(h));
            json!({ "t": t, "u": u, "defect": tryf!(ctx, defect_log(&hl, t, u)) })
        }
        (_, _, Some(x), Some(y)) => {
            if h.domain() != Domain::PositiveRatios {
                return Err(ctx.fail("--x/--y need a positive-ratio function; use --t/--u"));
            }
            json!({ "x": x, "y": y, "defect": tryf!(ctx, defect_ratio(&h, x, y)) })
        }
        _ => return Err(ctx.fail("defect needs --t and --u, or --x and --y")),
    };
    Ok(ctx.finish(results, Status::Ok))
}

fn window(a: &WindowArgs, identities: bool) -> Result<Outcome, Failure> {
    let mut ctx = Ctx::new(a);
    let h = tryf!(ctx, ctx.resolve(&a.source));
    let hl = tryf!(ctx, ctx.log_line(h));
    ctx.grid(a.half_width, a.step);
    let results = if identities {
        let v = tryf!(ctx, identity_report(&hl, a.half_width, a.step));
        let mut out = to_value(&v);
        out["max"] = json!(v.max());
        out
    } else {
        to_value(&tryf!(ctx, sup_defect(&hl, a.half_width, a.step)))
    };
    Ok(ctx.finish(results, Status::Ok))
}

fn calibrate(a: &CalibrateArgs) -> Result<Outcome, Failure> {
    let mut ctx = Ctx::new(a);
    let h = tryf!(ctx, ctx.resolve(&a.source));
    let hl = tryf!(ctx, ctx.log_line(h));
    let est = tryf!(ctx, estimate_kappa(&hl, a.h0, a.levels));
    if est.noise_limited {
        ctx.warnings.push(format!(
            "extrapolation stopped after {} of {} levels because round-off dominated",
            est.levels, a.levels
        ));
    }
    Ok(ctx.finish(to_value(&est), Status::Ok))
}

fn classification_value(c: &BranchClassification) -> Value {
    let mut v = to_value(c);
    v["branch"] = json!(c.branch.name());
    v
}

/// `Ok(Ok(_))` on a classification, `Ok(Err(_))` on a negative verdict.
fn run_classify(h: &FunctionHandle, opts: &ClassifyOptions) -> Result<Result<Value, Value>, Error> {
    match classify(h, opts) {
        Ok(c) => Ok(Ok(classification_value(&c))),
        Err(Error::NotNearBranch {
            branch,
            residual,
            threshold,
        }) => Ok(Err(json!({
            "verdict": "not near any branch",
            "best_branch": branch,
            "residual": residual,
            "threshold": threshold,
        }))),
        Err(Error::Classification(msg)) => Ok(Err(json!({ "verdict": msg }))),
        Err(e) => Err(e),
    }
}

fn classify_cmd(a: &ClassifyArgs) -> Result<Outcome, Failure> {
    let mut ctx = Ctx::new(a);
    let h = tryf!(ctx, ctx.resolve(&a.source));
    let hl = tryf!(ctx, ctx.log_line(h));
    let mut opts = ClassifyOptions::new(a.half_width);
    opts.const_tol = a.const_tol;
    opts.acceptance = a.tol;
    ctx.diagnostics.insert(
        "grid".into(),
        json!({ "half_width": opts.window_t, "residual_step": opts.residual_step, "threshold": opts.threshold() }),
    );
    Ok(match tryf!(ctx, run_classify(&hl, &opts)) {
        Ok(v) => ctx.finish(v, Status::Ok),
        Err(v) => ctx.finish(v, Status::VerificationFailed),
    })
}

fn plot_rows(c: &StabilityCertificate, shift: f64) -> Vec<PlotRow> {
    c.sweep
        .iter()
        .map(|s| PlotRow {
            t: s.t,
            h: s.value + shift,
            branch: s.branch + shift,
            envelope: s.envelope,
            error: s.error,
        })
        .collect()
}

fn certificate_warnings(ctx: &mut Ctx, c: &StabilityCertificate) {
    if c.k_source == ThirdDerivativeSource::FiniteDifference {
        ctx.warnings
            .push("K estimated from third differences of the samples; the envelope is not rigorous".into());
    }
    ctx.grid(c.defect_grid.half_width, c.defect_grid.step);
}

fn certify_cmd(a: &CertifyArgs, ratio_form: bool) -> Result<Outcome, Failure> {
    let mut ctx = Ctx::new(a);
    let h = tryf!(ctx, ctx.resolve(&a.source));
    let opts = CertifyOptions { h: a.h, a: a.a };
    let (cert, shift) = if ratio_form {
        if h.domain() != Domain::PositiveRatios {
            return Err(ctx.fail("certify-ratio needs a positive-ratio function; use certify"));
        }
        (tryf!(ctx, certify_ratio(&h, a.half_width, a.step, &opts)), 1.0)
    } else {
        let hl = tryf!(ctx, ctx.log_line(h));
        (tryf!(ctx, certify(&hl, a.half_width, a.step, &opts)), 0.0)
    };
    certificate_warnings(&mut ctx, &cert);
    let status = if cert.verified {
        Status::Ok
    } else {
        Status::VerificationFailed
    };
    let plot = plot_rows(&cert, shift);
    let mut out = ctx.finish(to_value(&cert), status);
    out.plot = Some(plot);
    out.plot_path = a.plot_csv.clone();
    Ok(out)
}

fn eval_budget() -> Result<usize, String> {
    match std::env::var(EVAL_BUDGET_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_EVAL_BUDGET),
        Err(e) => Err(format!("{EVAL_BUDGET_ENV}: {e}")),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 3 => Ok(n),
            _ => Err(format!("{EVAL_BUDGET_ENV} must be an integer >= 3, found `{s}`")),
        },
    }
}

fn distance(a: &DistanceArgs) -> Result<Outcome, Failure> {
    let mut ctx = Ctx::new(a);
    let budget = tryf!(ctx, eval_budget());
    ctx.diagnostics.insert("eval_budget".into(), json!(budget));
    let x = tryf!(ctx, ratio("x", a.x));
    let y = tryf!(ctx, ratio("y", a.y));
    let r = tryf!(ctx, distance_with_budget(x, y, a.tol, budget));
    Ok(ctx.finish(to_value(&r), Status::Ok))
}

fn chebyshev(a: &ChebyshevArgs) -> Result<Outcome, Failure> {
    let ctx = Ctx::new(a);
    let results = match (a.x, a.h1) {
        (Some(x), None) => {
            let r = tryf!(ctx, ratio("x", x));
            to_value(&tryf!(ctx, chebyshev_cost(r, a.n)))
        }
        (None, Some(h1)) => {
            let seq = tryf!(ctx, chebyshev_sequence(h1, a.n as usize));
            json!({ "h1": h1, "n": a.n, "sequence": seq })
        }
        _ => return Err(ctx.fail("chebyshev needs exactly one of --x or --h1")),
    };
    Ok(ctx.finish(results, Status::Ok))
}

fn golden(a: &GoldenArgs) -> Result<Outcome, Failure> {
    let ctx = Ctx::new(a);
    let x0 = tryf!(ctx, ratio("x0", a.x0));
    let g = tryf!(ctx, golden_fixed_point(x0, a.tol, a.max_iter));
    Ok(ctx.finish(to_value(&g), Status::Ok))
}

fn report(a: &ReportArgs) -> Result<Outcome, Failure> {
    let mut ctx = Ctx::new(a);
    let h = tryf!(ctx, ctx.resolve(&a.source));
    let ratio_input = h.domain() == Domain::PositiveRatios;
    let hl = tryf!(ctx, ctx.log_line(h.clone()));
    ctx.grid(a.half_width, a.step);

    let defect = tryf!(ctx, sup_defect(&hl, a.half_width, a.step));
    let mut results = json!({ "sup_defect": to_value(&defect) });
    let mut section = |ctx: &mut Ctx, name: &str, r: Result<Value, Error>| {
        results[name] = r.unwrap_or_else(|e| {
            ctx.warnings.push(format!("{name}: {e}"));
            json!({ "error": e.to_string() })
        });
    };

    section(
        &mut ctx,
        "identities",
        identity_report(&hl, a.half_width, a.step).map(|v| {
            let mut out = to_value(&v);
            out["max"] = json!(v.max());
            out
        }),
    );
    section(
        &mut ctx,
        "calibration",
        estimate_kappa(&hl, DEFAULT_H0, DEFAULT_LEVELS).map(|e| to_value(&e)),
    );
    let classified = run_classify(&hl, &ClassifyOptions::new(a.half_width));
    let branch = match &classified {
        Ok(Ok(v)) => v["branch"].clone(),
        _ => Value::Null,
    };
    section(&mut ctx, "classification", classified.map(|r| r.unwrap_or_else(|v| v)));

    let opts = CertifyOptions::default();
    let cert = if ratio_input {
        certify_ratio(&h, a.half_width, a.step, &opts)
    } else {
        certify(&hl, a.half_width, a.step, &opts)
    };
    let verified = cert.as_ref().ok().map(|c| c.verified);
    let plot = cert.as_ref().ok().map(|c| plot_rows(c, if ratio_input { 1.0 } else { 0.0 }));
    if let Ok(c) = &cert {
        if c.k_source == ThirdDerivativeSource::FiniteDifference {
            ctx.warnings
                .push("K estimated from third differences of the samples; the envelope is not rigorous".into());
        }
    }
    section(&mut ctx, "certificate", cert.map(|c| to_value(&c)));
    results["verdicts"] = json!({ "branch": branch, "certified": verified });

    let mut out = ctx.finish(results, Status::Ok);
    out.plot = plot;
    out.plot_path = a.plot_csv.clone();
    Ok(out)
}
