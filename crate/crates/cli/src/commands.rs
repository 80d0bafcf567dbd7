//! The subcommands as functions from arguments to JSON reports and exit codes.

use std::time::Instant;

use num_bigint::BigInt;
use quadsemi::{
    scrambled_oracle, Error as CoreError, FieldContext, LowerCase, OmegaCase, QuadInt, UdClass,
};
use quadsemi_reconstruct::{reconstruct, CountingOracle};
use serde_json::{json, Value};

use crate::format::{big, element, pretty, signs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Reports to print, one JSON value per line, and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub lines: Vec<Value>,
    pub code: i32,
}

impl Output {
    fn single(v: Value, ok: bool) -> Self {
        Output {
            lines: vec![v],
            code: if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::NotTotallyPositive(_) => EXIT_DOMAIN,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

pub type CmdResult = Result<Output, CliError>;

fn field(d: i64) -> Result<FieldContext, CliError> {
    Ok(FieldContext::new(d)?)
}

fn cf_json(ctx: &FieldContext) -> Value {
    let exp = ctx.expansion();
    let eps = ctx.fundamental_unit();
    let eps_plus = ctx.totally_positive_unit();
    let s = exp.s();
    json!({
        "u": exp.period(),
        "s": s,
        "D": ctx.d(),
        "delta": ctx.delta(),
        "omega": match ctx.omega_case() {
            OmegaCase::SqrtD => format!("√{}", ctx.d()),
            OmegaCase::HalfIntegral => format!("(1+√{})/2", ctx.d()),
        },
        "s_plus": exp.s_plus(),
        "epsilon": element(ctx, &eps),
        "epsilon_norm": big(&ctx.norm(&eps)),
        "epsilon_plus": element(ctx, &eps_plus),
        "parity": {
            "s_even": s.is_multiple_of(2),
            "epsilon_totally_positive": ctx.is_totally_positive(&eps),
            "epsilon_plus_is_square": s % 2 == 1,
        },
        "indecomposables_per_period": ctx.block_layout().period_len(),
    })
}

pub fn cf(d: i64) -> CmdResult {
    let ctx = field(d)?;
    Ok(Output::single(cf_json(&ctx), true))
}

fn lower_case_name(c: &LowerCase) -> String {
    match c {
        LowerCase::A => "a".into(),
        LowerCase::B { num, den } => format!("b(c={num}/{den})"),
        LowerCase::C => "c".into(),
        LowerCase::D => "d".into(),
        LowerCase::MultipleOfConvergent => "multiple-of-convergent".into(),
    }
}

fn ud_kind(c: &UdClass) -> &'static str {
    match c {
        UdClass::Indecomposable(_) => "indecomposable",
        UdClass::ConvergentMultiple(_) => "convergent-multiple",
        UdClass::SeamPlusNext(_) => "seam-plus-next",
        UdClass::MultiplePlusOne(_) => "multiple-plus-one",
        UdClass::UnitBlock(_) => "unit-block",
        UdClass::ConjugateOf(_) => "conjugate",
        UdClass::NotUd => "not-ud",
    }
}

fn ud_json(c: &UdClass) -> Value {
    let witness = c
        .witness()
        .map(|w| json!({"i": w.i, "r": w.r, "e": big(&w.e), "f": big(&w.f)}));
    json!({
        "verdict": c.is_ud(),
        "clause": c.letter().map(String::from),
        "kind": ud_kind(c),
        "conjugated": matches!(c, UdClass::ConjugateOf(_)),
        "witness": witness,
    })
}

pub fn classify(d: i64, a: &BigInt, b: &BigInt) -> CmdResult {
    let ctx = field(d)?;
    let x = QuadInt::from_big(a.clone(), b.clone());
    let head = json!({
        "D": ctx.d(),
        "element": element(&ctx, &x),
        "signs": signs(&ctx, &x),
        "totally_positive": ctx.is_totally_positive(&x),
    });
    if !ctx.is_totally_positive(&x) {
        return Ok(Output {
            lines: vec![head],
            code: EXIT_DOMAIN,
        });
    }

    let form = ctx.canonicalize(&x)?;
    let class = ctx.classify_ud(&x)?;
    let decomps: Vec<Value> = ctx
        .enumerate_decompositions(&x, 2)
        .iter()
        .map(|dc| {
            json!({
                "indices": dc.indices,
                "parts": dc.parts.iter().map(|p| pretty(&ctx, p)).collect::<Vec<_>>(),
            })
        })
        .collect();

    // the bounds are stated for e alpha_{i,r} + f alpha_{i,r+1}; conjugation
    // moves any element there without changing the norm
    let (pos, applied_to) = if form.j0 >= 0 {
        (form.clone(), "element")
    } else {
        (ctx.canonicalize(&ctx.conjugate(&x))?, "conjugate")
    };
    let at = ctx.beta_coords(pos.j0);
    let report = ctx.bounds_check(at.i, at.r, &pos.e, &pos.f, None)?;
    let upper2 = if report.upper2_holds {
        "holds"
    } else if report.upper2_tight {
        "equality"
    } else {
        "fails"
    };
    let lower: Vec<Value> = report
        .lower
        .iter()
        .map(|(c, ok)| json!({"case": lower_case_name(c), "holds": ok}))
        .collect();
    let norm = ctx.norm(&x);
    let cap = ctx.ud_norm_bound();

    let mut out = head;
    let obj = out.as_object_mut().expect("object");
    obj.insert("trace".into(), big(&ctx.trace(&x)));
    obj.insert("norm".into(), big(&norm));
    obj.insert(
        "canonical".into(),
        json!({"j0": form.j0, "e": big(&form.e), "f": big(&form.f)}),
    );
    obj.insert("indecomposable".into(), json!(ctx.is_indecomposable(&x)));
    obj.insert("ud".into(), ud_json(&class));
    obj.insert("decompositions".into(), Value::Array(decomps));
    obj.insert(
        "bounds".into(),
        json!({
            "applied_to": applied_to,
            "i": at.i,
            "r": at.r,
            "e": big(&pos.e),
            "f": big(&pos.f),
            "upper1": report.upper1_holds,
            "upper2": upper2,
            "lower": lower,
            "ud_cap": {
                "applies": class.is_ud(),
                "rational": big(&cap.rational),
                "sqrt_delta_coeff": big(&cap.surd_coeff),
                "holds": cap.admits(&norm),
            },
        }),
    );
    Ok(Output::single(out, true))
}

pub enum Limit {
    Count(u64),
    MaxTrace(u64),
}

pub fn indecomposables(d: i64, limit: Limit, with_conjugates: bool) -> CmdResult {
    let ctx = field(d)?;
    let mut js: Vec<i64> = match limit {
        Limit::Count(n) => (0..n as i64).collect(),
        Limit::MaxTrace(t) => {
            let cap = QuadInt::from_int(t);
            let mut out = Vec::new();
            let mut j = 0;
            // the first embedding of beta_j grows with j and bounds the trace
            // from below, the second lies in (0, 1]
            while ctx.compare_embedding(&ctx.beta(j), &cap, quadsemi::Embedding::First)
                != std::cmp::Ordering::Greater
            {
                if ctx.trace(&ctx.beta(j)) <= BigInt::from(t) {
                    out.push(j);
                }
                j += 1;
            }
            out
        }
    };
    if with_conjugates {
        let mirrored: Vec<i64> = js.iter().filter(|&&j| j > 0).map(|&j| -j).collect();
        js.extend(mirrored);
        js.sort_unstable();
    }
    let list: Vec<Value> = js
        .iter()
        .map(|&j| {
            let c = ctx.beta_coords(j);
            let b = ctx.beta(j);
            json!({
                "j": j,
                "i": c.i,
                "r": c.r,
                "conjugated": c.conjugated,
                "element": element(&ctx, &b),
                "trace": big(&ctx.trace(&b)),
                "norm": big(&ctx.norm(&b)),
            })
        })
        .collect();
    Ok(Output::single(
        json!({"D": ctx.d(), "count": list.len(), "indecomposables": list}),
        true,
    ))
}

pub fn count_ud(d: i64, verify: bool) -> CmdResult {
    let ctx = field(d)?;
    let count = ctx.count_ud_mod_units();
    let mut out = json!({"D": ctx.d(), "count": count});
    let mut ok = true;
    if verify {
        let searched = ctx.count_ud_by_search();
        ok = searched == count;
        let obj = out.as_object_mut().expect("object");
        obj.insert("search_count".into(), json!(searched));
        obj.insert("match".into(), json!(ok));
    }
    Ok(Output::single(out, ok))
}

/// Tally of one bound family over the audit grid.
#[derive(Debug, Clone, Default)]
struct Family {
    checked: u64,
    violations: u64,
    first: Option<Value>,
}

impl Family {
    fn record(&mut self, ok: bool, at: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(at());
            }
        }
    }

    fn json(&self) -> Value {
        json!({
            "checked": self.checked,
            "violations": self.violations,
            "holds": self.violations == 0,
            "first_violation": self.first,
        })
    }
}

/// Result of the bound audit for one field.
#[derive(Debug, Clone)]
pub struct Audit {
    pub json: Value,
    /// Every bound holds as stated, strict inequalities included.
    pub strict_pass: bool,
    /// Every bound holds once `upper2` equalities are allowed.
    pub relaxed_pass: bool,
    pub upper2_equalities: u64,
}

const C_VALUES: [(u64, u64); 3] = [(1, 4), (1, 2), (3, 4)];

pub fn audit(ctx: &FieldContext, max_ef: u64, max_i: i64) -> Result<Audit, CliError> {
    let recurrence = ctx.norm_recurrence_check(max_i);
    let mut upper1 = Family::default();
    let mut upper2 = Family::default();
    let mut equalities = 0u64;
    let mut lower: Vec<(String, Family)> = Vec::new();
    let mut multiples = 0u64;

    for i in (-1..=max_i).step_by(2) {
        let u = ctx.expansion().u(i + 2) as i64;
        for r in 0..u {
            for e in 1..=max_ef {
                for f in 0..=max_ef - e {
                    let (eb, fb) = (BigInt::from(e), BigInt::from(f));
                    for (k, &c) in C_VALUES.iter().enumerate() {
                        let rep = ctx.bounds_check(i, r, &eb, &fb, Some(c))?;
                        let at = || json!({"i": i, "r": r, "e": e, "f": f, "norm": big(&rep.norm)});
                        // the c-independent checks once, at c = 1/2
                        let primary = k == 1;
                        if primary {
                            upper1.record(rep.upper1_holds, at);
                            upper2.record(rep.upper2_holds, at);
                            equalities += rep.upper2_tight as u64;
                        }
                        for (case, ok) in &rep.lower {
                            let is_b = matches!(case, LowerCase::B { .. });
                            if !primary && !is_b {
                                continue;
                            }
                            if *case == LowerCase::MultipleOfConvergent {
                                multiples += 1;
                                continue;
                            }
                            let name = lower_case_name(case);
                            let slot = match lower.iter().position(|(n, _)| *n == name) {
                                Some(p) => p,
                                None => {
                                    lower.push((name, Family::default()));
                                    lower.len() - 1
                                }
                            };
                            lower[slot].1.record(*ok, at);
                        }
                    }
                }
            }
        }
    }
    lower.sort_by(|a, b| a.0.cmp(&b.0));

    let cap = ctx.ud_norm_bound();
    let reps = ctx.ud_representatives();
    let norms: Vec<BigInt> = reps.iter().map(|x| ctx.norm(x)).collect();
    let cap_holds = norms.iter().all(|n| cap.admits(n));
    let max_norm = norms.iter().max().cloned().unwrap_or_default();

    let lower_ok = lower.iter().all(|(_, f)| f.violations == 0);
    let base_ok = recurrence.is_ok() && upper1.violations == 0 && lower_ok && cap_holds;
    let strict_pass = base_ok && upper2.violations == 0;
    let relaxed_pass = base_ok && upper2.violations == equalities;

    let mut upper2_json = upper2.json();
    let u2 = upper2_json.as_object_mut().expect("object");
    u2.insert("equalities".into(), json!(equalities));
    u2.insert("exceedances".into(), json!(upper2.violations - equalities));

    let lower_json: serde_json::Map<String, Value> =
        lower.iter().map(|(n, f)| (n.clone(), f.json())).collect();
    let json = json!({
        "D": ctx.d(),
        "max_ef": max_ef,
        "max_i": max_i,
        "recurrence": {
            "checked_to": max_i,
            "holds": recurrence.is_ok(),
            "first_failure": recurrence.err(),
        },
        "upper1": upper1.json(),
        "upper2": upper2_json,
        "lower": lower_json,
        "multiple_of_convergent": {"checked": multiples},
        "ud_cap": {
            "rational": big(&cap.rational),
            "sqrt_delta_coeff": big(&cap.surd_coeff),
            "representatives": reps.len(),
            "max_norm": big(&max_norm),
            "holds": cap_holds,
        },
        "pass": strict_pass,
    });
    Ok(Audit {
        json,
        strict_pass,
        relaxed_pass,
        upper2_equalities: equalities,
    })
}

pub fn norm_audit(d: i64, max_ef: u64, max_i: i64) -> CmdResult {
    if max_ef == 0 || max_i < 1 {
        return Err(usage("--max-ef and --max-i must be positive"));
    }
    let ctx = field(d)?;
    let a = audit(&ctx, max_ef, max_i)?;
    Ok(Output::single(a.json, a.strict_pass))
}

/// Outward labels shown in reports.
const LABEL_EXCERPT: usize = 12;

fn reconstruct_json(ctx: &FieldContext, seed: u64) -> (Value, bool) {
    let mut oracle = CountingOracle::new(scrambled_oracle(ctx, seed));
    let result = reconstruct(&mut oracle);
    let calls = oracle.calls();
    let calls = json!({
        "add": calls.add,
        "eq": calls.eq,
        "below": calls.below,
        "stream": calls.stream,
    });
    match result {
        Ok(r) => {
            let ok = r.d == ctx.d();
            let excerpt: Vec<String> = r.labels[r.center..]
                .iter()
                .take(LABEL_EXCERPT)
                .map(|l| l.to_string())
                .collect();
            let mut labels = excerpt.join(" ");
            if r.labels.len() - r.center > LABEL_EXCERPT {
                labels.push_str(" …");
            }
            let v = json!({
                "D": ctx.d(),
                "seed": seed,
                "recovered": r.d,
                "match": ok,
                "period": r.period,
                "radius": r.radius,
                "labels": labels,
                "calls": calls,
                "error": null,
            });
            (v, ok)
        }
        Err(e) => {
            let v = json!({
                "D": ctx.d(),
                "seed": seed,
                "recovered": null,
                "match": false,
                "period": null,
                "radius": null,
                "labels": null,
                "calls": calls,
                "error": e.to_string(),
            });
            (v, false)
        }
    }
}

pub fn reconstruct_cmd(d: i64, seed: u64) -> CmdResult {
    let ctx = field(d)?;
    let (v, ok) = reconstruct_json(&ctx, seed);
    Ok(Output::single(v, ok))
}

pub struct SweepOptions {
    pub from: i64,
    pub to: i64,
    pub jobs: Option<usize>,
    pub seed: u64,
    pub max_ef: u64,
    pub max_i: i64,
    pub timings: bool,
}

fn millis(start: Instant) -> Value {
    let ms = start.elapsed().as_secs_f64() * 1000.0;
    json!((ms * 1000.0).round() / 1000.0)
}

fn sweep_record(ctx: &FieldContext, opts: &SweepOptions) -> Result<(Value, bool), CliError> {
    let t = Instant::now();
    let exp = ctx.expansion();
    let eps = ctx.fundamental_unit();
    let eps_plus = ctx.totally_positive_unit();
    let t_cf = millis(t);

    let t = Instant::now();
    let count = ctx.count_ud_mod_units();
    let searched = ctx.count_ud_by_search();
    let t_count = millis(t);

    let t = Instant::now();
    let audit = audit(ctx, opts.max_ef, opts.max_i)?;
    let t_audit = millis(t);

    let t = Instant::now();
    let (rec, rec_ok) = reconstruct_json(ctx, opts.seed);
    let t_rec = millis(t);

    let pass = searched == count && audit.relaxed_pass && rec_ok;
    let status = |ok: bool| if ok { "pass" } else { "fail" };
    let mut v = json!({
        "D": ctx.d(),
        "s": exp.s(),
        "u": exp.period(),
        "epsilon": element(ctx, &eps),
        "epsilon_plus": element(ctx, &eps_plus),
        "ud_count": count,
        "ud_count_search": searched,
        "bound_audit": {
            "status": status(audit.relaxed_pass),
            "strict": audit.strict_pass,
            "upper2_equalities": audit.upper2_equalities,
        },
        "reconstruct": {
            "status": status(rec_ok),
            "seed": opts.seed,
            "recovered": rec["recovered"],
        },
        "pass": pass,
    });
    if opts.timings {
        v.as_object_mut().expect("object").insert(
            "timings_ms".into(),
            json!({
                "cf": t_cf,
                "count_ud": t_count,
                "bound_audit": t_audit,
                "reconstruct": t_rec,
            }),
        );
    }
    Ok((v, pass))
}

/// One record per squarefree `D` in range, then a summary line.
pub fn sweep(opts: &SweepOptions) -> CmdResult {
    if opts.from < 2 || opts.from > opts.to {
        return Err(usage(format!(
            "sweep range needs 2 <= from <= to, got [{}, {}]",
            opts.from, opts.to
        )));
    }
    if opts.jobs == Some(0) {
        return Err(usage("--jobs must be at least 1"));
    }
    let (ds, skipped) = quadsemi::sweep::split_squarefree(opts.from, opts.to);
    let results = quadsemi::sweep::with_jobs(opts.jobs, || {
        quadsemi::sweep::map_fields(&ds, |ctx| sweep_record(ctx, opts))
    });
    let mut lines = Vec::with_capacity(results.len() + 1);
    let mut failed = Vec::new();
    for (d, r) in ds.iter().zip(results) {
        let (v, ok) = r?;
        if !ok {
            failed.push(*d);
        }
        lines.push(v);
    }
    let pass = failed.is_empty();
    lines.push(json!({
        "summary": {
            "from": opts.from,
            "to": opts.to,
            "records": ds.len(),
            "skipped": skipped,
            "failed": failed,
            "pass": pass,
        }
    }));
    Ok(Output {
        lines,
        code: if pass { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}
