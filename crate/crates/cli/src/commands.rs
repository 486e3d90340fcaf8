use std::path::Path;
use std::sync::Arc;

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

use relmon_core::alg::build_algebra_category;
use relmon_core::colim::{is_dense, Mode};
use relmon_core::corpus::{builtin_corpus, document_json, Instance, Provenance, ShapeBounds};
use relmon_core::monadicity::{
    audit_with, decide_composite_monadicity, decide_monadicity, dualize, AuditOptions, AuditReport,
    MonadicityReport, ShapeFamily,
};
use relmon_core::reladj::{find_left_relative_adjoint, paste, unpaste, PastingReport, TieBreak};
use relmon_core::relmon::enumerate_relative_monads;
use relmon_core::suite::{load_corpus, run_theorem_suite, Outcome, SuiteInput, SuiteOptions};
use relmon_core::{Budget, Error, FinCategory};

use crate::inputs;
use crate::{Command, ModeFlags, MonadAction, MonadicArgs, PasteArgs, PasteDirection, Status, SuiteArgs, Tie};

/// What a command produced: its status, the report payload and the
/// human-readable summary.
pub struct Done {
    pub status: Status,
    pub error: Option<String>,
    pub result: Value,
    pub summary: Vec<String>,
}

impl Done {
    fn new(status: Status, result: impl Serialize, summary: Vec<String>) -> Self {
        let result = serde_json::to_value(result).unwrap_or(Value::Null);
        Done { status, error: None, result, summary }
    }

    pub fn failed(status: Status, error: String) -> Self {
        Done { status, error: Some(error), result: Value::Null, summary: Vec::new() }
    }
}

/// Exit class of an engine error that ends a command.
fn classify(e: &Error) -> Status {
    match e {
        Error::BudgetExceeded { .. } => Status::BudgetExceeded,
        Error::TheoremViolation(_) | Error::MonadMismatch => Status::Negative,
        _ => Status::InputError,
    }
}

pub fn run(command: Command) -> Done {
    let budget = Budget::from_env();
    match dispatch(command, &budget) {
        Ok(done) => done,
        Err(e) => {
            let status = e.downcast_ref::<Error>().map_or(Status::InputError, classify);
            Done::failed(status, format!("{e:#}"))
        }
    }
}

fn verdict_status(yes: bool) -> Status {
    if yes {
        Status::Pass
    } else {
        Status::Negative
    }
}

fn mode_of(flags: ModeFlags) -> Mode {
    if flags.nonstrict {
        Mode::Nonstrict
    } else {
        Mode::Strict
    }
}

fn dispatch(command: Command, budget: &Budget) -> anyhow::Result<Done> {
    match command {
        Command::Validate { path } => Ok(validate(&path)),
        Command::Density { j } => {
            let j = inputs::functor(&j, "j")?;
            let report = is_dense(&j, budget)?;
            let mut summary = vec![format!("dense: {}", yes(report.dense))];
            if let Some(w) = &report.witness {
                summary.push(format!("witness: {w:?}"));
            }
            Ok(Done::new(verdict_status(report.dense), &report, summary))
        }
        Command::Adjoint { j, r, tie, out } => adjoint(&j, &r, tie, out.as_deref(), budget),
        Command::Monad { action: MonadAction::Validate { monad } } => monad_validate(&monad),
        Command::Monad { action: MonadAction::Enumerate { j, limit, out } } => {
            monad_enumerate(&j, limit, out.as_deref(), budget)
        }
        Command::Algebras { monad } => {
            let m = inputs::monad(&monad)?;
            let alg = build_algebra_category(&m, budget)?;
            let names = alg.category.object_names().to_vec();
            let summary = std::iter::once(format!(
                "{} algebras, {} morphisms",
                alg.category.num_objects(),
                alg.category.num_morphisms()
            ))
            .chain(names.iter().map(|n| format!("  {n}")))
            .collect();
            let result = json!({
                "count": alg.category.num_objects(),
                "algebras": names,
                "category": alg.category.to_desc(),
                "forgetful": alg.u.to_desc(),
                "free": alg.f.to_desc(),
            });
            Ok(Done::new(Status::Pass, result, summary))
        }
        Command::Monadic(args) => monadic(&args, budget),
        Command::Paste(args) => paste_cmd(&args, budget),
        Command::Composite { j, rprime, r, mode } => {
            let j = inputs::functor(&j, "j")?;
            let rprime = inputs::functor(&rprime, "rprime")?;
            let r = inputs::functor(&r, "r")?;
            let report = decide_composite_monadicity(&j, &rprime, &r, mode_of(mode), budget)?;
            let mut summary = vec![
                format!("r monadic relative to l': {}", yes(report.left.verdict.is_monadic())),
                format!("r;r' monadic relative to j: {}", yes(report.right.verdict.is_monadic())),
            ];
            if let Some(agree) = report.algebra_counts_agree {
                summary.push(format!("algebra counts agree: {}", yes(agree)));
            }
            summary.extend(report.left.witnesses.iter().map(|w| format!("  {w}")));
            Ok(Done::new(verdict_status(report.monadic()), &report, summary))
        }
        Command::Suite(args) => suite(&args),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate(path: &Path) -> Done {
    match relmon_core::corpus::load_any(path) {
        Ok(inst) => {
            let result = json!({
                "valid": true,
                "name": inst.name,
                "categories": inst.categories.len(),
                "functors": inst.functors.len(),
                "distributors": inst.distributors.len(),
                "monads": inst.monads.len(),
                "adjunctions": inst.adjunctions.len(),
            });
            let summary = vec![format!(
                "valid: {} ({} categories, {} functors, {} distributors, {} monads, {} adjunctions)",
                inst.name,
                inst.categories.len(),
                inst.functors.len(),
                inst.distributors.len(),
                inst.monads.len(),
                inst.adjunctions.len()
            )];
            Done::new(Status::Pass, result, summary)
        }
        Err(Error::Validation { location, message }) => {
            let result = json!({ "valid": false, "location": location, "message": message });
            let summary = vec![format!("invalid: {location}: {message}")];
            Done::new(Status::Negative, result, summary)
        }
        Err(e) => Done::failed(classify(&e), e.to_string()),
    }
}

fn monad_validate(arg: &str) -> anyhow::Result<Done> {
    match inputs::monad(arg) {
        Ok(m) => {
            let result = json!({ "valid": true, "monad": m.to_desc(), "carrier": m.t.to_desc() });
            Ok(Done::new(Status::Pass, result, vec!["valid: every monad law holds".into()]))
        }
        Err(Error::Validation { location, message }) => {
            let result = json!({ "valid": false, "location": location, "message": message });
            Ok(Done::new(Status::Negative, result, vec![format!("invalid: {location}: {message}")]))
        }
        Err(e) => Err(e.into()),
    }
}

/// A fresh document instance holding the given categories under the given
/// names, skipping repeats.
fn document(name: &str, cats: &[(&str, &Arc<FinCategory>)]) -> Instance {
    let mut inst = Instance::new(name, "", Provenance::File);
    for (n, c) in cats {
        if !inst.categories.values().any(|d| Arc::ptr_eq(d, c) || **d == ***c) {
            inst = inst.with_category(n, c);
        }
    }
    inst
}

fn write_document(inst: &Instance, out: &Path) -> anyhow::Result<()> {
    std::fs::write(out, document_json(inst)).with_context(|| format!("cannot write {}", out.display()))
}

fn adjoint(j: &str, r: &str, tie: Tie, out: Option<&Path>, budget: &Budget) -> anyhow::Result<Done> {
    let j = inputs::functor(j, "j")?;
    let r = inputs::functor(r, "r")?;
    let tie = match tie {
        Tie::Least => TieBreak::Least,
        Tie::Greatest => TieBreak::Greatest,
    };
    let Some(adj) = find_left_relative_adjoint(&j, &r, tie, budget)? else {
        let result = json!({ "exists": false });
        return Ok(Done::new(Status::Negative, result, vec!["no left relative adjoint".into()]));
    };
    if let Some(out) = out {
        let inst = document("adjoint", &[("A", j.dom()), ("E", j.cod()), ("C", r.dom())])
            .with_functor("j", j.clone())
            .with_functor("r", r.clone())
            .with_functor("l", adj.l.clone())
            .with_adjunction("adj", adj.clone());
        write_document(&inst, out)?;
    }
    let result = json!({ "exists": true, "left": adj.l.to_desc(), "adjunction": adj.to_desc() });
    let images: Vec<String> = j
        .dom()
        .objects()
        .map(|a| format!("l({}) = {}", j.dom().object_name(a), adj.l.cod().object_name(adj.l.ob(a))))
        .collect();
    let summary = std::iter::once("left relative adjoint found".to_string())
        .chain(images.into_iter().map(|s| format!("  {s}")))
        .collect();
    Ok(Done::new(Status::Pass, result, summary))
}

fn monad_enumerate(j: &str, limit: Option<usize>, out: Option<&Path>, budget: &Budget) -> anyhow::Result<Done> {
    let j = inputs::functor(j, "j")?;
    let mut monads = enumerate_relative_monads(&j, budget)?;
    let total = monads.len();
    if let Some(limit) = limit {
        monads.truncate(limit);
    }
    if let Some(out) = out {
        let mut inst = document("monads", &[("A", j.dom()), ("E", j.cod())]).with_functor("j", j.clone());
        for (i, m) in monads.iter().enumerate() {
            if !inst.functors.values().any(|e| e.functor == m.t) {
                inst = inst.with_functor(&format!("t{i}"), m.t.clone());
            }
            inst = inst.with_monad(&format!("T{i}"), m.clone());
        }
        write_document(&inst, out)?;
    }
    let listed: Vec<Value> = monads
        .iter()
        .map(|m| json!({ "carrier": m.t.to_desc(), "monad": m.to_desc() }))
        .collect();
    let mut summary = vec![format!("{total} relative monads")];
    for (i, m) in monads.iter().enumerate() {
        let carrier: Vec<&str> = j.dom().objects().map(|a| j.cod().object_name(m.t.ob(a))).collect();
        summary.push(format!("  T{i}: carrier [{}]", carrier.join(", ")));
    }
    let result = json!({ "count": total, "monads": listed });
    Ok(Done::new(Status::Pass, result, summary))
}

fn decision_lines(report: &MonadicityReport) -> Vec<String> {
    let mode = match report.mode {
        Mode::Strict => "strict",
        Mode::Nonstrict => "non-strict",
    };
    let what = if report.co { "comonadic" } else { "monadic" };
    let mut lines = vec![
        format!("{what} ({mode}): {}", yes(report.verdict.is_monadic())),
        format!("adjoint: {}", yes(report.adjoint)),
        format!("root dense: {}", yes(report.dense)),
    ];
    lines.extend(report.witnesses.iter().map(|w| format!("  {w}")));
    lines
}

fn audit_lines(audit: &AuditReport) -> Vec<String> {
    let mut lines = vec![format!("audit: {} failures", audit.failure_count())];
    for (k, v) in &audit.census {
        lines.push(format!("  {k}: {v}"));
    }
    for t in &audit.targeted {
        let state = match t.passed {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "not attempted",
        };
        lines.push(format!("  targeted {}: {state}", t.name));
    }
    if audit.inconclusive {
        lines.push("  inconclusive: no audited item explains the negative verdict".into());
    }
    lines.extend(audit.discrepancies.iter().map(|d| format!("  DISCREPANCY: {d}")));
    lines
}

fn monadic(args: &MonadicArgs, budget: &Budget) -> anyhow::Result<Done> {
    let j = inputs::functor(&args.j, "j")?;
    let r = inputs::functor(&args.r, "r")?;
    let mode = mode_of(args.mode);
    let decision = decide_monadicity(&j, &r, mode, args.co, budget)?;
    let mut summary = decision_lines(&decision);
    let mut status = verdict_status(decision.verdict.is_monadic());
    let audit = if args.audit {
        let bounds = ShapeBounds { max_objects: args.objects, max_morphisms: args.shapes };
        let family = ShapeFamily::conical(bounds, args.cap, budget)?;
        let opts = AuditOptions { mode, cocone_cap: 4, limits: args.limits, targeted: !args.no_targeted };
        let (ja, ra) = if args.co { dualize(&j, &r) } else { (j.clone(), r.clone()) };
        let audit = audit_with(&ja, &ra, &decision, &family, opts, budget)?;
        summary.extend(audit_lines(&audit));
        if !audit.passed() {
            status = Status::Negative;
        } else if audit.inconclusive {
            status = Status::Inconclusive;
        }
        Some(audit)
    } else {
        None
    };
    Ok(Done::new(status, json!({ "decision": decision, "audit": audit }), summary))
}

fn paste_cmd(args: &PasteArgs, budget: &Budget) -> anyhow::Result<Done> {
    let prime = inputs::adjunction(&args.prime)?;
    let need = |v: &Option<String>, flag: &str| -> anyhow::Result<String> {
        v.clone().ok_or_else(|| {
            Error::Validation { location: "arguments".into(), message: format!("{flag} is required") }.into()
        })
    };
    let (report, expected): (PastingReport, _) = match args.direction {
        PasteDirection::Paste => {
            let inner = inputs::adjunction(&need(&args.inner, "--inner")?)?;
            let expected = args.outer.as_deref().map(inputs::adjunction).transpose()?;
            (paste(&inner, &prime, budget)?, expected)
        }
        PasteDirection::Unpaste => {
            let outer = inputs::adjunction(&need(&args.outer, "--outer")?)?;
            let r = inputs::functor(&need(&args.r, "--r")?, "r")?;
            let expected = args.inner.as_deref().map(inputs::adjunction).transpose()?;
            (unpaste(&outer, &prime, &r, budget)?, expected)
        }
    };
    let produced = match args.direction {
        PasteDirection::Paste => &report.outer,
        PasteDirection::Unpaste => &report.inner,
    };
    let matches = expected.as_ref().map(|e| e.same_tables(produced) && e.l == produced.l && e.r == produced.r);
    let ok = report.round_trip && matches != Some(false);
    let mut summary = vec![format!("round trip: {}", yes(report.round_trip))];
    if let Some(m) = matches {
        summary.push(format!("matches expected: {}", yes(m)));
    }
    if let Some(rm) = &report.right_morphism {
        summary.push(format!(
            "right-morphism: {}, colimiting: {}, absolute: {}",
            yes(rm.right_morphism),
            yes(rm.colimiting),
            yes(rm.absolute)
        ));
    }
    let result = json!({
        "direction": report.direction,
        "round_trip": report.round_trip,
        "matches_expected": matches,
        "left": produced.l.to_desc(),
        "right": produced.r.to_desc(),
        "adjunction": produced.to_desc(),
        "right_morphism": report.right_morphism,
    });
    Ok(Done::new(verdict_status(ok), result, summary))
}

fn suite_status(o: Outcome) -> Status {
    match o {
        Outcome::Pass | Outcome::Skipped => Status::Pass,
        Outcome::Inconclusive => Status::Inconclusive,
        Outcome::InvalidInput => Status::InputError,
        Outcome::BudgetExceeded => Status::BudgetExceeded,
        Outcome::Fail => Status::Negative,
    }
}

fn suite(args: &SuiteArgs) -> anyhow::Result<Done> {
    let inputs: Vec<SuiteInput> = match &args.corpus {
        Some(dir) => load_corpus(dir)?,
        None => builtin_corpus().into_iter().map(|i| SuiteInput::Instance(Box::new(i))).collect(),
    };
    let opts = SuiteOptions {
        shapes: ShapeBounds { max_objects: args.objects, max_morphisms: args.shapes },
        element_cap: args.cap,
        limits: !args.no_limits,
        max_monads: args.max_monads,
        max_triangles: args.max_triangles,
        only: args.only.clone(),
        budget: Budget::from_env().limit(),
        ..SuiteOptions::default()
    };
    let report = run_theorem_suite(&inputs, &opts)?;
    let mut summary = Vec::new();
    for inst in &report.instances {
        let failing: Vec<String> = inst
            .cells
            .iter()
            .filter(|(_, c)| !matches!(c.outcome, Outcome::Pass | Outcome::Skipped))
            .map(|(t, c)| format!("{t}={}", outcome_name(c.outcome)))
            .collect();
        let line = match (&inst.error, failing.is_empty()) {
            (Some(e), _) => format!("{}: invalid input: {e}", inst.name),
            (None, true) => format!("{}: {} checks pass", inst.name, inst.cells.len()),
            (None, false) => format!("{}: {}", inst.name, failing.join(", ")),
        };
        summary.push(line);
    }
    summary.push(format!("status: {}", outcome_name(report.status)));
    Ok(Done::new(suite_status(report.status), &report, summary))
}

fn outcome_name(o: Outcome) -> String {
    serde_json::to_value(o).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}
