//! The theorem suite: every cross-check of the engine, run over a list of
//! instances and collected into a per-theorem matrix.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::alg::{build_algebra_category, transport_algebras, verify_algebra_object, Algebra, AlgebraCategory, AlgebraObjectOptions};
use crate::budget::{Budget, DEFAULT_BUDGET};
use crate::colim::{is_dense, Mode};
use crate::corpus::{load_instance, Instance, ShapeBounds};
use crate::error::{Error, Result};
use crate::fincat::{classify_functor, enumerate_functors, full_subcategory, validate_category, validate_functor, FinCategory, Functor, Obj};
use crate::monadicity::{
    audit_with, check_monadic_iff_left_adjoint, decide_composite_monadicity, decide_monadicity, dualize, AuditOptions,
    AuditReport, MonadicityReport, ShapeFamily, Verdict, SCHEMA,
};
use crate::prof::Distributor;
use crate::reladj::{find_left_relative_adjoint, RelativeAdjunction, TieBreak};
use crate::relmon::{enumerate_relative_monads, monad_from_adjunction, RelativeMonad};

/// Theorem names, in report order.
pub const THEOREMS: [&str; 11] = [
    "laws",
    "resolution",
    "forgetful_creation",
    "algebra_object",
    "monadicity",
    "degenerate_root",
    "composite",
    "left_adjoint",
    "transport",
    "tight_cells",
    "duality",
];

const MODES: [Mode; 2] = [Mode::Strict, Mode::Nonstrict];
const MAX_NOTES: usize = 8;

/// Outcomes ordered by increasing severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Skipped,
    Inconclusive,
    InvalidInput,
    BudgetExceeded,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOptions {
    pub shapes: ShapeBounds,
    pub element_cap: usize,
    pub cocone_cap: usize,
    pub limits: bool,
    /// Monads per instance, and per free functor when monads are stacked.
    pub max_monads: usize,
    /// Functors enumerated per pair of categories.
    pub max_functors: usize,
    /// Commuting triangles of forgetful functors per instance.
    pub max_triangles: usize,
    pub grade_bound: usize,
    /// Theorems to run; empty means all.
    pub only: Vec<String>,
    /// Search steps per instance.
    pub budget: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            shapes: ShapeBounds::default(),
            element_cap: 2,
            cocone_cap: 4,
            limits: true,
            max_monads: 4,
            max_functors: 64,
            max_triangles: 4,
            grade_bound: 1,
            only: Vec::new(),
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub outcome: Outcome,
    /// Individual comparisons made.
    pub checks: u64,
    pub notes: Vec<String>,
    /// Search steps spent (deterministic).
    pub steps: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub name: String,
    pub valid: bool,
    pub error: Option<String>,
    pub cells: BTreeMap<String, Cell>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub options: SuiteOptions,
    pub status: Outcome,
    pub instances: Vec<InstanceReport>,
    /// Theorem, then instance.
    pub matrix: BTreeMap<String, BTreeMap<String, Outcome>>,
}

impl SuiteReport {
    pub fn cells<'a>(&'a self, theorem: &'a str) -> impl Iterator<Item = (&'a str, &'a Cell)> + 'a {
        self.instances
            .iter()
            .filter_map(move |i| i.cells.get(theorem).map(|c| (i.name.as_str(), c)))
    }
}

/// An instance to check, or the reason it could not be loaded.
#[derive(Clone, Debug)]
pub enum SuiteInput {
    Instance(Box<Instance>),
    Invalid { name: String, error: Error },
}

/// Loads every bundle under `dir`: either `dir` itself or its immediate
/// subdirectories holding a `manifest.json`, in name order. Bundles that fail
/// to load become [`SuiteInput::Invalid`].
pub fn load_corpus(dir: &Path) -> Result<Vec<SuiteInput>> {
    let load = |path: &Path, name: String| match load_instance(path) {
        Ok(inst) => SuiteInput::Instance(Box::new(inst)),
        Err(error) => SuiteInput::Invalid { name, error },
    };
    if dir.join("manifest.json").is_file() {
        let name = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        return Ok(vec![load(dir, name)]);
    }
    let entries = fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut dirs: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("manifest.json").is_file())
        .collect();
    dirs.sort();
    Ok(dirs
        .iter()
        .map(|p| load(p, p.file_name().unwrap().to_string_lossy().into_owned()))
        .collect())
}

/// Runs every selected theorem check on every instance.
pub fn run_theorem_suite(inputs: &[SuiteInput], opts: &SuiteOptions) -> Result<SuiteReport> {
    let family = ShapeFamily::conical(opts.shapes, opts.element_cap, &Budget::new(opts.budget))?;
    let selected: Vec<&str> = THEOREMS
        .iter()
        .copied()
        .filter(|t| opts.only.is_empty() || opts.only.iter().any(|o| o == t))
        .collect();
    let mut instances = Vec::new();
    for input in inputs {
        instances.push(match input {
            SuiteInput::Invalid { name, error } => InstanceReport {
                name: name.clone(),
                valid: false,
                error: Some(error.to_string()),
                cells: selected
                    .iter()
                    .map(|t| {
                        let cell = Cell {
                            outcome: Outcome::InvalidInput,
                            checks: 0,
                            notes: Vec::new(),
                            steps: 0,
                            elapsed: Duration::ZERO,
                        };
                        (t.to_string(), cell)
                    })
                    .collect(),
            },
            SuiteInput::Instance(inst) => run_instance(inst, &selected, &family, opts),
        });
    }
    let mut matrix: BTreeMap<String, BTreeMap<String, Outcome>> = BTreeMap::new();
    for inst in &instances {
        for (t, cell) in &inst.cells {
            matrix.entry(t.clone()).or_default().insert(inst.name.clone(), cell.outcome);
        }
    }
    let status = instances
        .iter()
        .flat_map(|i| i.cells.values().map(|c| c.outcome))
        .max()
        .unwrap_or(Outcome::Pass);
    let status = if status == Outcome::Skipped { Outcome::Pass } else { status };
    Ok(SuiteReport { schema: SCHEMA, options: opts.clone(), status, instances, matrix })
}

/// Failures, inconclusive items and notes gathered by one check.
#[derive(Default)]
struct Tally {
    checks: u64,
    fails: Vec<String>,
    inconclusive: Vec<String>,
    notes: Vec<String>,
    skipped: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fails.push(what());
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    fn skip(reason: &str) -> Self {
        Self { skipped: Some(reason.into()), ..Self::default() }
    }
}

struct Ctx<'a> {
    inst: &'a Instance,
    opts: &'a SuiteOptions,
    family: &'a ShapeFamily,
    budget: Budget,
    monads: Vec<(&'a str, &'a RelativeMonad)>,
    algs: Vec<AlgebraCategory>,
    forgetful_audits: HashMap<(usize, Mode), AuditReport>,
}

fn run_instance(inst: &Instance, selected: &[&str], family: &ShapeFamily, opts: &SuiteOptions) -> InstanceReport {
    let budget = Budget::new(opts.budget);
    let monads: Vec<_> = inst.monads.iter().take(opts.max_monads).map(|(n, e)| (n.as_str(), &e.monad)).collect();
    let algs: Result<Vec<_>> = monads.iter().map(|(_, m)| build_algebra_category(m, &budget)).collect();
    let mut report = InstanceReport { name: inst.name.clone(), valid: true, error: None, cells: BTreeMap::new() };
    let algs = match algs {
        Ok(a) => a,
        Err(e) => {
            report.error = Some(format!("algebra categories: {e}"));
            for t in selected {
                let outcome = error_outcome(&e);
                let cell = Cell { outcome, checks: 0, notes: vec![e.to_string()], steps: 0, elapsed: Duration::ZERO };
                report.cells.insert(t.to_string(), cell);
            }
            return report;
        }
    };
    let mut ctx = Ctx { inst, opts, family, budget, monads, algs, forgetful_audits: HashMap::new() };
    for &theorem in selected {
        let (start, clock) = (ctx.budget.used(), Instant::now());
        let result = match theorem {
            "laws" => laws(&ctx),
            "resolution" => resolution(&ctx),
            "forgetful_creation" => forgetful_creation(&mut ctx),
            "algebra_object" => algebra_object(&ctx),
            "monadicity" => monadicity(&mut ctx),
            "degenerate_root" => degenerate_root(&ctx),
            "composite" => composite(&ctx),
            "left_adjoint" => left_adjoint(&ctx),
            "transport" => transport(&ctx),
            "tight_cells" => tight_cells(&ctx),
            "duality" => duality(&ctx),
            other => unreachable!("unknown theorem {other}"),
        };
        let steps = ctx.budget.used().saturating_sub(start);
        let cell = match result {
            Ok(t) => to_cell(t, steps, clock.elapsed()),
            Err(e) => Cell {
                outcome: error_outcome(&e),
                checks: 0,
                notes: vec![e.to_string()],
                steps,
                elapsed: clock.elapsed(),
            },
        };
        report.cells.insert(theorem.to_string(), cell);
    }
    report
}

fn error_outcome(e: &Error) -> Outcome {
    match e {
        Error::BudgetExceeded { .. } => Outcome::BudgetExceeded,
        _ => Outcome::Fail,
    }
}

fn to_cell(t: Tally, steps: u64, elapsed: Duration) -> Cell {
    let outcome = if !t.fails.is_empty() {
        Outcome::Fail
    } else if !t.inconclusive.is_empty() {
        Outcome::Inconclusive
    } else if t.skipped.is_some() {
        Outcome::Skipped
    } else {
        Outcome::Pass
    };
    let mut notes: Vec<String> = t.skipped.into_iter().collect();
    notes.extend(t.fails.into_iter().map(|f| format!("fail: {f}")));
    notes.extend(t.inconclusive.into_iter().map(|f| format!("inconclusive: {f}")));
    notes.extend(t.notes);
    notes.truncate(MAX_NOTES);
    Cell { outcome, checks: t.checks, notes, steps, elapsed }
}

fn audit_options(opts: &SuiteOptions, mode: Mode) -> AuditOptions {
    AuditOptions { mode, cocone_cap: opts.cocone_cap, limits: opts.limits, targeted: true }
}

fn audit(ctx: &Ctx, j: &Functor, r: &Functor, mode: Mode) -> Result<AuditReport> {
    let decided = decide_monadicity(j, r, mode, false, &ctx.budget)?;
    audit_with(j, r, &decided, ctx.family, audit_options(ctx.opts, mode), &ctx.budget)
}

fn forgetful_audit(ctx: &mut Ctx, k: usize, mode: Mode) -> Result<AuditReport> {
    if let Some(rep) = ctx.forgetful_audits.get(&(k, mode)) {
        return Ok(rep.clone());
    }
    let rep = audit(ctx, &ctx.monads[k].1.j, &ctx.algs[k].u, mode)?;
    ctx.forgetful_audits.insert((k, mode), rep.clone());
    Ok(rep)
}

fn general_failures(rep: &AuditReport) -> u64 {
    rep.census.get("failures").copied().unwrap_or(0)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Strict => "strict",
        Mode::Nonstrict => "nonstrict",
    }
}

/// Every component survives a round trip through its serialized form.
fn laws(ctx: &Ctx) -> Result<Tally> {
    let inst = ctx.inst;
    let mut t = Tally::default();
    for (name, c) in &inst.categories {
        let ok = validate_category(&c.to_desc()).is_ok_and(|d| d == **c);
        t.check(ok, || format!("category {name}"));
    }
    for (name, e) in &inst.functors {
        let f = &e.functor;
        let ok = validate_functor(&f.to_desc(), f.dom(), f.cod()).is_ok_and(|g| g == *f);
        t.check(ok, || format!("functor {name}"));
    }
    for (name, e) in &inst.distributors {
        let p = &e.distributor;
        let ok = Distributor::from_desc(&p.to_desc(), p.src(), p.tgt()).is_ok_and(|q| q == *p);
        t.check(ok, || format!("distributor {name}"));
    }
    for (name, e) in &inst.monads {
        let m = &e.monad;
        let ok = RelativeMonad::from_desc(&m.j, &m.t, &m.to_desc()).is_ok_and(|n| n == *m);
        t.check(ok, || format!("monad {name}"));
    }
    for (name, e) in &inst.adjunctions {
        let a = &e.adjunction;
        let ok = RelativeAdjunction::from_desc(&a.j, &a.l, &a.r, &a.to_desc()).is_ok_and(|b| b == *a);
        t.check(ok, || format!("adjunction {name}"));
    }
    Ok(t)
}

/// Adjunctions induce lawful monads, and the algebra resolution of each
/// monad induces that monad again.
fn resolution(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let mut adjunctions: Vec<(String, RelativeAdjunction)> =
        ctx.inst.adjunctions.iter().map(|(n, e)| (n.clone(), e.adjunction.clone())).collect();
    if let (Some(j), Some(r)) = (ctx.inst.root(), ctx.inst.right()) {
        if let Some(adj) = find_left_relative_adjoint(j, r, TieBreak::Least, &ctx.budget)? {
            adjunctions.push(("discovered".into(), adj));
        }
    }
    for (name, adj) in &adjunctions {
        let res = monad_from_adjunction(adj);
        t.check(res.is_ok(), || format!("adjunction {name}: {}", res.as_ref().unwrap_err()));
    }
    for (k, (name, m)) in ctx.monads.iter().enumerate() {
        let induced = monad_from_adjunction(&ctx.algs[k].resolution()?)?;
        t.check(induced == **m, || format!("monad {name} is not recovered from its algebras"));
    }
    Ok(t)
}

/// `u_T` is conservative and creates limits and `j`-absolute colimits.
fn forgetful_creation(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for k in 0..ctx.monads.len() {
        let name = ctx.monads[k].0;
        let cls = classify_functor(&ctx.algs[k].u);
        t.check(cls.conservative, || format!("u_{name} is not conservative"));
        for mode in MODES {
            let rep = forgetful_audit(ctx, k, mode)?;
            let n = general_failures(&rep);
            t.check(n == 0, || {
                let first = rep.failures.first().map(|f| f.detail.clone()).unwrap_or_default();
                format!("u_{name} {}: {n} creation failures, first: {first}", mode_name(mode))
            });
            t.checks += rep.census.get("colimit_checks").copied().unwrap_or(0)
                + rep.census.get("limit_checks").copied().unwrap_or(0);
        }
    }
    Ok(t)
}

/// The constructed algebra category satisfies the universal property, and
/// dropping one algebra breaks it.
fn algebra_object(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let shapes = vec![
        Arc::new(FinCategory::terminal()),
        crate::corpus::interval(),
        Arc::new(FinCategory::discrete(["a", "b"])),
    ];
    let o = AlgebraObjectOptions { shapes, grade_bound: ctx.opts.grade_bound, distributor_cap: 1 };
    for (k, (name, m)) in ctx.monads.iter().enumerate() {
        let alg = &ctx.algs[k];
        let rep = verify_algebra_object(&alg.as_algebra(), m, &o, &ctx.budget)?;
        t.check(rep.passed, || format!("Alg({name}): {:?}", rep.failures.first()));
        let n = alg.category.num_objects();
        if n == 0 {
            continue;
        }
        let keep: Vec<Obj> = (0..n - 1).map(Obj).collect();
        let (_, incl) = full_subcategory(&alg.category, &keep);
        let u = incl.then(&alg.u)?;
        let cand = Algebra::from_fn(m, &u, |a, x, f| alg.alpha(incl.ob(x), a, f))?;
        let rep = verify_algebra_object(&cand, m, &o, &ctx.budget)?;
        let caught = !rep.passed && rep.failures.first().is_some_and(|f| f.clause == 1);
        t.check(caught, || format!("Alg({name}) minus one algebra was not rejected by clause 1"));
    }
    Ok(t)
}

/// The monadicity theorem: for dense roots, the verdict agrees with the
/// creation audit.
fn monadicity(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let Some(j) = ctx.inst.root().cloned() else { return Ok(Tally::skip("no root")) };
    let dense = is_dense(&j, &ctx.budget)?.dense;
    if !dense {
        t.note("root is not dense: verdicts recorded, no cross-check".into());
    }
    let record = |t: &mut Tally, what: &str, rep: &AuditReport| {
        t.checks += 1;
        for d in &rep.discrepancies {
            t.fails.push(format!("{what}: {d}"));
        }
        if rep.inconclusive {
            t.inconclusive.push(format!("{what}: negative verdict with no failing audited item"));
        }
        if dense && rep.verdict == Verdict::NotMonadic {
            t.note(format!("{what}: not monadic, {} audited failures", rep.failure_count()));
        }
    };
    for mode in MODES {
        if let Some(r) = ctx.inst.right().cloned() {
            let rep = audit(ctx, &j, &r, mode)?;
            record(&mut t, &format!("r {}", mode_name(mode)), &rep);
        }
        for k in 0..ctx.monads.len() {
            let rep = forgetful_audit(ctx, k, mode)?;
            let what = format!("u_{} {}", ctx.monads[k].0, mode_name(mode));
            record(&mut t, &what, &rep);
            t.check(rep.verdict.is_monadic(), || format!("{what} is not monadic"));
        }
    }
    Ok(t)
}

/// With an empty root, monadicity is exactly invertibility of `r`.
fn degenerate_root(ctx: &Ctx) -> Result<Tally> {
    let Some(j) = ctx.inst.root() else { return Ok(Tally::skip("no root")) };
    if j.dom().num_objects() > 0 {
        return Ok(Tally::skip("root is not empty"));
    }
    let mut t = Tally::default();
    for c in ctx.inst.categories.values() {
        let functors = enumerate_functors(c, j.cod(), &ctx.budget)?;
        for r in functors.iter().take(ctx.opts.max_functors) {
            let cls = classify_functor(r);
            for (mode, expect) in [(Mode::Strict, cls.is_iso), (Mode::Nonstrict, cls.is_equivalence)] {
                let rep = decide_monadicity(j, r, mode, false, &ctx.budget)?;
                t.check(rep.verdict.is_monadic() == expect, || {
                    format!("{} verdict {:?} but invertibility {expect}", mode_name(mode), rep.verdict)
                });
            }
        }
    }
    Ok(t)
}

/// Monads over the free functor of each algebra category, plus the points of
/// that category, as right functors for the composite theorem.
fn stacked(ctx: &Ctx, alg: &AlgebraCategory) -> Result<Vec<Functor>> {
    let mut out: Vec<Functor> = Vec::new();
    for s in enumerate_relative_monads(&alg.f, &ctx.budget)?.into_iter().take(ctx.opts.max_monads) {
        out.push(build_algebra_category(&s, &ctx.budget)?.u);
    }
    let t = Arc::new(FinCategory::terminal());
    for x in alg.category.objects().take(ctx.opts.max_monads) {
        out.push(Functor::constant(&t, &alg.category, x));
    }
    Ok(out)
}

/// `r` is `ℓ'`-monadic exactly when `r;r'` is `j`-monadic, for `r' = u_T`.
fn composite(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (k, (name, m)) in ctx.monads.iter().enumerate() {
        let alg = &ctx.algs[k];
        for r in stacked(ctx, alg)? {
            for mode in MODES {
                match decide_composite_monadicity(&m.j, &alg.u, &r, mode, &ctx.budget) {
                    Ok(rep) => {
                        t.checks += 1;
                        if rep.algebra_counts_agree == Some(false) {
                            t.fails.push(format!("over u_{name}: algebra counts differ"));
                        }
                    }
                    Err(e @ Error::TheoremViolation(_)) => t.fails.push(format!("over u_{name}: {e}")),
                    Err(e @ Error::PremiseFail(_)) => t.fails.push(format!("u_{name} {}: {e}", mode_name(mode))),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(t)
}

/// `u_T` is monadic exactly when it has a left adjoint, over the identity.
fn left_adjoint(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    for (name, m) in &ctx.monads {
        let id = Functor::identity(m.j.cod());
        for mode in MODES {
            match check_monadic_iff_left_adjoint(&m.j, &id, m, mode, &ctx.budget) {
                Ok(rep) => {
                    t.checks += 1;
                    t.note(format!(
                        "{name} {}: {}",
                        mode_name(mode),
                        if rep.has_adjoint { "left adjoint, monadic" } else { "no left adjoint, not monadic" }
                    ));
                }
                Err(e @ Error::TheoremViolation(_)) => t.fails.push(format!("{name}: {e}")),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(t)
}

/// Transport of algebras along the resolution of each monad is a bijection.
fn transport(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let shapes = [Arc::new(FinCategory::terminal()), crate::corpus::interval()];
    for (k, (name, _)) in ctx.monads.iter().enumerate() {
        let base = &ctx.algs[k];
        for s in enumerate_relative_monads(&base.f, &ctx.budget)?.into_iter().take(ctx.opts.max_monads) {
            let rep = transport_algebras(base, &s, &shapes, ctx.opts.grade_bound.min(1), &ctx.budget)?;
            t.check(rep.objects_bijective && rep.round_trip && rep.morphisms_bijective, || {
                format!("over Alg({name}): {rep:?}")
            });
        }
    }
    Ok(t)
}

/// Functors between algebra categories commuting with the forgetful
/// functors create limits and `f_T`-absolute colimits, and are monadic
/// exactly when they have a left adjoint.
fn tight_cells(ctx: &Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let mut triangles = 0;
    'pairs: for (k, (name, m)) in ctx.monads.iter().enumerate() {
        for (k2, (name2, m2)) in ctx.monads.iter().enumerate() {
            if m.j != m2.j {
                continue;
            }
            let (alg, alg2) = (&ctx.algs[k], &ctx.algs[k2]);
            for i in enumerate_functors(&alg2.category, &alg.category, &ctx.budget)? {
                if i.then(&alg.u)? != alg2.u {
                    continue;
                }
                if triangles == ctx.opts.max_triangles {
                    break 'pairs;
                }
                triangles += 1;
                let what = format!("Alg({name2}) -> Alg({name})");
                for mode in MODES {
                    let rep = audit(ctx, &alg.f, &i, mode)?;
                    let n = general_failures(&rep);
                    t.check(n == 0, || format!("{what} {}: {n} creation failures", mode_name(mode)));
                    let d = decide_monadicity(&Functor::identity(&alg.category), &i, mode, false, &ctx.budget)?;
                    t.check(d.verdict != Verdict::NotMonadic, || {
                        format!("{what} {}: has a left adjoint but is not monadic", mode_name(mode))
                    });
                    t.note(format!("{what} {}: {:?}", mode_name(mode), d.verdict));
                }
            }
        }
    }
    if triangles == 0 {
        return Ok(Tally::skip("no commuting triangles"));
    }
    Ok(t)
}

fn same_decision(a: &MonadicityReport, b: &MonadicityReport) -> bool {
    a.verdict == b.verdict && a.adjoint == b.adjoint && a.census.get("algebra_objects") == b.census.get("algebra_objects")
}

/// Comonadicity of the opposites agrees with monadicity of the originals.
fn duality(ctx: &Ctx) -> Result<Tally> {
    let Some(j) = ctx.inst.root() else { return Ok(Tally::skip("no root")) };
    let mut t = Tally::default();
    let mut pairs: Vec<(String, &Functor, &Functor)> = Vec::new();
    if let Some(r) = ctx.inst.right() {
        pairs.push(("r".into(), j, r));
    }
    for (k, (name, m)) in ctx.monads.iter().enumerate() {
        pairs.push((format!("u_{name}"), &m.j, &ctx.algs[k].u));
    }
    for (what, j, r) in pairs {
        let (jo, ro) = dualize(j, r);
        for mode in MODES {
            let a = decide_monadicity(j, r, mode, false, &ctx.budget)?;
            let b = decide_monadicity(&jo, &ro, mode, true, &ctx.budget)?;
            t.check(same_decision(&a, &b), || {
                format!("{what} {}: {:?} but dual {:?}", mode_name(mode), a.verdict, b.verdict)
            });
        }
    }
    Ok(t)
}
