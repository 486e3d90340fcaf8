use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::decide::{decide_monadicity, MonadicityReport, Verdict, SCHEMA};
use crate::budget::Budget;
use crate::colim::{
    check_colimit_creation_at, check_creation, colimiting_cocones, is_j_absolute, Cocone, Kind,
    Mode,
};
use crate::corpus::{small_categories, ShapeBounds};
use crate::error::{Error, Result};
use crate::fincat::{enumerate_functors, find_natural_iso, FinCategory, Functor, NatTrans};
use crate::prof::{enumerate_distributors, Distributor};
use crate::reladj::extension_cocone;

/// Weights over which creation is audited. Colimit weights are `p: X ⇸ Y`
/// with diagrams on `Y` among all categories within `bounds` and `X` among
/// the non-empty ones within `params`; limit weights mirror this, with the
/// diagram on the source.
#[derive(Clone, Debug)]
pub struct ShapeFamily {
    pub bounds: ShapeBounds,
    pub params: ShapeBounds,
    pub element_cap: usize,
    pub shapes: Vec<Arc<FinCategory>>,
    pub params_shapes: Vec<Arc<FinCategory>>,
    /// `(param index, shape index, p: param ⇸ shape)`.
    pub colimit_weights: Vec<(usize, usize, Distributor)>,
    /// `(shape index, param index, p: shape ⇸ param)`.
    pub limit_weights: Vec<(usize, usize, Distributor)>,
}

impl ShapeFamily {
    pub fn new(
        bounds: ShapeBounds,
        params: ShapeBounds,
        element_cap: usize,
        budget: &Budget,
    ) -> Result<Self> {
        let shapes = small_categories(bounds, budget)?;
        let params_shapes: Vec<_> = small_categories(params, budget)?
            .into_iter()
            .filter(|c| c.num_objects() > 0)
            .collect();
        let mut colimit_weights = Vec::new();
        let mut limit_weights = Vec::new();
        for (xi, x) in params_shapes.iter().enumerate() {
            for (yi, y) in shapes.iter().enumerate() {
                for p in enumerate_distributors(x, y, element_cap, budget)? {
                    colimit_weights.push((xi, yi, p));
                }
                for p in enumerate_distributors(y, x, element_cap, budget)? {
                    limit_weights.push((yi, xi, p));
                }
            }
        }
        Ok(Self { bounds, params, element_cap, shapes, params_shapes, colimit_weights, limit_weights })
    }

    /// Conical weights (the parameter category terminal) over all shapes
    /// within the bounds.
    pub fn conical(bounds: ShapeBounds, element_cap: usize, budget: &Budget) -> Result<Self> {
        Self::new(bounds, ShapeBounds { max_objects: 1, max_morphisms: 1 }, element_cap, budget)
    }

    /// Conical weights over every category with at most 2 objects and 6
    /// morphisms, at most 2 elements per component.
    pub fn standard(budget: &Budget) -> Result<Self> {
        Self::conical(ShapeBounds::default(), 2, budget)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuditOptions {
    pub mode: Mode,
    /// Downstairs colimiting cocones tried per weight and diagram.
    pub cocone_cap: usize,
    /// Also audit creation of every weighted limit that exists downstairs.
    pub limits: bool,
    /// Run the checks taken from the proof of the monadicity theorem; with
    /// only the bounded family, a negative verdict may go unexplained.
    pub targeted: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { mode: Mode::Strict, cocone_cap: 4, limits: false, targeted: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditFailure {
    pub kind: Kind,
    /// Kind, then `param/shape/weight` indices into the family.
    pub weight: String,
    pub diagram: Vec<String>,
    pub detail: String,
    /// The failure reproduced when checked again from scratch.
    pub reverified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetedResult {
    pub name: String,
    /// `None` when the check could not be attempted.
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub schema: u32,
    pub mode: Mode,
    pub verdict: Verdict,
    pub dense: bool,
    pub vacuous: Option<String>,
    pub census: BTreeMap<String, u64>,
    /// At most [`MAX_RECORDED`] failures; the census has the full count.
    pub failures: Vec<AuditFailure>,
    pub targeted: Vec<TargetedResult>,
    pub discrepancies: Vec<String>,
    /// A negative verdict that no audited item explains.
    pub inconclusive: bool,
    pub skipped: Vec<String>,
    pub durations: BTreeMap<String, u64>,
}

pub const MAX_RECORDED: usize = 16;

impl AuditReport {
    pub fn failure_count(&self) -> u64 {
        self.census.get("failures").copied().unwrap_or(0)
            + self.targeted.iter().filter(|t| t.passed == Some(false)).count() as u64
    }

    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn bump(census: &mut BTreeMap<String, u64>, key: &str) {
    *census.entry(key.to_string()).or_default() += 1;
}

fn names(f: &Functor) -> Vec<String> {
    f.object_map().iter().map(|&o| f.cod().object_name(o).to_string()).collect()
}

/// Runs creation checks for `r` over the family, plus the extensions used
/// in the proof of the monadicity theorem, and compares them with the
/// comparison-functor verdict.
pub fn creation_audit(
    j: &Functor,
    r: &Functor,
    family: &ShapeFamily,
    opts: AuditOptions,
    budget: &Budget,
) -> Result<AuditReport> {
    let decided = decide_monadicity(j, r, opts.mode, false, budget)?;
    audit_with(j, r, &decided, family, opts, budget)
}

/// [`creation_audit`] against an already computed decision.
pub fn audit_with(
    j: &Functor,
    r: &Functor,
    decided: &MonadicityReport,
    family: &ShapeFamily,
    opts: AuditOptions,
    budget: &Budget,
) -> Result<AuditReport> {
    let start = budget.used();
    let mut report = AuditReport {
        schema: SCHEMA,
        mode: opts.mode,
        verdict: decided.verdict,
        dense: decided.dense,
        vacuous: None,
        census: BTreeMap::new(),
        failures: Vec::new(),
        targeted: Vec::new(),
        discrepancies: Vec::new(),
        inconclusive: false,
        skipped: Vec::new(),
        durations: BTreeMap::new(),
    };
    let Some(resolved) = &decided.resolved else {
        report.vacuous = Some("no left relative adjoint: nothing to audit".into());
        return Ok(report);
    };
    general_items(j, r, family, opts, budget, &mut report)?;
    let mid = budget.used();
    report.durations.insert("weights".into(), mid - start);
    if opts.targeted {
        targeted_items(j, r, &resolved.comparison, &resolved.algebras.u, opts.mode, budget, &mut report)?;
    } else {
        report.skipped.push("targeted checks disabled".into());
    }
    report.durations.insert("targeted".into(), budget.used() - mid);

    if !report.dense {
        report.skipped.push("root is not dense: theorem cross-check skipped".into());
        return Ok(report);
    }
    let failures = report.failure_count();
    if report.verdict.is_monadic() && failures > 0 {
        let first = report
            .failures
            .first()
            .map(|f| f.detail.clone())
            .or_else(|| {
                report.targeted.iter().find(|t| t.passed == Some(false)).map(|t| t.name.clone())
            })
            .unwrap_or_default();
        report.discrepancies.push(format!(
            "monadic, yet {failures} audited item(s) fail creation (first: {first})"
        ));
    }
    if report.verdict == Verdict::NotMonadic && failures == 0 {
        report.inconclusive = true;
    }
    Ok(report)
}

fn general_items(
    j: &Functor,
    r: &Functor,
    family: &ShapeFamily,
    opts: AuditOptions,
    budget: &Budget,
    report: &mut AuditReport,
) -> Result<()> {
    let c = r.dom();
    let mut diagrams: Vec<Option<Vec<Functor>>> = vec![None; family.shapes.len()];
    let mut functors_on = |yi: usize| -> Result<Vec<Functor>> {
        if diagrams[yi].is_none() {
            diagrams[yi] = Some(enumerate_functors(&family.shapes[yi], c, budget)?);
        }
        Ok(diagrams[yi].clone().expect("filled above"))
    };
    for (wi, (xi, yi, p)) in family.colimit_weights.iter().enumerate() {
        let label = format!("colimit {xi}/{yi}/{wi}");
        bump(&mut report.census, "colimit_weights");
        for f in functors_on(*yi)? {
            bump(&mut report.census, "colimit_diagrams");
            let fr = f.then(r)?;
            let downs = colimiting_cocones(p, &fr, opts.cocone_cap, budget)?;
            let Some(first) = downs.first() else {
                bump(&mut report.census, "colimits_missing");
                continue;
            };
            if !is_j_absolute(j, first, budget)?.absolute {
                bump(&mut report.census, "colimits_not_absolute");
                continue;
            }
            bump(&mut report.census, "colimits_absolute");
            let tried: &[Cocone] = match opts.mode {
                Mode::Strict => &downs,
                // non-strict creation does not depend on the chosen colimit
                Mode::Nonstrict => &downs[..1],
            };
            for down in tried {
                let rep = check_colimit_creation_at(r, &f, down, opts.mode, budget)?;
                bump(&mut report.census, "colimit_checks");
                if !rep.passed {
                    bump(&mut report.census, "failures");
                    if report.failures.len() < MAX_RECORDED {
                        let again = check_colimit_creation_at(r, &f, down, opts.mode, budget)?;
                        report.failures.push(AuditFailure {
                            kind: Kind::Colimit,
                            weight: label.clone(),
                            diagram: names(&f),
                            detail: rep.violations.join("; "),
                            reverified: !again.passed,
                        });
                    }
                }
            }
        }
    }
    if !opts.limits {
        return Ok(());
    }
    for (wi, (xi, yi, p)) in family.limit_weights.iter().enumerate() {
        let label = format!("limit {xi}/{yi}/{wi}");
        bump(&mut report.census, "limit_weights");
        for g in functors_on(*xi)? {
            bump(&mut report.census, "limit_diagrams");
            match check_creation(r, p, &g, opts.mode, Kind::Limit, budget) {
                Err(Error::DownstairsMissing) => bump(&mut report.census, "limits_missing"),
                Err(e) => return Err(e),
                Ok(rep) => {
                    bump(&mut report.census, "limit_checks");
                    if !rep.passed {
                        bump(&mut report.census, "failures");
                        if report.failures.len() < MAX_RECORDED {
                            let again = check_creation(r, p, &g, opts.mode, Kind::Limit, budget)?;
                            report.failures.push(AuditFailure {
                                kind: Kind::Limit,
                                weight: label.clone(),
                                diagram: names(&g),
                                detail: rep.violations.join("; "),
                                reverified: !again.passed,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `K ▷ r` with its identity cocone (which must be a `j`-absolute colimit
/// with apex `u_T`), creation of it and of `1 ▷ r`, and the retraction
/// `K ▷ 1` obtained from the lift.
fn targeted_items(
    j: &Functor,
    r: &Functor,
    k: &Functor,
    u: &Functor,
    mode: Mode,
    budget: &Budget,
    report: &mut AuditReport,
) -> Result<()> {
    let c = r.dom();
    let id_c = Functor::identity(c);
    let ku = k.then(u)?;
    let rho = NatTrans {
        source: r.clone(),
        target: ku.clone(),
        components: c.objects().map(|x| r.cod().id(r.ob(x))).collect(),
    };
    let ext = extension_cocone(r, k, u, &rho);
    let colimiting = ext.violations().is_empty() && ext.is_colimit(budget)?;
    let absolute = is_j_absolute(j, &ext, budget)?.absolute;
    let ok = colimiting && absolute;
    report.targeted.push(TargetedResult {
        name: "K ▷ r = u_T".into(),
        passed: Some(ok),
        detail: format!("colimiting: {colimiting}, j-absolute: {absolute}"),
    });
    if !ok && report.dense {
        report
            .discrepancies
            .push("the comparison does not exhibit u_T as a j-absolute extension K ▷ r".into());
    }

    let lift = check_colimit_creation_at(r, &id_c, &ext, mode, budget)?;
    report.targeted.push(TargetedResult {
        name: "r creates K ▷ r".into(),
        passed: Some(lift.passed),
        detail: lift.violations.join("; "),
    });

    let id_rho = NatTrans::identity(r);
    let trivial = extension_cocone(r, &id_c, r, &id_rho);
    let own = check_colimit_creation_at(r, &id_c, &trivial, mode, budget)?;
    report.targeted.push(TargetedResult {
        name: "r creates 1 ▷ r".into(),
        passed: Some(own.passed),
        detail: own.violations.join("; "),
    });

    let (retraction, section) = match (&lift.lift, lift.passed) {
        (Some(up), true) => {
            let back = &up.apex;
            let kr = k.then(back)?;
            let rk = back.then(k)?;
            let id_alg = Functor::identity(k.cod());
            match mode {
                Mode::Strict => (
                    (Some(kr == id_c), "K;(K ▷ 1) is the identity".to_string()),
                    (Some(rk == id_alg), "(K ▷ 1);K is the identity".to_string()),
                ),
                Mode::Nonstrict => (
                    (
                        Some(find_natural_iso(&kr, &id_c, budget)?.is_some()),
                        "K;(K ▷ 1) is isomorphic to the identity".to_string(),
                    ),
                    (
                        Some(find_natural_iso(&rk, &id_alg, budget)?.is_some()),
                        "(K ▷ 1);K is isomorphic to the identity".to_string(),
                    ),
                ),
            }
        }
        _ => {
            let why = "not attempted: K ▷ r is not created".to_string();
            ((None, why.clone()), (None, why))
        }
    };
    report.targeted.push(TargetedResult {
        name: "retraction".into(),
        passed: retraction.0,
        detail: retraction.1,
    });
    report.targeted.push(TargetedResult {
        name: "section".into(),
        passed: section.0,
        detail: section.1,
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::build_algebra_category;
    use crate::fincat::Obj;
    use crate::relmon::enumerate_relative_monads;
    use crate::testcats::{disc2, indiscrete, interval, parallel, terminal};

    fn b() -> Budget {
        Budget::unlimited()
    }

    fn small_family() -> ShapeFamily {
        ShapeFamily::conical(ShapeBounds { max_objects: 2, max_morphisms: 3 }, 2, &b()).unwrap()
    }

    #[test]
    fn forgetful_functors_pass_every_item() {
        let fam = small_family();
        for e in [interval(), parallel()] {
            let j = Functor::identity(&e);
            for t in enumerate_relative_monads(&j, &b()).unwrap() {
                let alg = build_algebra_category(&t, &b()).unwrap();
                for mode in [Mode::Strict, Mode::Nonstrict] {
                    let opts = AuditOptions { mode, limits: true, ..AuditOptions::default() };
                    let rep = creation_audit(&j, &alg.u, &fam, opts, &b()).unwrap();
                    assert_eq!(rep.verdict, Verdict::Monadic);
                    assert_eq!(rep.failure_count(), 0, "{:?}", rep.failures);
                    assert!(rep.targeted.iter().all(|t| t.passed == Some(true)), "{:?}", rep.targeted);
                    assert!(rep.passed());
                    assert!(rep.census["colimits_absolute"] > 0);
                }
            }
        }
    }

    #[test]
    fn equivalence_fails_strict_creation() {
        // Indisc2 -> Terminal over the identity root: monadic only up to equivalence
        let t = terminal();
        let r = Functor::to_terminal(&indiscrete(2)).with_cod(&t);
        let j = Functor::identity(&t);
        let fam = small_family();
        let strict = creation_audit(&j, &r, &fam, AuditOptions::default(), &b()).unwrap();
        assert_eq!(strict.verdict, Verdict::NotMonadic);
        assert!(strict.failure_count() > 0);
        assert!(!strict.inconclusive && strict.passed());
        assert!(strict.failures.iter().all(|f| f.reverified));
        let opts = AuditOptions { mode: Mode::Nonstrict, ..AuditOptions::default() };
        let weak = creation_audit(&j, &r, &fam, opts, &b()).unwrap();
        assert_eq!(weak.verdict, Verdict::Monadic);
        assert_eq!(weak.failure_count(), 0, "{:?} {:?}", weak.failures, weak.targeted);
    }

    #[test]
    fn density_is_necessary() {
        // a point of Disc2 creates every colimit but is not invertible; the
        // empty root over Disc2 is not dense, so this is no counterexample
        let d = disc2();
        let r = Functor::constant(&terminal(), &d, Obj(0));
        let j = Functor::empty_into(&d);
        let rep = creation_audit(&j, &r, &small_family(), AuditOptions::default(), &b()).unwrap();
        assert_eq!(rep.verdict, Verdict::NotMonadic);
        assert!(!rep.dense);
        assert_eq!(rep.census.get("failures"), None);
        assert!(rep.census["colimits_absolute"] > 0);
        assert!(rep.discrepancies.is_empty());
        assert_eq!(rep.skipped.len(), 1);
    }

    #[test]
    fn no_adjoint_is_vacuous() {
        let t = terminal();
        let r = Functor::to_terminal(&disc2()).with_cod(&t);
        let rep = creation_audit(&Functor::identity(&t), &r, &small_family(), AuditOptions::default(), &b())
            .unwrap();
        assert_eq!(rep.verdict, Verdict::NoAdjoint);
        assert!(rep.vacuous.is_some());
    }
}
