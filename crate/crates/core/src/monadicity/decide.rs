use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::alg::{build_algebra_category, comparison_functor, AlgebraCategory};
use crate::budget::Budget;
use crate::colim::{is_dense, Mode};
use crate::error::{Error, Result};
use crate::fincat::{classify_functor, opposite, Functor, FunctorClassification};
use crate::reladj::{find_left_relative_adjoint, RelativeAdjunction, TieBreak};
use crate::relmon::{monad_from_adjunction, MonadDesc};

/// Version of every JSON report emitted by the engine.
pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Monadic,
    NotMonadic,
    NoAdjoint,
}

impl Verdict {
    pub fn is_monadic(self) -> bool {
        self == Verdict::Monadic
    }
}

/// The resolution data behind a report, for follow-up checks.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub adjunction: RelativeAdjunction,
    pub algebras: AlgebraCategory,
    /// The comparison `K: C -> Alg(T)`.
    pub comparison: Functor,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonadicityReport {
    pub schema: u32,
    pub verdict: Verdict,
    pub mode: Mode,
    pub co: bool,
    /// Density of the root; informational, the decision does not need it.
    pub dense: bool,
    pub adjoint: bool,
    pub monad: Option<MonadDesc>,
    pub comparison: Option<FunctorClassification>,
    pub witnesses: Vec<String>,
    pub census: BTreeMap<String, u64>,
    /// Search steps spent per phase (deterministic, unlike wall time).
    pub durations: BTreeMap<String, u64>,
    #[serde(skip)]
    pub resolved: Option<Resolved>,
}

/// Opposites of a root and a functor into the same category, sharing `E^op`.
pub fn dualize(j: &Functor, r: &Functor) -> (Functor, Functor) {
    let e = Arc::new(opposite(j.cod()));
    let a = Arc::new(opposite(j.dom()));
    let c = if Arc::ptr_eq(j.dom(), r.dom()) { a.clone() } else { Arc::new(opposite(r.dom())) };
    (j.op_with(&a, &e), r.op_with(&c, &e))
}

struct Phases<'a> {
    budget: &'a Budget,
    mark: u64,
    out: BTreeMap<String, u64>,
}

impl<'a> Phases<'a> {
    fn new(budget: &'a Budget) -> Self {
        Self { budget, mark: budget.used(), out: BTreeMap::new() }
    }

    fn done(&mut self, phase: &str) {
        let now = self.budget.used();
        self.out.insert(phase.to_string(), now - self.mark);
        self.mark = now;
    }
}

/// Decides (co)monadicity of `r` relative to `j` through the comparison
/// functor: strict when it is an isomorphism, non-strict when it is an
/// equivalence. With `co`, both functors are dualized first, so the answer
/// is about a right `j`-coadjoint and coalgebras.
pub fn decide_monadicity(
    j: &Functor,
    r: &Functor,
    mode: Mode,
    co: bool,
    budget: &Budget,
) -> Result<MonadicityReport> {
    if co {
        let (jo, ro) = dualize(j, r);
        let mut report = decide_monadicity(&jo, &ro, mode, false, budget)?;
        report.co = true;
        return Ok(report);
    }
    let mut phases = Phases::new(budget);
    let dense = is_dense(j, budget)?.dense;
    phases.done("density");
    let mut report = MonadicityReport {
        schema: SCHEMA,
        verdict: Verdict::NoAdjoint,
        mode,
        co,
        dense,
        adjoint: false,
        monad: None,
        comparison: None,
        witnesses: Vec::new(),
        census: BTreeMap::new(),
        durations: BTreeMap::new(),
        resolved: None,
    };
    report.census.insert("root_objects".into(), j.dom().num_objects() as u64);
    report.census.insert("domain_objects".into(), r.dom().num_objects() as u64);
    report.census.insert("domain_morphisms".into(), r.dom().num_morphisms() as u64);
    let adj = find_left_relative_adjoint(j, r, TieBreak::Least, budget)?;
    phases.done("adjoint");
    let Some(adj) = adj else {
        report.witnesses.push("no left relative adjoint: some root object has no representation".into());
        report.durations = phases.out;
        return Ok(report);
    };
    report.adjoint = true;
    let monad = monad_from_adjunction(&adj)?;
    report.monad = Some(monad.to_desc());
    phases.done("monad");
    let algebras = build_algebra_category(&monad, budget)?;
    phases.done("algebras");
    report.census.insert("algebra_objects".into(), algebras.category.num_objects() as u64);
    report.census.insert("algebra_morphisms".into(), algebras.category.num_morphisms() as u64);
    let k = comparison_functor(&adj, &algebras, budget)?;
    if !k.over_right || !k.under_left {
        return Err(Error::TheoremViolation(
            "the comparison functor is not a morphism of resolutions".into(),
        ));
    }
    phases.done("comparison");
    let class = classify_functor(&k.functor);
    phases.done("classify");
    let ok = match mode {
        Mode::Strict => class.is_iso,
        Mode::Nonstrict => class.is_equivalence,
    };
    report.verdict = if ok { Verdict::Monadic } else { Verdict::NotMonadic };
    if !ok {
        let what = match mode {
            Mode::Strict => "comparison not iso",
            Mode::Nonstrict => "comparison not an equivalence",
        };
        let flags: &[&str] = match mode {
            Mode::Strict => &["faithful", "full", "bijective_on_objects", "bijective_on_morphisms"],
            Mode::Nonstrict => &["faithful", "full", "essentially_surjective"],
        };
        let details: Vec<String> = class
            .witnesses
            .iter()
            .filter(|w| flags.contains(&w.flag))
            .map(|w| format!("{}: {}", w.flag, w.detail))
            .collect();
        if details.is_empty() {
            report.witnesses.push(what.to_string());
        }
        for d in details {
            report.witnesses.push(format!("{what}: {d}"));
        }
    }
    report.comparison = Some(class);
    report.resolved = Some(Resolved { adjunction: adj, algebras, comparison: k.functor });
    report.durations = phases.out;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::Obj;
    use crate::relmon::enumerate_relative_monads;
    use crate::testcats::{bz2, disc2, indiscrete, interval, parallel, terminal};

    fn b() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn identity_is_strictly_monadic() {
        for e in [terminal(), disc2(), interval(), bz2(), parallel()] {
            let id = Functor::identity(&e);
            for mode in [Mode::Strict, Mode::Nonstrict] {
                let rep = decide_monadicity(&id, &id, mode, false, &b()).unwrap();
                assert_eq!(rep.verdict, Verdict::Monadic);
                assert!(rep.dense);
            }
        }
    }

    #[test]
    fn empty_root_is_monadic_exactly_for_isomorphisms() {
        // Interval -> Terminal is not invertible, the identity is
        let t = terminal();
        let e = interval();
        let bang = Functor::to_terminal(&e).with_cod(&t);
        let root = Functor::empty_into(&t);
        let rep = decide_monadicity(&root, &bang, Mode::Strict, false, &b()).unwrap();
        assert_eq!(rep.verdict, Verdict::NotMonadic);
        assert!(rep.witnesses[0].starts_with("comparison not iso"));
        let id = Functor::identity(&t);
        let rep = decide_monadicity(&root, &id, Mode::Strict, false, &b()).unwrap();
        assert_eq!(rep.verdict, Verdict::Monadic);
    }

    #[test]
    fn equivalence_that_is_not_iso() {
        // Indisc2 -> Terminal: an equivalence, not an isomorphism
        let t = terminal();
        let i2 = indiscrete(2);
        let r = Functor::to_terminal(&i2).with_cod(&t);
        let j = Functor::identity(&t);
        let strict = decide_monadicity(&j, &r, Mode::Strict, false, &b()).unwrap();
        let weak = decide_monadicity(&j, &r, Mode::Nonstrict, false, &b()).unwrap();
        assert_eq!(strict.verdict, Verdict::NotMonadic);
        assert_eq!(weak.verdict, Verdict::Monadic);
    }

    #[test]
    fn missing_adjoint() {
        let t = terminal();
        let d = disc2();
        let r = Functor::to_terminal(&d).with_cod(&t);
        let rep = decide_monadicity(&Functor::identity(&t), &r, Mode::Strict, false, &b()).unwrap();
        assert_eq!(rep.verdict, Verdict::NoAdjoint);
        assert!(!rep.adjoint);
    }

    #[test]
    fn forgetful_functors_are_monadic() {
        let m = bz2();
        let j = Functor::constant(&terminal(), &m, Obj(0));
        for t in enumerate_relative_monads(&j, &b()).unwrap() {
            let alg = build_algebra_category(&t, &b()).unwrap();
            let rep = decide_monadicity(&j, &alg.u, Mode::Strict, false, &b()).unwrap();
            assert_eq!(rep.verdict, Verdict::Monadic);
        }
    }

    #[test]
    fn dualizing_twice_is_the_identity() {
        let e = interval();
        let t = terminal();
        let j = Functor::constant(&t, &e, Obj(1));
        let r = Functor::identity(&e);
        for mode in [Mode::Strict, Mode::Nonstrict] {
            let plain = decide_monadicity(&j, &r, mode, false, &b()).unwrap();
            let (jo, ro) = dualize(&j, &r);
            let back = decide_monadicity(&jo, &ro, mode, true, &b()).unwrap();
            assert_eq!(plain.verdict, back.verdict);
            assert_eq!(plain.census, back.census);
        }
    }

    #[test]
    fn report_serializes_with_schema() {
        let id = Functor::identity(&bz2());
        let rep = decide_monadicity(&id, &id, Mode::Strict, false, &b()).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["verdict"], "monadic");
        assert_eq!(v["mode"], "strict");
        assert!(v["census"].is_object() && v["durations"].is_object());
    }
}
