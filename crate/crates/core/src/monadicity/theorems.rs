use serde::Serialize;

use super::decide::{decide_monadicity, MonadicityReport, SCHEMA};
use crate::alg::build_algebra_category;
use crate::budget::Budget;
use crate::colim::{is_dense, Mode};
use crate::error::{Error, Result};
use crate::fincat::Functor;
use crate::reladj::{find_left_relative_adjoint, TieBreak};
use crate::relmon::RelativeMonad;

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Strict => "strictly",
        Mode::Nonstrict => "non-strictly",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositeReport {
    pub schema: u32,
    pub mode: Mode,
    /// `r'` relative to `j`.
    pub premise: MonadicityReport,
    /// `r` relative to the left adjoint `ℓ'` of `r'`.
    pub left: MonadicityReport,
    /// `r;r'` relative to `j`.
    pub right: MonadicityReport,
    /// Both sides have equally many algebras, when both have a monad.
    pub algebra_counts_agree: Option<bool>,
}

impl CompositeReport {
    pub fn monadic(&self) -> bool {
        self.left.verdict.is_monadic()
    }
}

/// Given `r'` (non)strictly `j`-monadic with left adjoint `ℓ'`, decides
/// whether `r` is `ℓ'`-monadic and whether `r;r'` is `j`-monadic, and fails
/// with `TheoremViolation` if the answers differ.
pub fn decide_composite_monadicity(
    j: &Functor,
    rprime: &Functor,
    r: &Functor,
    mode: Mode,
    budget: &Budget,
) -> Result<CompositeReport> {
    let premise = decide_monadicity(j, rprime, mode, false, budget)?;
    let Some(resolved) = premise.resolved.as_ref().filter(|_| premise.verdict.is_monadic()) else {
        return Err(Error::PremiseFail(format!(
            "r' is not {} monadic relative to j",
            mode_name(mode)
        )));
    };
    let lprime = resolved.adjunction.l.clone();
    let left = decide_monadicity(&lprime, r, mode, false, budget)?;
    let right = decide_monadicity(j, &r.then(rprime)?, mode, false, budget)?;
    if left.adjoint != right.adjoint {
        return Err(Error::TheoremViolation(format!(
            "r has {} left ℓ'-adjoint but r;r' has {} left j-adjoint",
            if left.adjoint { "a" } else { "no" },
            if right.adjoint { "a" } else { "no" }
        )));
    }
    if left.verdict.is_monadic() != right.verdict.is_monadic() {
        return Err(Error::TheoremViolation(format!(
            "r is{} {} ℓ'-monadic but r;r' is{} {} j-monadic",
            if left.verdict.is_monadic() { "" } else { " not" },
            mode_name(mode),
            if right.verdict.is_monadic() { "" } else { " not" },
            mode_name(mode)
        )));
    }
    let count = |rep: &MonadicityReport| rep.census.get("algebra_objects").copied();
    let algebra_counts_agree = match (count(&left), count(&right)) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    if algebra_counts_agree == Some(false) {
        return Err(Error::TheoremViolation(
            "transport fails: the two monads have different numbers of algebras".into(),
        ));
    }
    Ok(CompositeReport { schema: SCHEMA, mode, premise, left, right, algebra_counts_agree })
}

#[derive(Clone, Debug, Serialize)]
pub struct LeftAdjointReport {
    pub schema: u32,
    pub mode: Mode,
    pub algebra_objects: usize,
    /// `u_T` has a left `j'`-adjoint.
    pub has_adjoint: bool,
    /// `u_T` is `j'`-monadic.
    pub monadic: bool,
    pub report: MonadicityReport,
}

/// For a `(j;j')`-monad `T` with `j'` dense: `u_T` is `j'`-monadic exactly
/// when it has a left `j'`-adjoint (algebra objects always exist here).
pub fn check_monadic_iff_left_adjoint(
    j: &Functor,
    jprime: &Functor,
    monad: &RelativeMonad,
    mode: Mode,
    budget: &Budget,
) -> Result<LeftAdjointReport> {
    if !is_dense(jprime, budget)?.dense {
        return Err(Error::Inapplicable("j' is not dense".into()));
    }
    if monad.j != j.then(jprime)? {
        return Err(Error::RootMismatch("the monad's root is not j;j'".into()));
    }
    let alg = build_algebra_category(monad, budget)?;
    let has_adjoint = find_left_relative_adjoint(jprime, &alg.u, TieBreak::Least, budget)?.is_some();
    let report = decide_monadicity(jprime, &alg.u, mode, false, budget)?;
    let monadic = report.verdict.is_monadic();
    if monadic != has_adjoint {
        return Err(Error::TheoremViolation(format!(
            "u_T {} a left j'-adjoint but is{} {} j'-monadic",
            if has_adjoint { "has" } else { "lacks" },
            if monadic { "" } else { " not" },
            mode_name(mode)
        )));
    }
    Ok(LeftAdjointReport {
        schema: SCHEMA,
        mode,
        algebra_objects: alg.category.num_objects(),
        has_adjoint,
        monadic,
        report,
    })
}
