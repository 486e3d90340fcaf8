use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use super::algebra::{enumerate_algebras, search_algebra_morphisms, Algebra};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{search_functors, FinCategory, Functor, Mor, Obj};
use crate::prof::{enumerate_distributors, hom_distributor, search_graded_cells, Distributor, MAX_GRADE};
use crate::relmon::RelativeMonad;

/// Factorizations `K: D -> M` of `alg` through `candidate = (u, α_u)` with
/// `K; u = e` and `α_u(1, K) = α`, counted up to `cap`; returns the first.
pub fn factor_through(
    candidate: &Algebra,
    alg: &Algebra,
    cap: usize,
    budget: &Budget,
) -> Result<(usize, Option<Functor>)> {
    let (d_cat, m_cat, u) = (alg.domain(), candidate.domain(), &candidate.carrier);
    let objs: Vec<Vec<Obj>> = d_cat
        .objects()
        .map(|d| {
            m_cat
                .objects()
                .filter(|&m| u.ob(m) == alg.carrier.ob(d) && candidate.fibre(m) == alg.fibre(d))
                .collect()
        })
        .collect();
    let mors: Vec<Vec<Mor>> = d_cat
        .morphism_ids()
        .map(|k| {
            let g = alg.carrier.mor(k);
            m_cat.morphism_ids().filter(|&n| u.mor(n) == g).collect()
        })
        .collect();
    let (mut n, mut first) = (0, None);
    search_functors(d_cat, m_cat, &|d| objs[d.0].clone(), &|k| mors[k.0].clone(), budget, |k| {
        n += 1;
        first.get_or_insert(k);
        if n >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok((n, first))
}

#[derive(Clone, Debug)]
pub struct AlgebraObjectOptions {
    pub shapes: Vec<Arc<FinCategory>>,
    /// Longest distributor chain for graded morphisms.
    pub grade_bound: usize,
    /// Largest component of an enumerated distributor.
    pub distributor_cap: usize,
}

impl Default for AlgebraObjectOptions {
    fn default() -> Self {
        Self {
            shapes: vec![Arc::new(FinCategory::terminal())],
            grade_bound: 1,
            distributor_cap: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseFailure {
    pub clause: u8,
    pub shape: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraObjectReport {
    pub passed: bool,
    /// Set when the candidate is not even a `T`-algebra.
    pub precheck: Option<String>,
    pub grade_bound: usize,
    pub algebras_checked: usize,
    pub morphisms_checked: usize,
    pub failures: Vec<ClauseFailure>,
}

fn shape_name(d: &FinCategory) -> String {
    format!("{} objects, {} morphisms", d.num_objects(), d.num_morphisms())
}

/// Checks the universal property of an algebra object against every algebra
/// over the given shapes and every graded morphism with chains up to the
/// grade bound.
pub fn verify_algebra_object(
    candidate: &Algebra,
    monad: &RelativeMonad,
    opts: &AlgebraObjectOptions,
    budget: &Budget,
) -> Result<AlgebraObjectReport> {
    if opts.grade_bound > MAX_GRADE {
        return Err(Error::ChainMismatch(format!(
            "grade bound {} exceeds the engine limit {MAX_GRADE}",
            opts.grade_bound
        )));
    }
    let mut report = AlgebraObjectReport {
        passed: false,
        precheck: None,
        grade_bound: opts.grade_bound,
        algebras_checked: 0,
        morphisms_checked: 0,
        failures: Vec::new(),
    };
    if let Err(e) = candidate.check_laws(monad) {
        report.precheck = Some(e.to_string());
        return Ok(report);
    }
    // clause 1, remembering each algebra's factorization for clause 2
    let mut per_shape: Vec<Vec<(Algebra, Functor)>> = Vec::new();
    for d in &opts.shapes {
        let mut here = Vec::new();
        for (i, alg) in enumerate_algebras(monad, d, budget)?.into_iter().enumerate() {
            report.algebras_checked += 1;
            let (n, k) = factor_through(candidate, &alg, 2, budget)?;
            match (n, k) {
                (1, Some(k)) => here.push((alg, k)),
                _ => report.failures.push(ClauseFailure {
                    clause: 1,
                    shape: shape_name(d),
                    detail: format!("algebra #{i} has {n} factorizations"),
                }),
            }
        }
        per_shape.push(here);
    }
    // clause 2
    let m_hom = hom_distributor(candidate.domain());
    let (e, m_cat, u) = (monad.j.cod(), candidate.domain(), &candidate.carrier);
    let mut check = |chain: &[Distributor], src: &(Algebra, Functor), tgt: &(Algebra, Functor), shape: String| -> Result<()> {
        let mut failure = None;
        let mut seen = 0;
        search_algebra_morphisms(monad, &src.0, &tgt.0, chain, budget, |eps| {
            seen += 1;
            let allowed = |key: &[usize], x0: Obj, xn: Obj, v: u32| {
                let lift = m_cat.hom(src.1.ob(x0), tgt.1.ob(xn))[v as usize];
                let want = e.hom(src.0.carrier.ob(x0), tgt.0.carrier.ob(xn))[eps.components[key] as usize];
                u.mor(lift) == want
            };
            let mut lifts = 0;
            let res = search_graded_cells(chain, &src.1, &tgt.1, &m_hom, &allowed, budget, |_| {
                lifts += 1;
                if lifts >= 2 {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            match res {
                Err(err) => {
                    failure = Some(Err(err));
                    ControlFlow::Break(())
                }
                Ok(()) if lifts != 1 => {
                    failure = Some(Ok(format!("a grade-{} morphism has {lifts} lifts", chain.len())));
                    ControlFlow::Break(())
                }
                Ok(()) => ControlFlow::Continue(()),
            }
        })?;
        report.morphisms_checked += seen;
        match failure {
            Some(Err(err)) => return Err(err),
            Some(Ok(detail)) => report.failures.push(ClauseFailure { clause: 2, shape, detail }),
            None => {}
        }
        Ok(())
    };
    for (si, d) in opts.shapes.iter().enumerate() {
        for src in &per_shape[si] {
            for tgt in &per_shape[si] {
                check(&[], src, tgt, shape_name(d))?;
            }
        }
    }
    if opts.grade_bound >= 1 {
        for (si, d) in opts.shapes.iter().enumerate() {
            for (ti, d2) in opts.shapes.iter().enumerate() {
                for p in enumerate_distributors(d2, d, opts.distributor_cap, budget)? {
                    for src in &per_shape[si] {
                        for tgt in &per_shape[ti] {
                            check(std::slice::from_ref(&p), src, tgt, shape_name(d))?;
                        }
                    }
                }
            }
        }
    }
    if opts.grade_bound >= 2 {
        for (si, d) in opts.shapes.iter().enumerate() {
            for mid in &opts.shapes {
                for (ti, d2) in opts.shapes.iter().enumerate() {
                    let p1s = enumerate_distributors(mid, d, opts.distributor_cap, budget)?;
                    let p2s = enumerate_distributors(d2, mid, opts.distributor_cap, budget)?;
                    for p1 in &p1s {
                        for p2 in &p2s {
                            let chain = [p1.clone(), p2.clone()];
                            for src in &per_shape[si] {
                                for tgt in &per_shape[ti] {
                                    check(&chain, src, tgt, shape_name(d))?;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report.passed = report.failures.is_empty();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::build_algebra_category;
    use crate::fincat::full_subcategory;
    use crate::relmon::{enumerate_relative_monads, trivial_relative_monad};
    use crate::testcats::{bz2, disc2, interval, terminal};

    fn opts(grade_bound: usize) -> AlgebraObjectOptions {
        AlgebraObjectOptions {
            shapes: vec![terminal(), interval(), disc2()],
            grade_bound,
            distributor_cap: 1,
        }
    }

    #[test]
    fn constructed_algebra_categories_pass() {
        let b = Budget::unlimited();
        let m = bz2();
        let j = Functor::constant(&terminal(), &m, Obj(0));
        let mut monads = enumerate_relative_monads(&j, &b).unwrap();
        monads.push(trivial_relative_monad(&Functor::identity(&interval())));
        monads.push(trivial_relative_monad(&Functor::empty_into(&interval())));
        for t in monads {
            let alg = build_algebra_category(&t, &b).unwrap();
            let rep = verify_algebra_object(&alg.as_algebra(), &t, &opts(1), &b).unwrap();
            assert!(rep.passed, "{rep:?}");
            assert!(rep.morphisms_checked > 0);
        }
    }

    #[test]
    fn grade_two_on_a_small_case() {
        let b = Budget::unlimited();
        let t = trivial_relative_monad(&Functor::identity(&interval()));
        let alg = build_algebra_category(&t, &b).unwrap();
        let o = AlgebraObjectOptions { shapes: vec![terminal(), interval()], grade_bound: 2, distributor_cap: 1 };
        assert!(verify_algebra_object(&alg.as_algebra(), &t, &o, &b).unwrap().passed);
    }

    #[test]
    fn dropping_an_algebra_breaks_clause_one() {
        let b = Budget::unlimited();
        let t = trivial_relative_monad(&Functor::identity(&interval()));
        let alg = build_algebra_category(&t, &b).unwrap();
        let (_, incl) = full_subcategory(&alg.category, &[Obj(0)]);
        let u = incl.then(&alg.u).unwrap();
        let cand = Algebra::from_fn(&t, &u, |a, x, f| alg.alpha(incl.ob(x), a, f)).unwrap();
        let rep = verify_algebra_object(&cand, &t, &opts(0), &b).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.failures[0].clause, 1);
        assert_eq!(rep.failures[0].detail, "algebra #1 has 0 factorizations");
    }

    #[test]
    fn grade_bound_is_capped() {
        let b = Budget::unlimited();
        let t = trivial_relative_monad(&Functor::identity(&terminal()));
        let alg = build_algebra_category(&t, &b).unwrap();
        let o = AlgebraObjectOptions { grade_bound: 3, ..Default::default() };
        assert!(matches!(
            verify_algebra_object(&alg.as_algebra(), &t, &o, &b),
            Err(Error::ChainMismatch(_))
        ));
    }
}
