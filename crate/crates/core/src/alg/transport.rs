use std::cell::RefCell;
use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use super::algebra::{enumerate_algebra_morphisms, enumerate_algebras, Algebra};
use super::category::{factorizations, AlgebraCategory};
#[cfg(test)]
use crate::fincat::Obj;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::prof::{enumerate_distributors, Distributor, GradedCell};
use crate::reladj::RelativeAdjunction;
use crate::relmon::RelativeMonad;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransportDirection {
    /// `T`-algebras to `(T; u_T')`-algebras, by postcomposing `u_T'`.
    Forward,
    /// Back again, through the universal property of `Alg(T')`.
    Backward,
}

/// Algebra transport between an `f_T'`-monad `T` and the `j`-monad `T; u_T'`.
#[derive(Clone, Debug)]
pub struct Transport<'a> {
    pub base: &'a AlgebraCategory,
    pub monad: &'a RelativeMonad,
    /// `T; u_T'`.
    pub composite: RelativeMonad,
    resolution: RelativeAdjunction,
}

fn bug(what: &str, e: Error) -> Error {
    Error::TheoremViolation(format!("{what}: {e}"))
}

impl<'a> Transport<'a> {
    pub fn new(base: &'a AlgebraCategory, monad: &'a RelativeMonad) -> Result<Self> {
        if monad.j != base.f {
            return Err(Error::RootMismatch(
                "the monad must be relative to the free functor of the base".into(),
            ));
        }
        let res = base.resolution()?;
        let (u, t) = (&base.u, &monad.t);
        let composite = RelativeMonad::from_fn(
            &base.monad.j,
            &t.then(u)?,
            |a| res.sharp(a, monad.unit(a)),
            |a, b, f| u.mor(monad.ext(a, b, res.flat(a, t.ob(b), f))),
        )
        .map_err(|e| bug("composite monad is unlawful", e))?;
        Ok(Self {
            base,
            monad,
            composite,
            resolution: res,
        })
    }

    pub fn apply(&self, alg: &Algebra, direction: TransportDirection, budget: &Budget) -> Result<Algebra> {
        match direction {
            TransportDirection::Forward => self.forward(alg),
            TransportDirection::Backward => self.backward(alg, budget),
        }
    }

    /// `(x, α) ↦ (x; u, u(α(♭' f)))`.
    pub fn forward(&self, alg: &Algebra) -> Result<Algebra> {
        let (u, x) = (&self.base.u, &alg.carrier);
        Algebra::from_fn(&self.composite, &x.then(u)?, |a, d, f| {
            u.mor(alg.alpha(a, d, self.resolution.flat(a, x.ob(d), f)))
        })
        .map_err(|e| bug("forward transport is unlawful", e))
    }

    /// Lifts the carrier through `Alg(T')` using the restricted structure
    /// `u(η_a); α'(f)`, then lifts `α'(♯' k)` along `u`.
    pub fn backward(&self, alg: &Algebra, budget: &Budget) -> Result<Algebra> {
        let (base, e) = (self.base, self.base.monad.j.cod());
        let u = &base.u;
        let restricted = Algebra::from_fn(&base.monad, &alg.carrier, |a, d, f| {
            e.then(u.mor(self.monad.unit(a)), alg.alpha(a, d, f))
        })
        .map_err(|e| bug("restricted algebra is unlawful", e))?;
        let (n, x) = factorizations(base, &restricted, 2, budget)?;
        let x = match (n, x) {
            (1, Some(x)) => x,
            _ => {
                return Err(Error::TheoremViolation(format!(
                    "restricted algebra has {n} factorizations"
                )))
            }
        };
        let t = &self.monad.t;
        let missing = RefCell::new(None);
        let lifted = Algebra::from_fn(self.monad, &x, |a, d, k| {
            let g = alg.alpha(a, d, self.resolution.sharp(a, k));
            base.morphism_over(t.ob(a), x.ob(d), g).unwrap_or_else(|| {
                missing.borrow_mut().get_or_insert(e.name(g).to_string());
                k
            })
        });
        if let Some(g) = missing.into_inner() {
            return Err(Error::TheoremViolation(format!("`{g}` does not lift to an algebra morphism")));
        }
        lifted.map_err(|e| bug("backward transport is unlawful", e))
    }

    /// The image of a graded morphism of `T`-algebras under `u_T'`, as
    /// components in `E`.
    fn forward_cell(&self, cell: &GradedCell, src: &Algebra, tgt: &Algebra) -> Vec<(Vec<usize>, u32)> {
        let (m, e, u) = (&self.base.category, self.base.monad.j.cod(), &self.base.u);
        cell.components
            .iter()
            .map(|(key, &v)| {
                let (x0, xn) = cell.ends(key);
                let g = m.hom(src.carrier.ob(x0), tgt.carrier.ob(xn))[v as usize];
                (key.clone(), e.hom_pos(u.mor(g)) as u32)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradeCount {
    pub grade: usize,
    pub monad: usize,
    pub composite: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub algebras: usize,
    pub composite_algebras: usize,
    pub objects_bijective: bool,
    pub round_trip: bool,
    pub morphisms: Vec<GradeCount>,
    pub morphisms_bijective: bool,
}

/// Checks that transport is a bijection on algebras over each shape and on
/// their graded morphisms up to `grade_bound` (at most 1).
pub fn transport_algebras(
    base: &AlgebraCategory,
    monad: &RelativeMonad,
    shapes: &[Arc<FinCategory>],
    grade_bound: usize,
    budget: &Budget,
) -> Result<TransportReport> {
    let tr = Transport::new(base, monad)?;
    let mut rep = TransportReport {
        algebras: 0,
        composite_algebras: 0,
        objects_bijective: true,
        round_trip: true,
        morphisms: (0..=grade_bound.min(1))
            .map(|grade| GradeCount { grade, monad: 0, composite: 0 })
            .collect(),
        morphisms_bijective: true,
    };
    let mut per_shape = Vec::new();
    for d in shapes {
        let here = enumerate_algebras(monad, d, budget)?;
        let there = enumerate_algebras(&tr.composite, d, budget)?;
        rep.algebras += here.len();
        rep.composite_algebras += there.len();
        let images: Vec<Algebra> = here.iter().map(|a| tr.forward(a)).collect::<Result<_>>()?;
        let distinct: HashSet<_> = images.iter().map(|a| format!("{a:?}")).collect();
        rep.objects_bijective &= distinct.len() == here.len()
            && here.len() == there.len()
            && images.iter().all(|a| there.contains(a));
        for (a, img) in here.iter().zip(&images) {
            rep.round_trip &= &tr.backward(img, budget)? == a;
        }
        for b in &there {
            rep.round_trip &= &tr.forward(&tr.backward(b, budget)?)? == b;
        }
        per_shape.push((here, images));
    }
    let mut compare = |chain: &[Distributor], s: &(Algebra, Algebra), t: &(Algebra, Algebra)| -> Result<()> {
        let cells = enumerate_algebra_morphisms(monad, &s.0, &t.0, chain, budget)?;
        let down = enumerate_algebra_morphisms(&tr.composite, &s.1, &t.1, chain, budget)?;
        let images: HashSet<_> = cells.iter().map(|c| tr.forward_cell(c, &s.0, &t.0)).collect();
        let targets: HashSet<_> = down
            .iter()
            .map(|c| c.components.iter().map(|(k, &v)| (k.clone(), v)).collect::<Vec<_>>())
            .collect();
        let slot = &mut rep.morphisms[chain.len()];
        slot.monad += cells.len();
        slot.composite += down.len();
        rep.morphisms_bijective &= images.len() == cells.len() && images == targets;
        Ok(())
    };
    let pairs = |i: usize| -> Vec<(Algebra, Algebra)> {
        per_shape[i].0.iter().cloned().zip(per_shape[i].1.iter().cloned()).collect()
    };
    for i in 0..shapes.len() {
        let ps = pairs(i);
        for s in &ps {
            for t in &ps {
                compare(&[], s, t)?;
            }
        }
    }
    if grade_bound >= 1 {
        for (i, d) in shapes.iter().enumerate() {
            for (k, d2) in shapes.iter().enumerate() {
                let (ps, qs) = (pairs(i), pairs(k));
                for p in enumerate_distributors(d2, d, 1, budget)? {
                    for s in &ps {
                        for t in &qs {
                            compare(std::slice::from_ref(&p), s, t)?;
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::build_algebra_category;
    use crate::fincat::Functor;
    use crate::relmon::{enumerate_relative_monads, trivial_relative_monad};
    use crate::testcats::{bz2, interval, terminal};

    #[test]
    fn trivial_monad_on_free_functor_relabels() {
        let b = Budget::unlimited();
        let m = bz2();
        let j = Functor::constant(&terminal(), &m, Obj(0));
        for tp in enumerate_relative_monads(&j, &b).unwrap() {
            let base = build_algebra_category(&tp, &b).unwrap();
            let t = trivial_relative_monad(&base.f);
            let tr = Transport::new(&base, &t).unwrap();
            assert_eq!(tr.composite, tp);
            let rep = transport_algebras(&base, &t, &[terminal(), interval()], 1, &b).unwrap();
            assert!(rep.objects_bijective && rep.round_trip && rep.morphisms_bijective, "{rep:?}");
            assert_eq!(rep.algebras, rep.composite_algebras);
            assert!(rep.morphisms.iter().all(|g| g.monad > 0));
        }
    }

    #[test]
    fn every_monad_over_a_free_functor_transports() {
        let b = Budget::unlimited();
        let m = bz2();
        let j = Functor::constant(&terminal(), &m, Obj(0));
        let tp = enumerate_relative_monads(&j, &b).unwrap().remove(0);
        let base = build_algebra_category(&tp, &b).unwrap();
        let monads = enumerate_relative_monads(&base.f, &b).unwrap();
        assert!(!monads.is_empty());
        for t in &monads {
            let rep = transport_algebras(&base, t, &[terminal(), interval()], 1, &b).unwrap();
            assert!(rep.objects_bijective && rep.round_trip && rep.morphisms_bijective, "{rep:?}");
        }
    }

    #[test]
    fn empty_root_transport() {
        let b = Budget::unlimited();
        let tp = trivial_relative_monad(&Functor::empty_into(&interval()));
        let base = build_algebra_category(&tp, &b).unwrap();
        for t in enumerate_relative_monads(&base.f, &b).unwrap() {
            let rep = transport_algebras(&base, &t, &[terminal()], 1, &b).unwrap();
            assert!(rep.objects_bijective && rep.round_trip && rep.morphisms_bijective);
        }
    }

    #[test]
    fn wrong_root_is_rejected() {
        let b = Budget::unlimited();
        let tp = trivial_relative_monad(&Functor::identity(&interval()));
        let base = build_algebra_category(&tp, &b).unwrap();
        let t = trivial_relative_monad(&Functor::identity(&base.category));
        assert!(matches!(Transport::new(&base, &t), Err(Error::RootMismatch(_))));
    }
}
