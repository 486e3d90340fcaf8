use std::ops::ControlFlow;
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{same_category, search_functors, FinCategory, Functor, Mor, Obj};
use crate::prof::{hom_distributor, search_graded_cells, Distributor, GradedCell};
use crate::relmon::RelativeMonad;
use crate::solve::{Problem, UNSET};

/// A `T`-algebra: carrier `e: D -> E` and extension
/// `α: E(j a, e d) -> E(t a, e d)` stored per `(a, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub carrier: Functor,
    /// `[a * |D| + d][position of f in E(j a, e d)]`.
    alpha: Vec<Vec<Mor>>,
}

fn law_fail(law: &str, witness: String) -> Error {
    Error::LawFail { law: law.into(), witness }
}

impl Algebra {
    pub fn from_fn(
        monad: &RelativeMonad,
        carrier: &Functor,
        alpha: impl Fn(Obj, Obj, Mor) -> Mor,
    ) -> Result<Self> {
        if !same_category(carrier.cod(), monad.j.cod()) {
            return Err(Error::EndpointMismatch(
                "the carrier must land in the codomain of the root".into(),
            ));
        }
        let (j, e, d_cat) = (&monad.j, carrier.cod(), carrier.dom());
        let alg = Self {
            carrier: carrier.clone(),
            alpha: j
                .dom()
                .objects()
                .flat_map(|a| d_cat.objects().map(move |d| (a, d)))
                .map(|(a, d)| {
                    e.hom(j.ob(a), carrier.ob(d)).iter().map(|&f| alpha(a, d, f)).collect()
                })
                .collect(),
        };
        alg.check_laws(monad)?;
        Ok(alg)
    }

    pub fn domain(&self) -> &Arc<FinCategory> {
        self.carrier.dom()
    }

    /// `α(f): t a -> e d` for `f: j a -> e d`.
    pub fn alpha(&self, a: Obj, d: Obj, f: Mor) -> Mor {
        let nd = self.carrier.dom().num_objects();
        self.alpha[a.0 * nd + d.0][self.carrier.cod().hom_pos(f)]
    }

    /// Carrier at the first object and the whole table; identifies an
    /// algebra with terminal domain.
    pub(crate) fn key(&self) -> (Obj, Vec<Vec<Mor>>) {
        (self.carrier.ob(Obj(0)), self.alpha.clone())
    }

    /// The table of `α` at one `d`, for comparing fibres.
    pub(crate) fn fibre(&self, d: Obj) -> Vec<&[Mor]> {
        let nd = self.carrier.dom().num_objects();
        let na = self.alpha.len() / nd.max(1);
        (0..na).map(|a| &self.alpha[a * nd + d.0][..]).collect()
    }

    pub fn check_laws(&self, monad: &RelativeMonad) -> Result<()> {
        let (j, t, e) = (&monad.j, &monad.t, &**monad.j.cod());
        let (a_cat, d_cat, c) = (&**j.dom(), &**self.carrier.dom(), &self.carrier);
        let name = |m: Mor| e.name(m).to_string();
        for a in a_cat.objects() {
            for d in d_cat.objects() {
                for &f in e.hom(j.ob(a), c.ob(d)) {
                    let g = self.alpha(a, d, f);
                    if g.0 >= e.num_morphisms() || e.dom(g) != t.ob(a) || e.cod(g) != c.ob(d) {
                        return Err(law_fail("endpoints", format!("`{}`", name(f))));
                    }
                }
            }
        }
        // α(j h; f; e k) = t h; α(f); e k
        for h in a_cat.morphism_ids() {
            let (a2, a) = (a_cat.dom(h), a_cat.cod(h));
            for k in d_cat.morphism_ids() {
                let (d, d2) = (d_cat.dom(k), d_cat.cod(k));
                for &f in e.hom(j.ob(a), c.ob(d)) {
                    let lhs = self.alpha(a2, d2, e.then(e.then(j.mor(h), f), c.mor(k)));
                    let rhs = e.then(e.then(t.mor(h), self.alpha(a, d, f)), c.mor(k));
                    if lhs != rhs {
                        return Err(law_fail(
                            "binaturality",
                            format!("`{}` along `{}`, `{}`", name(f), a_cat.name(h), d_cat.name(k)),
                        ));
                    }
                }
            }
        }
        for a in a_cat.objects() {
            for d in d_cat.objects() {
                for &f in e.hom(j.ob(a), c.ob(d)) {
                    if e.then(monad.unit(a), self.alpha(a, d, f)) != f {
                        return Err(law_fail("unit", format!("`{}`", name(f))));
                    }
                }
            }
        }
        // α(g; α f) = †g; α f
        for a in a_cat.objects() {
            for b in a_cat.objects() {
                for d in d_cat.objects() {
                    for &f in e.hom(j.ob(b), c.ob(d)) {
                        let af = self.alpha(b, d, f);
                        for &g in e.hom(j.ob(a), t.ob(b)) {
                            if self.alpha(a, d, e.then(g, af)) != e.then(monad.ext(a, b, g), af) {
                                return Err(law_fail(
                                    "extension",
                                    format!("`{}`, `{}`", name(g), name(f)),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether `g: e d -> e' d'` commutes with the extensions:
    /// `α(f); g = α'(f; g)` for every `f: j a -> e d`.
    pub fn commutes(&self, d: Obj, other: &Algebra, d2: Obj, j: &Functor, g: Mor) -> bool {
        let e = &**j.cod();
        j.dom().objects().all(|a| {
            e.hom(j.ob(a), self.carrier.ob(d))
                .iter()
                .all(|&f| e.then(self.alpha(a, d, f), g) == other.alpha(a, d2, e.then(f, g)))
        })
    }
}

/// Visits the algebras over `D` whose carrier passes `carrier_ok`, carriers
/// in canonical functor order and then `α` lexicographically.
pub fn search_algebras(
    monad: &RelativeMonad,
    d_cat: &Arc<FinCategory>,
    budget: &Budget,
    mut visit: impl FnMut(Algebra) -> ControlFlow<()>,
) -> Result<()> {
    let e = monad.j.cod();
    let objs: Vec<Obj> = e.objects().collect();
    let mors: Vec<Mor> = e.morphism_ids().collect();
    let mut carriers = Vec::new();
    search_functors(d_cat, e, &|_| objs.clone(), &|_| mors.clone(), budget, |c| {
        carriers.push(c);
        ControlFlow::Continue(())
    })?;
    for c in carriers {
        let mut stop = false;
        search_with_carrier(monad, &c, budget, |alg| {
            let flow = visit(alg);
            stop = flow.is_break();
            flow
        })?;
        if stop {
            break;
        }
    }
    Ok(())
}

/// Visits the algebra structures on a fixed carrier.
pub fn search_with_carrier(
    monad: &RelativeMonad,
    carrier: &Functor,
    budget: &Budget,
    mut visit: impl FnMut(Algebra) -> ControlFlow<()>,
) -> Result<()> {
    let (j, t, e) = (&monad.j, &monad.t, &**monad.j.cod());
    let (a_cat, d_cat, c) = (&**j.dom(), &**carrier.dom(), carrier);
    let nd = d_cat.num_objects();
    let mut p = Problem::new();
    let mut block = Vec::new();
    for a in a_cat.objects() {
        for d in d_cat.objects() {
            block.push(p.num_vars());
            for _ in e.hom(j.ob(a), c.ob(d)) {
                p.var(e.hom(t.ob(a), c.ob(d)).iter().map(|m| m.0 as u32).collect());
            }
        }
    }
    let var = |a: Obj, d: Obj, f: Mor| block[a.0 * nd + d.0] + e.hom_pos(f);
    for h in a_cat.morphism_ids() {
        let (a2, a) = (a_cat.dom(h), a_cat.cod(h));
        for k in d_cat.morphism_ids() {
            if a_cat.is_identity(h) && d_cat.is_identity(k) {
                continue;
            }
            let (d, d2) = (d_cat.dom(k), d_cat.cod(k));
            let (th, ck) = (t.mor(h), c.mor(k));
            for &f in e.hom(j.ob(a), c.ob(d)) {
                let to = var(a2, d2, e.then(e.then(j.mor(h), f), ck));
                p.derive(var(a, d, f), to, move |x| {
                    Some(e.then(e.then(th, Mor(x as usize)), ck).0 as u32)
                });
            }
        }
    }
    for a in a_cat.objects() {
        let eta = monad.unit(a);
        for d in d_cat.objects() {
            for &f in e.hom(j.ob(a), c.ob(d)) {
                let v = var(a, d, f);
                p.check(&[v], move |s| e.then(eta, Mor(s[v] as usize)) == f);
            }
        }
    }
    for a in a_cat.objects() {
        for b in a_cat.objects() {
            for d in d_cat.objects() {
                let base = block[a.0 * nd + d.0];
                for &f in e.hom(j.ob(b), c.ob(d)) {
                    let vf = var(b, d, f);
                    let gs: Vec<(Mor, Mor)> = e
                        .hom(j.ob(a), t.ob(b))
                        .iter()
                        .map(|&g| (g, monad.ext(a, b, g)))
                        .collect();
                    p.rule(&[vf], move |s, out| {
                        if s[vf] != UNSET {
                            let af = Mor(s[vf] as usize);
                            for &(g, dg) in &gs {
                                out.push((base + e.hom_pos(e.then(g, af)), e.then(dg, af).0 as u32));
                            }
                        }
                        true
                    });
                }
            }
        }
    }
    p.solve(budget, |s| {
        let alpha = (0..block.len())
            .map(|i| {
                let end = block.get(i + 1).copied().unwrap_or(s.len());
                (block[i]..end).map(|v| Mor(s[v] as usize)).collect()
            })
            .collect();
        let alg = Algebra { carrier: carrier.clone(), alpha };
        debug_assert!(alg.check_laws(monad).is_ok());
        visit(alg)
    })
}

/// Every `T`-algebra with domain `D`, in canonical order.
pub fn enumerate_algebras(
    monad: &RelativeMonad,
    d_cat: &Arc<FinCategory>,
    budget: &Budget,
) -> Result<Vec<Algebra>> {
    let mut out = Vec::new();
    search_algebras(monad, d_cat, budget, |a| {
        out.push(a);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Graded morphisms `p_1, ..., p_n => E(e, e')` compatible with both
/// extensions, in canonical order.
pub fn search_algebra_morphisms(
    monad: &RelativeMonad,
    src: &Algebra,
    tgt: &Algebra,
    chain: &[Distributor],
    budget: &Budget,
    visit: impl FnMut(GradedCell) -> ControlFlow<()>,
) -> Result<()> {
    let e = monad.j.cod();
    let q = hom_distributor(e);
    let allowed = |_: &[usize], x0: Obj, xn: Obj, v: u32| {
        let g = e.hom(src.carrier.ob(x0), tgt.carrier.ob(xn))[v as usize];
        src.commutes(x0, tgt, xn, &monad.j, g)
    };
    search_graded_cells(chain, &src.carrier, &tgt.carrier, &q, &allowed, budget, visit)
}

pub fn enumerate_algebra_morphisms(
    monad: &RelativeMonad,
    src: &Algebra,
    tgt: &Algebra,
    chain: &[Distributor],
    budget: &Budget,
) -> Result<Vec<GradedCell>> {
    let mut out = Vec::new();
    search_algebra_morphisms(monad, src, tgt, chain, budget, |c| {
        out.push(c);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relmon::{enumerate_relative_monads, trivial_relative_monad};
    use crate::testcats::{bz2, interval, terminal};

    /// Oracle for one-object roots and one-object carriers: filter every
    /// table `E(*, *) -> E(*, *)` through the laws written out directly.
    fn brute_force_count(monad: &RelativeMonad) -> usize {
        let e = monad.j.cod();
        let hom: Vec<Mor> = e.hom(Obj(0), Obj(0)).to_vec();
        let n = hom.len();
        (0..n.pow(n as u32))
            .filter(|code| {
                let al = |f: Mor| hom[(code / n.pow(e.hom_pos(f) as u32)) % n];
                let unit = hom.iter().all(|&f| e.then(monad.unit(Obj(0)), al(f)) == f);
                let ext = hom.iter().all(|&f| {
                    hom.iter().all(|&g| {
                        al(e.then(g, al(f))) == e.then(monad.ext(Obj(0), Obj(0), g), al(f))
                    })
                });
                unit && ext
            })
            .count()
    }

    #[test]
    fn trivial_monad_has_one_algebra_per_object() {
        let b = Budget::unlimited();
        let e = interval();
        let t = trivial_relative_monad(&Functor::identity(&e));
        let algs = enumerate_algebras(&t, &terminal(), &b).unwrap();
        assert_eq!(algs.len(), e.num_objects());
    }

    #[test]
    fn empty_root_algebras_are_bare_objects() {
        let b = Budget::unlimited();
        let e = bz2();
        let t = trivial_relative_monad(&Functor::empty_into(&e));
        assert_eq!(enumerate_algebras(&t, &terminal(), &b).unwrap().len(), 1);
        let i = interval();
        let t = trivial_relative_monad(&Functor::empty_into(&i));
        assert_eq!(enumerate_algebras(&t, &terminal(), &b).unwrap().len(), 2);
    }

    #[test]
    fn point_into_bz2_matches_oracle() {
        let b = Budget::unlimited();
        let m = bz2();
        let j = Functor::constant(&terminal(), &m, Obj(0));
        for t in enumerate_relative_monads(&j, &b).unwrap() {
            let algs = enumerate_algebras(&t, &terminal(), &b).unwrap();
            assert_eq!(algs.len(), brute_force_count(&t));
            assert!(!algs.is_empty());
        }
    }

    #[test]
    fn perturbed_extension_is_rejected() {
        let b = Budget::unlimited();
        let e = interval();
        let t = trivial_relative_monad(&Functor::identity(&e));
        // carrier 1: α sends i: 0 -> 1 to a morphism t 0 = 0 -> 1
        let mut bad = enumerate_algebras(&t, &terminal(), &b).unwrap().remove(1);
        bad.alpha[0][0] = Mor(1);
        assert!(bad.check_laws(&t).is_err());
    }
}
