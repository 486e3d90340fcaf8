use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use super::algebra::{enumerate_algebras, Algebra};
use super::object::factor_through;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Functor, Mor, MorphismSig, Obj};
use crate::reladj::RelativeAdjunction;
use crate::relmon::{monad_from_adjunction, RelativeMonad};

/// `Alg(T)`: algebras with terminal domain and their grade-0 morphisms,
/// with the forgetful `u_T` and free `f_T`.
#[derive(Clone, Debug)]
pub struct AlgebraCategory {
    pub monad: RelativeMonad,
    pub category: Arc<FinCategory>,
    /// The algebra at each object, in object order.
    pub algebras: Vec<Algebra>,
    pub u: Functor,
    pub f: Functor,
    index: HashMap<(Obj, Vec<Vec<Mor>>), Obj>,
    morphisms: HashMap<(Obj, Obj, Mor), Mor>,
}

/// Stable object name: carrier, then the extension table.
fn algebra_name(alg: &Algebra, j: &Functor) -> String {
    let (a_cat, e) = (j.dom(), j.cod());
    let x = alg.carrier.ob(Obj(0));
    let mut s = format!("{}{{", e.object_name(x));
    let mut first = true;
    for a in a_cat.objects() {
        for &f in e.hom(j.ob(a), x) {
            if !first {
                s.push(',');
            }
            first = false;
            let _ = write!(
                s,
                "{}|{}>{}",
                a_cat.object_name(a),
                e.name(f),
                e.name(alg.alpha(a, Obj(0), f))
            );
        }
    }
    s.push('}');
    s
}

impl AlgebraCategory {
    /// The object carrying an algebra with terminal domain, if enumerated.
    pub fn object_of(&self, alg: &Algebra) -> Option<Obj> {
        self.index.get(&alg.key()).copied()
    }

    /// The morphism `x -> y` over `g`, if `g` commutes with the extensions.
    pub fn morphism_over(&self, x: Obj, y: Obj, g: Mor) -> Option<Mor> {
        self.morphisms.get(&(x, y, g)).copied()
    }

    /// The object whose algebra is the fibre of `alg` at `d`.
    pub fn object_at(&self, alg: &Algebra, d: Obj) -> Option<Obj> {
        let x = alg.carrier.ob(d);
        let want = alg.fibre(d);
        self.algebras
            .iter()
            .position(|b| b.carrier.ob(Obj(0)) == x && b.fibre(Obj(0)) == want)
            .map(Obj)
    }

    /// `f_T ⊣_j u_T` with `♯k = η_a; u_T(k)`.
    pub fn resolution(&self) -> Result<RelativeAdjunction> {
        let (m, e) = (&self.monad, self.monad.j.cod());
        RelativeAdjunction::from_fn(&m.j, &self.f, &self.u, |a, k| e.then(m.unit(a), self.u.mor(k)))
    }

    /// `(u_T, α_T)` as a `T`-algebra with domain `Alg(T)`.
    pub fn as_algebra(&self) -> Algebra {
        Algebra::from_fn(&self.monad, &self.u, |a, x, f| self.alpha(x, a, f))
            .expect("the generic algebra is lawful")
    }

    /// `α_T` at an object of `Alg(T)`.
    pub fn alpha(&self, x: Obj, a: Obj, f: Mor) -> Mor {
        self.algebras[x.0].alpha(a, Obj(0), f)
    }
}

/// Builds `Alg(T)` and certifies that `f_T ⊣_j u_T` is a resolution of `T`.
pub fn build_algebra_category(monad: &RelativeMonad, budget: &Budget) -> Result<AlgebraCategory> {
    let (j, t, e) = (&monad.j, &monad.t, monad.j.cod());
    let terminal = Arc::new(FinCategory::terminal());
    let algebras = enumerate_algebras(monad, &terminal, budget)?;
    let names: Vec<String> = algebras.iter().map(|a| algebra_name(a, j)).collect();
    let mut sigs = Vec::new();
    let mut under = Vec::new();
    let mut morphisms = HashMap::new();
    let mut identities = vec![Mor(0); algebras.len()];
    for (i, x) in algebras.iter().enumerate() {
        for (k, y) in algebras.iter().enumerate() {
            let (cx, cy) = (x.carrier.ob(Obj(0)), y.carrier.ob(Obj(0)));
            for &g in e.hom(cx, cy) {
                budget.charge(1)?;
                if !x.commutes(Obj(0), y, Obj(0), j, g) {
                    continue;
                }
                let id = Mor(sigs.len());
                if i == k && e.is_identity(g) {
                    identities[i] = id;
                }
                morphisms.insert((Obj(i), Obj(k), g), id);
                sigs.push(MorphismSig {
                    name: format!("{}:{i}>{k}", e.name(g)),
                    dom: Obj(i),
                    cod: Obj(k),
                });
                under.push(g);
            }
        }
    }
    let compose = |f: Mor, g: Mor| {
        let (x, z) = (sigs[f.0].dom, sigs[g.0].cod);
        morphisms[&(x, z, e.then(under[f.0], under[g.0]))]
    };
    let category = Arc::new(
        FinCategory::from_fn(names, sigs.clone(), identities, compose)
            .map_err(|err| Error::TheoremViolation(format!("algebra category is not a category: {err}")))?,
    );
    let u = Functor::new_unchecked(
        category.clone(),
        e.clone(),
        algebras.iter().map(|a| a.carrier.ob(Obj(0))).collect(),
        under.clone(),
    );
    let index: HashMap<(Obj, Vec<Vec<Mor>>), Obj> =
        algebras.iter().enumerate().map(|(i, a)| (a.key(), Obj(i))).collect();
    let a_cat = j.dom();
    let free_obj: Vec<Obj> = a_cat
        .objects()
        .map(|a| {
            let carrier = Functor::constant(&terminal, e, t.ob(a));
            let free = Algebra::from_fn(monad, &carrier, |b, _, f| monad.ext(b, a, f))
                .map_err(|err| Error::TheoremViolation(format!("free algebra is unlawful: {err}")))?;
            index
                .get(&free.key())
                .copied()
                .ok_or_else(|| Error::TheoremViolation("free algebra was not enumerated".into()))
        })
        .collect::<Result<_>>()?;
    let free_mor: Vec<Mor> = a_cat
        .morphism_ids()
        .map(|h| {
            let key = (free_obj[a_cat.dom(h).0], free_obj[a_cat.cod(h).0], t.mor(h));
            morphisms.get(&key).copied().ok_or_else(|| {
                Error::TheoremViolation(format!("`t {}` is not an algebra morphism", a_cat.name(h)))
            })
        })
        .collect::<Result<_>>()?;
    let f = Functor::new_unchecked(a_cat.clone(), category.clone(), free_obj, free_mor);
    let alg = AlgebraCategory {
        monad: monad.clone(),
        category,
        algebras,
        u,
        f,
        index,
        morphisms,
    };
    Algebra::from_fn(monad, &alg.u, |a, x, f| alg.alpha(x, a, f))
        .map_err(|err| Error::TheoremViolation(format!("generic algebra is unlawful: {err}")))?;
    let adj = alg
        .resolution()
        .map_err(|err| Error::TheoremViolation(format!("free-forgetful is not a resolution: {err}")))?;
    if &monad_from_adjunction(&adj)? != monad {
        return Err(Error::TheoremViolation(
            "free-forgetful adjunction induces a different monad".into(),
        ));
    }
    Ok(alg)
}

/// The comparison functor `K: C -> Alg(T)` of a resolution.
#[derive(Clone, Debug)]
pub struct ComparisonData {
    pub functor: Functor,
    /// `K; u_T = r`.
    pub over_right: bool,
    /// `ℓ; K = f_T`.
    pub under_left: bool,
    /// Number of functors `K` with `K; u_T = r` and `α_T(1, K) = r ♭`,
    /// counted up to 2.
    pub factorizations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonSummary {
    pub over_right: bool,
    pub under_left: bool,
    pub unique: bool,
}

impl ComparisonData {
    pub fn summary(&self) -> ComparisonSummary {
        ComparisonSummary {
            over_right: self.over_right,
            under_left: self.under_left,
            unique: self.factorizations == 1,
        }
    }
}

/// The algebra `(r, α(f) = r(♭f))` carried by a resolution.
pub fn resolution_algebra(adj: &RelativeAdjunction, monad: &RelativeMonad) -> Result<Algebra> {
    Algebra::from_fn(monad, &adj.r, |a, c, f| adj.r.mor(adj.flat(a, c, f)))
        .map_err(|e| Error::TheoremViolation(format!("resolution algebra is unlawful: {e}")))
}

/// Factorizations of an algebra through `(u_T, α_T)`, counted up to `cap`.
pub fn factorizations(
    alg_cat: &AlgebraCategory,
    alg: &Algebra,
    cap: usize,
    budget: &Budget,
) -> Result<(usize, Option<Functor>)> {
    factor_through(&alg_cat.as_algebra(), alg, cap, budget)
}

pub fn comparison_functor(
    adj: &RelativeAdjunction,
    alg_cat: &AlgebraCategory,
    budget: &Budget,
) -> Result<ComparisonData> {
    let induced = monad_from_adjunction(adj)?;
    if induced != alg_cat.monad {
        return Err(Error::MonadMismatch);
    }
    let alg = resolution_algebra(adj, &alg_cat.monad)?;
    let (factorizations, k) = factorizations(alg_cat, &alg, 2, budget)?;
    let Some(k) = k else {
        return Err(Error::TheoremViolation(
            "resolution algebra does not factor through the algebra category".into(),
        ));
    };
    Ok(ComparisonData {
        over_right: k.then(&alg_cat.u)? == adj.r,
        under_left: adj.l.then(&k)? == alg_cat.f,
        functor: k,
        factorizations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::classify_functor;
    use crate::reladj::{find_left_relative_adjoint, TieBreak};
    use crate::relmon::{enumerate_relative_monads, trivial_relative_monad};
    use crate::testcats::{bz2, interval, parallel, terminal};

    #[test]
    fn trivial_monad_algebras_are_the_base() {
        let b = Budget::unlimited();
        for e in [interval(), parallel(), bz2()] {
            let id = Functor::identity(&e);
            let alg = build_algebra_category(&trivial_relative_monad(&id), &b).unwrap();
            assert!(classify_functor(&alg.u).is_iso);
            let adj = find_left_relative_adjoint(&id, &id, TieBreak::Least, &b).unwrap().unwrap();
            let k = comparison_functor(&adj, &alg, &b).unwrap();
            assert!(k.over_right && k.under_left && k.factorizations == 1);
            assert!(classify_functor(&k.functor).is_iso);
        }
    }

    #[test]
    fn empty_root_algebra_category() {
        let b = Budget::unlimited();
        let e = interval();
        let alg = build_algebra_category(&trivial_relative_monad(&Functor::empty_into(&e)), &b).unwrap();
        assert!(classify_functor(&alg.u).is_iso);
        // a non-iso right adjoint: Interval -> Terminal
        let t = terminal();
        let r = Functor::to_terminal(&e).with_cod(&t);
        let adj = find_left_relative_adjoint(&Functor::empty_into(&t), &r, TieBreak::Least, &b)
            .unwrap()
            .unwrap();
        let alg = build_algebra_category(&monad_from_adjunction(&adj).unwrap(), &b).unwrap();
        let k = comparison_functor(&adj, &alg, &b).unwrap();
        assert!(!classify_functor(&k.functor).is_iso);
    }

    #[test]
    fn free_forgetful_compares_to_identity() {
        let b = Budget::unlimited();
        let m = bz2();
        let j = Functor::constant(&terminal(), &m, Obj(0));
        for t in enumerate_relative_monads(&j, &b).unwrap() {
            let alg = build_algebra_category(&t, &b).unwrap();
            let adj = alg.resolution().unwrap();
            let k = comparison_functor(&adj, &alg, &b).unwrap();
            assert!(k.functor.is_identity());
            assert!(classify_functor(&alg.u).conservative);
        }
    }

    #[test]
    fn mismatched_monad_is_reported() {
        let b = Budget::unlimited();
        let e = interval();
        let id = Functor::identity(&e);
        let alg = build_algebra_category(&trivial_relative_monad(&id), &b).unwrap();
        let t = terminal();
        let r = Functor::to_terminal(&e).with_cod(&t);
        let j = Functor::identity(&t);
        let adj = find_left_relative_adjoint(&j, &r, TieBreak::Least, &b).unwrap().unwrap();
        assert!(matches!(comparison_functor(&adj, &alg, &b), Err(Error::MonadMismatch)));
    }
}
