use std::ops::ControlFlow;

use serde::Serialize;

use super::adjunction::RelativeAdjunction;
use crate::budget::Budget;
use crate::colim::{is_dense, is_j_absolute, Cocone};
use crate::error::{Error, Result};
use crate::fincat::{same_category, search_natural_transformations, Functor, NatTrans};
use crate::prof::corepresentable;

/// One 2-cell `ρ: r => c;r'` and both sides of the equivalence between
/// right-morphisms and absolute left extensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RightMorphismCase {
    pub rho: Vec<String>,
    /// `ℓ;c ⊣_j r'` with the forced transposition, and `(c, ρ)` is compatible.
    pub right_morphism: bool,
    pub colimiting: bool,
    pub absolute: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RightMorphismReport {
    pub dense: bool,
    pub cases: Vec<RightMorphismCase>,
    /// Every case agrees; vacuous when the root is not dense.
    pub agree: bool,
}

/// The cocone `(r', ρ_y; r'(u))` weighted by `C'(c, 1)`.
pub fn extension_cocone(r: &Functor, c: &Functor, rprime: &Functor, rho: &NatTrans) -> Cocone {
    let weight = corepresentable(c);
    let (cp, e) = (c.cod(), r.cod());
    let legs = (0..weight.total_elements())
        .map(|k| {
            let (y, x, u) = weight.unflat(k);
            let m = cp.hom(c.ob(y), x)[u as usize];
            e.then(rho.component(y), rprime.mor(m))
        })
        .collect();
    Cocone {
        weight,
        diagram: r.clone(),
        apex: rprime.clone(),
        legs,
    }
}

/// The transposition forced on `ℓ;c ⊣_j r'` by compatibility with `(c, ρ)`:
/// `♯'(m) = η_a; ρ_{ℓa}; r'(m)`. `None` when it is not a relative adjunction.
pub fn induced_adjunction(
    adj: &RelativeAdjunction,
    c: &Functor,
    rprime: &Functor,
    rho: &NatTrans,
) -> Result<Option<RelativeAdjunction>> {
    let l2 = adj.l.then(c)?;
    let e = adj.j.cod();
    match RelativeAdjunction::from_fn(&adj.j, &l2, rprime, |a, m| {
        e.then(e.then(adj.unit(a), rho.component(adj.l.ob(a))), rprime.mor(m))
    }) {
        Ok(a) => Ok(Some(a)),
        Err(Error::Adjunction(_)) => Ok(None),
        Err(other) => Err(other),
    }
}

fn compatible(adj: &RelativeAdjunction, prime: &RelativeAdjunction, c: &Functor, rho: &NatTrans) -> bool {
    let (c_cat, e) = (adj.l.cod(), adj.j.cod());
    adj.j.dom().objects().all(|a| {
        c_cat.objects().all(|x| {
            c_cat.hom(adj.l.ob(a), x).iter().all(|&k| {
                e.then(adj.sharp(a, k), rho.component(x)) == prime.sharp(a, c.mor(k))
            })
        })
    })
}

fn check_shape(adj: &RelativeAdjunction, c: &Functor, rprime: &Functor) -> Result<()> {
    if !same_category(c.dom(), adj.l.cod())
        || !same_category(rprime.dom(), c.cod())
        || !same_category(rprime.cod(), adj.j.cod())
    {
        return Err(Error::EndpointMismatch(
            "expected c: C -> C' and r': C' -> E over the adjunction".into(),
        ));
    }
    Ok(())
}

/// Evaluates both conditions for one `ρ`.
pub fn right_morphism_case(
    adj: &RelativeAdjunction,
    c: &Functor,
    rprime: &Functor,
    rho: &NatTrans,
    budget: &Budget,
) -> Result<RightMorphismCase> {
    check_shape(adj, c, rprime)?;
    let right_morphism = match induced_adjunction(adj, c, rprime, rho)? {
        Some(prime) => compatible(adj, &prime, c, rho),
        None => false,
    };
    let cocone = extension_cocone(&adj.r, c, rprime, rho);
    let colimiting = cocone.violations().is_empty() && cocone.is_colimit(budget)?;
    let absolute = is_j_absolute(&adj.j, &cocone, budget)?.absolute;
    let e = adj.j.cod();
    Ok(RightMorphismCase {
        rho: rho.components.iter().map(|&m| e.name(m).to_string()).collect(),
        right_morphism,
        colimiting,
        absolute,
        agree: right_morphism == (colimiting && absolute),
    })
}

/// Runs every `ρ: r => c;r'` through both sides of the equivalence.
pub fn check_right_morphisms(
    adj: &RelativeAdjunction,
    c: &Functor,
    rprime: &Functor,
    budget: &Budget,
) -> Result<RightMorphismReport> {
    check_shape(adj, c, rprime)?;
    let dense = is_dense(&adj.j, budget)?.dense;
    let target = c.then(rprime)?;
    let mut cases = Vec::new();
    let mut err = None;
    search_natural_transformations(&adj.r, &target, &|_, _| true, budget, |rho| {
        match right_morphism_case(adj, c, rprime, &rho, budget) {
            Ok(case) => {
                cases.push(case);
                ControlFlow::Continue(())
            }
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let agree = !dense || cases.iter().all(|c| c.agree);
    Ok(RightMorphismReport { dense, cases, agree })
}

/// The 2-cell `ρ: r => c;r'` determined by the transpositions, when
/// `ℓ' = ℓ;c`: `ρ_x` is the morphism with `v; ρ_x = ♯'(c ♭v)` for all `v`.
/// Unique when `j` is dense; `None` when no such family exists.
pub fn derive_rho(
    adj: &RelativeAdjunction,
    prime: &RelativeAdjunction,
    c: &Functor,
) -> Result<Option<NatTrans>> {
    check_shape(adj, c, &prime.r)?;
    if prime.j != adj.j || prime.l != adj.l.then(c)? {
        return Err(Error::EndpointMismatch(
            "the target adjunction must share the root and have left adjoint l;c".into(),
        ));
    }
    let (c_cat, e) = (adj.l.cod(), adj.j.cod());
    let mut components = Vec::with_capacity(c_cat.num_objects());
    for x in c_cat.objects() {
        let found = e.hom(adj.r.ob(x), prime.r.ob(c.ob(x))).iter().copied().find(|&g| {
            adj.j.dom().objects().all(|a| {
                e.hom(adj.j.ob(a), adj.r.ob(x)).iter().all(|&v| {
                    e.then(v, g) == prime.sharp(a, c.mor(adj.flat(a, x, v)))
                })
            })
        });
        match found {
            Some(g) => components.push(g),
            None => return Ok(None),
        }
    }
    let rho = NatTrans {
        source: adj.r.clone(),
        target: c.then(&prime.r)?,
        components,
    };
    Ok(rho.naturality_failure().is_none().then_some(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{enumerate_functors, Obj};
    use crate::testcats::{bz2, disc2, interval, parallel, terminal};
    use std::sync::Arc;

    fn identity_adj(c: &Arc<crate::FinCategory>) -> RelativeAdjunction {
        let id = Functor::identity(c);
        RelativeAdjunction::from_fn(&id, &id, &id, |_, k| k).unwrap()
    }

    #[test]
    fn terminal_object_as_extension() {
        let b = Budget::unlimited();
        let e = interval();
        let adj = identity_adj(&e);
        let c = Functor::to_terminal(&e).with_cod(&terminal());
        let top = Functor::constant(&terminal(), &e, Obj(1));
        let rep = check_right_morphisms(&adj, &c, &top, &b).unwrap();
        assert!(rep.dense && rep.agree);
        assert_eq!(rep.cases.len(), 1);
        assert!(rep.cases[0].right_morphism && rep.cases[0].colimiting);
        let bottom = Functor::constant(&terminal(), &e, Obj(0));
        assert!(check_right_morphisms(&adj, &c, &bottom, &b).unwrap().cases.is_empty());
    }

    #[test]
    fn derived_rho_is_the_compatible_one() {
        let b = Budget::unlimited();
        let e = interval();
        let adj = identity_adj(&e);
        let c = Functor::to_terminal(&e).with_cod(&terminal());
        let top = Functor::constant(&terminal(), &e, Obj(1));
        let rho = search_all(&adj.r, &c.then(&top).unwrap(), &b).remove(0);
        let prime = induced_adjunction(&adj, &c, &top, &rho).unwrap().unwrap();
        assert_eq!(derive_rho(&adj, &prime, &c).unwrap(), Some(rho));
    }

    fn search_all(f: &Functor, g: &Functor, b: &Budget) -> Vec<NatTrans> {
        crate::fincat::enumerate_natural_transformations(f, g, b).unwrap()
    }

    // The equivalence holds for every c, r' and ρ once j is dense; the sweep
    // is exhaustive over small intermediate categories.
    #[test]
    fn equivalence_sweep_over_dense_roots() {
        let b = Budget::unlimited();
        let mut cases = 0;
        for e in [interval(), bz2(), parallel()] {
            let adj = identity_adj(&e);
            for mid in [terminal(), disc2(), interval(), bz2()] {
                for c in enumerate_functors(&e, &mid, &b).unwrap() {
                    for rp in enumerate_functors(&mid, &e, &b).unwrap() {
                        let rep = check_right_morphisms(&adj, &c, &rp, &b).unwrap();
                        assert!(rep.dense);
                        assert!(rep.agree, "{c:?} {rp:?} {rep:?}");
                        cases += rep.cases.len();
                    }
                }
            }
        }
        assert!(cases > 10);
    }
}
