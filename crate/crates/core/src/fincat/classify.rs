use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use super::category::{FinCategory, Mor, Obj};
use super::functor::{enumerate_functors, Functor};
use super::natural::{find_natural_iso, search_natural_transformations};
use crate::budget::Budget;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagWitness {
    pub flag: &'static str,
    pub detail: String,
}

/// Structural properties of a functor, each failure with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorClassification {
    pub faithful: bool,
    pub full: bool,
    pub essentially_surjective: bool,
    pub bijective_on_objects: bool,
    pub bijective_on_morphisms: bool,
    pub conservative: bool,
    pub is_iso: bool,
    pub is_equivalence: bool,
    pub witnesses: Vec<FlagWitness>,
    /// A quasi-inverse when the functor is an equivalence.
    #[serde(skip)]
    pub quasi_inverse: Option<Functor>,
}

pub fn classify_functor(f: &Functor) -> FunctorClassification {
    let c = &**f.dom();
    let d = &**f.cod();
    let mut witnesses = Vec::new();

    let mut faithful = true;
    let mut full = true;
    'outer: for x in c.objects() {
        for y in c.objects() {
            let hom = c.hom(x, y);
            for (i, &g) in hom.iter().enumerate() {
                if let Some(&h) = hom[i + 1..].iter().find(|&&h| f.mor(h) == f.mor(g)) {
                    faithful = false;
                    witnesses.push(FlagWitness {
                        flag: "faithful",
                        detail: format!("`{}` and `{}` have the same image", c.name(g), c.name(h)),
                    });
                    break 'outer;
                }
            }
        }
    }
    'outer: for x in c.objects() {
        for y in c.objects() {
            for &m in d.hom(f.ob(x), f.ob(y)) {
                if !c.hom(x, y).iter().any(|&g| f.mor(g) == m) {
                    full = false;
                    witnesses.push(FlagWitness {
                        flag: "full",
                        detail: format!(
                            "`{}` between images of `{}` and `{}` is not hit",
                            d.name(m),
                            c.object_name(x),
                            c.object_name(y)
                        ),
                    });
                    break 'outer;
                }
            }
        }
    }

    let mut essentially_surjective = true;
    for y in d.objects() {
        if !c.objects().any(|x| d.isomorphic(f.ob(x), y)) {
            essentially_surjective = false;
            witnesses.push(FlagWitness {
                flag: "essentially_surjective",
                detail: format!("`{}` is not isomorphic to any image", d.object_name(y)),
            });
            break;
        }
    }

    let bijective_on_objects = bijection_witness(
        c.num_objects(),
        d.num_objects(),
        |i| f.ob(Obj(i)).0,
        |i| c.object_name(Obj(i)).to_string(),
        |j| d.object_name(Obj(j)).to_string(),
    )
    .map(|w| {
        witnesses.push(FlagWitness {
            flag: "bijective_on_objects",
            detail: w,
        })
    })
    .is_none();
    let bijective_on_morphisms = bijection_witness(
        c.num_morphisms(),
        d.num_morphisms(),
        |i| f.mor(Mor(i)).0,
        |i| c.name(Mor(i)).to_string(),
        |j| d.name(Mor(j)).to_string(),
    )
    .map(|w| {
        witnesses.push(FlagWitness {
            flag: "bijective_on_morphisms",
            detail: w,
        })
    })
    .is_none();

    let mut conservative = true;
    for g in c.morphism_ids() {
        if d.is_iso(f.mor(g)) && !c.is_iso(g) {
            conservative = false;
            witnesses.push(FlagWitness {
                flag: "conservative",
                detail: format!("`{}` is not invertible but its image is", c.name(g)),
            });
            break;
        }
    }

    let is_iso = bijective_on_objects && bijective_on_morphisms;
    let is_equivalence = full && faithful && essentially_surjective;
    if !is_iso {
        witnesses.push(FlagWitness {
            flag: "is_iso",
            detail: "not bijective on objects and morphisms".into(),
        });
    }
    if !is_equivalence {
        witnesses.push(FlagWitness {
            flag: "is_equivalence",
            detail: "not full, faithful and essentially surjective".into(),
        });
    }
    let quasi_inverse = if is_equivalence {
        Some(quasi_inverse(f))
    } else {
        None
    };
    FunctorClassification {
        faithful,
        full,
        essentially_surjective,
        bijective_on_objects,
        bijective_on_morphisms,
        conservative,
        is_iso,
        is_equivalence,
        witnesses,
        quasi_inverse,
    }
}

fn bijection_witness(
    n: usize,
    m: usize,
    map: impl Fn(usize) -> usize,
    src: impl Fn(usize) -> String,
    tgt: impl Fn(usize) -> String,
) -> Option<String> {
    let mut hit: Vec<Option<usize>> = vec![None; m];
    for i in 0..n {
        let j = map(i);
        if let Some(k) = hit[j] {
            return Some(format!("`{}` and `{}` have the same image", src(k), src(i)));
        }
        hit[j] = Some(i);
    }
    hit.iter()
        .position(|h| h.is_none())
        .map(|j| format!("`{}` is not hit", tgt(j)))
}

/// Builds `G` with `G;F ~ 1` from a chosen least isomorphism `F(G d) -> d`.
///
/// Only meaningful when `f` is full, faithful and essentially surjective.
fn quasi_inverse(f: &Functor) -> Functor {
    let c = f.dom();
    let d = f.cod();
    let mut pick = Vec::with_capacity(d.num_objects());
    let mut iso = Vec::with_capacity(d.num_objects());
    for y in d.objects() {
        let (x, m) = c
            .objects()
            .find_map(|x| d.find_iso(f.ob(x), y).map(|m| (x, m)))
            .expect("essentially surjective");
        pick.push(x);
        iso.push(m);
    }
    let on_mor = d
        .morphism_ids()
        .map(|k| {
            let (y, y2) = (d.dom(k), d.cod(k));
            let target = d.then(d.then(iso[y.0], k), d.inverse(iso[y2.0]).unwrap());
            *c.hom(pick[y.0], pick[y2.0])
                .iter()
                .find(|&&g| f.mor(g) == target)
                .expect("full and faithful")
        })
        .collect();
    Functor::new_unchecked(d.clone(), c.clone(), pick, on_mor)
}

/// Whether the two composites with the quasi-inverse are naturally isomorphic to identities.
pub fn verify_equivalence(f: &Functor, g: &Functor, budget: &Budget) -> Result<bool> {
    let fg = f.then(g)?;
    let gf = g.then(f)?;
    Ok(find_natural_iso(&fg, &Functor::identity(f.dom()), budget)?.is_some()
        && find_natural_iso(&gf, &Functor::identity(f.cod()), budget)?.is_some())
}

/// Conservativity checked on 2-cells: for functors `h, k: X -> C` out of each
/// shape and `phi: h => k`, invertibility of `phi;F` must imply that of `phi`.
pub fn conservative_on_cells(
    f: &Functor,
    shapes: &[Arc<FinCategory>],
    budget: &Budget,
) -> Result<bool> {
    let c = f.dom();
    let d = f.cod();
    for x in shapes {
        let fs = enumerate_functors(x, c, budget)?;
        for h in &fs {
            for k in &fs {
                let mut ok = true;
                search_natural_transformations(h, k, &|_, _| true, budget, |phi| {
                    let image_iso = phi.components.iter().all(|&m| d.is_iso(f.mor(m)));
                    if image_iso && !phi.is_iso() {
                        ok = false;
                        return ControlFlow::Break(());
                    }
                    ControlFlow::Continue(())
                })?;
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
