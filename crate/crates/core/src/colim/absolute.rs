use std::collections::HashSet;

use serde::Serialize;

use super::cocone::Cocone;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{same_category, Functor, Mor, Obj};
use crate::prof::TensorSet;
use crate::solve::Problem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsolutenessWitness {
    pub a: String,
    pub x: String,
    pub classes: usize,
    pub morphisms: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsolutenessReport {
    pub absolute: bool,
    pub witness: Option<AbsolutenessWitness>,
}

/// Whether the colimit cocone is preserved by the nerve `E(j-, -)`: for every
/// `a` and `x` the canonical map `E(j a, f -) ⊗ p(-, x) -> E(j a, w x)` must
/// be a bijection.
pub fn is_j_absolute(j: &Functor, colim: &Cocone, budget: &Budget) -> Result<AbsolutenessReport> {
    if !same_category(j.cod(), colim.diagram.cod()) {
        return Err(Error::EndpointMismatch(
            "the root must land where the colimit lives".into(),
        ));
    }
    let e = &**j.cod();
    let (p, f) = (&colim.weight, &colim.diagram);
    for a in j.dom().objects() {
        let ja = j.ob(a);
        for x in p.src().objects() {
            budget.charge(1)?;
            let ts = TensorSet::new(
                p,
                x,
                |y| e.hom(ja, f.ob(y)).len(),
                |m, l| {
                    let v = e.hom(ja, f.ob(p.tgt().dom(m)))[l as usize];
                    e.hom_pos(e.then(v, f.mor(m))) as u32
                },
            );
            let target = e.hom(ja, colim.apex.ob(x));
            let mut hit = HashSet::with_capacity(target.len());
            let mut reason = None;
            for (y, l, u) in ts.representatives() {
                let v = e.hom(ja, f.ob(y))[l as usize];
                let image: Mor = e.then(v, colim.leg(y, x, u));
                if !hit.insert(image) {
                    reason = Some(format!(
                        "two classes are sent to `{}`",
                        e.name(image)
                    ));
                    break;
                }
            }
            if reason.is_none() && hit.len() != target.len() {
                let missing = target.iter().find(|m| !hit.contains(m)).unwrap();
                reason = Some(format!("`{}` is not in the image", e.name(*missing)));
            }
            if let Some(reason) = reason {
                return Ok(AbsolutenessReport {
                    absolute: false,
                    witness: Some(AbsolutenessWitness {
                        a: j.dom().object_name(a).to_string(),
                        x: p.src().object_name(x).to_string(),
                        classes: ts.num_classes(),
                        morphisms: target.len(),
                        reason,
                    }),
                });
            }
        }
    }
    Ok(AbsolutenessReport {
        absolute: true,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityWitness {
    pub source: String,
    pub target: String,
    pub morphisms: usize,
    pub families: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub dense: bool,
    pub witness: Option<DensityWitness>,
}

/// Natural families `E(j-, e) => E(j-, e2)` as a constraint problem; the
/// variables are indexed by `(a, position in E(j a, e))`.
fn nerve_problem<'a>(j: &'a Functor, e: Obj, e2: Obj) -> (Problem<'a>, Vec<usize>) {
    let c = &**j.cod();
    let a_cat = j.dom();
    let mut base = Vec::with_capacity(a_cat.num_objects());
    let mut prob = Problem::new();
    for a in a_cat.objects() {
        base.push(prob.num_vars());
        for _ in c.hom(j.ob(a), e) {
            prob.var(c.hom(j.ob(a), e2).iter().map(|m| m.0 as u32).collect());
        }
    }
    // φ(j h; v) = j h; φ(v) for h: a' -> a
    for h in a_cat.morphism_ids() {
        if a_cat.is_identity(h) {
            continue;
        }
        let (a2, a) = (a_cat.dom(h), a_cat.cod(h));
        let jh = j.mor(h);
        for (i, &v) in c.hom(j.ob(a), e).iter().enumerate() {
            let to = base[a2.0] + c.hom_pos(c.then(jh, v));
            prob.derive(base[a.0] + i, to, move |phi| {
                Some(c.then(jh, Mor(phi as usize)).0 as u32)
            });
        }
    }
    (prob, base)
}

/// Whether the nerve `E -> [A^op, Set]` of `j` is fully faithful.
pub fn is_dense(j: &Functor, budget: &Budget) -> Result<DensityReport> {
    let c = &**j.cod();
    let a_cat = j.dom();
    for e in c.objects() {
        for e2 in c.objects() {
            let hom = c.hom(e, e2);
            let (prob, _) = nerve_problem(j, e, e2);
            let n = prob.count(budget, hom.len() + 1)?;
            let mut reason = None;
            if n != hom.len() {
                reason = Some("the number of natural families differs".to_string());
            } else {
                let mut seen = HashSet::new();
                for &k in hom {
                    let image: Vec<Mor> = a_cat
                        .objects()
                        .flat_map(|a| c.hom(j.ob(a), e).iter().map(move |&v| c.then(v, k)))
                        .collect();
                    if !seen.insert(image) {
                        reason = Some(format!("`{}` is not determined by its nerve", c.name(k)));
                        break;
                    }
                }
            }
            if let Some(reason) = reason {
                return Ok(DensityReport {
                    dense: false,
                    witness: Some(DensityWitness {
                        source: c.object_name(e).to_string(),
                        target: c.object_name(e2).to_string(),
                        morphisms: hom.len(),
                        families: if n > hom.len() {
                            format!("at least {n}")
                        } else {
                            n.to_string()
                        },
                        reason,
                    }),
                });
            }
        }
    }
    Ok(DensityReport {
        dense: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colim::weighted_colimit;
    use crate::fincat::{FinCategory, MorphismSig};
    use crate::prof::Distributor;
    use std::sync::Arc;

    fn bz2() -> Arc<FinCategory> {
        Arc::new(
            FinCategory::from_fn(
                vec!["*".into()],
                vec![
                    MorphismSig { name: "e".into(), dom: Obj(0), cod: Obj(0) },
                    MorphismSig { name: "s".into(), dom: Obj(0), cod: Obj(0) },
                ],
                vec![Mor(0)],
                |a, b| Mor(a.0 ^ b.0),
            )
            .unwrap(),
        )
    }

    fn indiscrete(n: usize) -> Arc<FinCategory> {
        let objects: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
        let morphisms = (0..n * n)
            .map(|k| MorphismSig {
                name: format!("m{}{}", k / n, k % n),
                dom: Obj(k / n),
                cod: Obj(k % n),
            })
            .collect();
        Arc::new(
            FinCategory::from_fn(
                objects,
                morphisms,
                (0..n).map(|i| Mor(i * n + i)).collect(),
                |f, g| Mor((f.0 / n) * n + g.0 % n),
            )
            .unwrap(),
        )
    }

    #[test]
    fn empty_root_density() {
        let b = Budget::unlimited();
        assert!(is_dense(&Functor::empty_into(&indiscrete(2)), &b).unwrap().dense);
        let d2 = Arc::new(FinCategory::discrete(["a", "b"]));
        let r = is_dense(&Functor::empty_into(&d2), &b).unwrap();
        assert!(!r.dense);
        assert!(r.witness.is_some());
    }

    #[test]
    fn identity_is_dense_and_point_into_bz2_is_not() {
        let b = Budget::unlimited();
        let c = bz2();
        assert!(is_dense(&Functor::identity(&c), &b).unwrap().dense);
        // with a discrete domain the nerve sees all four self-maps of M
        let t = Arc::new(FinCategory::terminal());
        let r = is_dense(&Functor::constant(&t, &c, Obj(0)), &b).unwrap();
        assert!(!r.dense);
        assert_eq!(r.witness.unwrap().families, "at least 3");
    }

    #[test]
    fn empty_root_makes_everything_absolute() {
        let c = indiscrete(2);
        let t = Arc::new(FinCategory::terminal());
        let p = Distributor::from_fn(&t, &c, |_, _| vec!["u".into()], |_, _, u| u, |_, _, u| u);
        let colim = weighted_colimit(&p, &Functor::identity(&c), &Budget::unlimited()).unwrap();
        let r = is_j_absolute(&Functor::empty_into(&c), &colim.cocone, &Budget::unlimited())
            .unwrap();
        assert!(r.absolute);
        // yoneda preserves this one too, as indiscrete colimits are absolute
        let r = is_j_absolute(&Functor::identity(&c), &colim.cocone, &Budget::unlimited())
            .unwrap();
        assert!(r.absolute);
    }
}
