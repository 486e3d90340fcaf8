use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{opposite, same_category, FinCategory, Functor, Mor, Obj};
use crate::prof::{corepresentable, Distributor};
use crate::solve::Problem;

/// A `p`-cocone `(w, λ)` for `f`: `p: X ⇸ Y`, `f: Y -> W`, `w: X -> W` and
/// legs `λ(u): f y -> w x` for `u` in `p(y, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocone {
    pub weight: Distributor,
    pub diagram: Functor,
    pub apex: Functor,
    /// Indexed by `weight.flat(y, x, u)`.
    pub legs: Vec<Mor>,
}

/// A `p`-cone `(w, μ)` for `g`: `p: X ⇸ Y`, `g: X -> W`, `w: Y -> W` and
/// legs `μ(u): w y -> g x` for `u` in `p(y, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub weight: Distributor,
    pub diagram: Functor,
    pub apex: Functor,
    /// Indexed by `weight.flat(y, x, u)`.
    pub legs: Vec<Mor>,
}

/// One hom-set bijection `W(apex x, t) ≅ cocones(x, t)`, recorded by size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub x: String,
    pub target: String,
    pub morphisms: usize,
    pub families: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedColimit {
    pub cocone: Cocone,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedLimit {
    pub cone: Cone,
    pub certificates: Vec<Certificate>,
}

/// The elements of one column `p(-, x)`, in `(y, u)` order.
pub(crate) struct Column {
    pub x: Obj,
    pub elems: Vec<(Obj, u32)>,
    start: Vec<usize>,
}

impl Column {
    pub fn new(p: &Distributor, x: Obj) -> Self {
        let mut elems = Vec::new();
        let mut start = Vec::with_capacity(p.tgt().num_objects());
        for y in p.tgt().objects() {
            start.push(elems.len());
            elems.extend((0..p.size(y, x) as u32).map(|u| (y, u)));
        }
        Self { x, elems, start }
    }

    pub fn pos(&self, y: Obj, u: u32) -> usize {
        self.start[y.0] + u as usize
    }

    pub fn legs(&self, p: &Distributor, legs: &[Mor]) -> Vec<Mor> {
        self.elems
            .iter()
            .map(|&(y, u)| legs[p.flat(y, self.x, u)])
            .collect()
    }
}

fn family_problem<'a>(p: &'a Distributor, f: &'a Functor, col: &Column, t: Obj) -> Problem<'a> {
    let w = &**f.cod();
    let y_cat = p.tgt();
    let mut prob = Problem::new();
    for &(y, _) in &col.elems {
        prob.var(w.hom(f.ob(y), t).iter().map(|m| m.0 as u32).collect());
    }
    for (i, &(y, u)) in col.elems.iter().enumerate() {
        for m in y_cat.into_obj(y) {
            if y_cat.is_identity(m) {
                continue;
            }
            let j = col.pos(y_cat.dom(m), p.act_right(m, col.x, u));
            let fm = f.mor(m);
            prob.derive(i, j, move |v| Some(w.then(fm, Mor(v as usize)).0 as u32));
        }
    }
    prob
}

/// Visits the natural families `p(-, x) => W(f -, t)` in canonical order.
pub(crate) fn search_families(
    p: &Distributor,
    f: &Functor,
    col: &Column,
    t: Obj,
    budget: &Budget,
    mut visit: impl FnMut(&[Mor]) -> ControlFlow<()>,
) -> Result<()> {
    let prob = family_problem(p, f, col, t);
    let mut buf = Vec::with_capacity(col.elems.len());
    prob.solve(budget, |a| {
        buf.clear();
        buf.extend(a.iter().map(|&v| Mor(v as usize)));
        visit(&buf)
    })
}

pub(crate) fn count_families(
    p: &Distributor,
    f: &Functor,
    col: &Column,
    t: Obj,
    cap: usize,
    budget: &Budget,
) -> Result<usize> {
    family_problem(p, f, col, t).count(budget, cap)
}

/// Family counts `|cocones(x, t)|` for every `t`, capped just above the
/// largest hom-set of `W` so that only equality with a hom-set matters.
pub(crate) fn family_counts(
    p: &Distributor,
    f: &Functor,
    col: &Column,
    budget: &Budget,
) -> Result<Vec<usize>> {
    let w = f.cod();
    let cap = w
        .objects()
        .flat_map(|a| w.objects().map(move |b| (a, b)))
        .map(|(a, b)| w.hom(a, b).len())
        .max()
        .unwrap_or(0)
        + 1;
    w.objects()
        .map(|t| count_families(p, f, col, t, cap, budget))
        .collect()
}

/// Why `(apex, legs)` fails to be universal at a column, if it does.
pub(crate) fn universality_failure(
    w: &FinCategory,
    apex: Obj,
    legs: &[Mor],
    counts: &[usize],
) -> Option<(Obj, String)> {
    for t in w.objects() {
        let hom = w.hom(apex, t);
        if hom.len() != counts[t.0] {
            return Some((
                t,
                format!(
                    "{} morphisms but {} cocones",
                    hom.len(),
                    if counts[t.0] > hom.len() {
                        format!("at least {}", counts[t.0])
                    } else {
                        counts[t.0].to_string()
                    }
                ),
            ));
        }
        let mut seen = HashSet::with_capacity(hom.len());
        for &k in hom {
            let image: Vec<Mor> = legs.iter().map(|&l| w.then(l, k)).collect();
            if !seen.insert(image) {
                return Some((t, format!("`{}` is not determined by its cocone", w.name(k))));
            }
        }
    }
    None
}

fn check_diagram(p: &Distributor, f: &Functor) -> Result<()> {
    if same_category(f.dom(), p.tgt()) {
        Ok(())
    } else {
        Err(Error::EndpointMismatch(
            "the diagram must start at the target of the weight".into(),
        ))
    }
}

impl Cocone {
    pub fn leg(&self, y: Obj, x: Obj, u: u32) -> Mor {
        self.legs[self.weight.flat(y, x, u)]
    }

    /// Endpoint and naturality failures, described.
    pub fn violations(&self) -> Vec<String> {
        let (p, f, w) = (&self.weight, &self.diagram, &self.apex);
        let c = &**f.cod();
        let (x_cat, y_cat) = (p.src(), p.tgt());
        let mut out = Vec::new();
        for k in 0..p.total_elements() {
            let (y, x, u) = p.unflat(k);
            let l = self.legs[k];
            if c.dom(l) != f.ob(y) || c.cod(l) != w.ob(x) {
                out.push(format!("leg at `{}` has the wrong endpoints", p.name(y, x, u)));
                continue;
            }
            for m in y_cat.into_obj(y) {
                let lhs = self.leg(y_cat.dom(m), x, p.act_right(m, x, u));
                if c.compose(f.mor(m), l) != Some(lhs) {
                    out.push(format!(
                        "not natural at `{}` along `{}`",
                        p.name(y, x, u),
                        y_cat.name(m)
                    ));
                }
            }
            for n in x_cat.out_of(x) {
                let rhs = self.leg(y, x_cat.cod(n), p.act_left(n, y, u));
                if c.compose(l, w.mor(n)) != Some(rhs) {
                    out.push(format!(
                        "not natural at `{}` along `{}`",
                        p.name(y, x, u),
                        x_cat.name(n)
                    ));
                }
            }
        }
        out
    }

    /// The image `(w;g, λ;g)` of the cocone under `g`.
    pub fn then(&self, g: &Functor) -> Result<Cocone> {
        Ok(Cocone {
            weight: self.weight.clone(),
            diagram: self.diagram.then(g)?,
            apex: self.apex.then(g)?,
            legs: self.legs.iter().map(|&l| g.mor(l)).collect(),
        })
    }

    /// The first object of `X` at which the cocone is not universal.
    pub fn colimit_failure(&self, budget: &Budget) -> Result<Option<(Obj, String)>> {
        let p = &self.weight;
        for x in p.src().objects() {
            let col = Column::new(p, x);
            let counts = family_counts(p, &self.diagram, &col, budget)?;
            let legs = col.legs(p, &self.legs);
            if let Some((t, why)) =
                universality_failure(self.diagram.cod(), self.apex.ob(x), &legs, &counts)
            {
                let w = self.diagram.cod();
                return Ok(Some((
                    x,
                    format!("towards `{}`: {why}", w.object_name(t)),
                )));
            }
        }
        Ok(None)
    }

    pub fn is_colimit(&self, budget: &Budget) -> Result<bool> {
        Ok(self.colimit_failure(budget)?.is_none())
    }

    /// The same data read as a cone in the opposite category.
    pub fn into_cone_of_dual(self, weight: &Distributor, diagram: &Functor) -> Cone {
        let dual = &self.weight;
        let legs = (0..weight.total_elements())
            .map(|k| {
                let (y, x, u) = weight.unflat(k);
                self.legs[dual.flat(x, y, u)]
            })
            .collect();
        Cone {
            weight: weight.clone(),
            diagram: diagram.clone(),
            apex: self.apex.op_with(weight.tgt(), diagram.cod()),
            legs,
        }
    }
}

/// Opposite categories of the three categories involved in a (co)limit.
pub(crate) struct Duals {
    pub x: Arc<FinCategory>,
    pub y: Arc<FinCategory>,
    pub w: Arc<FinCategory>,
}

impl Duals {
    pub fn new(p: &Distributor, w: &Arc<FinCategory>) -> Self {
        Self {
            x: Arc::new(opposite(p.src())),
            y: Arc::new(opposite(p.tgt())),
            w: Arc::new(opposite(w)),
        }
    }
}

impl Cone {
    pub fn leg(&self, y: Obj, x: Obj, u: u32) -> Mor {
        self.legs[self.weight.flat(y, x, u)]
    }

    /// The cone read as a cocone in the dual, against prebuilt opposites.
    pub(crate) fn to_dual_cocone(&self, d: &Duals) -> Cocone {
        let p = &self.weight;
        let weight = p.op_with(&d.x, &d.y);
        let legs = (0..weight.total_elements())
            .map(|k| {
                let (x, y, u) = weight.unflat(k);
                self.legs[p.flat(y, x, u)]
            })
            .collect();
        Cocone {
            diagram: self.diagram.op_with(&d.x, &d.w),
            apex: self.apex.op_with(&d.y, &d.w),
            weight,
            legs,
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let d = Duals::new(&self.weight, self.diagram.cod());
        self.to_dual_cocone(&d).violations()
    }

    pub fn limit_failure(&self, budget: &Budget) -> Result<Option<(Obj, String)>> {
        let d = Duals::new(&self.weight, self.diagram.cod());
        self.to_dual_cocone(&d).colimit_failure(budget)
    }

    pub fn is_limit(&self, budget: &Budget) -> Result<bool> {
        Ok(self.limit_failure(budget)?.is_none())
    }
}

/// The `p`-weighted colimit `p ⊛ f`, with the least representing object and
/// the least universal cocone at each `x`, or `NotFound` naming the first
/// `x` that has none.
pub fn weighted_colimit(p: &Distributor, f: &Functor, budget: &Budget) -> Result<WeightedColimit> {
    check_diagram(p, f)?;
    let w = &**f.cod();
    let x_cat = p.src();
    let mut apex_ob = Vec::with_capacity(x_cat.num_objects());
    let mut legs = vec![Mor(0); p.total_elements()];
    let mut certificates = Vec::new();
    for x in x_cat.objects() {
        let col = Column::new(p, x);
        let counts = family_counts(p, f, &col, budget)?;
        let mut found = None;
        for cand in w.objects() {
            if w.objects().any(|t| w.hom(cand, t).len() != counts[t.0]) {
                continue;
            }
            search_families(p, f, &col, cand, budget, |fam| {
                if universality_failure(w, cand, fam, &counts).is_none() {
                    found = Some((cand, fam.to_vec()));
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            if found.is_some() {
                break;
            }
        }
        let Some((apex, fam)) = found else {
            return Err(Error::NotFound(format!(
                "no colimit at `{}`",
                x_cat.object_name(x)
            )));
        };
        for (i, &(y, u)) in col.elems.iter().enumerate() {
            legs[p.flat(y, x, u)] = fam[i];
        }
        apex_ob.push(apex);
        for t in w.objects() {
            certificates.push(Certificate {
                x: x_cat.object_name(x).to_string(),
                target: w.object_name(t).to_string(),
                morphisms: w.hom(apex, t).len(),
                families: counts[t.0],
            });
        }
    }
    // the action on morphisms is forced by the universal property
    let apex_mor = x_cat
        .morphism_ids()
        .map(|n| {
            let (x, x2) = (x_cat.dom(n), x_cat.cod(n));
            let col = Column::new(p, x);
            *w.hom(apex_ob[x.0], apex_ob[x2.0])
                .iter()
                .find(|&&k| {
                    col.elems.iter().all(|&(y, u)| {
                        w.then(legs[p.flat(y, x, u)], k)
                            == legs[p.flat(y, x2, p.act_left(n, y, u))]
                    })
                })
                .expect("universal property yields a factorization")
        })
        .collect();
    let apex = Functor::new_unchecked(x_cat.clone(), f.cod().clone(), apex_ob, apex_mor);
    Ok(WeightedColimit {
        cocone: Cocone {
            weight: p.clone(),
            diagram: f.clone(),
            apex,
            legs,
        },
        certificates,
    })
}

impl WeightedColimit {
    pub fn apex(&self) -> &Functor {
        &self.cocone.apex
    }

    /// Re-checks naturality, functoriality of the apex and every bijection.
    pub fn reverify(&self, budget: &Budget) -> Result<bool> {
        let c = &self.cocone;
        if !c.violations().is_empty() || !c.apex.violations().is_empty() {
            return Ok(false);
        }
        let w = c.diagram.cod();
        for x in c.weight.src().objects() {
            let col = Column::new(&c.weight, x);
            for t in w.objects() {
                let hom = w.hom(c.apex.ob(x), t).len();
                let n = count_families(&c.weight, &c.diagram, &col, t, hom + 2, budget)?;
                if n != hom {
                    return Ok(false);
                }
            }
        }
        c.is_colimit(budget)
    }
}

/// The `p`-weighted limit of `g: X -> W`, a functor `Y -> W`, computed as
/// the dual of a weighted colimit.
pub fn weighted_limit(p: &Distributor, g: &Functor, budget: &Budget) -> Result<WeightedLimit> {
    if !same_category(g.dom(), p.src()) {
        return Err(Error::EndpointMismatch(
            "the diagram must start at the source of the weight".into(),
        ));
    }
    let d = Duals::new(p, g.cod());
    let pop = p.op_with(&d.x, &d.y);
    let gop = g.op_with(&d.x, &d.w);
    let colim = weighted_colimit(&pop, &gop, budget)?;
    let certificates = colim.certificates;
    Ok(WeightedLimit {
        cone: colim.cocone.into_cone_of_dual(p, g),
        certificates,
    })
}

impl WeightedLimit {
    pub fn apex(&self) -> &Functor {
        &self.cone.apex
    }

    pub fn reverify(&self, budget: &Budget) -> Result<bool> {
        let d = Duals::new(&self.cone.weight, self.cone.diagram.cod());
        WeightedColimit {
            cocone: self.cone.to_dual_cocone(&d),
            certificates: Vec::new(),
        }
        .reverify(budget)
    }
}

/// The pointwise left extension `c ▷ r`: the `C'(c, 1)`-weighted colimit of `r`.
pub fn left_extension(c: &Functor, r: &Functor, budget: &Budget) -> Result<WeightedColimit> {
    if !same_category(c.dom(), r.dom()) {
        return Err(Error::EndpointMismatch(
            "extension data must share a domain".into(),
        ));
    }
    weighted_colimit(&corepresentable(c), r, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{CategoryDesc, MorphismDesc};
    use crate::prof::{hom_distributor, restrict_distributor};

    fn interval() -> Arc<FinCategory> {
        Arc::new(
            FinCategory::from_desc(&CategoryDesc {
                objects: vec!["0".into(), "1".into()],
                morphisms: vec![
                    MorphismDesc { name: "id0".into(), dom: "0".into(), cod: "0".into() },
                    MorphismDesc { name: "id1".into(), dom: "1".into(), cod: "1".into() },
                    MorphismDesc { name: "u".into(), dom: "0".into(), cod: "1".into() },
                ],
                identities: [("0", "id0"), ("1", "id1")]
                    .into_iter()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect(),
                composition: [
                    ("id0;id0", "id0"),
                    ("id1;id1", "id1"),
                    ("id0;u", "u"),
                    ("u;id1", "u"),
                ]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            })
            .unwrap(),
        )
    }

    fn indisc2() -> Arc<FinCategory> {
        let mut morphisms = Vec::new();
        let mut composition = std::collections::BTreeMap::new();
        let name = |a: &str, b: &str| format!("{a}{b}");
        for a in ["a", "b"] {
            for b in ["a", "b"] {
                morphisms.push(MorphismDesc { name: name(a, b), dom: a.into(), cod: b.into() });
                for c in ["a", "b"] {
                    composition.insert(format!("{};{}", name(a, b), name(b, c)), name(a, c));
                }
            }
        }
        Arc::new(
            FinCategory::from_desc(&CategoryDesc {
                objects: vec!["a".into(), "b".into()],
                morphisms,
                identities: [("a", "aa"), ("b", "bb")]
                    .into_iter()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect(),
                composition,
            })
            .unwrap(),
        )
    }

    #[test]
    fn representable_weight_gives_the_value() {
        let i = interval();
        let t = Arc::new(FinCategory::terminal());
        for y0 in i.objects() {
            // p(y, *) = I(y, y0)
            let point = Functor::constant(&t, &i, y0);
            let p = restrict_distributor(&hom_distributor(&i), &Functor::identity(&i), &point)
                .unwrap();
            let colim = weighted_colimit(&p, &Functor::identity(&i), &Budget::unlimited()).unwrap();
            assert!(i.isomorphic(colim.apex().ob(Obj(0)), y0));
            assert!(colim.reverify(&Budget::unlimited()).unwrap());
        }
    }

    #[test]
    fn empty_weight_finds_initial_and_terminal() {
        let i = interval();
        let t = Arc::new(FinCategory::terminal());
        let empty = Distributor::from_fn(&t, &i, |_, _| Vec::new(), |_, _, u| u, |_, _, u| u);
        let b = Budget::unlimited();
        let colim = weighted_colimit(&empty, &Functor::identity(&i), &b).unwrap();
        assert_eq!(colim.apex().ob(Obj(0)), Obj(0));
        // the same weight read as a limit weight over the empty diagram side
        let e = Arc::new(FinCategory::empty());
        let lw = Distributor::from_fn(&e, &t, |_, _| Vec::new(), |_, _, u| u, |_, _, u| u);
        let lim = weighted_limit(&lw, &Functor::empty_into(&i).with_dom(&e), &b).unwrap();
        assert_eq!(lim.apex().ob(Obj(0)), Obj(1));
        assert!(lim.reverify(&b).unwrap());
    }

    #[test]
    fn indiscrete_point_weight_picks_least_object() {
        let c = indisc2();
        let t = Arc::new(FinCategory::terminal());
        let b = Budget::unlimited();
        for y0 in c.objects() {
            let point = Functor::constant(&t, &c, y0);
            let p = restrict_distributor(&hom_distributor(&c), &Functor::identity(&c), &point)
                .unwrap();
            let colim = weighted_colimit(&p, &Functor::identity(&c), &b).unwrap();
            assert_eq!(colim.apex().ob(Obj(0)), Obj(0));
            assert!(colim.reverify(&b).unwrap());
        }
    }

    #[test]
    fn discrete_coproduct_is_missing() {
        let d2 = Arc::new(FinCategory::discrete(["a", "b"]));
        let t = Arc::new(FinCategory::terminal());
        let all = Distributor::from_fn(
            &t,
            &d2,
            |_, _| vec!["u".into()],
            |_, _, u| u,
            |_, _, u| u,
        );
        assert!(matches!(
            weighted_colimit(&all, &Functor::identity(&d2), &Budget::unlimited()),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn extension_along_identity_is_the_functor() {
        let i = interval();
        let id = Functor::identity(&i);
        let ext = left_extension(&id, &id, &Budget::unlimited()).unwrap();
        assert_eq!(ext.apex().object_map(), id.object_map());
        // unit components are identities
        let p = &ext.cocone.weight;
        for x in i.objects() {
            let u = p.element(x, x, i.name(i.id(x))).unwrap();
            assert_eq!(ext.cocone.leg(x, x, u), i.id(x));
        }
    }

    #[test]
    fn extension_to_terminal_of_indiscrete() {
        let c = indisc2();
        let to_t = Functor::to_terminal(&c);
        let ext = left_extension(&to_t, &Functor::identity(&c), &Budget::unlimited()).unwrap();
        assert_eq!(ext.apex().ob(Obj(0)), Obj(0));
    }

    #[test]
    fn limit_is_dual_of_colimit() {
        let i = interval();
        let b = Budget::unlimited();
        let h = hom_distributor(&i);
        let id = Functor::identity(&i);
        let lim = weighted_limit(&h, &id, &b).unwrap();
        let d = Duals::new(&h, &i);
        let colim = weighted_colimit(&h.op_with(&d.x, &d.y), &id.op_with(&d.x, &d.w), &b).unwrap();
        assert_eq!(lim.apex().object_map(), colim.apex().object_map());
        assert_eq!(lim.apex().morphism_map(), colim.apex().morphism_map());
        assert_eq!(lim.cone.to_dual_cocone(&d).legs, colim.cocone.legs);
    }
}
