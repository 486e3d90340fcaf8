use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::category::{opposite, FinCategory, Mor, Obj};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::solve::Problem;

/// Object and morphism assignments of a functor, by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorDesc {
    pub on_objects: BTreeMap<String, String>,
    pub on_morphisms: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum FunctorViolation {
    NotTotal { name: String },
    UnknownName { name: String, context: String },
    WrongEndpoints { f: String },
    BreaksIdentity { object: String },
    BreaksComposition { f: String, g: String },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotTotal { name } => write!(f, "`{name}` has no image"),
            Self::UnknownName { name, context } => write!(f, "unknown name `{name}` in {context}"),
            Self::WrongEndpoints { f: m } => write!(f, "image of `{m}` has the wrong endpoints"),
            Self::BreaksIdentity { object } => write!(f, "identity of `{object}` not preserved"),
            Self::BreaksComposition { f: a, g } => write!(f, "composite {a};{g} not preserved"),
        }
    }
}

pub(crate) fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A functor between finite categories, stored as index tables.
#[derive(Clone, Debug)]
pub struct Functor {
    dom: Arc<FinCategory>,
    cod: Arc<FinCategory>,
    on_obj: Vec<Obj>,
    on_mor: Vec<Mor>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.on_obj == other.on_obj
            && self.on_mor == other.on_mor
            && same_category(&self.dom, &other.dom)
            && same_category(&self.cod, &other.cod)
    }
}

impl Eq for Functor {}

impl Functor {
    /// Builds a functor from tables, checking every law.
    pub fn new(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        on_obj: Vec<Obj>,
        on_mor: Vec<Mor>,
    ) -> Result<Self> {
        let f = Self::new_unchecked(dom, cod, on_obj, on_mor);
        let v = f.violations();
        if v.is_empty() {
            Ok(f)
        } else {
            Err(Error::Functor(v))
        }
    }

    pub fn new_unchecked(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        on_obj: Vec<Obj>,
        on_mor: Vec<Mor>,
    ) -> Self {
        assert_eq!(on_obj.len(), dom.num_objects());
        assert_eq!(on_mor.len(), dom.num_morphisms());
        Self {
            dom,
            cod,
            on_obj,
            on_mor,
        }
    }

    pub fn identity(c: &Arc<FinCategory>) -> Self {
        Self::new_unchecked(
            c.clone(),
            c.clone(),
            c.objects().collect(),
            c.morphism_ids().collect(),
        )
    }

    pub fn constant(dom: &Arc<FinCategory>, cod: &Arc<FinCategory>, x: Obj) -> Self {
        Self::new_unchecked(
            dom.clone(),
            cod.clone(),
            vec![x; dom.num_objects()],
            vec![cod.id(x); dom.num_morphisms()],
        )
    }

    /// The unique functor out of the empty category.
    pub fn empty_into(cod: &Arc<FinCategory>) -> Self {
        Self::new_unchecked(
            Arc::new(FinCategory::empty()),
            cod.clone(),
            Vec::new(),
            Vec::new(),
        )
    }

    /// The unique functor into the terminal category.
    pub fn to_terminal(dom: &Arc<FinCategory>) -> Self {
        Self::constant(dom, &Arc::new(FinCategory::terminal()), Obj(0))
    }

    pub fn dom(&self) -> &Arc<FinCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCategory> {
        &self.cod
    }

    #[inline]
    pub fn ob(&self, x: Obj) -> Obj {
        self.on_obj[x.0]
    }

    #[inline]
    pub fn mor(&self, f: Mor) -> Mor {
        self.on_mor[f.0]
    }

    pub fn object_map(&self) -> &[Obj] {
        &self.on_obj
    }

    pub fn morphism_map(&self) -> &[Mor] {
        &self.on_mor
    }

    /// Replaces the codomain by an equal category (same tables).
    pub fn with_cod(&self, cod: &Arc<FinCategory>) -> Self {
        debug_assert!(same_category(&self.cod, cod));
        Self {
            cod: cod.clone(),
            ..self.clone()
        }
    }

    pub fn with_dom(&self, dom: &Arc<FinCategory>) -> Self {
        debug_assert!(same_category(&self.dom, dom));
        Self {
            dom: dom.clone(),
            ..self.clone()
        }
    }

    /// `self` then `g`.
    pub fn then(&self, g: &Functor) -> Result<Functor> {
        if !same_category(&self.cod, &g.dom) {
            return Err(Error::EndpointMismatch(
                "codomain of the first functor is not the domain of the second".into(),
            ));
        }
        Ok(Self::new_unchecked(
            self.dom.clone(),
            g.cod.clone(),
            self.on_obj.iter().map(|&x| g.ob(x)).collect(),
            self.on_mor.iter().map(|&f| g.mor(f)).collect(),
        ))
    }

    /// The same tables viewed as a functor between opposite categories.
    pub fn op(&self) -> Functor {
        self.op_with(&Arc::new(opposite(&self.dom)), &Arc::new(opposite(&self.cod)))
    }

    /// Like [`Functor::op`] but reusing already-built opposite categories.
    pub fn op_with(&self, dom_op: &Arc<FinCategory>, cod_op: &Arc<FinCategory>) -> Functor {
        Self::new_unchecked(
            dom_op.clone(),
            cod_op.clone(),
            self.on_obj.clone(),
            self.on_mor.clone(),
        )
    }

    pub fn is_identity(&self) -> bool {
        same_category(&self.dom, &self.cod)
            && self.on_obj.iter().enumerate().all(|(i, x)| x.0 == i)
            && self.on_mor.iter().enumerate().all(|(i, f)| f.0 == i)
    }

    pub fn violations(&self) -> Vec<FunctorViolation> {
        let (c, d) = (&*self.dom, &*self.cod);
        let mut out = Vec::new();
        for f in c.morphism_ids() {
            let g = self.mor(f);
            if d.dom(g) != self.ob(c.dom(f)) || d.cod(g) != self.ob(c.cod(f)) {
                out.push(FunctorViolation::WrongEndpoints {
                    f: c.name(f).to_string(),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for x in c.objects() {
            if self.mor(c.id(x)) != d.id(self.ob(x)) {
                out.push(FunctorViolation::BreaksIdentity {
                    object: c.object_name(x).to_string(),
                });
            }
        }
        for f in c.morphism_ids() {
            for g in c.morphism_ids() {
                if let Some(h) = c.compose(f, g) {
                    if d.compose(self.mor(f), self.mor(g)) != Some(self.mor(h)) {
                        out.push(FunctorViolation::BreaksComposition {
                            f: c.name(f).to_string(),
                            g: c.name(g).to_string(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn to_desc(&self) -> FunctorDesc {
        FunctorDesc {
            on_objects: self
                .dom
                .objects()
                .map(|x| {
                    (
                        self.dom.object_name(x).to_string(),
                        self.cod.object_name(self.ob(x)).to_string(),
                    )
                })
                .collect(),
            on_morphisms: self
                .dom
                .morphism_ids()
                .map(|f| {
                    (
                        self.dom.name(f).to_string(),
                        self.cod.name(self.mor(f)).to_string(),
                    )
                })
                .collect(),
        }
    }
}

/// Validates a functor description between two validated categories.
pub fn validate_functor(
    desc: &FunctorDesc,
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
) -> Result<Functor> {
    let mut violations = Vec::new();
    let mut on_obj = Vec::with_capacity(c.num_objects());
    for x in c.objects() {
        let name = c.object_name(x);
        match desc.on_objects.get(name) {
            None => violations.push(FunctorViolation::NotTotal { name: name.into() }),
            Some(y) => match d.obj(y) {
                None => violations.push(FunctorViolation::UnknownName {
                    name: y.clone(),
                    context: format!("image of object `{name}`"),
                }),
                Some(y) => on_obj.push(y),
            },
        }
    }
    let mut on_mor = Vec::with_capacity(c.num_morphisms());
    for f in c.morphism_ids() {
        let name = c.name(f);
        match desc.on_morphisms.get(name) {
            None => violations.push(FunctorViolation::NotTotal { name: name.into() }),
            Some(g) => match d.mor(g) {
                None => violations.push(FunctorViolation::UnknownName {
                    name: g.clone(),
                    context: format!("image of morphism `{name}`"),
                }),
                Some(g) => on_mor.push(g),
            },
        }
    }
    for k in desc.on_objects.keys() {
        if c.obj(k).is_none() {
            violations.push(FunctorViolation::UnknownName {
                name: k.clone(),
                context: "on_objects".into(),
            });
        }
    }
    for k in desc.on_morphisms.keys() {
        if c.mor(k).is_none() {
            violations.push(FunctorViolation::UnknownName {
                name: k.clone(),
                context: "on_morphisms".into(),
            });
        }
    }
    if !violations.is_empty() {
        return Err(Error::Functor(violations));
    }
    Functor::new(c.clone(), d.clone(), on_obj, on_mor)
}

/// Visits the functors `c -> d` whose object and morphism images lie in the
/// allowed sets, in canonical order (objects first, then morphisms).
pub fn search_functors(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    obj_allowed: &dyn Fn(Obj) -> Vec<Obj>,
    mor_allowed: &dyn Fn(Mor) -> Vec<Mor>,
    budget: &Budget,
    mut visit: impl FnMut(Functor) -> ControlFlow<()>,
) -> Result<()> {
    let (cc, dd) = (&**c, &**d);
    let n = cc.num_objects();
    let mut p = Problem::new();
    for x in cc.objects() {
        p.var(obj_allowed(x).into_iter().map(|y| y.0 as u32).collect());
    }
    for f in cc.morphism_ids() {
        p.var(mor_allowed(f).into_iter().map(|g| g.0 as u32).collect());
    }
    for f in cc.morphism_ids() {
        let v = n + f.0;
        p.derive(v, cc.dom(f).0, move |g| Some(dd.dom(Mor(g as usize)).0 as u32));
        p.derive(v, cc.cod(f).0, move |g| Some(dd.cod(Mor(g as usize)).0 as u32));
    }
    for x in cc.objects() {
        p.derive(x.0, n + cc.id(x).0, move |y| Some(dd.id(Obj(y as usize)).0 as u32));
    }
    for f in cc.morphism_ids() {
        if cc.is_identity(f) {
            continue;
        }
        for g in cc.out_of(cc.cod(f)) {
            if cc.is_identity(g) {
                continue;
            }
            let h = cc.then(f, g);
            let (vf, vg, vh) = (n + f.0, n + g.0, n + h.0);
            p.rule(&[vf, vg], move |a, out| {
                let (x, y) = (a[vf], a[vg]);
                if x == u32::MAX || y == u32::MAX {
                    return true;
                }
                match dd.compose(Mor(x as usize), Mor(y as usize)) {
                    Some(z) => {
                        out.push((vh, z.0 as u32));
                        true
                    }
                    None => false,
                }
            });
        }
    }
    p.solve(budget, |a| {
        let on_obj = a[..n].iter().map(|&y| Obj(y as usize)).collect();
        let on_mor = a[n..].iter().map(|&g| Mor(g as usize)).collect();
        visit(Functor::new_unchecked(c.clone(), d.clone(), on_obj, on_mor))
    })
}

/// All functors `c -> d` in canonical order.
pub fn enumerate_functors(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    budget: &Budget,
) -> Result<Vec<Functor>> {
    let objs: Vec<Obj> = d.objects().collect();
    let mors: Vec<Mor> = d.morphism_ids().collect();
    let mut out = Vec::new();
    search_functors(c, d, &|_| objs.clone(), &|_| mors.clone(), budget, |f| {
        out.push(f);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::category::{CategoryDesc, MorphismDesc};
    use crate::fincat::validate_category;

    fn interval() -> Arc<FinCategory> {
        let d = CategoryDesc {
            objects: vec!["0".into(), "1".into()],
            morphisms: vec![
                MorphismDesc { name: "id0".into(), dom: "0".into(), cod: "0".into() },
                MorphismDesc { name: "id1".into(), dom: "1".into(), cod: "1".into() },
                MorphismDesc { name: "u".into(), dom: "0".into(), cod: "1".into() },
            ],
            identities: [("0", "id0"), ("1", "id1")]
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            composition: [("id0;id0", "id0"), ("id1;id1", "id1"), ("id0;u", "u"), ("u;id1", "u")]
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        };
        Arc::new(validate_category(&d).unwrap())
    }

    #[test]
    fn identity_and_constant_validate() {
        let i = interval();
        let id = Functor::identity(&i);
        assert!(validate_functor(&id.to_desc(), &i, &i).is_ok());
        let t = Arc::new(FinCategory::terminal());
        let k = Functor::to_terminal(&i);
        assert!(validate_functor(&k.to_desc(), &i, &t).is_ok());
    }

    #[test]
    fn swap_with_collapsed_identities_breaks_identity() {
        let d2 = Arc::new(FinCategory::discrete(["a", "b"]));
        let desc = FunctorDesc {
            on_objects: [("a", "b"), ("b", "a")]
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
            on_morphisms: [("id_a", "id_a"), ("id_b", "id_a")]
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
        };
        let err = validate_functor(&desc, &d2, &d2).unwrap_err();
        let Error::Functor(v) = err else { panic!() };
        assert!(!v.is_empty());
    }

    #[test]
    fn missing_entry_is_not_total() {
        let i = interval();
        let mut desc = Functor::identity(&i).to_desc();
        desc.on_morphisms.remove("u");
        let Error::Functor(v) = validate_functor(&desc, &i, &i).unwrap_err() else { panic!() };
        assert_eq!(v, vec![FunctorViolation::NotTotal { name: "u".into() }]);
    }

    #[test]
    fn functor_counts() {
        let i = interval();
        // monotone maps of the two-element chain: 3
        assert_eq!(enumerate_functors(&i, &i, &Budget::unlimited()).unwrap().len(), 3);
        let e = Arc::new(FinCategory::empty());
        assert_eq!(enumerate_functors(&e, &i, &Budget::unlimited()).unwrap().len(), 1);
        assert_eq!(enumerate_functors(&i, &e, &Budget::unlimited()).unwrap().len(), 0);
        for f in enumerate_functors(&i, &i, &Budget::unlimited()).unwrap() {
            assert!(f.violations().is_empty());
        }
    }

    #[test]
    fn composition_and_op() {
        let i = interval();
        let id = Functor::identity(&i);
        assert_eq!(id.then(&id).unwrap(), id);
        assert_eq!(id.op().op(), id);
        assert!(id.is_identity());
    }
}
