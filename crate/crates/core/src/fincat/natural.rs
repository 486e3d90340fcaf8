use std::ops::ControlFlow;

use super::category::{Mor, Obj};
use super::functor::{same_category, Functor};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::solve::Problem;

/// A natural transformation between parallel functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub source: Functor,
    pub target: Functor,
    pub components: Vec<Mor>,
}

impl NatTrans {
    pub fn component(&self, x: Obj) -> Mor {
        self.components[x.0]
    }

    pub fn identity(f: &Functor) -> Self {
        let d = f.cod();
        Self {
            source: f.clone(),
            target: f.clone(),
            components: f.dom().objects().map(|x| d.id(f.ob(x))).collect(),
        }
    }

    /// First morphism of the domain whose square fails to commute.
    pub fn naturality_failure(&self) -> Option<Mor> {
        let c = self.source.dom();
        let d = self.source.cod();
        c.morphism_ids().find(|&f| {
            let lhs = d.compose(self.source.mor(f), self.component(c.cod(f)));
            let rhs = d.compose(self.component(c.dom(f)), self.target.mor(f));
            lhs.is_none() || lhs != rhs
        })
    }

    pub fn is_iso(&self) -> bool {
        let d = self.source.cod();
        self.components.iter().all(|&m| d.is_iso(m))
    }
}

fn check_parallel(f: &Functor, g: &Functor) -> Result<()> {
    if same_category(f.dom(), g.dom()) && same_category(f.cod(), g.cod()) {
        Ok(())
    } else {
        Err(Error::NotParallel)
    }
}

/// Visits natural transformations `f => g` whose components pass `allowed`.
pub fn search_natural_transformations(
    f: &Functor,
    g: &Functor,
    allowed: &dyn Fn(Obj, Mor) -> bool,
    budget: &Budget,
    mut visit: impl FnMut(NatTrans) -> ControlFlow<()>,
) -> Result<()> {
    check_parallel(f, g)?;
    let c = &**f.dom();
    let d = &**f.cod();
    let mut p = Problem::new();
    for x in c.objects() {
        p.var(
            d.hom(f.ob(x), g.ob(x))
                .iter()
                .filter(|&&m| allowed(x, m))
                .map(|m| m.0 as u32)
                .collect(),
        );
    }
    for h in c.morphism_ids() {
        if c.is_identity(h) {
            continue;
        }
        let (x, y) = (c.dom(h).0, c.cod(h).0);
        let (fh, gh) = (f.mor(h), g.mor(h));
        p.check(&[x, y], move |a| {
            d.then(fh, Mor(a[y] as usize)) == d.then(Mor(a[x] as usize), gh)
        });
    }
    p.solve(budget, |a| {
        visit(NatTrans {
            source: f.clone(),
            target: g.clone(),
            components: a.iter().map(|&m| Mor(m as usize)).collect(),
        })
    })
}

/// All natural transformations `f => g`, ordered componentwise by morphism order.
pub fn enumerate_natural_transformations(
    f: &Functor,
    g: &Functor,
    budget: &Budget,
) -> Result<Vec<NatTrans>> {
    let mut out = Vec::new();
    search_natural_transformations(f, g, &|_, _| true, budget, |t| {
        out.push(t);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// The least natural isomorphism `f => g`, if any.
pub fn find_natural_iso(f: &Functor, g: &Functor, budget: &Budget) -> Result<Option<NatTrans>> {
    let d = f.cod().clone();
    let mut found = None;
    search_natural_transformations(f, g, &|_, m| d.is_iso(m), budget, |t| {
        found = Some(t);
        ControlFlow::Break(())
    })?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{FinCategory, MorphismSig};
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

    /// Brute force: every assignment of components, filtered by naturality.
    fn brute_force_count(f: &Functor, g: &Functor) -> usize {
        let c = f.dom();
        let d = f.cod();
        let homs: Vec<Vec<Mor>> = c.objects().map(|x| d.hom(f.ob(x), g.ob(x)).to_vec()).collect();
        let mut count = 0;
        let mut idx = vec![0usize; homs.len()];
        if homs.iter().any(|h| h.is_empty()) {
            return 0;
        }
        loop {
            let t = NatTrans {
                source: f.clone(),
                target: g.clone(),
                components: idx.iter().zip(&homs).map(|(&i, h)| h[i]).collect(),
            };
            if t.naturality_failure().is_none() {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return count;
                }
                idx[k] += 1;
                if idx[k] < homs[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn terminal_identity_has_one() {
        let t = Arc::new(FinCategory::terminal());
        let id = Functor::identity(&t);
        assert_eq!(enumerate_natural_transformations(&id, &id, &Budget::unlimited()).unwrap().len(), 1);
    }

    #[test]
    fn bz2_identity_has_two() {
        let b = bz2();
        let id = Functor::identity(&b);
        let all = enumerate_natural_transformations(&id, &id, &Budget::unlimited()).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all.len(), brute_force_count(&id, &id));
        assert_eq!(all[0].components, vec![Mor(0)]);
        assert_eq!(all[1].components, vec![Mor(1)]);
    }

    #[test]
    fn distinct_constants_on_disc2_have_none() {
        let d2 = Arc::new(FinCategory::discrete(["a", "b"]));
        let ka = Functor::constant(&d2, &d2, Obj(0));
        let kb = Functor::constant(&d2, &d2, Obj(1));
        assert!(enumerate_natural_transformations(&ka, &kb, &Budget::unlimited())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn non_parallel_is_rejected() {
        let d2 = Arc::new(FinCategory::discrete(["a", "b"]));
        let t = Arc::new(FinCategory::terminal());
        let f = Functor::identity(&d2);
        let g = Functor::identity(&t);
        assert_eq!(
            enumerate_natural_transformations(&f, &g, &Budget::unlimited()),
            Err(Error::NotParallel)
        );
    }
}
