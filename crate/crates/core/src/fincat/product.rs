use std::sync::Arc;

use super::category::{FinCategory, Mor, MorphismSig, Obj};
use super::functor::Functor;

/// The product category; object `(x, y)` has index `x * |B| + y`, and
/// morphism `(f, g)` has index `f * |mor B| + g`.
pub fn product(a: &FinCategory, b: &FinCategory) -> FinCategory {
    let (nb, mb) = (b.num_objects(), b.num_morphisms());
    let objects = a
        .objects()
        .flat_map(|x| {
            b.objects()
                .map(move |y| format!("({},{})", a.object_name(x), b.object_name(y)))
        })
        .collect();
    let morphisms = a
        .morphism_ids()
        .flat_map(|f| {
            b.morphism_ids().map(move |g| MorphismSig {
                name: format!("({},{})", a.name(f), b.name(g)),
                dom: Obj(a.dom(f).0 * nb + b.dom(g).0),
                cod: Obj(a.cod(f).0 * nb + b.cod(g).0),
            })
        })
        .collect();
    let identities = a
        .objects()
        .flat_map(|x| b.objects().map(move |y| Mor(a.id(x).0 * mb + b.id(y).0)))
        .collect();
    FinCategory::from_fn(objects, morphisms, identities, |p, q| {
        let (f1, g1) = (p.0 / mb.max(1), p.0 % mb.max(1));
        let (f2, g2) = (q.0 / mb.max(1), q.0 % mb.max(1));
        Mor(a.then(Mor(f1), Mor(f2)).0 * mb + b.then(Mor(g1), Mor(g2)).0)
    })
    .expect("a product of categories is a category")
}

/// The full subcategory on `keep` (in the given order) and its inclusion.
pub fn full_subcategory(c: &Arc<FinCategory>, keep: &[Obj]) -> (Arc<FinCategory>, Functor) {
    let mut mors = Vec::new();
    let mut back = vec![None; c.num_morphisms()];
    for (i, &x) in keep.iter().enumerate() {
        for (k, &y) in keep.iter().enumerate() {
            for &f in c.hom(x, y) {
                back[f.0] = Some(Mor(mors.len()));
                mors.push((f, i, k));
            }
        }
    }
    let sigs = mors
        .iter()
        .map(|&(f, i, k)| MorphismSig { name: c.name(f).to_string(), dom: Obj(i), cod: Obj(k) })
        .collect();
    let sub = Arc::new(
        FinCategory::from_fn(
            keep.iter().map(|&x| c.object_name(x).to_string()).collect(),
            sigs,
            keep.iter().map(|&x| back[c.id(x).0].unwrap()).collect(),
            |f, g| back[c.then(mors[f.0].0, mors[g.0].0).0].unwrap(),
        )
        .expect("a full subcategory is a category"),
    );
    let incl = Functor::new_unchecked(
        sub.clone(),
        c.clone(),
        keep.to_vec(),
        mors.iter().map(|&(f, _, _)| f).collect(),
    );
    (sub, incl)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_sizes() {
        let d2 = FinCategory::discrete(["a", "b"]);
        let t = FinCategory::terminal();
        let p = product(&d2, &t);
        assert_eq!(p.num_objects(), 2);
        assert_eq!(p.num_morphisms(), 2);
        let e = FinCategory::empty();
        assert_eq!(product(&e, &d2).num_objects(), 0);
    }
}
