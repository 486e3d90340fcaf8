use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use super::distributor::Distributor;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{same_category, Functor, Obj};
use crate::solve::Problem;

/// Longest distributor chain the engine handles.
pub const MAX_GRADE: usize = 2;

/// A natural family `p_1, ..., p_n => q(f_0, f_n)`.
///
/// The chain runs `p_1: X_1 ⇸ X_0`, `p_2: X_2 ⇸ X_1`, ...; `f_0: X_0 -> Z_0`
/// and `f_n: X_n -> Z_n` with `q: Z_n ⇸ Z_0`. Components are keyed by the
/// flat element indices of `(u_1, ..., u_n)`, or by `[x]` when `n = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCell {
    pub chain: Vec<Distributor>,
    pub f0: Functor,
    pub fn_: Functor,
    pub q: Distributor,
    pub components: BTreeMap<Vec<usize>, u32>,
}

/// A slot of a graded cell: key, the two outer objects, and the value range.
struct Slot {
    key: Vec<usize>,
    x0: Obj,
    xn: Obj,
}

fn check_chain(chain: &[Distributor], f0: &Functor, fn_: &Functor, q: &Distributor) -> Result<()> {
    let bad = |s: &str| Err(Error::ChainMismatch(s.to_string()));
    if chain.len() > MAX_GRADE {
        return bad("chains longer than two are not supported");
    }
    for w in chain.windows(2) {
        if !same_category(w[1].tgt(), w[0].src()) {
            return bad("consecutive distributors do not share an endpoint");
        }
    }
    let (x0, xn) = match (chain.first(), chain.last()) {
        (Some(first), Some(last)) => (first.tgt(), last.src()),
        _ => (f0.dom(), f0.dom()),
    };
    if !same_category(f0.dom(), x0) || !same_category(fn_.dom(), xn) {
        return bad("boundary functors do not start at the ends of the chain");
    }
    if !same_category(f0.cod(), q.tgt()) || !same_category(fn_.cod(), q.src()) {
        return bad("boundary functors do not land in the target distributor");
    }
    Ok(())
}

impl GradedCell {
    pub fn grade(&self) -> usize {
        self.chain.len()
    }

    /// Component at a key, as an element index of `q(f_0 x_0, f_n x_n)`.
    pub fn at(&self, key: &[usize]) -> Option<u32> {
        self.components.get(key).copied()
    }

    /// The outer objects `(x_0, x_n)` of a key.
    pub fn ends(&self, key: &[usize]) -> (Obj, Obj) {
        ends(&self.chain, key)
    }
}

fn ends(chain: &[Distributor], key: &[usize]) -> (Obj, Obj) {
    match chain.len() {
        0 => (Obj(key[0]), Obj(key[0])),
        1 => {
            let (y, x, _) = chain[0].unflat(key[0]);
            (y, x)
        }
        _ => {
            let (y, _, _) = chain[0].unflat(key[0]);
            let (_, x, _) = chain[1].unflat(key[1]);
            (y, x)
        }
    }
}

fn slots(chain: &[Distributor], f0: &Functor) -> Vec<Slot> {
    let mut out = Vec::new();
    match chain.len() {
        0 => {
            for x in f0.dom().objects() {
                out.push(Slot { key: vec![x.0], x0: x, xn: x });
            }
        }
        1 => {
            for k in 0..chain[0].total_elements() {
                let (y, x, _) = chain[0].unflat(k);
                out.push(Slot { key: vec![k], x0: y, xn: x });
            }
        }
        _ => {
            let (p1, p2) = (&chain[0], &chain[1]);
            for k1 in 0..p1.total_elements() {
                let (x0, x1, _) = p1.unflat(k1);
                for x2 in p2.src().objects() {
                    for u2 in 0..p2.size(x1, x2) as u32 {
                        out.push(Slot {
                            key: vec![k1, p2.flat(x1, x2, u2)],
                            x0,
                            xn: x2,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Component filter for graded-cell searches: `(key, x_0, x_n, value)`.
pub type CellFilter<'a> = dyn Fn(&[usize], Obj, Obj, u32) -> bool + 'a;

/// Visits the graded cells whose components pass `allowed(key, x_0, x_n, value)`,
/// in canonical order.
pub fn search_graded_cells(
    chain: &[Distributor],
    f0: &Functor,
    fn_: &Functor,
    q: &Distributor,
    allowed: &CellFilter,
    budget: &Budget,
    mut visit: impl FnMut(GradedCell) -> ControlFlow<()>,
) -> Result<()> {
    check_chain(chain, f0, fn_, q)?;
    let slots = slots(chain, f0);
    let index: HashMap<Vec<usize>, usize> =
        slots.iter().enumerate().map(|(i, s)| (s.key.clone(), i)).collect();
    let mut p = Problem::new();
    for s in &slots {
        let (z0, zn) = (f0.ob(s.x0), fn_.ob(s.xn));
        p.var(
            (0..q.size(z0, zn) as u32)
                .filter(|&v| allowed(&s.key, s.x0, s.xn, v))
                .collect(),
        );
    }
    match chain.len() {
        0 => {
            let x_cat = f0.dom();
            for h in x_cat.morphism_ids() {
                if x_cat.is_identity(h) {
                    continue;
                }
                let (x, x2) = (x_cat.dom(h).0, x_cat.cod(h).0);
                let (a, b) = (f0.mor(h), fn_.mor(h));
                let (z0x, znx2) = (f0.ob(Obj(x)), fn_.ob(Obj(x2)));
                p.check(&[x, x2], move |s| {
                    q.act_right(a, znx2, s[x2]) == q.act_left(b, z0x, s[x])
                });
            }
        }
        n => {
            let first = &chain[0];
            let last = &chain[n - 1];
            for (i, s) in slots.iter().enumerate() {
                // naturality in x_0
                let (y, x1, u1) = first.unflat(s.key[0]);
                for h in first.tgt().into_obj(y) {
                    if first.tgt().is_identity(h) {
                        continue;
                    }
                    let mut key = s.key.clone();
                    key[0] = first.flat(first.tgt().dom(h), x1, first.act_right(h, x1, u1));
                    let j = index[&key];
                    let (fh, zn) = (f0.mor(h), fn_.ob(s.xn));
                    p.derive(i, j, move |v| Some(q.act_right(fh, zn, v)));
                }
                // naturality in x_n
                let (yl, xl, ul) = last.unflat(s.key[n - 1]);
                for k in last.src().out_of(xl) {
                    if last.src().is_identity(k) {
                        continue;
                    }
                    let mut key = s.key.clone();
                    key[n - 1] = last.flat(yl, last.src().cod(k), last.act_left(k, yl, ul));
                    let j = index[&key];
                    let (fk, z0) = (fn_.mor(k), f0.ob(s.x0));
                    p.derive(i, j, move |v| Some(q.act_left(fk, z0, v)));
                }
                // balance in x_1
                if n == 2 {
                    let (p1, p2) = (&chain[0], &chain[1]);
                    let (x0, x1, u1) = p1.unflat(s.key[0]);
                    let (_, x2, u2) = p2.unflat(s.key[1]);
                    for m in p1.src().out_of(x1) {
                        if p1.src().is_identity(m) {
                            continue;
                        }
                        // ε(m·u1, u2') = ε(u1, u2'·m) for u2' in p2(x1', x2)
                        let x1b = p1.src().cod(m);
                        let left_key = |u2b: u32| {
                            vec![
                                p1.flat(x0, x1b, p1.act_left(m, x0, u1)),
                                p2.flat(x1b, x2, u2b),
                            ]
                        };
                        for u2b in 0..p2.size(x1b, x2) as u32 {
                            if p2.act_right(m, x2, u2b) != u2 {
                                continue;
                            }
                            let j = index[&left_key(u2b)];
                            p.derive(i, j, Some);
                            p.derive(j, i, Some);
                        }
                    }
                }
            }
        }
    }
    p.solve(budget, |a| {
        visit(GradedCell {
            chain: chain.to_vec(),
            f0: f0.clone(),
            fn_: fn_.clone(),
            q: q.clone(),
            components: slots
                .iter()
                .zip(a)
                .map(|(s, &v)| (s.key.clone(), v))
                .collect(),
        })
    })
}

/// All graded cells over a chain of length at most `max_n`.
pub fn enumerate_graded_cells(
    chain: &[Distributor],
    f0: &Functor,
    fn_: &Functor,
    q: &Distributor,
    max_n: usize,
    budget: &Budget,
) -> Result<Vec<GradedCell>> {
    if chain.len() > max_n {
        return Err(Error::ChainMismatch(format!(
            "chain of length {} exceeds the bound {max_n}",
            chain.len()
        )));
    }
    let mut out = Vec::new();
    search_graded_cells(chain, f0, fn_, q, &|_, _, _, _| true, budget, |c| {
        out.push(c);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{FinCategory, Mor, MorphismSig};
    use crate::prof::hom_distributor;
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

    #[test]
    fn terminal_cells() {
        let t = Arc::new(FinCategory::terminal());
        let h = hom_distributor(&t);
        let id = Functor::identity(&t);
        let b = Budget::unlimited();
        assert_eq!(enumerate_graded_cells(&[], &id, &id, &h, 2, &b).unwrap().len(), 1);
        assert_eq!(
            enumerate_graded_cells(std::slice::from_ref(&h), &id, &id, &h, 2, &b).unwrap().len(),
            1
        );
        assert_eq!(
            enumerate_graded_cells(&[h.clone(), h.clone()], &id, &id, &h, 2, &b)
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn bz2_unary_cells_match_brute_force() {
        let c = bz2();
        let h = hom_distributor(&c);
        let id = Functor::identity(&c);
        let cells = enumerate_graded_cells(std::slice::from_ref(&h), &id, &id, &h, 2, &Budget::unlimited())
            .unwrap();
        // brute force over the 4 maps {e,s} -> {e,s}
        let mut brute = 0;
        for e0 in 0..2u32 {
            for e1 in 0..2u32 {
                let eps = [e0, e1];
                let natural = (0..2u32).all(|u| {
                    (0..2usize).all(|m| {
                        let m = Mor(m);
                        eps[h.act_right(m, Obj(0), u) as usize] == h.act_right(m, Obj(0), eps[u as usize])
                            && eps[h.act_left(m, Obj(0), u) as usize]
                                == h.act_left(m, Obj(0), eps[u as usize])
                    })
                });
                if natural {
                    brute += 1;
                }
            }
        }
        assert_eq!(cells.len(), brute);
        assert_eq!(brute, 2);
    }

    #[test]
    fn chain_mismatch_is_reported() {
        let c = bz2();
        let t = Arc::new(FinCategory::terminal());
        let h = hom_distributor(&c);
        let ht = hom_distributor(&t);
        let id = Functor::identity(&c);
        assert!(matches!(
            enumerate_graded_cells(&[h.clone(), ht], &id, &id, &h, 2, &Budget::unlimited()),
            Err(Error::ChainMismatch(_))
        ));
        assert!(matches!(
            enumerate_graded_cells(std::slice::from_ref(&h), &id, &id, &h, 0, &Budget::unlimited()),
            Err(Error::ChainMismatch(_))
        ));
    }
}
