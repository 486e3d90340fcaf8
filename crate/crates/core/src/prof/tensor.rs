use super::distributor::Distributor;
use crate::error::{Error, Result};
use crate::fincat::{same_category, Functor, Mor, Obj};

/// The quotient `(⊔_y L(y) × p(y, x)) / ~` at a fixed `x`, where `L` is
/// covariant on `Y` and `(m_* l, u) ~ (l, u · m)` for `m: y' -> y`.
///
/// Classes are numbered by their least member in `(y, l, u)` order.
#[derive(Clone, Debug)]
pub struct TensorSet {
    members: Vec<(Obj, u32, u32)>,
    offsets: Vec<usize>,
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl TensorSet {
    pub fn new(
        p: &Distributor,
        x: Obj,
        left_size: impl Fn(Obj) -> usize,
        left_act: impl Fn(Mor, u32) -> u32,
    ) -> Self {
        let y_cat = p.tgt();
        let mut members = Vec::new();
        let mut offsets = Vec::with_capacity(y_cat.num_objects() * 2);
        for y in y_cat.objects() {
            let (nl, nu) = (left_size(y), p.size(y, x));
            offsets.push(members.len());
            offsets.push(nu);
            for l in 0..nl as u32 {
                for u in 0..nu as u32 {
                    members.push((y, l, u));
                }
            }
        }
        let index = |y: Obj, l: u32, u: u32| offsets[2 * y.0] + l as usize * offsets[2 * y.0 + 1] + u as usize;
        let mut parent: Vec<usize> = (0..members.len()).collect();
        for m in y_cat.morphism_ids() {
            if y_cat.is_identity(m) {
                continue;
            }
            let (y2, y) = (y_cat.dom(m), y_cat.cod(m));
            for l in 0..left_size(y2) as u32 {
                let pushed = left_act(m, l);
                for u in 0..p.size(y, x) as u32 {
                    let a = find(&mut parent, index(y, pushed, u));
                    let b = find(&mut parent, index(y2, l, p.act_right(m, x, u)));
                    if a != b {
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        parent[hi] = lo;
                    }
                }
            }
        }
        let mut class_of = vec![0; members.len()];
        let mut reps = Vec::new();
        let mut class_id = vec![usize::MAX; members.len()];
        for (i, class) in class_of.iter_mut().enumerate() {
            let r = find(&mut parent, i);
            if class_id[r] == usize::MAX {
                class_id[r] = reps.len();
                reps.push(i);
            }
            *class = class_id[r];
        }
        Self {
            members,
            offsets,
            class_of,
            reps,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn num_members(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[(Obj, u32, u32)] {
        &self.members
    }

    /// Least member of class `c`.
    pub fn rep(&self, c: usize) -> (Obj, u32, u32) {
        self.members[self.reps[c]]
    }

    /// Least member of each class.
    pub fn representatives(&self) -> impl Iterator<Item = (Obj, u32, u32)> + '_ {
        self.reps.iter().map(|&i| self.members[i])
    }

    pub fn class(&self, y: Obj, l: u32, u: u32) -> usize {
        let i = self.offsets[2 * y.0] + l as usize * self.offsets[2 * y.0 + 1] + u as usize;
        self.class_of[i]
    }

    pub fn class_of_member(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Every member paired with its class (the generating relation is closed).
    pub fn is_closed(
        &self,
        p: &Distributor,
        x: Obj,
        left_size: impl Fn(Obj) -> usize,
        left_act: impl Fn(Mor, u32) -> u32,
    ) -> bool {
        let y_cat = p.tgt();
        y_cat.morphism_ids().all(|m| {
            let (y2, y) = (y_cat.dom(m), y_cat.cod(m));
            (0..left_size(y2) as u32).all(|l| {
                (0..p.size(y, x) as u32).all(|u| {
                    self.class(y, left_act(m, l), u) == self.class(y2, l, p.act_right(m, x, u))
                })
            })
        })
    }
}

/// The loose composite `D(1, f) ⊙ p: X ⇸ D` of `p: X ⇸ Y` with `f: Y -> D`.
///
/// Its weighted colimits agree with those of `p` over `f`: cocones of one
/// correspond bijectively to cocones of the other.
pub fn push_forward(p: &Distributor, f: &Functor) -> Result<Distributor> {
    if !same_category(f.dom(), p.tgt()) {
        return Err(Error::EndpointMismatch(
            "the diagram must start at the target of the weight".into(),
        ));
    }
    let d = f.cod().clone();
    let x_cat = p.src().clone();
    let dc = &*d;
    let mut tensors = Vec::with_capacity(dc.num_objects() * x_cat.num_objects());
    for c in dc.objects() {
        for x in x_cat.objects() {
            tensors.push(TensorSet::new(
                p,
                x,
                |y| dc.hom(c, f.ob(y)).len(),
                |m, l| {
                    let v = dc.hom(c, f.ob(p.tgt().dom(m)))[l as usize];
                    dc.hom_pos(dc.then(v, f.mor(m))) as u32
                },
            ));
        }
    }
    let nx = x_cat.num_objects();
    let t = |c: Obj, x: Obj| &tensors[c.0 * nx + x.0];
    let result = Distributor::from_fn(
        &x_cat,
        &d,
        |c, x| {
            t(c, x)
                .representatives()
                .map(|(y, l, u)| {
                    let v = dc.hom(c, f.ob(y))[l as usize];
                    format!("{}.{}", dc.name(v), p.name(y, x, u))
                })
                .collect()
        },
        |k, x, cls| {
            // [v, u] . k = [k;v, u] for k: c' -> c
            let (c2, c) = (dc.dom(k), dc.cod(k));
            let (y, l, u) = t(c, x).rep(cls as usize);
            let v = dc.hom(c, f.ob(y))[l as usize];
            let kv = dc.then(k, v);
            t(c2, x).class(y, dc.hom_pos(kv) as u32, u) as u32
        },
        |n, c, cls| {
            let (x, x2) = (x_cat.dom(n), x_cat.cod(n));
            let (y, l, u) = t(c, x).rep(cls as usize);
            t(c, x2).class(y, l, p.act_left(n, y, u)) as u32
        },
    );
    debug_assert!(result.violations().is_empty());
    Ok(result)
}
