use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{opposite, same_category, FinCategory, Functor, Mor, Obj};

/// A finite distributor `p: X ⇸ Y` with components `p(y, x)`.
///
/// `p` is contravariant in `y` (right action by `m: y' -> y` sends
/// `p(y, x) -> p(y', x)`) and covariant in `x` (left action by `n: x -> x'`
/// sends `p(y, x) -> p(y, x')`). Elements are indices into per-component
/// name lists.
#[derive(Clone, Debug)]
pub struct Distributor {
    src: Arc<FinCategory>,
    tgt: Arc<FinCategory>,
    names: Vec<Vec<String>>,
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
    offsets: Vec<usize>,
}

impl PartialEq for Distributor {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.right == other.right
            && self.left == other.left
            && same_category(&self.src, &other.src)
            && same_category(&self.tgt, &other.tgt)
    }
}

impl Eq for Distributor {}

/// Serialized form; keys are `"y|x"` and `"m|y|x|elem"`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributorDesc {
    pub elements: BTreeMap<String, Vec<String>>,
    /// Key `m|y|x|elem` with `y = cod m`.
    pub right_action: BTreeMap<String, String>,
    /// Key `n|y|x|elem` with `x = dom n`.
    pub left_action: BTreeMap<String, String>,
}

impl Distributor {
    /// Builds the tables from callbacks without checking the laws.
    pub fn from_fn(
        src: &Arc<FinCategory>,
        tgt: &Arc<FinCategory>,
        names: impl Fn(Obj, Obj) -> Vec<String>,
        right: impl Fn(Mor, Obj, u32) -> u32,
        left: impl Fn(Mor, Obj, u32) -> u32,
    ) -> Self {
        let (nx, ny) = (src.num_objects(), tgt.num_objects());
        let mut all_names = Vec::with_capacity(nx * ny);
        for y in tgt.objects() {
            for x in src.objects() {
                all_names.push(names(y, x));
            }
        }
        let size = |y: Obj, x: Obj| all_names[y.0 * nx + x.0].len() as u32;
        let mut right_t = Vec::with_capacity(tgt.num_morphisms() * nx);
        for m in tgt.morphism_ids() {
            for x in src.objects() {
                right_t.push((0..size(tgt.cod(m), x)).map(|i| right(m, x, i)).collect());
            }
        }
        let mut left_t = Vec::with_capacity(src.num_morphisms() * ny);
        for n in src.morphism_ids() {
            for y in tgt.objects() {
                left_t.push((0..size(y, src.dom(n))).map(|i| left(n, y, i)).collect());
            }
        }
        Self::from_tables(src, tgt, all_names, right_t, left_t)
    }

    pub(crate) fn from_tables(
        src: &Arc<FinCategory>,
        tgt: &Arc<FinCategory>,
        names: Vec<Vec<String>>,
        right: Vec<Vec<u32>>,
        left: Vec<Vec<u32>>,
    ) -> Self {
        let mut offsets = Vec::with_capacity(names.len() + 1);
        let mut acc = 0;
        for n in &names {
            offsets.push(acc);
            acc += n.len();
        }
        offsets.push(acc);
        Self {
            src: src.clone(),
            tgt: tgt.clone(),
            names,
            right,
            left,
            offsets,
        }
    }

    /// The source `X` of `p: X ⇸ Y`.
    pub fn src(&self) -> &Arc<FinCategory> {
        &self.src
    }

    /// The target `Y` of `p: X ⇸ Y`.
    pub fn tgt(&self) -> &Arc<FinCategory> {
        &self.tgt
    }

    #[inline]
    fn comp(&self, y: Obj, x: Obj) -> usize {
        y.0 * self.src.num_objects() + x.0
    }

    #[inline]
    pub fn size(&self, y: Obj, x: Obj) -> usize {
        self.names[self.comp(y, x)].len()
    }

    pub fn names(&self, y: Obj, x: Obj) -> &[String] {
        &self.names[self.comp(y, x)]
    }

    pub fn name(&self, y: Obj, x: Obj, i: u32) -> &str {
        &self.names[self.comp(y, x)][i as usize]
    }

    pub fn element(&self, y: Obj, x: Obj, name: &str) -> Option<u32> {
        self.names(y, x).iter().position(|n| n == name).map(|i| i as u32)
    }

    /// `u · m` for `m: y' -> y` and `u` in `p(y, x)`.
    #[inline]
    pub fn act_right(&self, m: Mor, x: Obj, u: u32) -> u32 {
        self.right[m.0 * self.src.num_objects() + x.0][u as usize]
    }

    /// `n · u` for `n: x -> x'` and `u` in `p(y, x)`.
    #[inline]
    pub fn act_left(&self, n: Mor, y: Obj, u: u32) -> u32 {
        self.left[n.0 * self.tgt.num_objects() + y.0][u as usize]
    }

    pub fn total_elements(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Position of an element in the flat numbering `(y, x, i)` in that order.
    #[inline]
    pub fn flat(&self, y: Obj, x: Obj, i: u32) -> usize {
        self.offsets[self.comp(y, x)] + i as usize
    }

    /// Inverse of [`Distributor::flat`].
    pub fn unflat(&self, k: usize) -> (Obj, Obj, u32) {
        let c = self.offsets.partition_point(|&o| o <= k) - 1;
        let nx = self.src.num_objects();
        (Obj(c / nx), Obj(c % nx), (k - self.offsets[c]) as u32)
    }

    /// Every law violation: ranges, identities, functoriality, commutation.
    pub fn violations(&self) -> Vec<String> {
        let (x_cat, y_cat) = (&*self.src, &*self.tgt);
        let mut out = Vec::new();
        for m in y_cat.morphism_ids() {
            for x in x_cat.objects() {
                let lim = self.size(y_cat.dom(m), x) as u32;
                if self.right[m.0 * x_cat.num_objects() + x.0]
                    .iter()
                    .any(|&v| v >= lim)
                {
                    out.push(format!("right action of `{}` leaves its component", y_cat.name(m)));
                }
            }
        }
        for n in x_cat.morphism_ids() {
            for y in y_cat.objects() {
                let lim = self.size(y, x_cat.cod(n)) as u32;
                if self.left[n.0 * y_cat.num_objects() + y.0]
                    .iter()
                    .any(|&v| v >= lim)
                {
                    out.push(format!("left action of `{}` leaves its component", x_cat.name(n)));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for y in y_cat.objects() {
            for x in x_cat.objects() {
                for u in 0..self.size(y, x) as u32 {
                    let here = self.name(y, x, u);
                    if self.act_right(y_cat.id(y), x, u) != u {
                        out.push(format!("right identity fails on `{here}`"));
                    }
                    if self.act_left(x_cat.id(x), y, u) != u {
                        out.push(format!("left identity fails on `{here}`"));
                    }
                    for m2 in y_cat.into_obj(y) {
                        for m1 in y_cat.into_obj(y_cat.dom(m2)) {
                            let lhs = self.act_right(y_cat.then(m1, m2), x, u);
                            let rhs = self.act_right(m1, x, self.act_right(m2, x, u));
                            if lhs != rhs {
                                out.push(format!(
                                    "right action not functorial at `{}`;`{}` on `{here}`",
                                    y_cat.name(m1),
                                    y_cat.name(m2)
                                ));
                            }
                        }
                    }
                    for n1 in x_cat.out_of(x) {
                        for n2 in x_cat.out_of(x_cat.cod(n1)) {
                            let lhs = self.act_left(x_cat.then(n1, n2), y, u);
                            let rhs = self.act_left(n2, y, self.act_left(n1, y, u));
                            if lhs != rhs {
                                out.push(format!(
                                    "left action not functorial at `{}`;`{}` on `{here}`",
                                    x_cat.name(n1),
                                    x_cat.name(n2)
                                ));
                            }
                        }
                    }
                    for m in y_cat.into_obj(y) {
                        for n in x_cat.out_of(x) {
                            let a = self.act_left(n, y_cat.dom(m), self.act_right(m, x, u));
                            let b = self.act_right(m, x_cat.cod(n), self.act_left(n, y, u));
                            if a != b {
                                out.push(format!(
                                    "actions of `{}` and `{}` do not commute on `{here}`",
                                    y_cat.name(m),
                                    x_cat.name(n)
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn validate(self) -> Result<Self> {
        let v = self.violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Distributor(v))
        }
    }

    /// The dual `p^op: Y^op ⇸ X^op` with `p^op(x, y) = p(y, x)`.
    pub fn op(&self) -> Distributor {
        self.op_with(&Arc::new(opposite(&self.src)), &Arc::new(opposite(&self.tgt)))
    }

    /// [`Distributor::op`] with prebuilt opposites of `X` and `Y`.
    pub fn op_with(&self, src_op: &Arc<FinCategory>, tgt_op: &Arc<FinCategory>) -> Distributor {
        Distributor::from_fn(
            tgt_op,
            src_op,
            |x, y| self.names(y, x).to_vec(),
            |n, y, u| self.act_left(n, y, u),
            |m, x, u| self.act_right(m, x, u),
        )
    }

    pub fn to_desc(&self) -> DistributorDesc {
        let (x_cat, y_cat) = (&*self.src, &*self.tgt);
        let mut d = DistributorDesc::default();
        for y in y_cat.objects() {
            for x in x_cat.objects() {
                d.elements.insert(
                    format!("{}|{}", y_cat.object_name(y), x_cat.object_name(x)),
                    self.names(y, x).to_vec(),
                );
            }
        }
        for m in y_cat.morphism_ids() {
            let (y2, y) = (y_cat.dom(m), y_cat.cod(m));
            for x in x_cat.objects() {
                for u in 0..self.size(y, x) as u32 {
                    d.right_action.insert(
                        format!(
                            "{}|{}|{}|{}",
                            y_cat.name(m),
                            y_cat.object_name(y),
                            x_cat.object_name(x),
                            self.name(y, x, u)
                        ),
                        self.name(y2, x, self.act_right(m, x, u)).to_string(),
                    );
                }
            }
        }
        for n in x_cat.morphism_ids() {
            let (x, x2) = (x_cat.dom(n), x_cat.cod(n));
            for y in y_cat.objects() {
                for u in 0..self.size(y, x) as u32 {
                    d.left_action.insert(
                        format!(
                            "{}|{}|{}|{}",
                            x_cat.name(n),
                            y_cat.object_name(y),
                            x_cat.object_name(x),
                            self.name(y, x, u)
                        ),
                        self.name(y, x2, self.act_left(n, y, u)).to_string(),
                    );
                }
            }
        }
        d
    }

    /// Reads a description against `X` (source) and `Y` (target), validating the laws.
    pub fn from_desc(
        desc: &DistributorDesc,
        src: &Arc<FinCategory>,
        tgt: &Arc<FinCategory>,
    ) -> Result<Self> {
        let bad = |location: String, message: &str| Error::Validation {
            location,
            message: message.to_string(),
        };
        let (x_cat, y_cat) = (&**src, &**tgt);
        let mut names = Vec::new();
        for y in y_cat.objects() {
            for x in x_cat.objects() {
                let key = format!("{}|{}", y_cat.object_name(y), x_cat.object_name(x));
                let elems = desc.elements.get(&key).cloned().unwrap_or_default();
                let mut seen = std::collections::HashSet::new();
                if !elems.iter().all(|e| seen.insert(e)) {
                    return Err(bad(format!("elements.{key}"), "duplicate element name"));
                }
                names.push(elems);
            }
        }
        for key in desc.elements.keys() {
            let ok = key
                .split_once('|')
                .is_some_and(|(y, x)| y_cat.obj(y).is_some() && x_cat.obj(x).is_some());
            if !ok {
                return Err(bad(format!("elements.{key}"), "unknown component"));
            }
        }
        let nx = x_cat.num_objects();
        let lookup = |y: Obj, x: Obj, e: &str, loc: &str| -> Result<u32> {
            names[y.0 * nx + x.0]
                .iter()
                .position(|n| n == e)
                .map(|i| i as u32)
                .ok_or_else(|| bad(loc.to_string(), "unknown element"))
        };
        let mut right = Vec::new();
        for m in y_cat.morphism_ids() {
            let (y2, y) = (y_cat.dom(m), y_cat.cod(m));
            for x in x_cat.objects() {
                let mut row = Vec::new();
                for u in &names[y.0 * nx + x.0] {
                    let key = format!(
                        "{}|{}|{}|{}",
                        y_cat.name(m),
                        y_cat.object_name(y),
                        x_cat.object_name(x),
                        u
                    );
                    let loc = format!("right_action.{key}");
                    let v = if y_cat.is_identity(m) && !desc.right_action.contains_key(&key) {
                        u.clone()
                    } else {
                        desc.right_action
                            .get(&key)
                            .cloned()
                            .ok_or_else(|| bad(loc.clone(), "missing entry"))?
                    };
                    row.push(lookup(y2, x, &v, &loc)?);
                }
                right.push(row);
            }
        }
        let mut left = Vec::new();
        for n in x_cat.morphism_ids() {
            let (x, x2) = (x_cat.dom(n), x_cat.cod(n));
            for y in y_cat.objects() {
                let mut row = Vec::new();
                for u in &names[y.0 * nx + x.0] {
                    let key = format!(
                        "{}|{}|{}|{}",
                        x_cat.name(n),
                        y_cat.object_name(y),
                        x_cat.object_name(x),
                        u
                    );
                    let loc = format!("left_action.{key}");
                    let v = if x_cat.is_identity(n) && !desc.left_action.contains_key(&key) {
                        u.clone()
                    } else {
                        desc.left_action
                            .get(&key)
                            .cloned()
                            .ok_or_else(|| bad(loc.clone(), "missing entry"))?
                    };
                    row.push(lookup(y, x2, &v, &loc)?);
                }
                left.push(row);
            }
        }
        Self::from_tables(src, tgt, names, right, left).validate()
    }

    /// A key identifying the distributor up to relabelling of elements,
    /// for the given element permutation budget.
    pub(crate) fn iso_key(&self) -> Vec<u32> {
        let comps = self.names.len();
        let perms: Vec<Vec<Vec<u32>>> = self
            .names
            .iter()
            .map(|n| permutations(n.len()))
            .collect();
        let mut choice = vec![0usize; comps];
        let mut best: Option<Vec<u32>> = None;
        loop {
            let key = self.relabelled_key(&choice, &perms);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
            let mut k = 0;
            loop {
                if k == comps {
                    return best.unwrap_or_default();
                }
                choice[k] += 1;
                if choice[k] < perms[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    fn relabelled_key(&self, choice: &[usize], perms: &[Vec<Vec<u32>>]) -> Vec<u32> {
        let nx = self.src.num_objects();
        let ny = self.tgt.num_objects();
        let sigma = |c: usize| &perms[c][choice[c]];
        let mut key: Vec<u32> = self.names.iter().map(|n| n.len() as u32).collect();
        for m in self.tgt.morphism_ids() {
            for x in self.src.objects() {
                let from = self.tgt.cod(m).0 * nx + x.0;
                let to = self.tgt.dom(m).0 * nx + x.0;
                let row = &self.right[m.0 * nx + x.0];
                let mut rel = vec![0; row.len()];
                for (u, &v) in row.iter().enumerate() {
                    rel[sigma(from)[u] as usize] = sigma(to)[v as usize];
                }
                key.extend(rel);
            }
        }
        for n in self.src.morphism_ids() {
            for y in self.tgt.objects() {
                let from = y.0 * nx + self.src.dom(n).0;
                let to = y.0 * nx + self.src.cod(n).0;
                let row = &self.left[n.0 * ny + y.0];
                let mut rel = vec![0; row.len()];
                for (u, &v) in row.iter().enumerate() {
                    rel[sigma(from)[u] as usize] = sigma(to)[v as usize];
                }
                key.extend(rel);
            }
        }
        key
    }
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..n as u32).collect();
    fn rec(k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// The loose identity `C(1, 1)`: `p(y, x) = C(y, x)` acted on by composition.
pub fn hom_distributor(c: &Arc<FinCategory>) -> Distributor {
    let cat = &**c;
    Distributor::from_fn(
        c,
        c,
        |y, x| cat.hom(y, x).iter().map(|&f| cat.name(f).to_string()).collect(),
        |m, x, u| {
            let f = cat.hom(cat.cod(m), x)[u as usize];
            cat.hom_pos(cat.then(m, f)) as u32
        },
        |n, y, u| {
            let f = cat.hom(y, cat.dom(n))[u as usize];
            cat.hom_pos(cat.then(f, n)) as u32
        },
    )
}

/// `p(f, g): W ⇸ Z` with components `p(f z, g w)` for `p: X ⇸ Y`,
/// `f: Z -> Y` and `g: W -> X`.
pub fn restrict_distributor(p: &Distributor, f: &Functor, g: &Functor) -> Result<Distributor> {
    if !same_category(f.cod(), p.tgt()) || !same_category(g.cod(), p.src()) {
        return Err(Error::EndpointMismatch(
            "restriction functors must land in the endpoints of the distributor".into(),
        ));
    }
    Ok(Distributor::from_fn(
        g.dom(),
        f.dom(),
        |z, w| p.names(f.ob(z), g.ob(w)).to_vec(),
        |m, w, u| p.act_right(f.mor(m), g.ob(w), u),
        |n, z, u| p.act_left(g.mor(n), f.ob(z), u),
    ))
}

/// The representable distributor `C(c, 1)` for `c: D -> C`, a distributor `C ⇸ D`.
pub fn corepresentable(c: &Functor) -> Distributor {
    restrict_distributor(&hom_distributor(c.cod()), c, &Functor::identity(c.cod()))
        .expect("endpoints match by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::MorphismSig;

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

    fn interval() -> Arc<FinCategory> {
        Arc::new(
            FinCategory::from_fn(
                vec!["0".into(), "1".into()],
                vec![
                    MorphismSig { name: "id0".into(), dom: Obj(0), cod: Obj(0) },
                    MorphismSig { name: "id1".into(), dom: Obj(1), cod: Obj(1) },
                    MorphismSig { name: "u".into(), dom: Obj(0), cod: Obj(1) },
                ],
                vec![Mor(0), Mor(1)],
                |a, b| if a.0 == 2 || b.0 == 2 { Mor(2) } else { a },
            )
            .unwrap(),
        )
    }

    #[test]
    fn hom_of_terminal_and_interval() {
        let t = Arc::new(FinCategory::terminal());
        let h = hom_distributor(&t);
        assert_eq!(h.size(Obj(0), Obj(0)), 1);
        let i = interval();
        let h = hom_distributor(&i);
        assert_eq!(h.names(Obj(0), Obj(1)), ["u"]);
        assert_eq!(h.size(Obj(1), Obj(0)), 0);
        assert!(h.violations().is_empty());
    }

    #[test]
    fn hom_of_bz2_reads_the_table() {
        let b = bz2();
        let h = hom_distributor(&b);
        assert_eq!(h.size(Obj(0), Obj(0)), 2);
        // s · s = s;s = e
        assert_eq!(h.act_right(Mor(1), Obj(0), 1), 0);
        assert_eq!(h.act_left(Mor(1), Obj(0), 0), 1);
        assert!(h.violations().is_empty());
    }

    #[test]
    fn restriction_along_identities_is_identity() {
        for c in [bz2(), interval()] {
            let h = hom_distributor(&c);
            let id = Functor::identity(&c);
            assert_eq!(restrict_distributor(&h, &id, &id).unwrap(), h);
        }
    }

    #[test]
    fn desc_round_trip_and_op_involution() {
        let i = interval();
        let h = hom_distributor(&i);
        let back = Distributor::from_desc(&h.to_desc(), &i, &i).unwrap();
        assert_eq!(back, h);
        assert_eq!(h.op().op(), h);
        assert!(h.op().violations().is_empty());
    }

    #[test]
    fn broken_action_is_rejected() {
        let b = bz2();
        let mut d = hom_distributor(&b).to_desc();
        d.right_action.insert("s|*|*|e".into(), "e".into());
        assert!(matches!(
            Distributor::from_desc(&d, &b, &b),
            Err(Error::Distributor(_))
        ));
    }

    #[test]
    fn flat_numbering_round_trips() {
        let i = interval();
        let h = hom_distributor(&i);
        for k in 0..h.total_elements() {
            let (y, x, u) = h.unflat(k);
            assert_eq!(h.flat(y, x, u), k);
        }
    }
}
