use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{same_category, Functor, Mor, Obj};

/// A relative adjunction `ℓ ⊣_j r` with `j: A -> E`, `ℓ: A -> C`, `r: C -> E`
/// and transposition `♯: C(ℓ a, c) ≅ E(j a, r c)` stored extensionally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeAdjunction {
    pub j: Functor,
    pub l: Functor,
    pub r: Functor,
    /// `[a * |C| + c][position of k in C(ℓ a, c)]`.
    sharp: Vec<Vec<Mor>>,
    /// `[a * |C| + c][position of f in E(j a, r c)]`.
    flat: Vec<Vec<Mor>>,
}

/// Serialized transpositions, keyed `"a|c|k"` with value the name of `♯k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjunctionDesc {
    pub sharp: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum AdjunctionViolation {
    WrongEndpoints { a: String, k: String },
    NotBijective { a: String, c: String },
    NaturalityFail { side: &'static str, morphism: String, at: String },
}

impl fmt::Display for AdjunctionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongEndpoints { a, k } => {
                write!(f, "transpose of `{k}` at `{a}` has the wrong endpoints")
            }
            Self::NotBijective { a, c } => {
                write!(f, "transposition at (`{a}`, `{c}`) is not a bijection")
            }
            Self::NaturalityFail { side, morphism, at } => {
                write!(f, "transposition not natural in {side} along `{morphism}` at `{at}`")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// Least apex object, then least unit, in canonical order.
    #[default]
    Least,
    /// Greatest apex object, then greatest unit.
    Greatest,
}

fn check_triangle(j: &Functor, l: &Functor, r: &Functor) -> Result<()> {
    if same_category(j.dom(), l.dom()) && same_category(l.cod(), r.dom()) && same_category(r.cod(), j.cod()) {
        Ok(())
    } else {
        Err(Error::EndpointMismatch(
            "adjunction functors must form a triangle j: A -> E, l: A -> C, r: C -> E".into(),
        ))
    }
}

impl RelativeAdjunction {
    /// Tabulates `sharp(a, k)` for `k: ℓ a -> c` and validates the result.
    pub fn from_fn(
        j: &Functor,
        l: &Functor,
        r: &Functor,
        sharp: impl Fn(Obj, Mor) -> Mor,
    ) -> Result<Self> {
        check_triangle(j, l, r)?;
        let c_cat = l.cod();
        let table = j
            .dom()
            .objects()
            .flat_map(|a| c_cat.objects().map(move |c| (a, c)))
            .map(|(a, c)| c_cat.hom(l.ob(a), c).iter().map(|&k| sharp(a, k)).collect())
            .collect();
        Self::from_table(j, l, r, table)
    }

    fn from_table(j: &Functor, l: &Functor, r: &Functor, sharp: Vec<Vec<Mor>>) -> Result<Self> {
        let v = violations(j, l, r, &sharp);
        if !v.is_empty() {
            return Err(Error::Adjunction(v.iter().map(|v| v.to_string()).collect()));
        }
        let e = j.cod();
        let nc = l.cod().num_objects();
        let mut flat = Vec::with_capacity(sharp.len());
        for (i, row) in sharp.iter().enumerate() {
            let (a, c) = (Obj(i / nc), Obj(i % nc));
            let hom = e.hom(j.ob(a), r.ob(c));
            let mut inv = vec![Mor(0); hom.len()];
            for (pos, &f) in row.iter().enumerate() {
                inv[e.hom_pos(f)] = l.cod().hom(l.ob(a), c)[pos];
            }
            flat.push(inv);
        }
        Ok(Self {
            j: j.clone(),
            l: l.clone(),
            r: r.clone(),
            sharp,
            flat,
        })
    }

    pub fn from_desc(j: &Functor, l: &Functor, r: &Functor, desc: &AdjunctionDesc) -> Result<Self> {
        check_triangle(j, l, r)?;
        let (a_cat, c_cat, e) = (j.dom(), l.cod(), j.cod());
        let mut table = Vec::new();
        for a in a_cat.objects() {
            for c in c_cat.objects() {
                let mut row = Vec::new();
                for &k in c_cat.hom(l.ob(a), c) {
                    let key = format!(
                        "{}|{}|{}",
                        a_cat.object_name(a),
                        c_cat.object_name(c),
                        c_cat.name(k)
                    );
                    let name = desc.sharp.get(&key).ok_or_else(|| Error::Validation {
                        location: format!("sharp/{key}"),
                        message: "missing transpose".into(),
                    })?;
                    let f = e.mor(name).ok_or_else(|| Error::Validation {
                        location: format!("sharp/{key}"),
                        message: format!("unknown morphism `{name}`"),
                    })?;
                    row.push(f);
                }
                table.push(row);
            }
        }
        let expected: usize = table.iter().map(Vec::len).sum();
        if desc.sharp.len() != expected {
            return Err(Error::Validation {
                location: "sharp".into(),
                message: format!("{} entries, expected {expected}", desc.sharp.len()),
            });
        }
        Self::from_table(j, l, r, table)
    }

    pub fn to_desc(&self) -> AdjunctionDesc {
        let (a_cat, c_cat, e) = (self.j.dom(), self.l.cod(), self.j.cod());
        let mut sharp = BTreeMap::new();
        for a in a_cat.objects() {
            for c in c_cat.objects() {
                for &k in c_cat.hom(self.l.ob(a), c) {
                    sharp.insert(
                        format!(
                            "{}|{}|{}",
                            a_cat.object_name(a),
                            c_cat.object_name(c),
                            c_cat.name(k)
                        ),
                        e.name(self.sharp(a, k)).to_string(),
                    );
                }
            }
        }
        AdjunctionDesc { sharp }
    }

    fn row(&self, a: Obj, c: Obj) -> usize {
        a.0 * self.l.cod().num_objects() + c.0
    }

    /// `♯k: j a -> r c` for `k: ℓ a -> c`.
    pub fn sharp(&self, a: Obj, k: Mor) -> Mor {
        let c_cat = self.l.cod();
        self.sharp[self.row(a, c_cat.cod(k))][c_cat.hom_pos(k)]
    }

    /// `♭f: ℓ a -> c` for `f: j a -> r c`.
    pub fn flat(&self, a: Obj, c: Obj, f: Mor) -> Mor {
        self.flat[self.row(a, c)][self.j.cod().hom_pos(f)]
    }

    /// The unit `η_a = ♯(1_{ℓ a})`.
    pub fn unit(&self, a: Obj) -> Mor {
        self.sharp(a, self.l.cod().id(self.l.ob(a)))
    }

    /// Whether the transposition tables coincide.
    pub fn same_tables(&self, other: &Self) -> bool {
        self.sharp == other.sharp
    }
}

fn violations(j: &Functor, l: &Functor, r: &Functor, sharp: &[Vec<Mor>]) -> Vec<AdjunctionViolation> {
    let (a_cat, c_cat, e) = (j.dom(), l.cod(), j.cod());
    let nc = c_cat.num_objects();
    let mut out = Vec::new();
    let get = |a: Obj, k: Mor| sharp[a.0 * nc + c_cat.cod(k).0][c_cat.hom_pos(k)];
    for a in a_cat.objects() {
        for c in c_cat.objects() {
            let row = &sharp[a.0 * nc + c.0];
            let target = e.hom(j.ob(a), r.ob(c));
            let mut hit = vec![false; target.len()];
            let mut ok = row.len() == target.len();
            for (pos, &f) in row.iter().enumerate() {
                if f.0 >= e.num_morphisms() || e.dom(f) != j.ob(a) || e.cod(f) != r.ob(c) {
                    out.push(AdjunctionViolation::WrongEndpoints {
                        a: a_cat.object_name(a).into(),
                        k: c_cat.name(c_cat.hom(l.ob(a), c)[pos]).into(),
                    });
                    return out;
                }
                let i = e.hom_pos(f);
                ok &= !hit[i];
                hit[i] = true;
            }
            if !ok {
                out.push(AdjunctionViolation::NotBijective {
                    a: a_cat.object_name(a).into(),
                    c: c_cat.object_name(c).into(),
                });
            }
        }
    }
    // ♯(k;m) = ♯k; r m
    for a in a_cat.objects() {
        for c in c_cat.objects() {
            for &k in c_cat.hom(l.ob(a), c) {
                for m in c_cat.out_of(c) {
                    if get(a, c_cat.then(k, m)) != e.then(get(a, k), r.mor(m)) {
                        out.push(AdjunctionViolation::NaturalityFail {
                            side: "c",
                            morphism: c_cat.name(m).into(),
                            at: c_cat.name(k).into(),
                        });
                    }
                }
            }
        }
    }
    // ♯(ℓh; k) = j h; ♯k for h: a' -> a
    for h in a_cat.morphism_ids() {
        let (a2, a) = (a_cat.dom(h), a_cat.cod(h));
        for c in c_cat.objects() {
            for &k in c_cat.hom(l.ob(a), c) {
                if get(a2, c_cat.then(l.mor(h), k)) != e.then(j.mor(h), get(a, k)) {
                    out.push(AdjunctionViolation::NaturalityFail {
                        side: "a",
                        morphism: a_cat.name(h).into(),
                        at: c_cat.name(k).into(),
                    });
                }
            }
        }
    }
    out
}

/// Validates explicit transposition tables.
pub fn validate_relative_adjunction(
    j: &Functor,
    l: &Functor,
    r: &Functor,
    sharp: impl Fn(Obj, Mor) -> Mor,
) -> Result<RelativeAdjunction> {
    RelativeAdjunction::from_fn(j, l, r, sharp)
}

/// Whether `m ↦ u; r m` is a bijection `C(x, c) -> E(j a, r c)` for all `c`.
fn represents(j: &Functor, r: &Functor, a: Obj, x: Obj, u: Mor) -> bool {
    let (c_cat, e) = (r.dom(), r.cod());
    c_cat.objects().all(|c| {
        let hom = c_cat.hom(x, c);
        let target = e.hom(j.ob(a), r.ob(c));
        if hom.len() != target.len() {
            return false;
        }
        let mut hit = vec![false; target.len()];
        hom.iter().all(|&m| {
            let i = e.hom_pos(e.then(u, r.mor(m)));
            !std::mem::replace(&mut hit[i], true)
        })
    })
}

/// Searches a left `j`-adjoint of `r` by representability, one object at a
/// time; `None` when some `a` has no representation.
pub fn find_left_relative_adjoint(
    j: &Functor,
    r: &Functor,
    tie: TieBreak,
    budget: &Budget,
) -> Result<Option<RelativeAdjunction>> {
    if !same_category(j.cod(), r.cod()) {
        return Err(Error::EndpointMismatch(
            "root and right adjoint must share a codomain".into(),
        ));
    }
    let (a_cat, c_cat, e) = (j.dom(), r.dom(), j.cod());
    let mut reps = Vec::with_capacity(a_cat.num_objects());
    for a in a_cat.objects() {
        let mut cands: Vec<(Obj, Mor)> = c_cat
            .objects()
            .flat_map(|x| e.hom(j.ob(a), r.ob(x)).iter().map(move |&u| (x, u)))
            .collect();
        if tie == TieBreak::Greatest {
            cands.reverse();
        }
        let mut found = None;
        for (x, u) in cands {
            budget.charge(1)?;
            if represents(j, r, a, x, u) {
                found = Some((x, u));
                break;
            }
        }
        match found {
            Some(rep) => reps.push(rep),
            None => return Ok(None),
        }
    }
    // ℓ h is the transpose of j h; u_a
    let on_mor = a_cat
        .morphism_ids()
        .map(|h| {
            let (a2, a) = (a_cat.dom(h), a_cat.cod(h));
            let (x2, u2) = reps[a2.0];
            let (x, u) = reps[a.0];
            let want = e.then(j.mor(h), u);
            *c_cat
                .hom(x2, x)
                .iter()
                .find(|&&m| e.then(u2, r.mor(m)) == want)
                .expect("representability gives a unique transpose")
        })
        .collect();
    let l = Functor::new_unchecked(
        a_cat.clone(),
        c_cat.clone(),
        reps.iter().map(|&(x, _)| x).collect(),
        on_mor,
    );
    debug_assert!(l.violations().is_empty());
    let adj = RelativeAdjunction::from_fn(j, &l, r, |a, k| e.then(reps[a.0].1, r.mor(k)))
        .map_err(|e| Error::TheoremViolation(format!("constructed adjunction is invalid: {e}")))?;
    Ok(Some(adj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::find_natural_iso;
    use crate::testcats::{bz2, disc2, parallel, terminal};

    #[test]
    fn identity_adjunction() {
        let c = parallel();
        let id = Functor::identity(&c);
        let adj = validate_relative_adjunction(&id, &id, &id, |_, k| k).unwrap();
        assert_eq!(adj.unit(Obj(0)), Mor(0));
        let found = find_left_relative_adjoint(&id, &id, TieBreak::Least, &Budget::unlimited())
            .unwrap()
            .unwrap();
        assert!(found.l.is_identity());
        assert!(found.same_tables(&adj));
    }

    #[test]
    fn swapped_transposition_is_not_natural() {
        let c = parallel();
        let id = Functor::identity(&c);
        let swap = |k: Mor| match k.0 {
            2 => Mor(3),
            3 => Mor(2),
            _ => k,
        };
        let err = validate_relative_adjunction(&id, &id, &id, |_, k| swap(k)).unwrap_err();
        let Error::Adjunction(v) = err else { panic!() };
        assert!(v.iter().any(|s| s.contains("not natural")));
    }

    #[test]
    fn empty_root_adjoints_exist_vacuously() {
        let c = bz2();
        let t = terminal();
        let r = Functor::to_terminal(&c).with_cod(&t);
        let j = Functor::empty_into(&t);
        let l = Functor::empty_into(&c).with_dom(j.dom());
        assert!(validate_relative_adjunction(&j, &l, &r, |_, k| k).is_ok());
        let found = find_left_relative_adjoint(&j, &r, TieBreak::Least, &Budget::unlimited())
            .unwrap()
            .unwrap();
        assert_eq!(found.l.dom().num_objects(), 0);
    }

    #[test]
    fn point_into_bz2_has_unit_e() {
        let c = bz2();
        let t = terminal();
        let j = Functor::constant(&t, &c, Obj(0));
        let adj = find_left_relative_adjoint(&j, &Functor::identity(&c), TieBreak::Least, &Budget::unlimited())
            .unwrap()
            .unwrap();
        assert_eq!(adj.unit(Obj(0)), Mor(0));
        let other = find_left_relative_adjoint(&j, &Functor::identity(&c), TieBreak::Greatest, &Budget::unlimited())
            .unwrap()
            .unwrap();
        assert_eq!(other.unit(Obj(0)), Mor(1));
        assert!(find_natural_iso(&adj.l, &other.l, &Budget::unlimited()).unwrap().is_some());
    }

    #[test]
    fn missing_adjoint() {
        // a point of Disc2 cannot represent maps out of the other point
        let d2 = disc2();
        let t = terminal();
        let r = Functor::constant(&t, &d2, Obj(0));
        let j = Functor::identity(&d2);
        assert!(find_left_relative_adjoint(&j, &r, TieBreak::Least, &Budget::unlimited())
            .unwrap()
            .is_none());
    }

    #[test]
    fn desc_round_trip() {
        let c = parallel();
        let id = Functor::identity(&c);
        let adj = validate_relative_adjunction(&id, &id, &id, |_, k| k).unwrap();
        let back = RelativeAdjunction::from_desc(&id, &id, &id, &adj.to_desc()).unwrap();
        assert_eq!(back, adj);
    }
}
