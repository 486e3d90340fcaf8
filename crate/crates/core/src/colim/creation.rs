use std::collections::HashMap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::cocone::{
    family_counts, universality_failure, weighted_colimit, Cocone, Column, Duals,
};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{same_category, FinCategory, Functor, Mor, Obj};
use crate::prof::Distributor;
use crate::solve::{Problem, UNSET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Nonstrict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Colimit,
    Limit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CreationReport {
    pub mode: Mode,
    pub kind: Kind,
    pub passed: bool,
    /// Lifts found (strict mode), counted up to two.
    pub lifts: usize,
    pub unique: bool,
    /// Whether the lift (strict) or the upstairs colimit (non-strict) is universal.
    pub colimiting: bool,
    /// Cocones inspected for the biconditional (non-strict mode).
    pub cocones_checked: usize,
    pub violations: Vec<String>,
    /// The unique lift; for limits it is the cone read in the dual.
    #[serde(skip)]
    pub lift: Option<Cocone>,
}

/// Restriction of the cocone search to lifts of a given downstairs cocone.
struct Lift<'a> {
    g: &'a Functor,
    down: &'a Cocone,
}

/// Visits the `p`-cocones for `f` in canonical order (apex objects, then
/// apex morphisms, then legs), optionally only those over `lift`.
fn search_cocones(
    p: &Distributor,
    f: &Functor,
    lift: Option<Lift<'_>>,
    budget: &Budget,
    mut visit: impl FnMut(Cocone) -> ControlFlow<()>,
) -> Result<()> {
    let w = &**f.cod();
    let x_cat = p.src();
    let y_cat = p.tgt();
    let (nx, nn) = (x_cat.num_objects(), x_cat.num_morphisms());
    let mut prob = Problem::new();
    for x in x_cat.objects() {
        prob.var(
            w.objects()
                .filter(|&o| lift.as_ref().is_none_or(|l| l.g.ob(o) == l.down.apex.ob(x)))
                .map(|o| o.0 as u32)
                .collect(),
        );
    }
    for n in x_cat.morphism_ids() {
        prob.var(
            w.morphism_ids()
                .filter(|&k| lift.as_ref().is_none_or(|l| l.g.mor(k) == l.down.apex.mor(n)))
                .map(|k| k.0 as u32)
                .collect(),
        );
    }
    let leg0 = nx + nn;
    for k in 0..p.total_elements() {
        let (y, _, _) = p.unflat(k);
        prob.var(
            w.morphism_ids()
                .filter(|&m| w.dom(m) == f.ob(y))
                .filter(|&m| lift.as_ref().is_none_or(|l| l.g.mor(m) == l.down.legs[k]))
                .map(|m| m.0 as u32)
                .collect(),
        );
    }
    for n in x_cat.morphism_ids() {
        let (d, c) = (x_cat.dom(n).0, x_cat.cod(n).0);
        let v = nx + n.0;
        prob.derive(v, d, move |k| Some(w.dom(Mor(k as usize)).0 as u32));
        prob.derive(v, c, move |k| Some(w.cod(Mor(k as usize)).0 as u32));
        if x_cat.is_identity(n) {
            prob.derive(d, v, move |o| Some(w.id(Obj(o as usize)).0 as u32));
        }
    }
    for n1 in x_cat.morphism_ids() {
        for n2 in x_cat.out_of(x_cat.cod(n1)) {
            if x_cat.is_identity(n1) || x_cat.is_identity(n2) {
                continue;
            }
            let (a, b, c) = (nx + n1.0, nx + n2.0, nx + x_cat.then(n1, n2).0);
            prob.rule(&[a, b], move |s, out| {
                if s[a] == UNSET || s[b] == UNSET {
                    return true;
                }
                match w.compose(Mor(s[a] as usize), Mor(s[b] as usize)) {
                    Some(m) => {
                        out.push((c, m.0 as u32));
                        true
                    }
                    None => false,
                }
            });
        }
    }
    for k in 0..p.total_elements() {
        let (y, x, u) = p.unflat(k);
        let lv = leg0 + k;
        prob.derive(lv, x.0, move |m| Some(w.cod(Mor(m as usize)).0 as u32));
        for m in y_cat.into_obj(y) {
            if y_cat.is_identity(m) {
                continue;
            }
            let to = leg0 + p.flat(y_cat.dom(m), x, p.act_right(m, x, u));
            let fm = f.mor(m);
            prob.derive(lv, to, move |l| Some(w.then(fm, Mor(l as usize)).0 as u32));
        }
        for n in x_cat.out_of(x) {
            if x_cat.is_identity(n) {
                continue;
            }
            let nv = nx + n.0;
            let to = leg0 + p.flat(y, x_cat.cod(n), p.act_left(n, y, u));
            prob.rule(&[lv, nv], move |s, out| {
                if s[lv] == UNSET || s[nv] == UNSET {
                    return true;
                }
                match w.compose(Mor(s[lv] as usize), Mor(s[nv] as usize)) {
                    Some(m) => {
                        out.push((to, m.0 as u32));
                        true
                    }
                    None => false,
                }
            });
        }
    }
    prob.solve(budget, |s| {
        let apex = Functor::new_unchecked(
            x_cat.clone(),
            f.cod().clone(),
            s[..nx].iter().map(|&o| Obj(o as usize)).collect(),
            s[nx..leg0].iter().map(|&k| Mor(k as usize)).collect(),
        );
        visit(Cocone {
            weight: p.clone(),
            diagram: f.clone(),
            apex,
            legs: s[leg0..].iter().map(|&m| Mor(m as usize)).collect(),
        })
    })
}

/// Universality of cocones, memoized per column.
struct Universality<'a> {
    p: &'a Distributor,
    f: &'a Functor,
    columns: Vec<Column>,
    counts: Vec<Vec<usize>>,
    memo: HashMap<(usize, Obj, Vec<Mor>), bool>,
}

impl<'a> Universality<'a> {
    fn new(p: &'a Distributor, f: &'a Functor, budget: &Budget) -> Result<Self> {
        let columns: Vec<Column> = p.src().objects().map(|x| Column::new(p, x)).collect();
        let counts = columns
            .iter()
            .map(|c| family_counts(p, f, c, budget))
            .collect::<Result<_>>()?;
        Ok(Self {
            p,
            f,
            columns,
            counts,
            memo: HashMap::new(),
        })
    }

    fn check(&mut self, apex: &Functor, legs: &[Mor]) -> bool {
        let w: &FinCategory = self.f.cod();
        for (i, col) in self.columns.iter().enumerate() {
            let col_legs = col.legs(self.p, legs);
            let key = (i, apex.ob(col.x), col_legs);
            let ok = *self.memo.entry(key).or_insert_with_key(|(_, a, l)| {
                universality_failure(w, *a, l, &self.counts[i]).is_none()
            });
            if !ok {
                return false;
            }
        }
        true
    }
}

fn check_inputs(g: &Functor, p: &Distributor, f: &Functor) -> Result<()> {
    if !same_category(f.dom(), p.tgt()) || !same_category(f.cod(), g.dom()) {
        return Err(Error::EndpointMismatch(
            "creation data must compose as weight, diagram, functor".into(),
        ));
    }
    Ok(())
}

/// Whether `g` creates the `p`-weighted (co)limit of `f;g`, tested against
/// the canonical downstairs (co)limit.
pub fn check_creation(
    g: &Functor,
    p: &Distributor,
    f: &Functor,
    mode: Mode,
    kind: Kind,
    budget: &Budget,
) -> Result<CreationReport> {
    match kind {
        Kind::Colimit => {
            check_inputs(g, p, f)?;
            let fg = f.then(g)?;
            let down = match weighted_colimit(p, &fg, budget) {
                Ok(c) => c.cocone,
                Err(Error::NotFound(_)) => return Err(Error::DownstairsMissing),
                Err(e) => return Err(e),
            };
            check_colimit_creation_at(g, f, &down, mode, budget)
        }
        Kind::Limit => {
            if !same_category(f.dom(), p.src()) || !same_category(f.cod(), g.dom()) {
                return Err(Error::EndpointMismatch(
                    "creation data must compose as weight, diagram, functor".into(),
                ));
            }
            let d = Duals::new(p, f.cod());
            let xo = std::sync::Arc::new(crate::fincat::opposite(g.cod()));
            let gop = g.op_with(&d.w, &xo);
            let mut r = check_creation(
                &gop,
                &p.op_with(&d.x, &d.y),
                &f.op_with(&d.x, &d.w),
                mode,
                Kind::Colimit,
                budget,
            )?;
            r.kind = Kind::Limit;
            Ok(r)
        }
    }
}

/// Creation of a colimit against a given downstairs colimiting cocone `down`
/// for `f;g`.
pub fn check_colimit_creation_at(
    g: &Functor,
    f: &Functor,
    down: &Cocone,
    mode: Mode,
    budget: &Budget,
) -> Result<CreationReport> {
    let p = &down.weight;
    check_inputs(g, p, f)?;
    let mut report = CreationReport {
        mode,
        kind: Kind::Colimit,
        passed: false,
        lifts: 0,
        unique: false,
        colimiting: false,
        cocones_checked: 0,
        violations: Vec::new(),
        lift: None,
    };
    match mode {
        Mode::Strict => {
            let mut lifts = Vec::new();
            search_cocones(p, f, Some(Lift { g, down }), budget, |c| {
                lifts.push(c);
                if lifts.len() >= 2 {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            report.lifts = lifts.len();
            report.unique = lifts.len() == 1;
            match lifts.len() {
                0 => report.violations.push("no cocone lifts the colimit".into()),
                1 => {}
                _ => report.violations.push("the lift is not unique".into()),
            }
            if let Some(first) = lifts.into_iter().next() {
                match first.colimit_failure(budget)? {
                    None => report.colimiting = true,
                    Some((x, why)) => report.violations.push(format!(
                        "the lift is not a colimit at `{}`: {why}",
                        p.src().object_name(x)
                    )),
                }
                report.lift = Some(first);
            }
            report.passed = report.unique && report.colimiting;
        }
        Mode::Nonstrict => {
            let fg = f.then(g)?;
            let mut up = Universality::new(p, f, budget)?;
            let mut downstairs = Universality::new(p, &fg, budget)?;
            let mut mismatch = None;
            let mut checked = 0;
            search_cocones(p, f, None, budget, |c| {
                checked += 1;
                let a = up.check(&c.apex, &c.legs);
                let image_apex = c.apex.then(g).expect("composable");
                let image_legs: Vec<Mor> = c.legs.iter().map(|&l| g.mor(l)).collect();
                let b = downstairs.check(&image_apex, &image_legs);
                if a != b {
                    mismatch = Some((c, a));
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            })?;
            report.cocones_checked = checked;
            if let Some((c, a)) = mismatch {
                let w = f.cod();
                let apex: Vec<&str> = c.apex.object_map().iter().map(|&o| w.object_name(o)).collect();
                report.violations.push(format!(
                    "cocone with apex [{}] is {} but its image is {}",
                    apex.join(", "),
                    if a { "colimiting" } else { "not colimiting" },
                    if a { "not" } else { "colimiting" }
                ));
            }
            match weighted_colimit(p, f, budget) {
                Ok(c) => {
                    report.colimiting = true;
                    report.lift = Some(c.cocone);
                }
                Err(Error::NotFound(why)) => {
                    report.violations.push(format!("no colimit upstairs: {why}"))
                }
                Err(e) => return Err(e),
            }
            report.passed = report.violations.is_empty();
        }
    }
    Ok(report)
}

/// Every colimiting cocone: at each `x` any universal `(apex, legs)`, with
/// the apex action forced. Stops after `cap` cocones.
pub fn colimiting_cocones(
    p: &Distributor,
    f: &Functor,
    cap: usize,
    budget: &Budget,
) -> Result<Vec<Cocone>> {
    let mut u = Universality::new(p, f, budget)?;
    let mut out = Vec::new();
    // a cocone is colimiting iff it is universal at every column, and the
    // apex action is then determined; enumerate cocones with universal columns
    let w = &**f.cod();
    let mut per_column: Vec<Vec<(Obj, Vec<Mor>)>> = Vec::new();
    for (i, col) in u.columns.iter().enumerate() {
        let mut here = Vec::new();
        for cand in w.objects() {
            if w.objects().any(|t| w.hom(cand, t).len() != u.counts[i][t.0]) {
                continue;
            }
            super::cocone::search_families(p, f, col, cand, budget, |fam| {
                if universality_failure(w, cand, fam, &u.counts[i]).is_none() {
                    here.push((cand, fam.to_vec()));
                }
                ControlFlow::Continue(())
            })?;
        }
        if here.is_empty() {
            return Ok(out);
        }
        per_column.push(here);
    }
    let x_cat = p.src();
    let mut choice = vec![0usize; per_column.len()];
    loop {
        let mut legs = vec![Mor(0); p.total_elements()];
        for (i, col) in u.columns.iter().enumerate() {
            let (_, fam) = &per_column[i][choice[i]];
            for (k, &(y, uu)) in col.elems.iter().enumerate() {
                legs[p.flat(y, col.x, uu)] = fam[k];
            }
        }
        let obs: Vec<Obj> = (0..per_column.len()).map(|i| per_column[i][choice[i]].0).collect();
        let mors = x_cat
            .morphism_ids()
            .map(|n| {
                let (x, x2) = (x_cat.dom(n), x_cat.cod(n));
                let col = &u.columns[x.0];
                *w.hom(obs[x.0], obs[x2.0])
                    .iter()
                    .find(|&&k| {
                        col.elems.iter().all(|&(y, uu)| {
                            w.then(legs[p.flat(y, x, uu)], k)
                                == legs[p.flat(y, x2, p.act_left(n, y, uu))]
                        })
                    })
                    .expect("universal property yields a factorization")
            })
            .collect();
        let apex = Functor::new_unchecked(x_cat.clone(), f.cod().clone(), obs, mors);
        debug_assert!(u.check(&apex, &legs));
        out.push(Cocone {
            weight: p.clone(),
            diagram: f.clone(),
            apex,
            legs,
        });
        if out.len() >= cap {
            return Ok(out);
        }
        let mut k = choice.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < per_column[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{CategoryDesc, MorphismDesc};
    use crate::prof::{hom_distributor, restrict_distributor};
    use std::sync::Arc;

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

    #[test]
    fn identity_creates_strictly_and_nonstrictly() {
        let i = interval();
        let id = Functor::identity(&i);
        let b = Budget::unlimited();
        let h = hom_distributor(&i);
        for mode in [Mode::Strict, Mode::Nonstrict] {
            for kind in [Kind::Colimit, Kind::Limit] {
                let r = check_creation(&id, &h, &id, mode, kind, &b).unwrap();
                assert!(r.passed, "{mode:?} {kind:?}: {:?}", r.violations);
            }
        }
    }

    #[test]
    fn collapsing_functor_fails_strict_creation() {
        // Interval -> Terminal: the point downstairs has two lifts of the
        // empty colimit, only one of which (0) is initial.
        let i = interval();
        let t = Arc::new(FinCategory::terminal());
        let g = Functor::to_terminal(&i).with_cod(&t);
        let empty = Distributor::from_fn(&t, &i, |_, _| Vec::new(), |_, _, u| u, |_, _, u| u);
        let b = Budget::unlimited();
        let r = check_creation(&g, &empty, &Functor::identity(&i), Mode::Strict, Kind::Colimit, &b)
            .unwrap();
        assert!(!r.passed);
        assert_eq!(r.lifts, 2);
        let r = check_creation(
            &g,
            &empty,
            &Functor::identity(&i),
            Mode::Nonstrict,
            Kind::Colimit,
            &b,
        )
        .unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn downstairs_missing_is_reported() {
        let d2 = Arc::new(FinCategory::discrete(["a", "b"]));
        let t = Arc::new(FinCategory::terminal());
        let all = Distributor::from_fn(&t, &d2, |_, _| vec!["u".into()], |_, _, u| u, |_, _, u| u);
        let id = Functor::identity(&d2);
        assert_eq!(
            check_creation(&id, &all, &id, Mode::Strict, Kind::Colimit, &Budget::unlimited()),
            Err(Error::DownstairsMissing)
        );
    }

    #[test]
    fn colimiting_cocones_cover_isomorphic_choices() {
        let i = interval();
        let t = Arc::new(FinCategory::terminal());
        let point = Functor::constant(&t, &i, Obj(1));
        let p = restrict_distributor(&hom_distributor(&i), &Functor::identity(&i), &point).unwrap();
        let all = colimiting_cocones(&p, &Functor::identity(&i), 10, &Budget::unlimited()).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_colimit(&Budget::unlimited()).unwrap());
    }
}
