use std::collections::HashSet;
use std::sync::Arc;

use super::distributor::Distributor;
use crate::budget::Budget;
use crate::error::Result;
use crate::fincat::{FinCategory, Obj};
use crate::solve::{Problem, UNSET};

/// All distributors `X ⇸ Y` with at most `cap` elements per component,
/// one per isomorphism class, in canonical order (component sizes first,
/// then action tables).
pub fn enumerate_distributors(
    src: &Arc<FinCategory>,
    tgt: &Arc<FinCategory>,
    cap: usize,
    budget: &Budget,
) -> Result<Vec<Distributor>> {
    let (nx, ny) = (src.num_objects(), tgt.num_objects());
    let comps = nx * ny;
    let mut sizes = vec![0usize; comps];
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    loop {
        for d in with_sizes(src, tgt, &sizes, budget)? {
            if seen.insert(d.iso_key()) {
                out.push(d);
            }
        }
        // next size vector, last component fastest
        let mut k = comps;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            sizes[k] += 1;
            if sizes[k] <= cap {
                break;
            }
            sizes[k] = 0;
        }
    }
}

/// Every distributor with the given component sizes (no deduplication).
pub fn with_sizes(
    src: &Arc<FinCategory>,
    tgt: &Arc<FinCategory>,
    sizes: &[usize],
    budget: &Budget,
) -> Result<Vec<Distributor>> {
    let (x_cat, y_cat) = (&**src, &**tgt);
    let (nx, ny) = (x_cat.num_objects(), y_cat.num_objects());
    let size = |y: Obj, x: Obj| sizes[y.0 * nx + x.0];

    let mut p = Problem::new();
    // right(m, x, u): base index per (m, x)
    let mut right_base = vec![0usize; y_cat.num_morphisms() * nx];
    for m in y_cat.morphism_ids() {
        for x in x_cat.objects() {
            right_base[m.0 * nx + x.0] = p.num_vars();
            let dom = size(y_cat.dom(m), x) as u32;
            for _ in 0..size(y_cat.cod(m), x) {
                p.var((0..dom).collect());
            }
        }
    }
    let mut left_base = vec![0usize; x_cat.num_morphisms() * ny];
    for n in x_cat.morphism_ids() {
        for y in y_cat.objects() {
            left_base[n.0 * ny + y.0] = p.num_vars();
            let cod = size(y, x_cat.cod(n)) as u32;
            for _ in 0..size(y, x_cat.dom(n)) {
                p.var((0..cod).collect());
            }
        }
    }
    let rv = |m: crate::fincat::Mor, x: Obj| right_base[m.0 * nx + x.0];
    let lv = |n: crate::fincat::Mor, y: Obj| left_base[n.0 * ny + y.0];

    for y in y_cat.objects() {
        for x in x_cat.objects() {
            for u in 0..size(y, x) {
                p.fix(rv(y_cat.id(y), x) + u, u as u32);
                p.fix(lv(x_cat.id(x), y) + u, u as u32);
            }
        }
    }
    // (u · m2) · m1 = u · (m1;m2)
    for m2 in y_cat.morphism_ids() {
        for m1 in y_cat.into_obj(y_cat.dom(m2)) {
            if y_cat.is_identity(m1) || y_cat.is_identity(m2) {
                continue;
            }
            let m12 = y_cat.then(m1, m2);
            for x in x_cat.objects() {
                let n1 = size(y_cat.cod(m1), x);
                let b1 = rv(m1, x);
                let mut triggers: Vec<usize> = (b1..b1 + n1).collect();
                for u in 0..size(y_cat.cod(m2), x) {
                    let a = rv(m2, x) + u;
                    let target = rv(m12, x) + u;
                    triggers.push(a);
                    let t = triggers.clone();
                    triggers.pop();
                    p.rule(&t, move |s, out| {
                        let v = s[a];
                        if v == UNSET {
                            return true;
                        }
                        let w = s[b1 + v as usize];
                        if w != UNSET {
                            out.push((target, w));
                        }
                        true
                    });
                }
            }
        }
    }
    // n2 · (n1 · u) = (n1;n2) · u
    for n1 in x_cat.morphism_ids() {
        for n2 in x_cat.out_of(x_cat.cod(n1)) {
            if x_cat.is_identity(n1) || x_cat.is_identity(n2) {
                continue;
            }
            let n12 = x_cat.then(n1, n2);
            for y in y_cat.objects() {
                let b2 = lv(n2, y);
                let len2 = size(y, x_cat.dom(n2));
                let mut triggers: Vec<usize> = (b2..b2 + len2).collect();
                for u in 0..size(y, x_cat.dom(n1)) {
                    let a = lv(n1, y) + u;
                    let target = lv(n12, y) + u;
                    triggers.push(a);
                    let t = triggers.clone();
                    triggers.pop();
                    p.rule(&t, move |s, out| {
                        let v = s[a];
                        if v == UNSET {
                            return true;
                        }
                        let w = s[b2 + v as usize];
                        if w != UNSET {
                            out.push((target, w));
                        }
                        true
                    });
                }
            }
        }
    }
    // n · (u · m) = (n · u) · m
    for m in y_cat.morphism_ids() {
        if y_cat.is_identity(m) {
            continue;
        }
        let (y2, y) = (y_cat.dom(m), y_cat.cod(m));
        for n in x_cat.morphism_ids() {
            if x_cat.is_identity(n) {
                continue;
            }
            let (x, x2) = (x_cat.dom(n), x_cat.cod(n));
            let ln_y2 = lv(n, y2);
            let rm_x2 = rv(m, x2);
            let mut common: Vec<usize> = (ln_y2..ln_y2 + size(y2, x)).collect();
            common.extend(rm_x2..rm_x2 + size(y, x2));
            for u in 0..size(y, x) {
                let a = rv(m, x) + u;
                let c = lv(n, y) + u;
                let mut t = common.clone();
                t.push(a);
                t.push(c);
                p.rule(&t, move |s, out| {
                    let (va, vc) = (s[a], s[c]);
                    if va == UNSET || vc == UNSET {
                        return true;
                    }
                    let (b, d) = (s[ln_y2 + va as usize], s[rm_x2 + vc as usize]);
                    match (b == UNSET, d == UNSET) {
                        (false, false) => b == d,
                        (false, true) => {
                            out.push((rm_x2 + vc as usize, b));
                            true
                        }
                        (true, false) => {
                            out.push((ln_y2 + va as usize, d));
                            true
                        }
                        (true, true) => true,
                    }
                });
            }
        }
    }

    let mut result = Vec::new();
    for sol in p.all(budget)? {
        let names: Vec<Vec<String>> = sizes
            .iter()
            .map(|&s| (0..s).map(|i| i.to_string()).collect())
            .collect();
        let mut right = Vec::new();
        for m in y_cat.morphism_ids() {
            for x in x_cat.objects() {
                let b = rv(m, x);
                right.push(sol[b..b + size(y_cat.cod(m), x)].to_vec());
            }
        }
        let mut left = Vec::new();
        for n in x_cat.morphism_ids() {
            for y in y_cat.objects() {
                let b = lv(n, y);
                left.push(sol[b..b + size(y, x_cat.dom(n))].to_vec());
            }
        }
        let d = Distributor::from_tables(src, tgt, names, right, left);
        debug_assert!(d.violations().is_empty());
        result.push(d);
    }
    Ok(result)
}

/// Presheaves on `Y` with at most `cap` elements per object, up to
/// isomorphism, as distributors from the terminal category.
pub fn enumerate_weights(
    tgt: &Arc<FinCategory>,
    cap: usize,
    budget: &Budget,
) -> Result<Vec<Distributor>> {
    enumerate_distributors(&Arc::new(FinCategory::terminal()), tgt, cap, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{Mor, MorphismSig};

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
    fn bz2_sets_up_to_iso() {
        // Z/2-sets with at most 2 elements: empty, point, two fixed points, free orbit
        let w = enumerate_weights(&bz2(), 2, &Budget::unlimited()).unwrap();
        assert_eq!(w.len(), 4);
        for d in &w {
            assert!(d.violations().is_empty());
        }
    }

    #[test]
    fn labelled_count_matches_brute_force() {
        // Z/2 acting on a 2-element set: s must be an involution, 2 choices.
        let b = bz2();
        let t = Arc::new(FinCategory::terminal());
        let all = with_sizes(&t, &b, &[2], &Budget::unlimited()).unwrap();
        let mut brute = 0;
        for s0 in 0..2u32 {
            for s1 in 0..2u32 {
                let act = [s0, s1];
                if act[act[0] as usize] == 0 && act[act[1] as usize] == 1 {
                    brute += 1;
                }
            }
        }
        assert_eq!(all.len(), brute);
    }

    #[test]
    fn discrete_two_by_terminal() {
        let d2 = Arc::new(FinCategory::discrete(["a", "b"]));
        let t = Arc::new(FinCategory::terminal());
        // pairs of sizes 0..=1 on each object
        let w = enumerate_distributors(&t, &d2, 1, &Budget::unlimited()).unwrap();
        assert_eq!(w.len(), 4);
    }
}
