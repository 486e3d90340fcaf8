//! Exhaustive enumeration of small categories up to isomorphism, used as the
//! shape family of creation audits.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::budget::Budget;
use crate::error::Result;
use crate::fincat::{FinCategory, Mor, MorphismSig, Obj};

/// Bounds of a shape family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ShapeBounds {
    pub max_objects: usize,
    pub max_morphisms: usize,
}

impl Default for ShapeBounds {
    fn default() -> Self {
        ShapeBounds { max_objects: 2, max_morphisms: 6 }
    }
}

/// Hom-set layout: morphisms are numbered hom by hom (row-major in
/// `(dom, cod)`), the identity first in each endo-hom.
struct Layout {
    n: usize,
    sigs: Vec<MorphismSig>,
    ids: Vec<Mor>,
    homs: Vec<Vec<usize>>,
}

impl Layout {
    fn new(k: usize, sizes: &[usize]) -> Self {
        let mut sigs = Vec::new();
        let mut ids = vec![Mor(0); k];
        let mut homs = vec![Vec::new(); k * k];
        for x in 0..k {
            for y in 0..k {
                for i in 0..sizes[x * k + y] {
                    let idx = sigs.len();
                    let name = if x == y && i == 0 {
                        ids[x] = Mor(idx);
                        format!("1_{x}")
                    } else {
                        format!("m{idx}")
                    };
                    sigs.push(MorphismSig { name, dom: Obj(x), cod: Obj(y) });
                    homs[x * k + y].push(idx);
                }
            }
        }
        Layout { n: sigs.len(), sigs, ids, homs }
    }

    fn is_id(&self, f: usize) -> bool {
        self.ids[self.sigs[f].dom.0].0 == f && self.sigs[f].dom == self.sigs[f].cod
    }
}

/// All composition tables over a layout satisfying associativity; units are
/// built in. Associativity is propagated: once three of the four cells of a
/// triple are known, the fourth is forced.
fn tables(l: &Layout, budget: &Budget, out: &mut Vec<Vec<usize>>) -> Result<()> {
    let n = l.n;
    let mut comp = vec![usize::MAX; n * n];
    for f in 0..n {
        for g in 0..n {
            if l.sigs[f].cod != l.sigs[g].dom {
                continue;
            }
            if l.is_id(f) {
                comp[f * n + g] = g;
            } else if l.is_id(g) {
                comp[f * n + g] = f;
            }
        }
    }
    let free: Vec<usize> = (0..n * n)
        .filter(|&i| l.sigs[i / n].cod == l.sigs[i % n].dom && comp[i] == usize::MAX)
        .collect();
    // a triple with a unit in it holds by the unit laws, so only triples
    // of non-units matter, and their first cell is always free
    let triples: Vec<(usize, usize, usize)> = free
        .iter()
        .flat_map(|&i| {
            let (a, b) = (i / n, i % n);
            (0..n)
                .filter(move |&c| l.sigs[b].cod == l.sigs[c].dom && !l.is_id(c))
                .map(move |c| (a, b, c))
        })
        .collect();
    let mut trail = Vec::new();
    search(n, &free, &triples, &l.homs, l, &mut comp, &mut trail, budget, out)
}

/// Applies forced cells until a fixpoint; `false` on a contradiction.
fn propagate(
    n: usize,
    triples: &[(usize, usize, usize)],
    comp: &mut [usize],
    trail: &mut Vec<usize>,
) -> bool {
    loop {
        let mut changed = false;
        for &(a, b, c) in triples {
            let (ab, bc) = (comp[a * n + b], comp[b * n + c]);
            if ab == usize::MAX || bc == usize::MAX {
                continue;
            }
            let (i, k) = (ab * n + c, a * n + bc);
            match (comp[i], comp[k]) {
                (usize::MAX, usize::MAX) => {}
                (usize::MAX, y) => {
                    comp[i] = y;
                    trail.push(i);
                    changed = true;
                }
                (x, usize::MAX) => {
                    comp[k] = x;
                    trail.push(k);
                    changed = true;
                }
                (x, y) if x != y => return false,
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    n: usize,
    free: &[usize],
    triples: &[(usize, usize, usize)],
    homs: &[Vec<usize>],
    l: &Layout,
    comp: &mut Vec<usize>,
    trail: &mut Vec<usize>,
    budget: &Budget,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    budget.charge(1)?;
    let Some(&cell) = free.iter().find(|&&i| comp[i] == usize::MAX) else {
        out.push(comp.clone());
        return Ok(());
    };
    let k = l.ids.len();
    let (f, g) = (cell / n, cell % n);
    for &h in &homs[l.sigs[f].dom.0 * k + l.sigs[g].cod.0] {
        let mark = trail.len();
        comp[cell] = h;
        trail.push(cell);
        if propagate(n, triples, comp, trail) {
            search(n, free, triples, homs, l, comp, trail, budget, out)?;
        }
        for i in trail.drain(mark..) {
            comp[i] = usize::MAX;
        }
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Relabellings preserving the layout: object permutations that fix the hom
/// sizes, combined with permutations of the non-identity morphisms within
/// each hom. Each is returned as its inverse, new index to old.
fn relabellings(l: &Layout, sizes: &[usize]) -> Vec<Vec<usize>> {
    let k = l.ids.len();
    let mut out = Vec::new();
    for sigma in permutations(k) {
        if (0..k * k).any(|i| sizes[sigma[i / k] * k + sigma[i % k]] != sizes[i]) {
            continue;
        }
        let per_hom: Vec<Vec<Vec<usize>>> = (0..k * k)
            .map(|i| permutations(sizes[i] - usize::from(i / k == i % k)))
            .collect();
        let mut choice = vec![0usize; k * k];
        loop {
            let mut inv = vec![0usize; l.n];
            for i in 0..k * k {
                let (x, y) = (i / k, i % k);
                let src = &l.homs[sigma[x] * k + sigma[y]];
                let dst = &l.homs[i];
                let skip = usize::from(x == y);
                if skip == 1 {
                    inv[dst[0]] = src[0];
                }
                for (t, &s) in per_hom[i][choice[i]].iter().enumerate() {
                    inv[dst[t + skip]] = src[s + skip];
                }
            }
            out.push(inv);
            let mut i = 0;
            while i < k * k {
                choice[i] += 1;
                if choice[i] < per_hom[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == k * k {
                break;
            }
        }
    }
    out
}

/// Whether no relabelling yields a lexicographically smaller table.
fn is_canonical(n: usize, comp: &[usize], maps: &[Vec<usize>]) -> bool {
    for inv in maps {
        let mut fwd = vec![0usize; n];
        for (new, &old) in inv.iter().enumerate() {
            fwd[old] = new;
        }
        for i in 0..n * n {
            let (a, b) = (inv[i / n], inv[i % n]);
            let v = comp[a * n + b];
            let relabelled = if v == usize::MAX { usize::MAX } else { fwd[v] };
            match relabelled.cmp(&comp[i]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    true
}

/// Hom-size vectors for `k` objects with at most `m` morphisms in total.
fn size_vectors(k: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; k * k];
    fn go(i: usize, k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == k * k {
            out.push(cur.clone());
            return;
        }
        let lo = usize::from(i / k == i % k);
        for s in lo..=left {
            cur[i] = s;
            go(i + 1, k, left - s, cur, out);
        }
        cur[i] = 0;
    }
    if m >= k {
        go(0, k, m, &mut cur, &mut out);
    }
    out
}

/// Every category with at most `max_objects` objects and `max_morphisms`
/// morphisms, one per isomorphism class, ordered by object count, then
/// morphism count, then hom sizes and table.
pub fn small_categories(bounds: ShapeBounds, budget: &Budget) -> Result<Vec<Arc<FinCategory>>> {
    type Cache = BTreeMap<(usize, usize), Vec<Arc<FinCategory>>>;
    static CACHE: Mutex<Cache> = Mutex::new(BTreeMap::new());
    let key = (bounds.max_objects, bounds.max_morphisms);
    if let Some(hit) = CACHE.lock().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let out = generate(bounds, budget)?;
    CACHE.lock().expect("cache lock").insert(key, out.clone());
    Ok(out)
}

fn generate(bounds: ShapeBounds, budget: &Budget) -> Result<Vec<Arc<FinCategory>>> {
    let mut out = Vec::new();
    for k in 0..=bounds.max_objects {
        let mut found: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
        for sizes in size_vectors(k, bounds.max_morphisms) {
            // one size vector per orbit of object permutations
            let least = permutations(k)
                .into_iter()
                .map(|s| (0..k * k).map(|i| sizes[s[i / k] * k + s[i % k]]).collect::<Vec<_>>())
                .min()
                .unwrap_or_default();
            if least != sizes {
                continue;
            }
            let l = Layout::new(k, &sizes);
            let maps = relabellings(&l, &sizes);
            let mut ts = Vec::new();
            tables(&l, budget, &mut ts)?;
            for t in ts {
                budget.charge(1)?;
                if is_canonical(l.n, &t, &maps) {
                    found.push((l.n, sizes.clone(), t));
                }
            }
        }
        found.sort();
        for (_, sizes, table) in found {
            let l = Layout::new(k, &sizes);
            let n = l.n;
            let objects = (0..k).map(|x| x.to_string()).collect();
            let cat = FinCategory::from_fn(objects, l.sigs.clone(), l.ids.clone(), |f, g| {
                Mor(table[f.0 * n + g.0])
            })
            .expect("enumerated tables are lawful");
            out.push(Arc::new(cat));
        }
    }
    Ok(out)
}
