use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Mor, MorphismSig, Obj};

/// A finite monoid as a multiplication table, `mul[f][g] = f;g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidTable {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<usize>>,
}

/// The one-object category with the monoid as its endomorphisms.
pub fn delooping(m: &MonoidTable) -> Result<FinCategory> {
    let n = m.elements.len();
    let bad = |why: String| Err(Error::NotAMonoid(why));
    if m.mul.len() != n || m.mul.iter().any(|row| row.len() != n) {
        return bad(format!("the table must be {n} by {n}"));
    }
    if let Some((i, j)) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| m.mul[i][j] >= n)
    {
        return bad(format!(
            "{};{} is out of range",
            m.elements[i], m.elements[j]
        ));
    }
    let Some(unit) = (0..n).find(|&e| (0..n).all(|x| m.mul[e][x] == x && m.mul[x][e] == x)) else {
        return bad("no unit element".into());
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if m.mul[m.mul[a][b]][c] != m.mul[a][m.mul[b][c]] {
                    let (x, y, z) = (&m.elements[a], &m.elements[b], &m.elements[c]);
                    return bad(format!("({x};{y});{z} != {x};({y};{z})"));
                }
            }
        }
    }
    let morphisms = m
        .elements
        .iter()
        .map(|name| MorphismSig { name: name.clone(), dom: Obj(0), cod: Obj(0) })
        .collect();
    FinCategory::from_fn(vec!["*".into()], morphisms, vec![Mor(unit)], |f, g| Mor(m.mul[f.0][g.0]))
        .map_err(|e| Error::NotAMonoid(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub objects: usize,
    /// Largest hom-set size.
    pub max_hom: usize,
    pub attempts: usize,
}

/// Rejection-samples hom sizes and composition tables until the laws hold.
/// Deterministic per seed; `None` once the attempts are used up.
pub fn generate_category(seed: u64, params: GenParams) -> Option<FinCategory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = params.objects;
    if k == 0 {
        return Some(FinCategory::empty());
    }
    if params.max_hom == 0 {
        return None;
    }
    for _ in 0..params.attempts {
        let mut morphisms = Vec::new();
        let mut identities = vec![Mor(0); k];
        let mut homs = vec![Vec::new(); k * k];
        for x in 0..k {
            for y in 0..k {
                let size = rng.gen_range(usize::from(x == y)..=params.max_hom);
                for i in 0..size {
                    let idx = morphisms.len();
                    let name = if x == y && i == 0 {
                        identities[x] = Mor(idx);
                        format!("1_{x}")
                    } else {
                        format!("f{idx}")
                    };
                    morphisms.push(MorphismSig { name, dom: Obj(x), cod: Obj(y) });
                    homs[x * k + y].push(Mor(idx));
                }
            }
        }
        let n = morphisms.len();
        let is_id = |f: usize| identities.contains(&Mor(f));
        let mut table = vec![Mor(0); n * n];
        let mut feasible = true;
        for f in 0..n {
            for g in 0..n {
                if morphisms[f].cod != morphisms[g].dom {
                    continue;
                }
                table[f * n + g] = if is_id(f) {
                    Mor(g)
                } else if is_id(g) {
                    Mor(f)
                } else {
                    let hom = &homs[morphisms[f].dom.0 * k + morphisms[g].cod.0];
                    if hom.is_empty() {
                        feasible = false;
                        continue;
                    }
                    hom[rng.gen_range(0..hom.len())]
                };
            }
        }
        if !feasible {
            continue;
        }
        let objects = (0..k).map(|x| x.to_string()).collect();
        if let Ok(cat) = FinCategory::from_fn(objects, morphisms, identities, |f, g| table[f.0 * n + g.0]) {
            return Some(cat);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(elements: &[&str], mul: Vec<Vec<usize>>) -> MonoidTable {
        MonoidTable { elements: elements.iter().map(|s| s.to_string()).collect(), mul }
    }

    #[test]
    fn deloop_small_monoids() {
        let one = delooping(&table(&["1"], vec![vec![0]])).unwrap();
        assert_eq!((one.num_objects(), one.num_morphisms()), (1, 1));
        let z2 = delooping(&table(&["e", "s"], vec![vec![0, 1], vec![1, 0]])).unwrap();
        let s = z2.mor("s").unwrap();
        assert_eq!(z2.then(s, s), z2.mor("e").unwrap());
        // the unit need not come first
        let z2b = delooping(&table(&["s", "e"], vec![vec![1, 0], vec![0, 1]])).unwrap();
        assert_eq!(z2b.name(z2b.id(Obj(0))), "e");
    }

    #[test]
    fn reject_non_monoids() {
        // a;a = b, b;a = 1, ... fails associativity
        let bad = table(&["1", "a", "b"], vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 2, 2]]);
        assert!(matches!(delooping(&bad), Err(Error::NotAMonoid(w)) if w.contains("!=")));
        let no_unit = table(&["a", "b"], vec![vec![0, 0], vec![0, 0]]);
        assert!(matches!(delooping(&no_unit), Err(Error::NotAMonoid(w)) if w.contains("unit")));
        let ragged = table(&["1"], vec![vec![0, 0]]);
        assert!(delooping(&ragged).is_err());
    }

    #[test]
    fn generation_edge_cases() {
        let p = |objects, max_hom| GenParams { objects, max_hom, attempts: 100 };
        assert_eq!(generate_category(3, p(0, 5)), Some(FinCategory::empty()));
        let t = generate_category(3, p(1, 1)).unwrap();
        assert_eq!((t.num_objects(), t.num_morphisms()), (1, 1));
        assert_eq!(generate_category(7, p(2, 3)), generate_category(7, p(2, 3)));
    }

    #[test]
    fn golden_sample_is_pinned() {
        use crate::corpus::{to_canonical_json, GOLDEN_PARAMS, GOLDEN_SEED};
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/golden/generated_seed0.json");
        let cat = generate_category(GOLDEN_SEED, GOLDEN_PARAMS).unwrap();
        let text = to_canonical_json(&cat.to_desc());
        if std::env::var_os("RELMON_REGENERATE_GOLDEN").is_some() {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let golden = std::fs::read_to_string(&path).expect("golden file; set RELMON_REGENERATE_GOLDEN=1 to create it");
        assert_eq!(text, golden);
    }
}
