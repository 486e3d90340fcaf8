//! Engine counts against the committed brute-force oracle file, which is
//! produced by `scripts/point_monad_oracle.py`.

use std::collections::BTreeMap;
use std::sync::Arc;

use relmon_core::alg::build_algebra_category;
use relmon_core::corpus::{arrow_into_involution, delooping, indiscrete2, interval, split, MonoidTable};
use relmon_core::relmon::enumerate_relative_monads;
use relmon_core::{Budget, FinCategory, Functor};
use serde::Deserialize;

#[derive(Deserialize)]
struct MonoidEntry {
    elements: Vec<String>,
    mul: Vec<Vec<usize>>,
    monads: usize,
    units: Vec<String>,
    algebras: Vec<usize>,
}

#[derive(Deserialize)]
struct RootEntry {
    monads: usize,
    carriers: Vec<String>,
    algebras: Vec<usize>,
}

#[derive(Deserialize)]
struct Oracle {
    monoids: BTreeMap<String, MonoidEntry>,
    categories: BTreeMap<String, BTreeMap<String, RootEntry>>,
}

fn oracle() -> Oracle {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/oracles/point_monads.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// `(carrier name, unit name, algebra count)` per monad over the point `x`, sorted.
fn engine(e: &Arc<FinCategory>, x: &str) -> Vec<(String, String, usize)> {
    let b = Budget::unlimited();
    let t = Arc::new(FinCategory::terminal());
    let j = Functor::constant(&t, e, e.obj(x).unwrap());
    let mut out: Vec<_> = enumerate_relative_monads(&j, &b)
        .unwrap()
        .into_iter()
        .map(|m| {
            let alg = build_algebra_category(&m, &b).unwrap();
            let carrier = e.object_name(m.t.ob(relmon_core::Obj(0))).to_string();
            let unit = e.name(m.unit(relmon_core::Obj(0))).to_string();
            (carrier, unit, alg.category.num_objects())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn monoid_point_roots_match_oracle() {
    for (name, m) in oracle().monoids {
        let e = Arc::new(delooping(&MonoidTable { elements: m.elements, mul: m.mul }).unwrap());
        let got = engine(&e, "*");
        assert_eq!(got.len(), m.monads, "{name}");
        let mut want: Vec<_> = m.units.into_iter().zip(m.algebras).collect();
        want.sort();
        let got: Vec<_> = got.into_iter().map(|(_, u, a)| (u, a)).collect();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn category_point_roots_match_oracle() {
    let cats: BTreeMap<&str, Arc<FinCategory>> = [
        ("interval", interval()),
        ("indisc2", indiscrete2()),
        ("split", split()),
        ("arrow_into_involution", arrow_into_involution()),
    ]
    .into_iter()
    .collect();
    let o = oracle();
    assert_eq!(o.categories.len(), cats.len());
    for (name, roots) in o.categories {
        let e = &cats[name.as_str()];
        for (x, r) in roots {
            let got = engine(e, &x);
            assert_eq!(got.len(), r.monads, "{name} at {x}");
            let mut want: Vec<_> = r.carriers.into_iter().zip(r.algebras).collect();
            want.sort();
            let mut got: Vec<_> = got.into_iter().map(|(c, _, a)| (c, a)).collect();
            got.sort();
            assert_eq!(got, want, "{name} at {x}");
        }
    }
}
