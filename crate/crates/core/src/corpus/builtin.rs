use std::sync::Arc;

use super::bundle::{Instance, Provenance};
use super::generate::{delooping, generate_category, GenParams, MonoidTable};
use crate::budget::Budget;
use crate::fincat::{FinCategory, Functor, Mor, MorphismSig, Obj};
use crate::reladj::{find_left_relative_adjoint, TieBreak};
use crate::relmon::{enumerate_relative_monads, trivial_relative_monad};

fn sig(name: &str, dom: usize, cod: usize) -> MorphismSig {
    MorphismSig { name: name.into(), dom: Obj(dom), cod: Obj(cod) }
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn monoid(elements: &[&str], mul: &[&[usize]]) -> Arc<FinCategory> {
    let t = MonoidTable { elements: names(elements), mul: mul.iter().map(|r| r.to_vec()).collect() };
    Arc::new(delooping(&t).expect("builtin tables are monoids"))
}

/// `{e, s}` with `s;s = e`.
pub fn bz2() -> Arc<FinCategory> {
    monoid(&["e", "s"], &[&[0, 1], &[1, 0]])
}

/// `{1, a, z}` with `a;a = z` and `z` absorbing.
pub fn bm3() -> Arc<FinCategory> {
    monoid(&["1", "a", "z"], &[&[0, 1, 2], &[1, 2, 2], &[2, 2, 2]])
}

/// The cyclic group of order 3.
pub fn bz3() -> Arc<FinCategory> {
    monoid(&["0", "1", "2"], &[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]])
}

/// All four maps of a two-element set, composed diagrammatically.
pub fn bt2() -> Arc<FinCategory> {
    monoid(
        &["id", "sw", "c0", "c1"],
        &[&[0, 1, 2, 3], &[1, 0, 2, 3], &[2, 3, 2, 3], &[3, 2, 2, 3]],
    )
}

pub fn interval() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_fn(
            names(&["0", "1"]),
            vec![sig("1_0", 0, 0), sig("1_1", 1, 1), sig("i", 0, 1)],
            vec![Mor(0), Mor(1)],
            |f, g| if f.0 < 2 { g } else { f },
        )
        .unwrap(),
    )
}

pub fn indiscrete2() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_fn(
            names(&["a", "b"]),
            vec![sig("1_a", 0, 0), sig("ab", 0, 1), sig("ba", 1, 0), sig("1_b", 1, 1)],
            vec![Mor(0), Mor(3)],
            |f, g| {
                let (d, c) = (f.0 / 2, g.0 % 2);
                Mor(d * 2 + c)
            },
        )
        .unwrap(),
    )
}

/// A split idempotent: `q: A -> B`, `s: B -> A` with `s;q = 1_B` and
/// `q;s = e`.
pub fn split() -> Arc<FinCategory> {
    // 0 = 1_A, 1 = e, 2 = q, 3 = s, 4 = 1_B
    Arc::new(
        FinCategory::from_fn(
            names(&["A", "B"]),
            vec![sig("1_A", 0, 0), sig("e", 0, 0), sig("q", 0, 1), sig("s", 1, 0), sig("1_B", 1, 1)],
            vec![Mor(0), Mor(4)],
            |f, g| match (f.0, g.0) {
                (0, g) | (4, g) => Mor(g),
                (f, 0) | (f, 4) => Mor(f),
                (1, 1) => Mor(1),
                (1, 2) => Mor(2),
                (2, 3) => Mor(1),
                (3, 1) => Mor(3),
                (3, 2) => Mor(4),
                _ => unreachable!(),
            },
        )
        .unwrap(),
    )
}

/// `a <- c -> b`.
pub fn span() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_fn(
            names(&["c", "a", "b"]),
            vec![sig("1_c", 0, 0), sig("1_a", 1, 1), sig("1_b", 2, 2), sig("l", 0, 1), sig("r", 0, 2)],
            vec![Mor(0), Mor(1), Mor(2)],
            |f, g| if f.0 < 3 { g } else { f },
        )
        .unwrap(),
    )
}

/// A commuting square `0 -> 1 -> 3`, `0 -> 2 -> 3` with diagonal `d`.
pub fn square() -> Arc<FinCategory> {
    let morphisms = vec![
        sig("1_0", 0, 0),
        sig("1_1", 1, 1),
        sig("1_2", 2, 2),
        sig("1_3", 3, 3),
        sig("u", 0, 1),
        sig("v", 0, 2),
        sig("x", 1, 3),
        sig("y", 2, 3),
        sig("d", 0, 3),
    ];
    Arc::new(
        FinCategory::from_fn(names(&["0", "1", "2", "3"]), morphisms, (0..4).map(Mor).collect(), |f, g| {
            match (f.0, g.0) {
                (f, g) if f < 4 => Mor(g),
                (f, g) if g < 4 => Mor(f),
                _ => Mor(8),
            }
        })
        .unwrap(),
    )
}

/// `m: 0 -> 1` into an object with an involution `s` fixing it: `m;s = m`.
pub fn arrow_into_involution() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_fn(
            names(&["0", "1"]),
            vec![sig("1_0", 0, 0), sig("m", 0, 1), sig("1_1", 1, 1), sig("s", 1, 1)],
            vec![Mor(0), Mor(2)],
            |f, g| match (f.0, g.0) {
                (0, g) => Mor(g),
                (f, 2) => Mor(f),
                (2, g) => Mor(g),
                (1, 3) => Mor(1),
                (3, 3) => Mor(2),
                _ => unreachable!(),
            },
        )
        .unwrap(),
    )
}

pub const GOLDEN_SEED: u64 = 0;
pub const GOLDEN_PARAMS: GenParams = GenParams { objects: 2, max_hom: 2, attempts: 1000 };

/// Registers `j`, optionally `r`, the trivial monad on `j`, every other
/// `j`-monad up to `max_monads`, and the left adjoint of `r` when it exists.
fn rooted(mut inst: Instance, j: Functor, r: Option<Functor>, max_monads: usize) -> Instance {
    let budget = Budget::unlimited();
    inst = inst.with_functor("j", j.clone());
    let mut monads = enumerate_relative_monads(&j, &budget).expect("builtin roots are small");
    let trivial = trivial_relative_monad(&j);
    monads.retain(|m| *m != trivial);
    monads.truncate(max_monads.saturating_sub(1));
    inst = inst.with_monad("T", trivial);
    for (i, m) in monads.into_iter().enumerate() {
        let carrier = format!("t{i}");
        if inst.functors.values().all(|e| e.functor != m.t) {
            inst = inst.with_functor(&carrier, m.t.clone());
        }
        inst = inst.with_monad(&format!("T{i}"), m);
    }
    if let Some(r) = r {
        let adj = find_left_relative_adjoint(&j, &r, TieBreak::Least, &budget).expect("builtin search is small");
        inst = inst.with_functor("r", r);
        if let Some(adj) = adj {
            if inst.functors.values().all(|e| e.functor != adj.l) {
                inst = inst.with_functor("l", adj.l.clone());
            }
            inst = inst.with_adjunction("adj", adj);
        }
    }
    inst
}

fn over_identity(name: &str, note: &str, e: Arc<FinCategory>) -> Instance {
    let inst = Instance::new(name, note, Provenance::Builtin).with_category("E", &e);
    let id = Functor::identity(&e);
    rooted(inst, id.clone(), Some(id), 4)
}

fn pointed(name: &str, note: &str, e: Arc<FinCategory>, x: Obj, r: Functor) -> Instance {
    let t = Arc::new(FinCategory::terminal());
    let inst = Instance::new(name, note, Provenance::Builtin)
        .with_category("A", &t)
        .with_category("E", &e);
    let inst = if Arc::ptr_eq(r.dom(), &e) { inst } else { inst.with_category("C", r.dom()) };
    rooted(inst, Functor::constant(&t, &e, x), Some(r), 6)
}

fn empty_rooted(name: &str, note: &str, e: Arc<FinCategory>, r: Functor) -> Instance {
    let empty = Arc::new(FinCategory::empty());
    let inst = Instance::new(name, note, Provenance::Builtin)
        .with_category("A", &empty)
        .with_category("E", &e)
        .with_category("C", r.dom());
    rooted(inst, Functor::empty_into(&e), Some(r), 1)
}

/// The built-in instances, in a fixed order.
pub fn builtin_corpus() -> Vec<Instance> {
    let terminal = Arc::new(FinCategory::terminal());
    let generated = Arc::new(generate_category(GOLDEN_SEED, GOLDEN_PARAMS).expect("seed 0 yields a category"));
    let mut out = vec![
        over_identity("empty", "the empty category", Arc::new(FinCategory::empty())),
        over_identity("terminal", "the terminal category", terminal.clone()),
        over_identity("interval", "a single arrow 0 -> 1", interval()),
        over_identity("disc2", "two objects, no arrows", Arc::new(FinCategory::discrete(["a", "b"]))),
        over_identity("bz2", "the group of order two", bz2()),
        over_identity("bm3", "the monoid {1, a, z} with a;a = z and z absorbing", bm3()),
        over_identity("split", "a split idempotent; its splitting is an absolute colimit", split()),
        over_identity("span", "the span shape a <- c -> b", span()),
        over_identity("square", "a commuting square", square()),
        over_identity("generated-0", "first accepted sample for seed 0 with two objects and hom sizes at most 2", generated),
    ];
    let ind = indiscrete2();
    out.push(empty_rooted(
        "indisc2-empty-root",
        "empty root into an indiscrete category, which is dense; r picks an object",
        ind.clone(),
        Functor::constant(&terminal, &ind, Obj(0)),
    ));
    let d2 = Arc::new(FinCategory::discrete(["a", "b"]));
    out.push(empty_rooted(
        "disc2-empty-root",
        "empty root into a discrete category, which is not dense; r picks an object",
        d2.clone(),
        Functor::constant(&terminal, &d2, Obj(0)),
    ));
    let m = bz2();
    out.push(pointed(
        "point-bz2",
        "the point of the group of order two; the root is not dense",
        m.clone(),
        Obj(0),
        Functor::identity(&m),
    ));
    for (name, note, c) in [
        ("point-bm3", "the point of a three-element monoid", bm3()),
        ("point-bz3", "the point of the group of order three", bz3()),
        ("point-bt2", "the point of the monoid of all self-maps of a two-element set", bt2()),
    ] {
        out.push(pointed(name, note, c.clone(), Obj(0), Functor::identity(&c)));
    }
    let ai = arrow_into_involution();
    out.push(pointed(
        "arrow-involution",
        "rooted at the source of an arrow whose target carries an involution fixing it",
        ai.clone(),
        Obj(0),
        Functor::identity(&ai),
    ));
    out
}
