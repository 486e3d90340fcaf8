//! Small categories shared by unit tests.

use std::sync::Arc;

use crate::fincat::{FinCategory, Mor, MorphismSig, Obj};

fn sig(name: &str, dom: usize, cod: usize) -> MorphismSig {
    MorphismSig { name: name.into(), dom: Obj(dom), cod: Obj(cod) }
}

pub fn terminal() -> Arc<FinCategory> {
    Arc::new(FinCategory::terminal())
}

pub fn disc2() -> Arc<FinCategory> {
    Arc::new(FinCategory::discrete(["a", "b"]))
}

/// `{e, s}` with `s;s = e`.
pub fn bz2() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_fn(
            vec!["*".into()],
            vec![sig("e", 0, 0), sig("s", 0, 0)],
            vec![Mor(0)],
            |a, b| Mor(a.0 ^ b.0),
        )
        .unwrap(),
    )
}

/// `0 -> 1`.
pub fn interval() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_fn(
            vec!["0".into(), "1".into()],
            vec![sig("1_0", 0, 0), sig("1_1", 1, 1), sig("i", 0, 1)],
            vec![Mor(0), Mor(1)],
            |f, g| if f.0 < 2 { g } else { f },
        )
        .unwrap(),
    )
}

pub fn indiscrete(n: usize) -> Arc<FinCategory> {
    let objects: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
    let morphisms = (0..n * n)
        .map(|k| sig(&format!("m{}{}", k / n, k % n), k / n, k % n))
        .collect();
    Arc::new(
        FinCategory::from_fn(
            objects,
            morphisms,
            (0..n).map(|i| Mor(i * n + i)).collect(),
            |f, g| Mor((f.0 / n) * n + g.0 % n),
        )
        .unwrap(),
    )
}

/// `a ⇉ b` via `f`, `g`.
pub fn parallel() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_fn(
            vec!["a".into(), "b".into()],
            vec![sig("1a", 0, 0), sig("1b", 1, 1), sig("f", 0, 1), sig("g", 0, 1)],
            vec![Mor(0), Mor(1)],
            |x, y| if x.0 < 2 { y } else { x },
        )
        .unwrap(),
    )
}

/// `m: 0 -> 1` with an involution `s` on `1` such that `m;s = m`.
pub fn arrow_into_involution() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_fn(
            vec!["0".into(), "1".into()],
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
