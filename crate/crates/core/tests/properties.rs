//! Invariants over randomly generated small categories, functors and monads.

use std::sync::Arc;

use proptest::prelude::*;

use relmon_core::alg::build_algebra_category;
use relmon_core::colim::{is_dense, Mode};
use relmon_core::corpus::{
    delooping, generate_category, load_instance, save_instance, GenParams, Instance, MonoidTable, Provenance,
    ShapeBounds,
};
use relmon_core::fincat::{classify_functor, enumerate_functors, opposite, validate_category};
use relmon_core::monadicity::{audit_with, decide_monadicity, dualize, AuditOptions, ShapeFamily};
use relmon_core::reladj::{find_left_relative_adjoint, RelativeAdjunction, TieBreak};
use relmon_core::relmon::{enumerate_relative_monads, monad_from_adjunction, RelativeMonad};
use relmon_core::{Budget, Error, FinCategory, Functor, Mor, Obj};

fn category(seed: u64, objects: usize, max_hom: usize) -> Option<Arc<FinCategory>> {
    generate_category(seed, GenParams { objects, max_hom, attempts: 200 }).map(Arc::new)
}

/// A generated category with at least one object.
fn small_category() -> impl Strategy<Value = Arc<FinCategory>> {
    (any::<u64>(), 1usize..=2, 1usize..=2).prop_filter_map("generation gave up", |(s, k, h)| category(s, k, h))
}

/// A root `j` (identity or a point) on a small category.
fn root() -> impl Strategy<Value = Functor> {
    (small_category(), any::<bool>(), any::<prop::sample::Index>()).prop_map(|(e, point, i)| {
        if point {
            let t = Arc::new(FinCategory::terminal());
            Functor::constant(&t, &e, Obj(i.index(e.num_objects())))
        } else {
            Functor::identity(&e)
        }
    })
}

/// A functor `r: C -> E` between generated categories.
fn functor_into(e: &Arc<FinCategory>, seed: u64, pick: prop::sample::Index) -> Option<Functor> {
    let c = category(seed, 1 + (seed % 2) as usize, 2)?;
    let all = enumerate_functors(&c, e, &Budget::unlimited()).ok()?;
    (!all.is_empty()).then(|| all[pick.index(all.len())].clone())
}

/// Either a random functor into `cod j`, or the forgetful functor of a
/// random monad on `j` (monadic by construction).
fn right_of(j: &Functor, seed: u64, pick: prop::sample::Index, forgetful: bool) -> Option<Functor> {
    if !forgetful {
        return functor_into(j.cod(), seed, pick);
    }
    let b = Budget::unlimited();
    let monads = enumerate_relative_monads(j, &b).ok()?;
    let m = monads.get(pick.index(monads.len().max(1)))?;
    Some(build_algebra_category(m, &b).ok()?.u)
}

/// Associativity and unit laws checked directly on the composition table.
fn lawful(c: &FinCategory) -> bool {
    let mors: Vec<Mor> = c.morphism_ids().collect();
    let comp = |f: Mor, g: Mor| c.compose(f, g);
    for &f in &mors {
        if comp(c.id(c.dom(f)), f) != Some(f) || comp(f, c.id(c.cod(f))) != Some(f) {
            return false;
        }
        for &g in &mors {
            let Some(fg) = comp(f, g) else { continue };
            for &h in &mors {
                if let Some(gh) = comp(g, h) {
                    if comp(fg, h) != comp(f, gh) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Brute-force monoid check on a multiplication table.
fn is_monoid(mul: &[Vec<usize>]) -> bool {
    let n = mul.len();
    if mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
        return false;
    }
    let unit = (0..n).any(|e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x));
    let assoc = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| mul[mul[x][y]][z] == mul[x][mul[y][z]])));
    unit && assoc
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn generated_categories_are_lawful_and_round_trip(c in small_category()) {
        prop_assert!(lawful(&c));
        let back = validate_category(&c.to_desc()).unwrap();
        prop_assert_eq!(&back, &*c);
        prop_assert_eq!(&opposite(&opposite(&c)), &*c);
        prop_assert!(lawful(&opposite(&c)));
    }

    #[test]
    fn delooping_accepts_exactly_the_monoids(n in 1usize..=3, cells in prop::collection::vec(0usize..3, 9)) {
        let mul: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| cells[i * 3 + j] % n).collect()).collect();
        let table = MonoidTable { elements: (0..n).map(|i| format!("m{i}")).collect(), mul: mul.clone() };
        match delooping(&table) {
            Ok(c) => {
                prop_assert!(is_monoid(&mul));
                prop_assert!(lawful(&c));
            }
            Err(Error::NotAMonoid(_)) => prop_assert!(!is_monoid(&mul)),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn identity_roots_are_dense(c in small_category()) {
        prop_assert!(is_dense(&Functor::identity(&c), &Budget::unlimited()).unwrap().dense);
    }

    #[test]
    fn monads_round_trip_and_are_recovered_from_their_algebras(j in root()) {
        let b = Budget::unlimited();
        for m in enumerate_relative_monads(&j, &b).unwrap().into_iter().take(4) {
            let again = RelativeMonad::from_desc(&m.j, &m.t, &m.to_desc()).unwrap();
            prop_assert_eq!(&again, &m);
            let alg = build_algebra_category(&m, &b).unwrap();
            let induced = monad_from_adjunction(&alg.resolution().unwrap()).unwrap();
            prop_assert_eq!(&induced, &m);
            prop_assert!(classify_functor(&alg.u).conservative);
        }
    }

    #[test]
    fn adjunctions_round_trip_and_induce_lawful_monads(
        j in root(), seed in any::<u64>(), pick in any::<prop::sample::Index>(), greatest in any::<bool>(),
        forgetful in any::<bool>(),
    ) {
        let Some(r) = right_of(&j, seed, pick, forgetful) else { return Ok(()) };
        let tie = if greatest { TieBreak::Greatest } else { TieBreak::Least };
        if let Some(adj) = find_left_relative_adjoint(&j, &r, tie, &Budget::unlimited()).unwrap() {
            let again = RelativeAdjunction::from_desc(&adj.j, &adj.l, &adj.r, &adj.to_desc()).unwrap();
            prop_assert_eq!(&again, &adj);
            prop_assert!(monad_from_adjunction(&adj).is_ok());
        }
    }

    #[test]
    fn monadic_verdicts_have_no_audited_failures(
        j in root(), seed in any::<u64>(), pick in any::<prop::sample::Index>(), strict in any::<bool>(),
        forgetful in any::<bool>(),
    ) {
        let Some(r) = right_of(&j, seed, pick, forgetful) else { return Ok(()) };
        let b = Budget::unlimited();
        let mode = if strict { Mode::Strict } else { Mode::Nonstrict };
        let family = ShapeFamily::conical(ShapeBounds { max_objects: 2, max_morphisms: 3 }, 1, &b).unwrap();
        let decided = decide_monadicity(&j, &r, mode, false, &b).unwrap();
        let opts = AuditOptions { mode, limits: true, ..AuditOptions::default() };
        let audit = audit_with(&j, &r, &decided, &family, opts, &b).unwrap();
        prop_assert!(audit.passed(), "{:?}", audit.discrepancies);
        if decided.verdict.is_monadic() {
            prop_assert_eq!(audit.failure_count(), 0);
        }
        // a recorded failure reproduces when checked again
        prop_assert!(audit.failures.iter().all(|f| f.reverified));
    }

    #[test]
    fn comonadicity_of_opposites_is_monadicity(
        j in root(), seed in any::<u64>(), pick in any::<prop::sample::Index>(), strict in any::<bool>(),
        forgetful in any::<bool>(),
    ) {
        let Some(r) = right_of(&j, seed, pick, forgetful) else { return Ok(()) };
        let b = Budget::unlimited();
        let mode = if strict { Mode::Strict } else { Mode::Nonstrict };
        let (jo, ro) = dualize(&j, &r);
        let a = decide_monadicity(&j, &r, mode, false, &b).unwrap();
        let d = decide_monadicity(&jo, &ro, mode, true, &b).unwrap();
        prop_assert_eq!(a.verdict, d.verdict);
        prop_assert_eq!(a.adjoint, d.adjoint);
    }

    #[test]
    fn empty_roots_see_only_invertibility(
        e in small_category(), seed in any::<u64>(), pick in any::<prop::sample::Index>()
    ) {
        let Some(r) = functor_into(&e, seed, pick) else { return Ok(()) };
        let j = Functor::empty_into(&e);
        let cls = classify_functor(&r);
        let b = Budget::unlimited();
        prop_assert_eq!(decide_monadicity(&j, &r, Mode::Strict, false, &b).unwrap().verdict.is_monadic(), cls.is_iso);
        prop_assert_eq!(
            decide_monadicity(&j, &r, Mode::Nonstrict, false, &b).unwrap().verdict.is_monadic(),
            cls.is_equivalence
        );
    }

    #[test]
    fn budgets_either_suffice_or_fail_cleanly(j in root(), limit in 0u64..400) {
        let full = enumerate_relative_monads(&j, &Budget::unlimited()).unwrap();
        match enumerate_relative_monads(&j, &Budget::new(limit)) {
            Ok(found) => prop_assert_eq!(found, full),
            Err(e) => prop_assert_eq!(e, Error::BudgetExceeded { limit }),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn bundles_round_trip(j in root()) {
        let b = Budget::unlimited();
        let mut inst = Instance::new("prop", "", Provenance::File)
            .with_category("A", j.dom())
            .with_category("E", j.cod())
            .with_functor("j", j.clone());
        for (i, m) in enumerate_relative_monads(&j, &b).unwrap().into_iter().take(3).enumerate() {
            if !inst.functors.values().any(|e| e.functor == m.t) {
                inst = inst.with_functor(&format!("t{i}"), m.t.clone());
            }
            inst = inst.with_monad(&format!("T{i}"), m);
        }
        let dir = tempfile::tempdir().unwrap();
        save_instance(&inst, dir.path()).unwrap();
        prop_assert_eq!(load_instance(dir.path()).unwrap(), inst);
    }
}
