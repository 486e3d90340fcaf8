use serde::Serialize;

use super::adjunction::RelativeAdjunction;
use super::right::{derive_rho, right_morphism_case, RightMorphismCase};
use crate::budget::Budget;
use crate::colim::is_dense;
use crate::error::{Error, Result};
use crate::fincat::Functor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Paste,
    Unpaste,
}

/// Both sides of a pasting: `inner` is `ℓ ⊣_{ℓ'} r`, `outer` is
/// `ℓ ⊣_j r;r'`, and `round_trip` records that going back recovers the
/// transposition we started from.
#[derive(Clone, Debug)]
pub struct PastingReport {
    pub direction: Direction,
    pub inner: RelativeAdjunction,
    pub outer: RelativeAdjunction,
    pub round_trip: bool,
    /// When `ℓ;r = ℓ'` and `j` is dense: the derived `ρ: r;r' => r;r'` of the
    /// right-morphism `(r, ρ)` from the outer adjunction to `ℓ' ⊣_j r'`, with
    /// both sides of its left-extension check.
    pub right_morphism: Option<RightMorphismCase>,
}

fn engine_bug(what: &str, e: Error) -> Error {
    match e {
        Error::Adjunction(v) => Error::TheoremViolation(format!("{what}: {}", v.join("; "))),
        other => other,
    }
}

/// Pastes `ℓ ⊣_{ℓ'} r` onto `ℓ' ⊣_j r'`, giving `ℓ ⊣_j r;r'` with
/// `♯(k) = ♯'(♯_inner k)`.
pub fn paste(
    inner: &RelativeAdjunction,
    prime: &RelativeAdjunction,
    budget: &Budget,
) -> Result<PastingReport> {
    if inner.j != prime.l {
        return Err(Error::EndpointMismatch(
            "the inner root must be the left adjoint being pasted onto".into(),
        ));
    }
    let rr = inner.r.then(&prime.r)?;
    let outer = RelativeAdjunction::from_fn(&prime.j, &inner.l, &rr, |a, k| {
        prime.sharp(a, inner.sharp(a, k))
    })
    .map_err(|e| engine_bug("pasted adjunction fails validation", e))?;
    let back = unpaste_raw(&outer, prime, &inner.r)?;
    Ok(PastingReport {
        direction: Direction::Paste,
        round_trip: back.same_tables(inner),
        right_morphism: right_morphism(&outer, prime, &inner.r, budget)?,
        inner: inner.clone(),
        outer,
    })
}

fn right_morphism(
    outer: &RelativeAdjunction,
    prime: &RelativeAdjunction,
    r: &Functor,
    budget: &Budget,
) -> Result<Option<RightMorphismCase>> {
    if outer.l.then(r)? != prime.l || !is_dense(&outer.j, budget)?.dense {
        return Ok(None);
    }
    let Some(rho) = derive_rho(outer, prime, r)? else {
        return Err(Error::TheoremViolation(
            "no 2-cell is compatible with the transpositions".into(),
        ));
    };
    right_morphism_case(outer, r, &prime.r, &rho, budget).map(Some)
}

fn unpaste_raw(
    outer: &RelativeAdjunction,
    prime: &RelativeAdjunction,
    r: &Functor,
) -> Result<RelativeAdjunction> {
    let rr = r.then(&prime.r)?;
    if rr != outer.r || outer.j != prime.j {
        return Err(Error::EndpointMismatch(
            "the outer adjunction must have root j and right adjoint r;r'".into(),
        ));
    }
    RelativeAdjunction::from_fn(&prime.l, &outer.l, r, |a, k| {
        let c = outer.l.cod().cod(k);
        prime.flat(a, r.ob(c), outer.sharp(a, k))
    })
    .map_err(|e| engine_bug("unpasted adjunction fails validation", e))
}

/// Recovers `ℓ ⊣_{ℓ'} r` from `ℓ ⊣_j r;r'` and `ℓ' ⊣_j r'` via `♭' ∘ ♯`.
pub fn unpaste(
    outer: &RelativeAdjunction,
    prime: &RelativeAdjunction,
    r: &Functor,
    budget: &Budget,
) -> Result<PastingReport> {
    let inner = unpaste_raw(outer, prime, r)?;
    let again = paste(&inner, prime, budget)?;
    Ok(PastingReport {
        direction: Direction::Unpaste,
        round_trip: again.outer.same_tables(outer),
        right_morphism: again.right_morphism,
        inner,
        outer: outer.clone(),
    })
}
