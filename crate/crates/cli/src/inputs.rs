//! Command-line references to components: `PATH[#NAME]`, where `PATH` is a
//! bundle directory or a single-file document.

use std::collections::BTreeMap;
use std::path::Path;

use relmon_core::corpus::{load_any, Instance};
use relmon_core::reladj::RelativeAdjunction;
use relmon_core::relmon::RelativeMonad;
use relmon_core::{Error, Functor};

fn split(arg: &str) -> (&str, Option<&str>) {
    match arg.rsplit_once('#') {
        Some((path, name)) if !name.is_empty() => (path, Some(name)),
        _ => (arg, None),
    }
}

/// The named entry, else the role's default name, else the only entry.
fn pick<'a, T>(items: &'a BTreeMap<String, T>, name: Option<&str>, default: &str, kind: &str, path: &str) -> Result<&'a T, Error> {
    let bad = |message: String| Error::Parse { location: path.to_string(), message };
    if let Some(n) = name {
        return items.get(n).ok_or_else(|| bad(format!("no {kind} named `{n}`")));
    }
    if let Some(v) = items.get(default) {
        return Ok(v);
    }
    match items.len() {
        1 => Ok(items.values().next().unwrap()),
        0 => Err(bad(format!("no {kind} in this instance"))),
        _ => Err(bad(format!(
            "several {kind}s; name one with `#`: {}",
            items.keys().cloned().collect::<Vec<_>>().join(", ")
        ))),
    }
}

pub fn instance(arg: &str) -> Result<(Instance, Option<String>), Error> {
    let (path, name) = split(arg);
    Ok((load_any(Path::new(path))?, name.map(str::to_string)))
}

pub fn functor(arg: &str, default: &str) -> Result<Functor, Error> {
    let (inst, name) = instance(arg)?;
    let (path, _) = split(arg);
    Ok(pick(&inst.functors, name.as_deref(), default, "functor", path)?.functor.clone())
}

pub fn monad(arg: &str) -> Result<RelativeMonad, Error> {
    let (inst, name) = instance(arg)?;
    let (path, _) = split(arg);
    Ok(pick(&inst.monads, name.as_deref(), "T", "monad", path)?.monad.clone())
}

pub fn adjunction(arg: &str) -> Result<RelativeAdjunction, Error> {
    let (inst, name) = instance(arg)?;
    let (path, _) = split(arg);
    Ok(pick(&inst.adjunctions, name.as_deref(), "adj", "adjunction", path)?.adjunction.clone())
}
