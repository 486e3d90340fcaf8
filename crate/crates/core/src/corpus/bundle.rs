use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::generate::GenParams;
use crate::error::{Error, Result};
use crate::fincat::{validate_category, CategoryDesc, CategoryViolation, FinCategory, Functor, FunctorDesc, validate_functor};
use crate::prof::{Distributor, DistributorDesc};
use crate::reladj::{AdjunctionDesc, RelativeAdjunction};
use crate::relmon::{MonadDesc, RelativeMonad};

pub const BUNDLE_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Builtin,
    Generated { seed: u64, params: GenParams },
    /// Loaded from a bundle whose manifest names no origin.
    File,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorEntry {
    pub dom: String,
    pub cod: String,
    pub functor: Functor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributorEntry {
    pub src: String,
    pub tgt: String,
    pub distributor: Distributor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadEntry {
    pub root: String,
    pub carrier: String,
    pub monad: RelativeMonad,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionEntry {
    pub root: String,
    pub left: String,
    pub right: String,
    pub adjunction: RelativeAdjunction,
}

/// A named bundle of validated components that refer to each other by name.
///
/// Functor roles used by the theorem suite: `j` is the root, `r` a candidate
/// right adjoint into `j`'s codomain, `jprime` a second root through which
/// `j` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub note: String,
    pub provenance: Provenance,
    pub categories: BTreeMap<String, Arc<FinCategory>>,
    pub functors: BTreeMap<String, FunctorEntry>,
    pub distributors: BTreeMap<String, DistributorEntry>,
    pub monads: BTreeMap<String, MonadEntry>,
    pub adjunctions: BTreeMap<String, AdjunctionEntry>,
}

fn dangling(location: &str, what: &str, name: &str) -> Error {
    Error::Validation { location: location.into(), message: format!("unknown {what} `{name}`") }
}

impl Instance {
    pub fn new(name: impl Into<String>, note: impl Into<String>, provenance: Provenance) -> Self {
        Self {
            name: name.into(),
            note: note.into(),
            provenance,
            categories: BTreeMap::new(),
            functors: BTreeMap::new(),
            distributors: BTreeMap::new(),
            monads: BTreeMap::new(),
            adjunctions: BTreeMap::new(),
        }
    }

    pub fn with_category(mut self, name: &str, c: &Arc<FinCategory>) -> Self {
        self.categories.insert(name.into(), c.clone());
        self
    }

    /// The functor's endpoints must already be registered categories.
    pub fn with_functor(mut self, name: &str, f: Functor) -> Self {
        let dom = self.category_name(f.dom()).expect("domain is registered");
        let cod = self.category_name(f.cod()).expect("codomain is registered");
        self.functors.insert(name.into(), FunctorEntry { dom, cod, functor: f });
        self
    }

    pub fn with_distributor(mut self, name: &str, p: Distributor) -> Self {
        let src = self.category_name(p.src()).expect("source is registered");
        let tgt = self.category_name(p.tgt()).expect("target is registered");
        self.distributors.insert(name.into(), DistributorEntry { src, tgt, distributor: p });
        self
    }

    pub fn with_monad(mut self, name: &str, m: RelativeMonad) -> Self {
        let root = self.functor_name(&m.j).expect("root is registered");
        let carrier = self.functor_name(&m.t).expect("carrier is registered");
        self.monads.insert(name.into(), MonadEntry { root, carrier, monad: m });
        self
    }

    pub fn with_adjunction(mut self, name: &str, a: RelativeAdjunction) -> Self {
        let root = self.functor_name(&a.j).expect("root is registered");
        let left = self.functor_name(&a.l).expect("left adjoint is registered");
        let right = self.functor_name(&a.r).expect("right adjoint is registered");
        self.adjunctions.insert(name.into(), AdjunctionEntry { root, left, right, adjunction: a });
        self
    }

    fn category_name(&self, c: &Arc<FinCategory>) -> Option<String> {
        self.categories
            .iter()
            .find(|(_, d)| Arc::ptr_eq(c, *d))
            .or_else(|| self.categories.iter().find(|(_, d)| ***d == **c))
            .map(|(n, _)| n.clone())
    }

    fn functor_name(&self, f: &Functor) -> Option<String> {
        self.functors.iter().find(|(_, e)| e.functor == *f).map(|(n, _)| n.clone())
    }

    pub fn functor(&self, name: &str) -> Option<&Functor> {
        self.functors.get(name).map(|e| &e.functor)
    }

    pub fn root(&self) -> Option<&Functor> {
        self.functor("j")
    }

    pub fn right(&self) -> Option<&Functor> {
        self.functor("r")
    }

    pub fn factor(&self) -> Option<&Functor> {
        self.functor("jprime")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FunctorRef {
    dom: String,
    cod: String,
    file: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct DistributorRef {
    src: String,
    tgt: String,
    file: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct MonadRef {
    root: String,
    carrier: String,
    file: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct AdjunctionRef {
    root: String,
    left: String,
    right: String,
    file: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    schema: u32,
    name: String,
    #[serde(default)]
    note: String,
    #[serde(default)]
    provenance: Option<Provenance>,
    #[serde(default)]
    categories: BTreeMap<String, String>,
    #[serde(default)]
    functors: BTreeMap<String, FunctorRef>,
    #[serde(default)]
    distributors: BTreeMap<String, DistributorRef>,
    #[serde(default)]
    monads: BTreeMap<String, MonadRef>,
    #[serde(default)]
    adjunctions: BTreeMap<String, AdjunctionRef>,
}

/// Canonical JSON: pretty-printed, maps in key order, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("descriptors serialize");
    s.push('\n');
    s
}

/// Reads and parses one JSON file, locating syntax errors by line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        location: format!("{}:{}:{}", path.display(), e.line(), e.column()),
        message: e.to_string(),
    })
}

/// Validates a category description; malformed composition keys are parse
/// errors, everything else a validation error.
pub fn load_category(desc: &CategoryDesc, location: &str) -> Result<FinCategory> {
    validate_category(desc).map_err(|e| {
        let v = e.violations();
        match v.iter().find(|v| matches!(v, CategoryViolation::MalformedKey { .. })) {
            Some(CategoryViolation::MalformedKey { key }) => Error::Parse {
                location: format!("{location}: composition key `{key}`"),
                message: "expected `f;g`".into(),
            },
            _ => Error::Validation { location: location.into(), message: e.to_string() },
        }
    })
}

fn revalidate(location: &str, e: Error) -> Error {
    match e {
        e @ (Error::Parse { .. } | Error::Validation { .. } | Error::Io(_)) => e,
        other => Error::Validation { location: location.into(), message: other.to_string() },
    }
}

/// One component's description, with where it was read from.
struct Located<T> {
    location: String,
    value: T,
}

/// Everything an instance is made of, before validation.
struct Parts {
    name: String,
    note: String,
    provenance: Provenance,
    location: String,
    categories: BTreeMap<String, Located<CategoryDesc>>,
    functors: BTreeMap<String, Located<InlineFunctor>>,
    distributors: BTreeMap<String, Located<InlineDistributor>>,
    monads: BTreeMap<String, Located<InlineMonad>>,
    adjunctions: BTreeMap<String, Located<InlineAdjunction>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct InlineFunctor {
    dom: String,
    cod: String,
    #[serde(flatten)]
    desc: FunctorDesc,
}

#[derive(Debug, Serialize, Deserialize)]
struct InlineDistributor {
    src: String,
    tgt: String,
    #[serde(flatten)]
    desc: DistributorDesc,
}

#[derive(Debug, Serialize, Deserialize)]
struct InlineMonad {
    root: String,
    carrier: String,
    #[serde(flatten)]
    desc: MonadDesc,
}

#[derive(Debug, Serialize, Deserialize)]
struct InlineAdjunction {
    root: String,
    left: String,
    right: String,
    #[serde(flatten)]
    desc: AdjunctionDesc,
}

/// A whole instance in one JSON file: the manifest with every component
/// written in place instead of referenced by path.
#[derive(Debug, Serialize, Deserialize)]
struct Document {
    #[serde(default = "one")]
    schema: u32,
    #[serde(default)]
    name: String,
    #[serde(default)]
    note: String,
    #[serde(default)]
    provenance: Option<Provenance>,
    #[serde(default)]
    categories: BTreeMap<String, CategoryDesc>,
    #[serde(default)]
    functors: BTreeMap<String, InlineFunctor>,
    #[serde(default)]
    distributors: BTreeMap<String, InlineDistributor>,
    #[serde(default)]
    monads: BTreeMap<String, InlineMonad>,
    #[serde(default)]
    adjunctions: BTreeMap<String, InlineAdjunction>,
}

fn one() -> u32 {
    BUNDLE_SCHEMA
}

fn check_schema(schema: u32, location: &str) -> Result<()> {
    if schema == BUNDLE_SCHEMA {
        Ok(())
    } else {
        Err(Error::Validation { location: location.into(), message: format!("unsupported schema {schema}") })
    }
}

fn assemble(parts: Parts) -> Result<Instance> {
    let mloc = parts.location.as_str();
    let mut inst = Instance::new(parts.name, parts.note, parts.provenance);
    for (name, c) in &parts.categories {
        inst.categories.insert(name.clone(), Arc::new(load_category(&c.value, &c.location)?));
    }
    let cat = |name: &str| inst.categories.get(name).cloned().ok_or_else(|| dangling(mloc, "category", name));
    let mut functors = BTreeMap::new();
    for (name, f) in &parts.functors {
        let (c, d) = (cat(&f.value.dom)?, cat(&f.value.cod)?);
        let functor = validate_functor(&f.value.desc, &c, &d).map_err(|e| revalidate(&f.location, e))?;
        let entry = FunctorEntry { dom: f.value.dom.clone(), cod: f.value.cod.clone(), functor };
        functors.insert(name.clone(), entry);
    }
    let mut distributors = BTreeMap::new();
    for (name, p) in &parts.distributors {
        let (x, y) = (cat(&p.value.src)?, cat(&p.value.tgt)?);
        let distributor = Distributor::from_desc(&p.value.desc, &x, &y).map_err(|e| revalidate(&p.location, e))?;
        let entry = DistributorEntry { src: p.value.src.clone(), tgt: p.value.tgt.clone(), distributor };
        distributors.insert(name.clone(), entry);
    }
    let fun = |name: &str| {
        functors.get(name).map(|e: &FunctorEntry| e.functor.clone()).ok_or_else(|| dangling(mloc, "functor", name))
    };
    let mut monads = BTreeMap::new();
    for (name, m) in &parts.monads {
        let (j, t) = (fun(&m.value.root)?, fun(&m.value.carrier)?);
        let monad = RelativeMonad::from_desc(&j, &t, &m.value.desc).map_err(|e| revalidate(&m.location, e))?;
        let entry = MonadEntry { root: m.value.root.clone(), carrier: m.value.carrier.clone(), monad };
        monads.insert(name.clone(), entry);
    }
    let mut adjunctions = BTreeMap::new();
    for (name, a) in &parts.adjunctions {
        let v = &a.value;
        let (j, l, r) = (fun(&v.root)?, fun(&v.left)?, fun(&v.right)?);
        let adjunction = RelativeAdjunction::from_desc(&j, &l, &r, &v.desc).map_err(|e| revalidate(&a.location, e))?;
        let entry = AdjunctionEntry { root: v.root.clone(), left: v.left.clone(), right: v.right.clone(), adjunction };
        adjunctions.insert(name.clone(), entry);
    }
    inst.functors = functors;
    inst.distributors = distributors;
    inst.monads = monads;
    inst.adjunctions = adjunctions;
    Ok(inst)
}

fn read_each<T: DeserializeOwned, R>(
    dir: &Path,
    refs: &BTreeMap<String, R>,
    file: impl Fn(&R) -> &str,
) -> Result<BTreeMap<String, Located<T>>> {
    refs.iter()
        .map(|(name, r)| {
            let path = dir.join(file(r));
            let value = read_json(&path)?;
            Ok((name.clone(), Located { location: path.display().to_string(), value }))
        })
        .collect()
}

/// Loads a bundle directory with a `manifest.json`.
pub fn load_instance(dir: &Path) -> Result<Instance> {
    let mpath = dir.join("manifest.json");
    let manifest: Manifest = read_json(&mpath)?;
    let location = mpath.display().to_string();
    check_schema(manifest.schema, &location)?;
    let categories = read_each(dir, &manifest.categories, |f| f.as_str())?;
    let functors = read_each::<FunctorDesc, _>(dir, &manifest.functors, |r| &r.file)?;
    let distributors = read_each::<DistributorDesc, _>(dir, &manifest.distributors, |r| &r.file)?;
    let monads = read_each::<MonadDesc, _>(dir, &manifest.monads, |r| &r.file)?;
    let adjunctions = read_each::<AdjunctionDesc, _>(dir, &manifest.adjunctions, |r| &r.file)?;
    assemble(Parts {
        name: manifest.name,
        note: manifest.note,
        provenance: manifest.provenance.unwrap_or(Provenance::File),
        location,
        categories,
        functors: functors
            .into_iter()
            .map(|(n, l)| {
                let r = &manifest.functors[&n];
                let value = InlineFunctor { dom: r.dom.clone(), cod: r.cod.clone(), desc: l.value };
                (n, Located { location: l.location, value })
            })
            .collect(),
        distributors: distributors
            .into_iter()
            .map(|(n, l)| {
                let r = &manifest.distributors[&n];
                let value = InlineDistributor { src: r.src.clone(), tgt: r.tgt.clone(), desc: l.value };
                (n, Located { location: l.location, value })
            })
            .collect(),
        monads: monads
            .into_iter()
            .map(|(n, l)| {
                let r = &manifest.monads[&n];
                let value = InlineMonad { root: r.root.clone(), carrier: r.carrier.clone(), desc: l.value };
                (n, Located { location: l.location, value })
            })
            .collect(),
        adjunctions: adjunctions
            .into_iter()
            .map(|(n, l)| {
                let r = &manifest.adjunctions[&n];
                let value = InlineAdjunction {
                    root: r.root.clone(),
                    left: r.left.clone(),
                    right: r.right.clone(),
                    desc: l.value,
                };
                (n, Located { location: l.location, value })
            })
            .collect(),
    })
}

fn locate<T>(file: &str, kind: &str, items: BTreeMap<String, T>) -> BTreeMap<String, Located<T>> {
    items
        .into_iter()
        .map(|(name, value)| {
            let location = format!("{file}: {kind}.{name}");
            (name, Located { location, value })
        })
        .collect()
}

/// Loads a single-file instance document.
pub fn load_document(path: &Path) -> Result<Instance> {
    let doc: Document = read_json(path)?;
    let file = path.display().to_string();
    check_schema(doc.schema, &file)?;
    let name = if doc.name.is_empty() {
        path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    } else {
        doc.name
    };
    assemble(Parts {
        name,
        note: doc.note,
        provenance: doc.provenance.unwrap_or(Provenance::File),
        location: file.clone(),
        categories: locate(&file, "categories", doc.categories),
        functors: locate(&file, "functors", doc.functors),
        distributors: locate(&file, "distributors", doc.distributors),
        monads: locate(&file, "monads", doc.monads),
        adjunctions: locate(&file, "adjunctions", doc.adjunctions),
    })
}

/// A bundle directory or a single-file document.
pub fn load_any(path: &Path) -> Result<Instance> {
    if path.is_dir() {
        load_instance(path)
    } else {
        load_document(path)
    }
}

/// The single-file form of an instance, as canonical JSON.
pub fn document_json(inst: &Instance) -> String {
    let doc = Document {
        schema: BUNDLE_SCHEMA,
        name: inst.name.clone(),
        note: inst.note.clone(),
        provenance: Some(inst.provenance.clone()),
        categories: inst.categories.iter().map(|(n, c)| (n.clone(), c.to_desc())).collect(),
        functors: inst
            .functors
            .iter()
            .map(|(n, e)| {
                let f = InlineFunctor { dom: e.dom.clone(), cod: e.cod.clone(), desc: e.functor.to_desc() };
                (n.clone(), f)
            })
            .collect(),
        distributors: inst
            .distributors
            .iter()
            .map(|(n, e)| {
                let p = InlineDistributor { src: e.src.clone(), tgt: e.tgt.clone(), desc: e.distributor.to_desc() };
                (n.clone(), p)
            })
            .collect(),
        monads: inst
            .monads
            .iter()
            .map(|(n, e)| {
                let m = InlineMonad { root: e.root.clone(), carrier: e.carrier.clone(), desc: e.monad.to_desc() };
                (n.clone(), m)
            })
            .collect(),
        adjunctions: inst
            .adjunctions
            .iter()
            .map(|(n, e)| {
                let a = InlineAdjunction {
                    root: e.root.clone(),
                    left: e.left.clone(),
                    right: e.right.clone(),
                    desc: e.adjunction.to_desc(),
                };
                (n.clone(), a)
            })
            .collect(),
    };
    to_canonical_json(&doc)
}

fn write(dir: &Path, file: &str, text: &str) -> Result<()> {
    let path = dir.join(file);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::Io(format!("{}: {e}", parent.display())))?;
    }
    fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes a bundle directory; output depends only on the instance.
pub fn save_instance(inst: &Instance, dir: &Path) -> Result<()> {
    let mut m = Manifest {
        schema: BUNDLE_SCHEMA,
        name: inst.name.clone(),
        note: inst.note.clone(),
        provenance: Some(inst.provenance.clone()),
        categories: BTreeMap::new(),
        functors: BTreeMap::new(),
        distributors: BTreeMap::new(),
        monads: BTreeMap::new(),
        adjunctions: BTreeMap::new(),
    };
    for (name, c) in &inst.categories {
        let file = format!("categories/{name}.json");
        write(dir, &file, &to_canonical_json(&c.to_desc()))?;
        m.categories.insert(name.clone(), file);
    }
    for (name, e) in &inst.functors {
        let file = format!("functors/{name}.json");
        write(dir, &file, &to_canonical_json(&e.functor.to_desc()))?;
        m.functors.insert(name.clone(), FunctorRef { dom: e.dom.clone(), cod: e.cod.clone(), file });
    }
    for (name, e) in &inst.distributors {
        let file = format!("distributors/{name}.json");
        write(dir, &file, &to_canonical_json(&e.distributor.to_desc()))?;
        m.distributors.insert(name.clone(), DistributorRef { src: e.src.clone(), tgt: e.tgt.clone(), file });
    }
    for (name, e) in &inst.monads {
        let file = format!("monads/{name}.json");
        write(dir, &file, &to_canonical_json(&e.monad.to_desc()))?;
        m.monads.insert(name.clone(), MonadRef { root: e.root.clone(), carrier: e.carrier.clone(), file });
    }
    for (name, e) in &inst.adjunctions {
        let file = format!("adjunctions/{name}.json");
        write(dir, &file, &to_canonical_json(&e.adjunction.to_desc()))?;
        m.adjunctions.insert(
            name.clone(),
            AdjunctionRef { root: e.root.clone(), left: e.left.clone(), right: e.right.clone(), file },
        );
    }
    write(dir, "manifest.json", &to_canonical_json(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin_corpus;

    fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
        let mut out = BTreeMap::new();
        let mut stack = vec![dir.to_path_buf()];
        while let Some(d) = stack.pop() {
            for entry in fs::read_dir(&d).unwrap() {
                let p = entry.unwrap().path();
                if p.is_dir() {
                    stack.push(p);
                } else {
                    let rel = p.strip_prefix(dir).unwrap().display().to_string();
                    out.insert(rel, fs::read(&p).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn builtins_round_trip_byte_stably() {
        for inst in builtin_corpus() {
            let a = tempfile::tempdir().unwrap();
            let b = tempfile::tempdir().unwrap();
            save_instance(&inst, a.path()).unwrap();
            let back = load_instance(a.path()).unwrap();
            assert_eq!(back, inst, "{}", inst.name);
            save_instance(&back, b.path()).unwrap();
            assert_eq!(files(a.path()), files(b.path()), "{}", inst.name);
        }
    }

    fn saved(name: &str) -> tempfile::TempDir {
        let inst = builtin_corpus().into_iter().find(|i| i.name == name).unwrap();
        let dir = tempfile::tempdir().unwrap();
        save_instance(&inst, dir.path()).unwrap();
        dir
    }

    fn edit(path: &Path, from: &str, to: &str) {
        let text = fs::read_to_string(path).unwrap();
        assert!(text.contains(from), "{from} not in {}", path.display());
        fs::write(path, text.replacen(from, to, 1)).unwrap();
    }

    #[test]
    fn malformed_composition_key_is_a_parse_error() {
        let dir = saved("interval");
        edit(&dir.path().join("categories/E.json"), "\"i;1_1\"", "\"i1_1\"");
        match load_instance(dir.path()) {
            Err(Error::Parse { location, .. }) => {
                assert!(location.contains("categories/E.json") && location.contains("i1_1"), "{location}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_json_is_located() {
        let dir = saved("interval");
        fs::write(dir.path().join("functors/j.json"), "{\n  \"on_objects\": [\n").unwrap();
        match load_instance(dir.path()) {
            Err(Error::Parse { location, .. }) => assert!(location.ends_with("j.json:3:0") || location.contains("j.json:"), "{location}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dangling_references_are_validation_errors() {
        let dir = saved("interval");
        edit(&dir.path().join("categories/E.json"), "\"dom\": \"0\"", "\"dom\": \"7\"");
        assert!(matches!(load_instance(dir.path()), Err(Error::Validation { .. })));

        let dir = saved("point-bz2");
        edit(&dir.path().join("manifest.json"), "\"cod\": \"E\"", "\"cod\": \"Z\"");
        match load_instance(dir.path()) {
            Err(Error::Validation { message, .. }) => assert!(message.contains("`Z`")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unlawful_monad_is_a_validation_error() {
        let dir = saved("point-bz2");
        let path = dir.path().join("monads/T0.json");
        let text = fs::read_to_string(&path).unwrap();
        let mut desc: MonadDesc = serde_json::from_str(&text).unwrap();
        let key = desc.ext.keys().next().unwrap().clone();
        let v = desc.ext.get_mut(&key).unwrap();
        *v = if v == "e" { "s".into() } else { "e".into() };
        fs::write(&path, to_canonical_json(&desc)).unwrap();
        match load_instance(dir.path()) {
            Err(Error::Validation { location, message }) => {
                assert!(location.ends_with("T0.json"), "{location}");
                assert!(message.contains("law"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn documents_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for inst in builtin_corpus() {
            let path = dir.path().join(format!("{}.json", inst.name));
            let text = document_json(&inst);
            fs::write(&path, &text).unwrap();
            let back = load_any(&path).unwrap();
            assert_eq!(back, inst);
            assert_eq!(document_json(&back), text);
        }
    }

    #[test]
    fn document_errors_are_located() {
        let dir = tempfile::tempdir().unwrap();
        let inst = builtin_corpus().into_iter().find(|i| i.name == "point-bz2").unwrap();
        let path = dir.path().join("doc.json");
        fs::write(&path, document_json(&inst).replacen("\"e;s\"", "\"es\"", 1)).unwrap();
        match load_any(&path) {
            Err(Error::Parse { location, .. }) => assert!(location.contains("categories.E"), "{location}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_bundle_is_io() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_instance(&dir.path().join("nope")), Err(Error::Io(_))));
    }
}
