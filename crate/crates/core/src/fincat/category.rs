use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an object in a [`FinCategory`], in file order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Obj(pub usize);

/// Index of a morphism in a [`FinCategory`], in file order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mor(pub usize);

impl Obj {
    #[inline]
    pub fn idx(self) -> usize {
        self.0
    }
}

impl Mor {
    #[inline]
    pub fn idx(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismSig {
    pub name: String,
    pub dom: Obj,
    pub cod: Obj,
}

/// Serialized form of a category: the JSON document read from and written to disk.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDesc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDesc>,
    pub identities: BTreeMap<String, String>,
    /// Keys are `"f;g"`, meaning f then g.
    pub composition: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDesc {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// A single failed law, located by the offending names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum CategoryViolation {
    DuplicateName { name: String },
    UnknownObject { name: String, context: String },
    UnknownMorphism { name: String, context: String },
    MalformedKey { key: String },
    MissingIdentity { object: String },
    /// A composite is missing, lands in the wrong hom-set, or is given for a non-composable pair.
    BadComposite { f: String, g: String, reason: String },
    /// `id;f != f` or `f;id != f`.
    UnitLaw { identity: String, f: String },
    NonAssociative { f: String, g: String, h: String },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateName { name } => write!(f, "duplicate name `{name}`"),
            Self::UnknownObject { name, context } => {
                write!(f, "unknown object `{name}` in {context}")
            }
            Self::UnknownMorphism { name, context } => {
                write!(f, "unknown morphism `{name}` in {context}")
            }
            Self::MalformedKey { key } => write!(f, "malformed composition key `{key}`"),
            Self::MissingIdentity { object } => write!(f, "object `{object}` has no identity"),
            Self::BadComposite { f: a, g, reason } => write!(f, "composite {a};{g}: {reason}"),
            Self::UnitLaw { identity, f: m } => {
                write!(f, "identity `{identity}` is not a unit for `{m}`")
            }
            Self::NonAssociative { f: a, g, h } => {
                write!(f, "({a};{g});{h} != {a};({g};{h})")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("invalid category: {} violation(s), first: {}", .0.len(), .0[0])]
    Invalid(Vec<CategoryViolation>),
}

impl CategoryError {
    pub fn violations(&self) -> &[CategoryViolation] {
        match self {
            Self::Invalid(v) => v,
        }
    }
}

/// A validated finite category with explicit composition table.
///
/// Composition is diagrammatic: `compose(f, g)` is "f then g" and requires
/// `cod f == dom g`.
#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismSig>,
    identities: Vec<Mor>,
    composition: Vec<Option<Mor>>,
    homs: Vec<Vec<Mor>>,
    hom_pos: Vec<usize>,
    obj_index: HashMap<String, Obj>,
    mor_index: HashMap<String, Mor>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.composition == other.composition
    }
}

impl Eq for FinCategory {}

impl FinCategory {
    /// Validates raw tables, collecting every violation.
    pub fn from_desc(desc: &CategoryDesc) -> Result<Self, CategoryError> {
        validate_category(desc)
    }

    /// Builds a category from index-level tables, then validates all laws.
    ///
    /// `compose` is called for every composable pair.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<MorphismSig>,
        identities: Vec<Mor>,
        mut compose: impl FnMut(Mor, Mor) -> Mor,
    ) -> Result<Self, CategoryError> {
        let m = morphisms.len();
        let mut composition = vec![None; m * m];
        for f in 0..m {
            for g in 0..m {
                if morphisms[f].cod == morphisms[g].dom {
                    composition[f * m + g] = Some(compose(Mor(f), Mor(g)));
                }
            }
        }
        let cat = Self::assemble(objects, morphisms, identities, composition);
        let violations = cat.law_violations();
        if violations.is_empty() {
            Ok(cat)
        } else {
            Err(CategoryError::Invalid(violations))
        }
    }

    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<MorphismSig>,
        identities: Vec<Mor>,
        composition: Vec<Option<Mor>>,
    ) -> Self {
        let n = objects.len();
        let mut homs = vec![Vec::new(); n * n];
        let mut hom_pos = vec![0; morphisms.len()];
        for (i, sig) in morphisms.iter().enumerate() {
            let hom = &mut homs[sig.dom.0 * n + sig.cod.0];
            hom_pos[i] = hom.len();
            hom.push(Mor(i));
        }
        let obj_index = objects
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Obj(i)))
            .collect();
        let mor_index = morphisms
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.clone(), Mor(i)))
            .collect();
        Self {
            objects,
            morphisms,
            identities,
            composition,
            homs,
            hom_pos,
            obj_index,
            mor_index,
        }
    }

    /// Unit and associativity violations, assuming well-typed tables.
    fn law_violations(&self) -> Vec<CategoryViolation> {
        let mut out = Vec::new();
        for f in self.morphism_ids() {
            let (d, c) = (self.dom(f), self.cod(f));
            for (id, lhs) in [
                (self.id(d), self.compose(self.id(d), f)),
                (self.id(c), self.compose(f, self.id(c))),
            ] {
                if lhs != Some(f) {
                    out.push(CategoryViolation::UnitLaw {
                        identity: self.name(id).to_string(),
                        f: self.name(f).to_string(),
                    });
                }
            }
        }
        for f in self.morphism_ids() {
            for &g in self.out_of(self.cod(f)).iter() {
                let fg = self.then(f, g);
                for &h in self.out_of(self.cod(g)).iter() {
                    if self.then(fg, h) != self.then(f, self.then(g, h)) {
                        out.push(CategoryViolation::NonAssociative {
                            f: self.name(f).to_string(),
                            g: self.name(g).to_string(),
                            h: self.name(h).to_string(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn empty() -> Self {
        Self::assemble(Vec::new(), Vec::new(), Vec::new(), Vec::new())
    }

    /// The one-object, one-morphism category.
    pub fn terminal() -> Self {
        Self::discrete(["*"])
    }

    pub fn discrete<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let objects: Vec<String> = names.into_iter().map(Into::into).collect();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, o)| MorphismSig {
                name: format!("id_{o}"),
                dom: Obj(i),
                cod: Obj(i),
            })
            .collect::<Vec<_>>();
        let identities = (0..objects.len()).map(Mor).collect::<Vec<_>>();
        let n = objects.len();
        let mut composition = vec![None; n * n];
        for i in 0..n {
            composition[i * n + i] = Some(Mor(i));
        }
        Self::assemble(objects, morphisms, identities, composition)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = Obj> + Clone {
        (0..self.objects.len()).map(Obj)
    }

    pub fn morphism_ids(&self) -> impl ExactSizeIterator<Item = Mor> + Clone {
        (0..self.morphisms.len()).map(Mor)
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: Obj) -> &str {
        &self.objects[x.0]
    }

    pub fn morphism(&self, f: Mor) -> &MorphismSig {
        &self.morphisms[f.0]
    }

    pub fn name(&self, f: Mor) -> &str {
        &self.morphisms[f.0].name
    }

    #[inline]
    pub fn dom(&self, f: Mor) -> Obj {
        self.morphisms[f.0].dom
    }

    #[inline]
    pub fn cod(&self, f: Mor) -> Obj {
        self.morphisms[f.0].cod
    }

    #[inline]
    pub fn id(&self, x: Obj) -> Mor {
        self.identities[x.0]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identities[self.dom(f).0] == f
    }

    pub fn obj(&self, name: &str) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn mor(&self, name: &str) -> Option<Mor> {
        self.mor_index.get(name).copied()
    }

    /// `f;g` when composable.
    #[inline]
    pub fn compose(&self, f: Mor, g: Mor) -> Option<Mor> {
        self.composition[f.0 * self.morphisms.len() + g.0]
    }

    /// `f;g`, panicking if the pair is not composable.
    #[inline]
    pub fn then(&self, f: Mor, g: Mor) -> Mor {
        self.compose(f, g).unwrap_or_else(|| {
            panic!(
                "morphisms `{}` and `{}` are not composable",
                self.name(f),
                self.name(g)
            )
        })
    }

    #[inline]
    pub fn hom(&self, x: Obj, y: Obj) -> &[Mor] {
        &self.homs[x.0 * self.objects.len() + y.0]
    }

    /// Position of `f` inside its hom-set `hom(dom f, cod f)`.
    #[inline]
    pub fn hom_pos(&self, f: Mor) -> usize {
        self.hom_pos[f.0]
    }

    /// All morphisms with domain `x`, in canonical order.
    pub fn out_of(&self, x: Obj) -> Vec<Mor> {
        self.morphism_ids().filter(|&f| self.dom(f) == x).collect()
    }

    /// All morphisms with codomain `y`, in canonical order.
    pub fn into_obj(&self, y: Obj) -> Vec<Mor> {
        self.morphism_ids().filter(|&f| self.cod(f) == y).collect()
    }

    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        let (d, c) = (self.dom(f), self.cod(f));
        self.hom(c, d)
            .iter()
            .copied()
            .find(|&g| self.then(f, g) == self.id(d) && self.then(g, f) == self.id(c))
    }

    pub fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    /// Least isomorphism `x -> y` in canonical order.
    pub fn find_iso(&self, x: Obj, y: Obj) -> Option<Mor> {
        self.hom(x, y).iter().copied().find(|&f| self.is_iso(f))
    }

    pub fn isomorphic(&self, x: Obj, y: Obj) -> bool {
        self.find_iso(x, y).is_some()
    }

    pub fn to_desc(&self) -> CategoryDesc {
        let mut composition = BTreeMap::new();
        for f in self.morphism_ids() {
            for g in self.morphism_ids() {
                if let Some(h) = self.compose(f, g) {
                    composition.insert(
                        format!("{};{}", self.name(f), self.name(g)),
                        self.name(h).to_string(),
                    );
                }
            }
        }
        CategoryDesc {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| MorphismDesc {
                    name: m.name.clone(),
                    dom: self.objects[m.dom.0].clone(),
                    cod: self.objects[m.cod.0].clone(),
                })
                .collect(),
            identities: self
                .objects()
                .map(|x| (self.object_name(x).to_string(), self.name(self.id(x)).to_string()))
                .collect(),
            composition,
        }
    }

    /// Overwrites one composition entry without re-validating.
    ///
    /// Only used to build mutants for law-checking tests.
    pub fn with_composite_unchecked(&self, f: Mor, g: Mor, h: Mor) -> CategoryDesc {
        let mut desc = self.to_desc();
        desc.composition.insert(
            format!("{};{}", self.name(f), self.name(g)),
            self.name(h).to_string(),
        );
        desc
    }
}

/// Validates a category description, reporting every violated law.
pub fn validate_category(desc: &CategoryDesc) -> Result<FinCategory, CategoryError> {
    let mut violations = Vec::new();

    let mut seen = HashSet::new();
    for o in &desc.objects {
        if !seen.insert(o.as_str()) {
            violations.push(CategoryViolation::DuplicateName { name: o.clone() });
        }
    }
    let mut seen_m = HashSet::new();
    for m in &desc.morphisms {
        if !seen_m.insert(m.name.as_str()) {
            violations.push(CategoryViolation::DuplicateName {
                name: m.name.clone(),
            });
        }
    }
    if !violations.is_empty() {
        return Err(CategoryError::Invalid(violations));
    }

    let obj_index: HashMap<&str, Obj> = desc
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.as_str(), Obj(i)))
        .collect();
    let mor_index: HashMap<&str, Mor> = desc
        .morphisms
        .iter()
        .enumerate()
        .map(|(i, m)| (m.name.as_str(), Mor(i)))
        .collect();

    let mut morphisms = Vec::with_capacity(desc.morphisms.len());
    for m in &desc.morphisms {
        let dom = obj_index.get(m.dom.as_str());
        let cod = obj_index.get(m.cod.as_str());
        for (end, name) in [(dom, &m.dom), (cod, &m.cod)] {
            if end.is_none() {
                violations.push(CategoryViolation::UnknownObject {
                    name: name.clone(),
                    context: format!("morphism `{}`", m.name),
                });
            }
        }
        if let (Some(&dom), Some(&cod)) = (dom, cod) {
            morphisms.push(MorphismSig {
                name: m.name.clone(),
                dom,
                cod,
            });
        }
    }
    if !violations.is_empty() {
        return Err(CategoryError::Invalid(violations));
    }

    let mut identities = Vec::with_capacity(desc.objects.len());
    for (i, o) in desc.objects.iter().enumerate() {
        match desc.identities.get(o) {
            None => violations.push(CategoryViolation::MissingIdentity { object: o.clone() }),
            Some(name) => match mor_index.get(name.as_str()) {
                None => violations.push(CategoryViolation::UnknownMorphism {
                    name: name.clone(),
                    context: format!("identity of `{o}`"),
                }),
                Some(&m) => {
                    let sig = &morphisms[m.0];
                    if sig.dom != Obj(i) || sig.cod != Obj(i) {
                        violations.push(CategoryViolation::MissingIdentity { object: o.clone() });
                    }
                    identities.push(m);
                }
            },
        }
    }
    for key in desc.identities.keys() {
        if !obj_index.contains_key(key.as_str()) {
            violations.push(CategoryViolation::UnknownObject {
                name: key.clone(),
                context: "identities".into(),
            });
        }
    }

    let m = morphisms.len();
    let mut composition = vec![None; m * m];
    for (key, value) in &desc.composition {
        let Some((f, g)) = key.split_once(';') else {
            violations.push(CategoryViolation::MalformedKey { key: key.clone() });
            continue;
        };
        let (Some(&fi), Some(&gi)) = (mor_index.get(f), mor_index.get(g)) else {
            violations.push(CategoryViolation::MalformedKey { key: key.clone() });
            continue;
        };
        let Some(&hi) = mor_index.get(value.as_str()) else {
            violations.push(CategoryViolation::UnknownMorphism {
                name: value.clone(),
                context: format!("composite `{key}`"),
            });
            continue;
        };
        let (fs, gs, hs) = (&morphisms[fi.0], &morphisms[gi.0], &morphisms[hi.0]);
        if fs.cod != gs.dom {
            violations.push(CategoryViolation::BadComposite {
                f: f.into(),
                g: g.into(),
                reason: "pair is not composable".into(),
            });
        } else if hs.dom != fs.dom || hs.cod != gs.cod {
            violations.push(CategoryViolation::BadComposite {
                f: f.into(),
                g: g.into(),
                reason: format!("`{value}` has the wrong domain or codomain"),
            });
        } else {
            composition[fi.0 * m + gi.0] = Some(hi);
        }
    }
    for f in 0..m {
        for g in 0..m {
            if morphisms[f].cod == morphisms[g].dom && composition[f * m + g].is_none() {
                let bad = violations.iter().any(|v| {
                    matches!(v, CategoryViolation::BadComposite { f: a, g: b, .. }
                        if a == &morphisms[f].name && b == &morphisms[g].name)
                });
                if !bad {
                    violations.push(CategoryViolation::BadComposite {
                        f: morphisms[f].name.clone(),
                        g: morphisms[g].name.clone(),
                        reason: "composite missing".into(),
                    });
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(CategoryError::Invalid(violations));
    }

    let cat = FinCategory::assemble(desc.objects.clone(), morphisms, identities, composition);
    let laws = cat.law_violations();
    if laws.is_empty() {
        Ok(cat)
    } else {
        Err(CategoryError::Invalid(laws))
    }
}

/// The formal dual: same names, composition transposed.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let morphisms = c
        .morphisms
        .iter()
        .map(|m| MorphismSig {
            name: m.name.clone(),
            dom: m.cod,
            cod: m.dom,
        })
        .collect();
    let m = c.morphisms.len();
    let mut composition = vec![None; m * m];
    for f in 0..m {
        for g in 0..m {
            composition[f * m + g] = c.composition[g * m + f];
        }
    }
    FinCategory::assemble(c.objects.clone(), morphisms, c.identities.clone(), composition)
}
