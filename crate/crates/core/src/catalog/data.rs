//! Loading and validating the catalog data files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::algebra::{parse_poly, Poly, Presentation};
use crate::steenrod::{Group, Operation, SuspensionModel};

use super::{CatalogError, FamilyId};

/// Overrides the embedded data with files from a directory.
pub const CATALOG_DIR_ENV: &str = "SYMSPACE_CATALOG_DIR";

const FACTS_FILE: &str = "facts.toml";

const EMBEDDED: &[(&str, &str)] = &[
    ("facts.toml", include_str!("../../data/facts.toml")),
    ("ei.pres", include_str!("../../data/ei.pres")),
    ("eii.pres", include_str!("../../data/eii.pres")),
    ("eiv.pres", include_str!("../../data/eiv.pres")),
    ("ev.pres", include_str!("../../data/ev.pres")),
    ("eviii.pres", include_str!("../../data/eviii.pres")),
    ("evi_cover.pres", include_str!("../../data/evi_cover.pres")),
    ("eix_cover.pres", include_str!("../../data/eix_cover.pres")),
    ("fi_cover.pres", include_str!("../../data/fi_cover.pres")),
    ("fii.pres", include_str!("../../data/fii.pres")),
    ("g.pres", include_str!("../../data/g.pres")),
];

/// Citation keys the parametric families rely on.
pub(crate) const REQUIRED_CITATIONS: &[&str] = &[
    "hermitian",
    "ganea",
    "s2_whitehead",
    "s4_cohomology",
    "cp_cohomology",
    "ai_cohomology",
    "reflection",
    "ai_lift",
    "bso_cohomology",
    "bdi_equivalence",
    "bsp_cohomology",
    "quasi_projective",
    "cii_equivalence",
    "aii_cohomology",
    "chern_wu",
    "aii_generating",
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFacts {
    schema: u32,
    citations: BTreeMap<String, String>,
    #[serde(default)]
    space: Vec<RawSpace>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    id: String,
    name: String,
    criterion: String,
    presentation: Option<String>,
    cohomology: Option<String>,
    statement: Option<String>,
    citation: Option<String>,
    transfer: Option<RawTransfer>,
    operation: Option<String>,
    prime: Option<u32>,
    x: Option<String>,
    a: Option<String>,
    b: Option<String>,
    action: Option<RawAction>,
    cross_check: Option<RawCrossCheck>,
    alpha: Option<RawSource>,
    beta: Option<RawSource>,
    squares: Option<BTreeMap<String, String>>,
    desuspension: Option<String>,
    generating_map: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransfer {
    source: String,
    fiber: String,
    threshold: u32,
    citation: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    value: String,
    citation: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCrossCheck {
    group: String,
    rank: usize,
    class: String,
    images: BTreeMap<String, String>,
    citation: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    label: String,
    source: String,
    pullback: BTreeMap<String, String>,
    citation: String,
}

/// A rational-homotopy transfer along a fibration with fiber `fiber`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferRecord {
    pub source: String,
    pub fiber: String,
    pub threshold: u32,
    pub citation: String,
}

/// Splitting-principle cross-check of a recorded operation value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckRecord {
    pub group: Group,
    pub rank: usize,
    pub class: String,
    /// Images of characteristic classes; classes not listed are unresolved.
    pub images: BTreeMap<String, Poly>,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceRecord {
    pub label: String,
    pub model: SuspensionModel,
    pub pullback: BTreeMap<String, String>,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceRecord {
    Rational {
        presentation: Presentation,
        cohomology: String,
        transfer: Option<TransferRecord>,
    },
    Steenrod {
        presentation: Presentation,
        cohomology: String,
        operation: Operation,
        x: String,
        a: String,
        b: String,
        action: Poly,
        action_citation: String,
        cross_check: Option<CrossCheckRecord>,
        alpha: SourceRecord,
        beta: SourceRecord,
    },
    PartialProjectivePlane {
        presentation: Presentation,
        cohomology: String,
        squares: BTreeMap<String, Poly>,
        desuspension: String,
        generating_map: String,
    },
    Recorded {
        statement: String,
        citation: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceEntry {
    pub id: FamilyId,
    pub name: String,
    pub record: SpaceRecord,
}

/// Validated catalog data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    citations: BTreeMap<String, String>,
    spaces: BTreeMap<FamilyId, SpaceEntry>,
    origin: String,
}

impl Catalog {
    /// The embedded data, or the directory named by `SYMSPACE_CATALOG_DIR`.
    pub fn load() -> Result<Self, CatalogError> {
        match std::env::var_os(CATALOG_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Self::from_dir(Path::new(&dir)),
            _ => Self::embedded(),
        }
    }

    pub fn embedded() -> Result<Self, CatalogError> {
        Self::from_reader("embedded", |name| {
            EMBEDDED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, s)| s.to_string())
                .ok_or_else(|| CatalogError::Data { file: name.to_string(), message: "no such embedded file".into() })
        })
    }

    pub fn from_dir(dir: &Path) -> Result<Self, CatalogError> {
        Self::from_reader(&dir.display().to_string(), |name| {
            std::fs::read_to_string(dir.join(name))
                .map_err(|e| CatalogError::Data { file: name.to_string(), message: e.to_string() })
        })
    }

    /// The raw text of an embedded data file.
    pub fn embedded_file(name: &str) -> Option<&'static str> {
        EMBEDDED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
    }

    pub fn embedded_file_names() -> impl Iterator<Item = &'static str> {
        EMBEDDED.iter().map(|(n, _)| *n)
    }

    fn from_reader(origin: &str, read: impl Fn(&str) -> Result<String, CatalogError>) -> Result<Self, CatalogError> {
        let facts_text = read(FACTS_FILE)?;
        let raw: RawFacts = toml::from_str(&facts_text)
            .map_err(|e| CatalogError::Data { file: FACTS_FILE.into(), message: e.to_string() })?;
        if raw.schema != 1 {
            return Err(data_err(FACTS_FILE, format!("unsupported schema {}", raw.schema)));
        }
        for (k, v) in &raw.citations {
            if v.trim().is_empty() {
                return Err(data_err(FACTS_FILE, format!("citation `{k}` is empty")));
            }
        }
        for k in REQUIRED_CITATIONS {
            if !raw.citations.contains_key(*k) {
                return Err(data_err(FACTS_FILE, format!("missing citation `{k}`")));
            }
        }
        let mut spaces = BTreeMap::new();
        for s in raw.space {
            let entry = SpaceLoader { citations: &raw.citations, read: &read }.space(s)?;
            if spaces.insert(entry.id, entry.clone()).is_some() {
                return Err(data_err(FACTS_FILE, format!("duplicate record for {}", entry.id)));
            }
        }
        for id in FamilyId::ALL.iter().filter(|f| f.is_single_instance()) {
            if !spaces.contains_key(id) {
                return Err(data_err(FACTS_FILE, format!("no record for {id}")));
            }
        }
        Ok(Catalog { citations: raw.citations, spaces, origin: origin.to_string() })
    }

    pub fn citation(&self, key: &str) -> &str {
        self.citations.get(key).map_or("(missing citation)", String::as_str)
    }

    pub fn space(&self, id: FamilyId) -> Option<&SpaceEntry> {
        self.spaces.get(&id)
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }
}

fn data_err(file: &str, message: impl Into<String>) -> CatalogError {
    CatalogError::Data { file: file.to_string(), message: message.into() }
}

struct SpaceLoader<'a, R> {
    citations: &'a BTreeMap<String, String>,
    read: &'a R,
}

impl<R: Fn(&str) -> Result<String, CatalogError>> SpaceLoader<'_, R> {
    fn cite(&self, id: &str, key: &str) -> Result<String, CatalogError> {
        self.citations
            .get(key)
            .cloned()
            .ok_or_else(|| data_err(FACTS_FILE, format!("{id}: unknown citation key `{key}`")))
    }

    fn presentation(&self, id: &str, file: Option<&String>) -> Result<Presentation, CatalogError> {
        let file = file.ok_or_else(|| data_err(FACTS_FILE, format!("{id}: missing `presentation`")))?;
        let text = (self.read)(file)?;
        Presentation::parse(&text).map_err(|e| data_err(file, e.to_string()))
    }

    fn space(&self, s: RawSpace) -> Result<SpaceEntry, CatalogError> {
        let id: FamilyId = s.id.parse().map_err(|_| data_err(FACTS_FILE, format!("unknown family `{}`", s.id)))?;
        if !id.is_single_instance() {
            return Err(data_err(FACTS_FILE, format!("{id} is a parametric family; it has no space record")));
        }
        let sid = s.id.as_str();
        let need = |field: Option<String>, name: &str| {
            field.ok_or_else(|| data_err(FACTS_FILE, format!("{sid}: missing `{name}`")))
        };
        let record = match s.criterion.as_str() {
            "rational" => {
                let presentation = self.presentation(sid, s.presentation.as_ref())?;
                if !presentation.field().is_rational() {
                    return Err(data_err(FACTS_FILE, format!("{sid}: rational record needs a presentation over Q")));
                }
                let transfer = match s.transfer {
                    Some(t) => Some(TransferRecord {
                        source: t.source,
                        fiber: t.fiber,
                        threshold: t.threshold,
                        citation: self.cite(sid, &t.citation)?,
                    }),
                    None => None,
                };
                SpaceRecord::Rational {
                    presentation,
                    cohomology: self.cite(sid, &need(s.cohomology, "cohomology")?)?,
                    transfer,
                }
            }
            "steenrod" => {
                let presentation = self.presentation(sid, s.presentation.as_ref())?;
                let alg = presentation.algebra();
                let prime = s.prime.ok_or_else(|| data_err(FACTS_FILE, format!("{sid}: missing `prime`")))?;
                if presentation.field().characteristic() != prime {
                    return Err(data_err(FACTS_FILE, format!("{sid}: presentation is not over F{prime}")));
                }
                let operation = Operation::parse(&need(s.operation, "operation")?, prime)
                    .map_err(|e| data_err(FACTS_FILE, format!("{sid}: {e}")))?;
                let (x, a, b) = (need(s.x, "x")?, need(s.a, "a")?, need(s.b, "b")?);
                for g in [&x, &a, &b] {
                    if alg.index_of(g).is_none() {
                        return Err(data_err(FACTS_FILE, format!("{sid}: `{g}` is not a generator")));
                    }
                }
                let action = s.action.ok_or_else(|| data_err(FACTS_FILE, format!("{sid}: missing `action`")))?;
                let value =
                    parse_poly(alg, &action.value).map_err(|e| data_err(FACTS_FILE, format!("{sid}: action: {e}")))?;
                let cross_check = match s.cross_check {
                    Some(c) => Some(self.cross_check(sid, c, &presentation, prime)?),
                    None => None,
                };
                let alpha = self.source(sid, need_src(s.alpha, sid, "alpha")?, &presentation, prime)?;
                let beta = self.source(sid, need_src(s.beta, sid, "beta")?, &presentation, prime)?;
                SpaceRecord::Steenrod {
                    cohomology: self.cite(sid, &need(s.cohomology, "cohomology")?)?,
                    presentation,
                    operation,
                    x,
                    a,
                    b,
                    action: value,
                    action_citation: self.cite(sid, &action.citation)?,
                    cross_check,
                    alpha,
                    beta,
                }
            }
            "partial-projective-plane" => {
                let presentation = self.presentation(sid, s.presentation.as_ref())?;
                let alg = presentation.algebra();
                let raw = s.squares.ok_or_else(|| data_err(FACTS_FILE, format!("{sid}: missing `squares`")))?;
                let mut squares = BTreeMap::new();
                for (g, v) in raw {
                    if alg.index_of(&g).is_none() {
                        return Err(data_err(FACTS_FILE, format!("{sid}: `{g}` is not a generator")));
                    }
                    let p = parse_poly(alg, &v).map_err(|e| data_err(FACTS_FILE, format!("{sid}: Sq {g}: {e}")))?;
                    squares.insert(g, p);
                }
                SpaceRecord::PartialProjectivePlane {
                    cohomology: self.cite(sid, &need(s.cohomology, "cohomology")?)?,
                    presentation,
                    squares,
                    desuspension: need(s.desuspension, "desuspension")?,
                    generating_map: self.cite(sid, &need(s.generating_map, "generating_map")?)?,
                }
            }
            "recorded" => SpaceRecord::Recorded {
                statement: need(s.statement, "statement")?,
                citation: self.cite(sid, &need(s.citation, "citation")?)?,
            },
            other => return Err(data_err(FACTS_FILE, format!("{sid}: unknown criterion `{other}`"))),
        };
        Ok(SpaceEntry { id, name: s.name, record })
    }

    fn cross_check(
        &self,
        sid: &str,
        c: RawCrossCheck,
        pres: &Presentation,
        prime: u32,
    ) -> Result<CrossCheckRecord, CatalogError> {
        let group = Group::from_tag(&c.group)
            .ok_or_else(|| data_err(FACTS_FILE, format!("{sid}: unknown group `{}`", c.group)))?;
        let model = crate::steenrod::TorusModel::new(group, c.rank, prime)
            .map_err(|e| data_err(FACTS_FILE, format!("{sid}: {e}")))?;
        model.class(&c.class).map_err(|e| data_err(FACTS_FILE, format!("{sid}: {e}")))?;
        let mut images = BTreeMap::new();
        for (class, img) in c.images {
            model.class(&class).map_err(|e| data_err(FACTS_FILE, format!("{sid}: {e}")))?;
            let p = parse_poly(pres.algebra(), &img)
                .map_err(|e| data_err(FACTS_FILE, format!("{sid}: image of {class}: {e}")))?;
            images.insert(class, p);
        }
        Ok(CrossCheckRecord { group, rank: c.rank, class: c.class, images, citation: self.cite(sid, &c.citation)? })
    }

    fn source(&self, sid: &str, s: RawSource, pres: &Presentation, prime: u32) -> Result<SourceRecord, CatalogError> {
        let model = parse_source(&s.source, prime).map_err(|m| data_err(FACTS_FILE, format!("{sid}: {m}")))?;
        for (g, class) in &s.pullback {
            if pres.algebra().index_of(g).is_none() {
                return Err(data_err(FACTS_FILE, format!("{sid}: pullback of unknown generator `{g}`")));
            }
            let i = model
                .class_index(class)
                .ok_or_else(|| data_err(FACTS_FILE, format!("{sid}: `{class}` is not a class of {}", model.base())))?;
            let deg = pres.algebra().generators()[pres.algebra().index_of(g).unwrap()].degree();
            if model.classes()[i].degree != deg {
                return Err(data_err(FACTS_FILE, format!("{sid}: {g} and {class} have different degrees")));
            }
        }
        Ok(SourceRecord { label: s.label, model, pullback: s.pullback, citation: self.cite(sid, &s.citation)? })
    }
}

fn need_src(s: Option<RawSource>, sid: &str, name: &str) -> Result<RawSource, CatalogError> {
    s.ok_or_else(|| data_err(FACTS_FILE, format!("{sid}: missing `{name}`")))
}

/// `sphere:<k>`, `moore`, `rp:<m>` or `qp:<n>`.
pub fn parse_source(spec: &str, prime: u32) -> Result<SuspensionModel, String> {
    let num = |s: &str| s.parse::<u32>().map_err(|_| format!("bad source `{spec}`"));
    match spec.split_once(':') {
        Some(("sphere", k)) => Ok(SuspensionModel::sphere(num(k)?, prime)),
        Some(("rp", m)) if prime == 2 => Ok(SuspensionModel::real_projective(num(m)?)),
        Some(("qp", n)) => SuspensionModel::quasi_projective(num(n)?, prime).map_err(|e| e.to_string()),
        None if spec == "moore" && prime == 2 => Ok(SuspensionModel::moore()),
        _ => Err(format!("unknown source `{spec}` at p = {prime}")),
    }
}
