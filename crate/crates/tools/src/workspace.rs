//! Loading documents and resolving references between them.
//!
//! A reference is a local name (`"tri"`), a name in another file
//! (`"shapes.json#tri"`, relative to the referring file) or a whole file
//! holding a single object of the expected kind (`"tri.json"`).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use eulerch::aggmap::{validate_aggregation, Aggregation};
use eulerch::cellx::{orient, validate_sphere, CellPoset, SphereComplex};
use eulerch::locsys::{CellLocalSystem, SimplicialBase};
use eulerch::simplicial::{Simplex, SimplicialComplex};
use eulerch::trigest::SimplicialBundle;
use eulerch::{BigInt, Report};

use crate::doc::{
    split_key, AggregationDoc, BundleDoc, ComplexDoc, CycleDoc, Document, FileDoc, Label, ParseError, SimplicialDoc,
    SystemDoc,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToolError {
    Io { path: PathBuf, message: String },
    Parse { path: PathBuf, error: ParseError },
    Reference(String),
    Invalid(String),
}

impl ToolError {
    /// 1 for content that loads but fails validation, 2 for everything that
    /// prevents loading.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolError::Invalid(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for ToolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToolError::Io { path, message } => write!(f, "{}: {message}", path.display()),
            ToolError::Parse { path, error } => write!(f, "{}: {error}", path.display()),
            ToolError::Reference(m) => write!(f, "reference error: {m}"),
            ToolError::Invalid(m) => write!(f, "invalid: {m}"),
        }
    }
}

impl std::error::Error for ToolError {}

fn invalid(m: impl fmt::Display) -> ToolError {
    ToolError::Invalid(m.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Complex,
    Aggregation,
    Chain,
    System,
    Bundle,
    Cycle,
}

impl Kind {
    fn noun(self) -> &'static str {
        match self {
            Kind::Complex => "complex",
            Kind::Aggregation => "aggregation",
            Kind::Chain => "chain",
            Kind::System => "system",
            Kind::Bundle => "bundle",
            Kind::Cycle => "cycle",
        }
    }

    fn names(self, d: &Document) -> Vec<String> {
        match self {
            Kind::Complex => d.complexes.keys().cloned().collect(),
            Kind::Aggregation => d.aggregations.keys().cloned().collect(),
            Kind::Chain => d.chains.keys().cloned().collect(),
            Kind::System => d.systems.keys().cloned().collect(),
            Kind::Bundle => d.bundles.keys().cloned().collect(),
            Kind::Cycle => d.cycles.keys().cloned().collect(),
        }
    }
}

/// A resolved reference: file and entry name.
pub type Key = (PathBuf, String);

/// A bundle with the labels of its base vertices (vertex `i` of the
/// bundle's base is `base_labels[i]`).
#[derive(Debug, Clone)]
pub struct LabeledBundle {
    pub bundle: SimplicialBundle,
    pub base_labels: Vec<Label>,
}

/// Named registry of loaded documents and the objects built from them.
#[derive(Debug, Default)]
pub struct Workspace {
    files: BTreeMap<PathBuf, Arc<Document>>,
    complexes: BTreeMap<Key, Arc<SphereComplex>>,
    aggregations: BTreeMap<Key, Aggregation>,
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned())
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Read and parse a file (cached by path).
    pub fn load(&mut self, path: &Path) -> Result<Arc<Document>, ToolError> {
        let path = path.to_path_buf();
        if let Some(d) = self.files.get(&path) {
            return Ok(d.clone());
        }
        let text =
            std::fs::read_to_string(&path).map_err(|e| ToolError::Io { path: path.clone(), message: e.to_string() })?;
        let doc = FileDoc::parse(&text).map_err(|error| ToolError::Parse { path: path.clone(), error })?;
        let doc = Arc::new(doc.into_document(&file_stem(&path)));
        self.files.insert(path, doc.clone());
        Ok(doc)
    }

    /// Resolve `r`, written in `from`, to an entry of the given kind.
    pub fn resolve(&mut self, from: &Path, r: &str, kind: Kind) -> Result<Key, ToolError> {
        let dir = from.parent().unwrap_or(Path::new(""));
        let (path, name) = match r.split_once('#') {
            Some((file, name)) => (dir.join(file), Some(name.to_string())),
            None if r.ends_with(".json") => (dir.join(r), None),
            None => (from.to_path_buf(), Some(r.to_string())),
        };
        let doc = self.load(&path)?;
        let names = kind.names(&doc);
        let name = match name {
            Some(n) if names.contains(&n) => n,
            Some(n) => {
                return Err(ToolError::Reference(format!("no {} named {n:?} in {}", kind.noun(), path.display())))
            }
            None if names.len() == 1 => names[0].clone(),
            None => {
                return Err(ToolError::Reference(format!(
                    "{} holds {} {} entries; name one with '#'",
                    path.display(),
                    names.len(),
                    kind.noun()
                )))
            }
        };
        Ok((path, name))
    }

    fn entry<T: Clone>(&mut self, key: &Key, pick: impl Fn(&Document) -> Option<&T>) -> T {
        let doc = self.files[&key.0].clone();
        pick(&doc).expect("resolved keys exist").clone()
    }

    pub fn complex_doc(&mut self, key: &Key) -> ComplexDoc {
        self.entry(key, |d| d.complexes.get(&key.1))
    }

    pub fn complex(&mut self, from: &Path, r: &str) -> Result<Arc<SphereComplex>, ToolError> {
        let key = self.resolve(from, r, Kind::Complex)?;
        self.complex_at(&key)
    }

    pub fn complex_at(&mut self, key: &Key) -> Result<Arc<SphereComplex>, ToolError> {
        if let Some(c) = self.complexes.get(key) {
            return Ok(c.clone());
        }
        let doc = self.complex_doc(key);
        let (report, sphere) = check_complex(&doc);
        let sphere = sphere.ok_or_else(|| {
            invalid(format!("complex {:?}: {}", key.1, report.reason().unwrap_or_else(|| "not a sphere".into())))
        })?;
        let sphere = Arc::new(sphere);
        self.complexes.insert(key.clone(), sphere.clone());
        Ok(sphere)
    }

    pub fn aggregation_doc(&mut self, key: &Key) -> AggregationDoc {
        self.entry(key, |d| d.aggregations.get(&key.1))
    }

    pub fn aggregation(&mut self, from: &Path, r: &str) -> Result<Aggregation, ToolError> {
        let key = self.resolve(from, r, Kind::Aggregation)?;
        self.aggregation_at(&key)
    }

    /// Build an aggregation, or the report explaining why it is invalid.
    pub fn aggregation_report(&mut self, key: &Key) -> Result<(Report, Option<Aggregation>), ToolError> {
        let doc = self.aggregation_doc(key);
        let source = self.complex(&key.0, &doc.source)?;
        let target = self.complex(&key.0, &doc.target)?;
        let mut map = vec![usize::MAX; source.poset().len()];
        for (s, t) in &doc.cell_map {
            let si = source.poset().find(s).ok_or_else(|| invalid(format!("cell_map: unknown source cell {s:?}")))?;
            let ti = target.poset().find(t).ok_or_else(|| invalid(format!("cell_map: unknown target cell {t:?}")))?;
            map[si] = ti;
        }
        if let Some(c) = map.iter().position(|&t| t == usize::MAX) {
            return Err(invalid(format!("cell_map: source cell {:?} is not mapped", source.poset().id(c))));
        }
        let report = validate_aggregation(&source, &target, &map);
        if !report.is_ok() {
            return Ok((report, None));
        }
        match Aggregation::new(source, target, map) {
            Ok(a) => Ok((report, Some(a))),
            Err(e) => {
                let mut r = report;
                r.fail("chain map", e.to_string());
                Ok((r, None))
            }
        }
    }

    pub fn aggregation_at(&mut self, key: &Key) -> Result<Aggregation, ToolError> {
        if let Some(a) = self.aggregations.get(key) {
            return Ok(a.clone());
        }
        let (report, agg) = self.aggregation_report(key)?;
        let agg =
            agg.ok_or_else(|| invalid(format!("aggregation {:?}: {}", key.1, report.reason().unwrap_or_default())))?;
        self.aggregations.insert(key.clone(), agg.clone());
        Ok(agg)
    }

    pub fn chain_at(&mut self, key: &Key) -> Result<Vec<Aggregation>, ToolError> {
        let refs: Vec<String> = self.entry(key, |d| d.chains.get(&key.1));
        refs.iter().map(|r| self.aggregation(&key.0, r)).collect()
    }

    pub fn system_at(&mut self, key: &Key) -> Result<CellLocalSystem, ToolError> {
        let doc: SystemDoc = self.entry(key, |d| d.systems.get(&key.1));
        let labels: Vec<String> = doc.base.vertices.iter().map(ToString::to_string).collect();
        let simplices: Vec<Vec<String>> =
            doc.base.simplices.iter().map(|s| s.iter().map(ToString::to_string).collect()).collect();
        let base = SimplicialBase::new(labels.clone(), &simplices).map_err(invalid)?;
        let mut fibers = Vec::with_capacity(labels.len());
        for l in &labels {
            let r = doc.fibers.get(l).ok_or_else(|| invalid(format!("no fiber over vertex {l:?}")))?;
            fibers.push(self.complex(&key.0, r)?);
        }
        if let Some(v) = doc.fibers.keys().find(|v| !labels.contains(v)) {
            return Err(invalid(format!("fiber given over unknown vertex {v:?}")));
        }
        let mut maps = BTreeMap::new();
        for (edge, r) in &doc.transitions {
            let parts = split_key(edge);
            let (u, v) = match parts.as_slice() {
                [u, v] => (
                    base.find(u).ok_or_else(|| invalid(format!("transition {edge:?}: unknown vertex {u:?}")))?,
                    base.find(v).ok_or_else(|| invalid(format!("transition {edge:?}: unknown vertex {v:?}")))?,
                ),
                _ => return Err(invalid(format!("transition key {edge:?} must be \"u,v\""))),
            };
            if u >= v || !base.complex().contains(&[u, v]) {
                return Err(invalid(format!("transition {edge:?} is not an ordered edge of the base")));
            }
            let agg = self.aggregation(&key.0, r)?;
            if *agg.source() != fibers[u] || *agg.target() != fibers[v] {
                return Err(invalid(format!("transition {edge:?} does not run from the fiber at u to the fiber at v")));
            }
            maps.insert((u, v), agg.cell_map().to_vec());
        }
        CellLocalSystem::new(base, fibers, maps).map_err(|e| invalid(format!("system {:?}: {e}", key.1)))
    }

    pub fn system(&mut self, from: &Path, r: &str) -> Result<CellLocalSystem, ToolError> {
        let key = self.resolve(from, r, Kind::System)?;
        self.system_at(&key)
    }

    pub fn bundle_at(&mut self, key: &Key) -> Result<LabeledBundle, ToolError> {
        let doc: BundleDoc = self.entry(key, |d| d.bundles.get(&key.1));
        bundle_from_doc(&doc).map_err(|e| match e {
            ToolError::Invalid(m) => invalid(format!("bundle {:?}: {m}", key.1)),
            other => other,
        })
    }

    pub fn cycle_at(&mut self, key: &Key) -> CycleDoc {
        self.entry(key, |d| d.cycles.get(&key.1))
    }

    /// Every entry of the file at `path`, by kind.
    pub fn entries(&mut self, path: &Path) -> Result<Vec<(Kind, Key)>, ToolError> {
        let doc = self.load(path)?;
        let kinds = [Kind::Complex, Kind::Aggregation, Kind::Chain, Kind::System, Kind::Bundle, Kind::Cycle];
        Ok(kinds.iter().flat_map(|&k| k.names(&doc).into_iter().map(move |n| (k, (path.to_path_buf(), n)))).collect())
    }
}

/// Build the poset, check sphericity and orient.
pub fn check_complex(doc: &ComplexDoc) -> (Report, Option<SphereComplex>) {
    let mut r = Report::new("complex");
    let cells = doc.cells.iter().map(|c| (c.id.as_str(), c.dim));
    let covers = doc.covers.iter().map(|(a, b)| (a.as_str(), b.as_str()));
    let poset = match CellPoset::new(cells, covers) {
        Ok(p) => p,
        Err(e) => {
            r.fail("poset", e.to_string());
            return (r, None);
        }
    };
    r.pass("poset");
    if poset.top_dim() != Some(doc.n) {
        r.fail("dimension", format!("top cells have dimension {:?}, declared n = {}", poset.top_dim(), doc.n));
        return (r, None);
    }
    let v = validate_sphere(&poset, doc.n);
    let ok = v.is_ok();
    r.absorb("", v);
    if !ok {
        return (r, None);
    }
    let mut sign = 1i8;
    if let Some(o) = &doc.orientation {
        for &c in poset.cells(doc.n) {
            match o.fund_class.get(poset.id(c)) {
                Some(&s) if s == 1 || s == -1 => {
                    if c != poset.cells(doc.n)[0] && s != sign {
                        r.fail("orientation", "fund_class entries must all be 1 or all be -1");
                        return (r, None);
                    }
                    sign = s;
                }
                _ => {
                    r.fail("orientation", format!("fund_class needs ±1 for top cell {:?}", poset.id(c)));
                    return (r, None);
                }
            }
        }
        if let Some(id) = o.fund_class.keys().find(|id| poset.find(id).is_none_or(|c| poset.dim(c) != doc.n)) {
            r.fail("orientation", format!("fund_class entry {id:?} is not a top cell"));
            return (r, None);
        }
    }
    match orient(&poset) {
        Ok(s) => {
            r.pass("orientation");
            (r, Some(if sign == 1 { s } else { s.reversed() }))
        }
        Err(e) => {
            r.fail("orientation", e.to_string());
            (r, None)
        }
    }
}

/// Vertices are renumbered by their position in `vertices`.
fn simplicial(doc: &SimplicialDoc, what: &str) -> Result<(SimplicialComplex, BTreeMap<Label, usize>), ToolError> {
    let mut pos = BTreeMap::new();
    for (i, l) in doc.vertices.iter().enumerate() {
        if pos.insert(l.clone(), i).is_some() {
            return Err(invalid(format!("{what}: vertex {l} listed twice")));
        }
    }
    let mut facets: Vec<Simplex> = (0..doc.vertices.len()).map(|i| vec![i]).collect();
    for s in &doc.simplices {
        let mut f = Vec::with_capacity(s.len());
        for l in s {
            f.push(*pos.get(l).ok_or_else(|| invalid(format!("{what}: unknown vertex {l}")))?);
        }
        facets.push(f);
    }
    Ok((SimplicialComplex::from_facets(facets), pos))
}

pub fn bundle_from_doc(doc: &BundleDoc) -> Result<LabeledBundle, ToolError> {
    let (total, _) = simplicial(&doc.total, "total")?;
    let (base, bpos) = simplicial(&doc.base, "base")?;
    let mut map = BTreeMap::new();
    for (t, b) in &doc.vertex_map {
        let tv = doc
            .total
            .vertices
            .iter()
            .position(|l| l.to_string() == *t)
            .ok_or_else(|| invalid(format!("vertex_map: unknown total vertex {t:?}")))?;
        let bv = *bpos.get(b).ok_or_else(|| invalid(format!("vertex_map: unknown base vertex {b}")))?;
        map.insert(tv, bv);
    }
    let bundle = SimplicialBundle::new(total, base, map).map_err(invalid)?;
    Ok(LabeledBundle { bundle, base_labels: doc.base.vertices.clone() })
}

/// Coefficients of a cycle document on the `k`-simplices of a base whose
/// vertex `i` carries `labels[i]`. Keys may list vertices in any order; a
/// permutation contributes its sign.
pub fn cycle_vector(
    doc: &CycleDoc,
    labels: &[String],
    complex: &SimplicialComplex,
    k: usize,
) -> Result<Vec<BigInt>, ToolError> {
    let mut z = vec![BigInt::from(0); complex.count(k)];
    for (key, &c) in &doc.chain {
        let mut s = Vec::new();
        for l in split_key(key) {
            s.push(labels.iter().position(|x| x == l).ok_or_else(|| invalid(format!("cycle: unknown vertex {l:?}")))?);
        }
        if s.len() != k + 1 {
            return Err(invalid(format!("cycle: {key:?} is not a {k}-simplex")));
        }
        let mut inversions = 0;
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if s[i] > s[j] {
                    inversions += 1;
                }
            }
        }
        s.sort_unstable();
        let idx = complex.index_of(&s).ok_or_else(|| invalid(format!("cycle: {key:?} is not a base simplex")))?;
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        z[idx] += BigInt::from(sign * c);
    }
    Ok(z)
}
