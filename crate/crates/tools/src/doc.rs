//! JSON document types and their canonical serialization.
//!
//! A file holds either one object (a complex, aggregation, system, bundle or
//! cycle, recognized by its keys) or a workspace document with named
//! sections. Canonical form sorts every object key and pretty-prints with a
//! trailing newline; lists keep their order because cell order is basis
//! order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A vertex label: a JSON string or a non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(u64),
    Str(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Str(s) => f.write_str(s),
        }
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Str(s.to_string())
    }
}

impl From<u64> for Label {
    fn from(i: u64) -> Self {
        Label::Int(i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub id: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrientationDoc {
    pub fund_class: BTreeMap<String, i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub n: usize,
    pub cells: Vec<CellDoc>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<OrientationDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AggregationDoc {
    pub source: String,
    pub target: String,
    pub cell_map: BTreeMap<String, String>,
}

/// Vertices in global order and simplices (facets suffice) by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialDoc {
    pub vertices: Vec<Label>,
    pub simplices: Vec<Vec<Label>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub base: SimplicialDoc,
    pub fibers: BTreeMap<String, String>,
    /// Keyed by `"u,v"` with `u` before `v` in the vertex order.
    pub transitions: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub total: SimplicialDoc,
    pub base: SimplicialDoc,
    pub vertex_map: BTreeMap<String, Label>,
}

/// An integer chain keyed by `"v0,v1,…"`; `of` optionally names the system
/// or bundle it lives on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub of: Option<String>,
    pub chain: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complexes: BTreeMap<String, ComplexDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub aggregations: BTreeMap<String, AggregationDoc>,
    /// Composable chains of aggregation references.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub chains: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub systems: BTreeMap<String, SystemDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bundles: BTreeMap<String, BundleDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cycles: BTreeMap<String, CycleDoc>,
}

/// What a file contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileDoc {
    Complex(ComplexDoc),
    Aggregation(AggregationDoc),
    System(SystemDoc),
    Bundle(BundleDoc),
    Cycle(CycleDoc),
    Document(Document),
}

const SECTIONS: [&str; 6] = ["complexes", "aggregations", "chains", "systems", "bundles", "cycles"];

/// A parse failure with the position reported by the JSON reader.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        }
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn shape_error(message: impl Into<String>) -> ParseError {
    ParseError { line: 0, column: 0, message: message.into() }
}

impl FileDoc {
    pub fn parse(text: &str) -> Result<FileDoc, ParseError> {
        let value: Value = serde_json::from_str(text)?;
        let obj = value.as_object().ok_or_else(|| shape_error("top level must be a JSON object"))?;
        let has = |k: &str| obj.contains_key(k);
        // Typed errors from `from_value` lose positions, so reparse from the
        // text to keep them.
        let doc = if SECTIONS.iter().any(|s| has(s)) {
            FileDoc::Document(serde_json::from_str(text)?)
        } else if has("cells") {
            FileDoc::Complex(serde_json::from_str(text)?)
        } else if has("cell_map") {
            FileDoc::Aggregation(serde_json::from_str(text)?)
        } else if has("fibers") {
            FileDoc::System(serde_json::from_str(text)?)
        } else if has("vertex_map") {
            FileDoc::Bundle(serde_json::from_str(text)?)
        } else if has("chain") {
            FileDoc::Cycle(serde_json::from_str(text)?)
        } else {
            return Err(shape_error(
                "unrecognized document: expected a complex, aggregation, system, bundle, cycle or sections",
            ));
        };
        Ok(doc)
    }

    pub fn to_value(&self) -> Value {
        let v = match self {
            FileDoc::Complex(d) => serde_json::to_value(d),
            FileDoc::Aggregation(d) => serde_json::to_value(d),
            FileDoc::System(d) => serde_json::to_value(d),
            FileDoc::Bundle(d) => serde_json::to_value(d),
            FileDoc::Cycle(d) => serde_json::to_value(d),
            FileDoc::Document(d) => serde_json::to_value(d),
        };
        v.expect("documents serialize")
    }

    /// Sorted keys, two-space indentation, trailing newline.
    pub fn canonical(&self) -> String {
        canonical_json(&self.to_value())
    }

    /// The file as a one-entry-per-kind workspace; single objects are named
    /// by `name`.
    pub fn into_document(self, name: &str) -> Document {
        let mut d = Document::default();
        let key = name.to_string();
        match self {
            FileDoc::Complex(c) => {
                d.complexes.insert(key, c);
            }
            FileDoc::Aggregation(a) => {
                d.aggregations.insert(key, a);
            }
            FileDoc::System(s) => {
                d.systems.insert(key, s);
            }
            FileDoc::Bundle(b) => {
                d.bundles.insert(key, b);
            }
            FileDoc::Cycle(c) => {
                d.cycles.insert(key, c);
            }
            FileDoc::Document(doc) => return doc,
        }
        d
    }
}

/// Serialize any value with sorted object keys.
pub fn canonical_json(v: &Value) -> String {
    // `serde_json::Map` is ordered by key unless `preserve_order` is on.
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// `"a,b,c"` to its parts.
pub fn split_key(key: &str) -> Vec<&str> {
    key.split(',').map(str::trim).collect()
}

pub fn join_labels<T: fmt::Display>(labels: impl IntoIterator<Item = T>) -> String {
    labels.into_iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}
