//! The subcommands, each returning its output text and whether every
//! validation passed.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use eulerch::aggmap::{fund_sign, subdivision_chain_map};
use eulerch::cellx::{orient, SphereComplex};
use eulerch::euler::{euler_cochain_of_cells, euler_local, period, verify_cocycle, EulerError, TwistingCochain};
use eulerch::locsys::{to_chain_system, total_complex, total_homology, CellLocalSystem, Coefficients};
use eulerch::simplicial::SimplicialComplex;
use eulerch::trigest::{
    cellular_system, simplicial_values, subdivide_chain, validate_bundle, DerivedSystem, SimplicialBundle,
};
use eulerch::{BigInt, BigRational};

use crate::doc::{
    canonical_json, join_labels, AggregationDoc, BundleDoc, CellDoc, ComplexDoc, CycleDoc, Document, FileDoc, Label,
    OrientationDoc, SimplicialDoc, SystemDoc,
};
use crate::workspace::{check_complex, cycle_vector, Key, Kind, LabeledBundle, ToolError, Workspace};

/// Text to print and whether the command found a validation failure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub failed: bool,
}

impl Output {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn fail(&mut self, s: impl AsRef<str>) {
        self.failed = true;
        self.line(s);
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed)
    }
}

/// Content errors become failed lines; load errors abort.
fn soft<T>(out: &mut Output, prefix: &str, r: Result<T, ToolError>) -> Result<Option<T>, ToolError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(ToolError::Invalid(m)) => {
            out.fail(format!("{prefix}: invalid: {m}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn rational(q: &BigRational) -> String {
    q.to_string()
}

fn decimal(q: &BigRational) -> String {
    q.to_f64().map_or_else(|| "nan".into(), |x| format!("{x:.6}"))
}

fn with_decimal(q: &BigRational, show: bool) -> String {
    if show {
        format!("{}  (~ {})", rational(q), decimal(q))
    } else {
        rational(q)
    }
}

fn invalid(m: impl std::fmt::Display) -> ToolError {
    ToolError::Invalid(m.to_string())
}

pub fn validate(path: &Path) -> Result<Output, ToolError> {
    let mut ws = Workspace::new();
    let mut out = Output::default();
    for (kind, key) in ws.entries(path)? {
        let name = key.1.clone();
        match kind {
            Kind::Complex => {
                let (report, sphere) = check_complex(&ws.complex_doc(&key));
                match sphere {
                    Some(s) => out.line(format!("{name}: valid sphere, n={}, w={}, f={}", s.n(), s.w(), s.f())),
                    None => out.fail(format!("{name}: invalid: {}", report.reason().unwrap_or_default())),
                }
            }
            Kind::Aggregation => {
                let Some((report, agg)) = soft(&mut out, &name, ws.aggregation_report(&key))? else { continue };
                match agg {
                    Some(a) => out.line(format!(
                        "{name}: valid aggregation, {} -> {} cells, n={}",
                        a.source().poset().len(),
                        a.target().poset().len(),
                        a.n()
                    )),
                    None => out.fail(format!("{name}: invalid: {}", report.reason().unwrap_or_default())),
                }
            }
            Kind::Chain => {
                let Some(chain) = soft(&mut out, &name, ws.chain_at(&key))? else { continue };
                match euler_local(&chain) {
                    Ok(_) => out.line(format!("{name}: valid chain of {} aggregations", chain.len())),
                    Err(e) => out.fail(format!("{name}: invalid: {e}")),
                }
            }
            Kind::System => {
                let Some(s) = soft(&mut out, &name, ws.system_at(&key))? else { continue };
                match to_chain_system(&s) {
                    Ok(_) => out.line(format!(
                        "{name}: valid system, n={}, base dim {}, {} vertices",
                        s.n(),
                        s.base().dim().unwrap_or(0),
                        s.base().vertex_count()
                    )),
                    Err(e) => out.fail(format!("{name}: invalid: {e}")),
                }
            }
            Kind::Bundle => {
                let Some(b) = soft(&mut out, &name, ws.bundle_at(&key))? else { continue };
                let report = validate_bundle(&b.bundle);
                out.line(format!("{name}: bundle, n={}", b.bundle.n()));
                out.line(format!("  {:<16} {:<8} detail", "stalk", "sphere"));
                for c in &report.checks {
                    let stalk = c.name.trim_start_matches("stalk ");
                    let labels = relabel_dotted(stalk, &b.base_labels);
                    out.line(format!("  {:<16} {:<8} {}", labels, if c.passed { "yes" } else { "no" }, c.detail));
                }
                if report.is_ok() {
                    out.line(format!("{name}: valid bundle"));
                } else {
                    out.fail(format!("{name}: invalid: {}", report.reason().unwrap_or_default()));
                }
            }
            Kind::Cycle => {
                let c = ws.cycle_at(&key);
                out.line(format!("{name}: cycle with {} terms", c.chain.len()));
            }
        }
    }
    Ok(out)
}

/// `"0.2"` in base vertex numbers to `"a.c"` in labels.
fn relabel_dotted(s: &str, labels: &[Label]) -> String {
    s.split('.')
        .map(|v| v.parse::<usize>().ok().and_then(|i| labels.get(i)).map_or_else(|| v.to_string(), Label::to_string))
        .collect::<Vec<_>>()
        .join(".")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EulerMode {
    Local,
    Cochain,
    Period,
    Simplicial,
}

#[derive(Debug, Clone, Default)]
pub struct EulerOptions<'a> {
    pub cycle: Option<&'a Path>,
    pub decimal: bool,
    pub json: bool,
}

/// A system or bundle, the cochain of its cellular system, and how to read
/// a cycle given on its base.
struct Target {
    name: String,
    system: CellLocalSystem,
    cochain: TwistingCochain,
    bundle: Option<(LabeledBundle, DerivedSystem)>,
}

impl Target {
    fn labels(&self) -> Vec<String> {
        match &self.bundle {
            Some((b, _)) => b.base_labels.iter().map(ToString::to_string).collect(),
            None => self.system.base().labels().to_vec(),
        }
    }

    fn base_complex(&self) -> &SimplicialComplex {
        match &self.bundle {
            Some((b, _)) => b.bundle.base(),
            None => self.system.base().complex(),
        }
    }

    /// A cycle on the base, moved to the base of the cochain.
    fn lift(&self, z: &[BigInt]) -> Vec<BigInt> {
        match &self.bundle {
            Some((b, sd)) => subdivide_chain(b.bundle.base(), sd, self.cochain.n + 1, z),
            None => z.to_vec(),
        }
    }
}

fn targets(ws: &mut Workspace, path: &Path, out: &mut Output) -> Result<Vec<Target>, ToolError> {
    let mut res = Vec::new();
    for (kind, key) in ws.entries(path)? {
        let name = key.1.clone();
        let built = match kind {
            Kind::System => ws.system_at(&key).and_then(|s| {
                let t = euler_cochain_of_cells(&s).map_err(invalid)?;
                Ok(Target { name: name.clone(), system: s, cochain: t, bundle: None })
            }),
            Kind::Bundle => ws.bundle_at(&key).and_then(|b| {
                let sd = cellular_system(&b.bundle).map_err(invalid)?;
                let t = euler_cochain_of_cells(&sd.system).map_err(invalid)?;
                Ok(Target { name: name.clone(), system: sd.system.clone(), cochain: t, bundle: Some((b, sd)) })
            }),
            _ => continue,
        };
        if let Some(t) = soft(out, &name, built)? {
            res.push(t);
        }
    }
    Ok(res)
}

fn simplex_labels(labels: &[String], s: &[usize]) -> Vec<String> {
    s.iter().map(|&v| labels[v].clone()).collect()
}

pub fn euler(path: &Path, mode: EulerMode, opts: &EulerOptions) -> Result<Output, ToolError> {
    let mut ws = Workspace::new();
    let mut out = Output::default();
    let mut rows: Vec<Value> = Vec::new();
    let push = |rows: &mut Vec<Value>, mut v: Value, q: &BigRational| {
        if opts.decimal {
            v["decimal"] = json!(decimal(q));
        }
        rows.push(v);
    };
    match mode {
        EulerMode::Local => {
            let chains: Vec<Key> =
                ws.entries(path)?.into_iter().filter(|(k, _)| *k == Kind::Chain).map(|(_, k)| k).collect();
            if chains.is_empty() {
                return Err(invalid("no chains of aggregations in the file"));
            }
            for key in chains {
                let Some(chain) = soft(&mut out, &key.1, ws.chain_at(&key))? else { continue };
                match euler_local(&chain) {
                    Ok(q) => {
                        out.line(format!("{}: {}", key.1, with_decimal(&q, opts.decimal)));
                        push(&mut rows, json!({"chain": key.1, "e_ch": rational(&q)}), &q);
                    }
                    Err(e) => out.fail(format!("{}: {e}", key.1)),
                }
            }
        }
        EulerMode::Cochain => {
            for t in targets(&mut ws, path, &mut out)? {
                let labels = t.system.base().labels();
                for (s, q) in t.cochain.simplices().iter().zip(&t.cochain.values) {
                    let sl = simplex_labels(labels, s);
                    out.line(format!("{} [{}]: {}", t.name, sl.join(", "), with_decimal(q, opts.decimal)));
                    push(&mut rows, json!({"of": t.name, "simplex": sl, "e_ch": rational(q)}), q);
                }
            }
        }
        EulerMode::Simplicial => {
            for t in targets(&mut ws, path, &mut out)? {
                let Some((b, sd)) = &t.bundle else { continue };
                let labels = t.labels();
                for (s, q) in simplicial_values(&b.bundle, sd, &t.cochain) {
                    let sl = simplex_labels(&labels, &s);
                    out.line(format!("{} [{}]: {}", t.name, sl.join(", "), with_decimal(&q, opts.decimal)));
                    push(&mut rows, json!({"of": t.name, "simplex": sl, "e_ch": rational(&q)}), &q);
                }
            }
        }
        EulerMode::Period => {
            let mut cycles: Vec<(String, CycleDoc)> = Vec::new();
            if let Some(cp) = opts.cycle {
                for (kind, key) in ws.entries(cp)? {
                    if kind == Kind::Cycle {
                        cycles.push((key.1.clone(), ws.cycle_at(&key)));
                    }
                }
                if cycles.is_empty() {
                    return Err(invalid(format!("{} holds no cycles", cp.display())));
                }
            } else {
                for (kind, key) in ws.entries(path)? {
                    if kind == Kind::Cycle {
                        cycles.push((key.1.clone(), ws.cycle_at(&key)));
                    }
                }
            }
            for t in targets(&mut ws, path, &mut out)? {
                let k = t.cochain.n + 1;
                let labels = t.labels();
                let mine: Vec<&(String, CycleDoc)> =
                    cycles.iter().filter(|(_, c)| c.of.as_deref().is_none_or(|o| o == t.name)).collect();
                let zs: Vec<(String, Vec<BigInt>)> = if mine.is_empty() {
                    basis_cycles(t.base_complex(), k)
                        .into_iter()
                        .enumerate()
                        .map(|(i, z)| (format!("basis[{i}]"), z))
                        .collect()
                } else {
                    let mut v = Vec::new();
                    for (n, c) in mine {
                        v.push((n.clone(), cycle_vector(c, &labels, t.base_complex(), k)?));
                    }
                    v
                };
                if zs.is_empty() {
                    out.line(format!("{}: the base has no {k}-cycles", t.name));
                }
                for (cname, z) in zs {
                    let chain = describe_chain(t.base_complex(), &labels, k, &z);
                    match period(&t.cochain, &t.lift(&z)) {
                        Ok(q) => {
                            let integral = q.is_integer();
                            let line = format!(
                                "{} {cname}: {} (integer: {})",
                                t.name,
                                with_decimal(&q, opts.decimal),
                                if integral { "yes" } else { "no" }
                            );
                            if integral {
                                out.line(line);
                            } else {
                                out.fail(format!("{line}  violation: period is not an integer"));
                            }
                            push(
                                &mut rows,
                                json!({"of": t.name, "cycle": chain, "period": rational(&q), "integer": integral}),
                                &q,
                            );
                        }
                        Err(EulerError::NotACycle) => out.fail(format!("{} {cname}: not a cycle", t.name)),
                        Err(e) => out.fail(format!("{} {cname}: {e}", t.name)),
                    }
                }
            }
        }
    }
    if opts.json {
        out.text = canonical_json(&Value::Array(rows));
    }
    Ok(out)
}

fn basis_cycles(c: &SimplicialComplex, k: usize) -> Vec<Vec<BigInt>> {
    let z = c.integer_cycles(k);
    (0..z.ncols()).map(|j| (0..z.nrows()).map(|i| z.get(i, j)).collect()).collect()
}

fn describe_chain(c: &SimplicialComplex, labels: &[String], k: usize, z: &[BigInt]) -> BTreeMap<String, String> {
    c.simplices(k)
        .iter()
        .zip(z)
        .filter(|(_, x)| !x.is_zero())
        .map(|(s, x)| (join_labels(simplex_labels(labels, s)), x.to_string()))
        .collect()
}

pub fn homology(path: &Path, coefficients: Coefficients) -> Result<Output, ToolError> {
    let mut ws = Workspace::new();
    let mut out = Output::default();
    let mut any = false;
    for (kind, key) in ws.entries(path)? {
        let system = match kind {
            Kind::System => ws.system_at(&key),
            Kind::Bundle => {
                ws.bundle_at(&key).and_then(|b| cellular_system(&b.bundle).map(|sd| sd.system).map_err(invalid))
            }
            _ => continue,
        };
        let Some(system) = soft(&mut out, &key.1, system)? else { continue };
        any = true;
        let chain = match to_chain_system(&system) {
            Ok(c) => c,
            Err(e) => {
                out.fail(format!("{}: invalid: {e}", key.1));
                continue;
            }
        };
        let tot = total_complex(&chain);
        let h = total_homology(&tot, coefficients);
        let field = if coefficients == Coefficients::Q { "Q" } else { "Z" };
        out.line(format!("{}: Tot dims {:?}", key.1, tot.dims()));
        for (k, b) in h.betti.iter().enumerate() {
            let mut parts = Vec::new();
            match b {
                0 => {}
                1 => parts.push(field.to_string()),
                _ => parts.push(format!("{field}^{b}")),
            }
            for t in h.torsion.get(k).into_iter().flatten() {
                parts.push(format!("Z/{t}"));
            }
            let group = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
            out.line(format!("  H_{k} = {group}"));
        }
        out.line(format!("  betti {:?}", h.betti));
    }
    if !any {
        return Err(invalid("no systems or bundles in the file"));
    }
    Ok(out)
}

/// The document form of an oriented complex, cells in basis order. The
/// fundamental class is written relative to the conventional cell
/// orientations, so only the orientation of the sphere survives.
pub fn complex_document(s: &SphereComplex) -> ComplexDoc {
    let p = s.poset();
    let n = s.n();
    let plain = orient(p).expect("the poset of an oriented sphere orients");
    let id: Vec<usize> = (0..p.len()).collect();
    let chain = subdivision_chain_map(s, &plain, &id).expect("identity is a subdivision");
    let sign = fund_sign(s, &plain, &chain).expect("identity carries fundamental classes");
    let cells = (0..=n).flat_map(|k| p.cells(k).iter().map(move |&c| CellDoc { id: p.id(c).into(), dim: k })).collect();
    let mut covers: Vec<(String, String)> = p.covers().iter().map(|&(a, b)| (p.id(a).into(), p.id(b).into())).collect();
    covers.sort();
    let fund_class = p.cells(n).iter().map(|&c| (p.id(c).to_string(), sign)).collect();
    ComplexDoc { n, cells, covers, orientation: Some(OrientationDoc { fund_class }) }
}

fn simplicial_document(c: &SimplicialComplex) -> SimplicialDoc {
    SimplicialDoc {
        vertices: c.vertices().into_iter().map(|v| Label::Int(v as u64)).collect(),
        simplices: c.facets().iter().map(|f| f.iter().map(|&v| Label::Int(v as u64)).collect()).collect(),
    }
}

/// The document form of a bundle, vertices labelled by their numbers.
pub fn bundle_document(b: &SimplicialBundle) -> BundleDoc {
    BundleDoc {
        total: simplicial_document(b.total()),
        base: simplicial_document(b.base()),
        vertex_map: b.vertex_map().iter().map(|(&t, &s)| (t.to_string(), Label::Int(s as u64))).collect(),
    }
}

/// Add a system, its fibers and its transitions to `doc` under the prefix
/// `name`; base vertex `v` is written as `vlabel(v)`. Fibers are written
/// with aligned orientations. Returns the system's entry name.
pub fn add_system(
    doc: &mut Document,
    name: &str,
    sys: &CellLocalSystem,
    vlabel: impl Fn(usize) -> String,
) -> Result<String, ToolError> {
    let sys = &sys.aligned().map_err(invalid)?;
    let mut fibers = BTreeMap::new();
    for v in 0..sys.base().vertex_count() {
        let cname = format!("{name}/fiber/{}", vlabel(v));
        doc.complexes.insert(cname.clone(), complex_document(sys.fiber(v)));
        fibers.insert(vlabel(v), cname);
    }
    let mut transitions = BTreeMap::new();
    for (&(u, v), map) in sys.maps() {
        let (su, tv) = (sys.fiber(u).poset(), sys.fiber(v).poset());
        let aname = format!("{name}/edge/{}/{}", vlabel(u), vlabel(v));
        let cell_map = map.iter().enumerate().map(|(c, &t)| (su.id(c).to_string(), tv.id(t).to_string())).collect();
        doc.aggregations.insert(
            aname.clone(),
            AggregationDoc { source: fibers[&vlabel(u)].clone(), target: fibers[&vlabel(v)].clone(), cell_map },
        );
        transitions.insert(format!("{},{}", vlabel(u), vlabel(v)), aname);
    }
    let base = SimplicialDoc {
        vertices: (0..sys.base().vertex_count()).map(|v| Label::Str(vlabel(v))).collect(),
        simplices: sys
            .base()
            .complex()
            .facets()
            .iter()
            .map(|f| f.iter().map(|&v| Label::Str(vlabel(v))).collect())
            .collect(),
    };
    let sname = format!("{name}/system");
    doc.systems.insert(sname.clone(), SystemDoc { base, fibers, transitions });
    Ok(sname)
}

/// The cellular system of every bundle in `path` as a system document,
/// with the subdivided integer cycles of each base.
pub fn ingest(path: &Path) -> Result<Document, ToolError> {
    let mut ws = Workspace::new();
    let mut doc = Document::default();
    let bundles: Vec<Key> = ws.entries(path)?.into_iter().filter(|(k, _)| *k == Kind::Bundle).map(|(_, k)| k).collect();
    if bundles.is_empty() {
        return Err(invalid("no bundles in the file"));
    }
    for key in bundles {
        let b = ws.bundle_at(&key)?;
        let sd = cellular_system(&b.bundle).map_err(invalid)?;
        let name = &key.1;
        let vlabel = |v: usize| join_labels_dot(&sd.simplices[v], &b.base_labels);
        let sname = add_system(&mut doc, name, &sd.system, vlabel)?;
        let k = b.bundle.n() + 1;
        let sdb = sd.system.base();
        for (i, z) in basis_cycles(b.bundle.base(), k).iter().enumerate() {
            let lifted = subdivide_chain(b.bundle.base(), &sd, k, z);
            let chain = sdb
                .simplices(k)
                .iter()
                .zip(&lifted)
                .filter(|(_, x)| !x.is_zero())
                .map(|(s, x)| {
                    let key = s.iter().map(|&v| vlabel(v)).collect::<Vec<_>>().join(",");
                    (key, x.to_i64().expect("small coefficients"))
                })
                .collect();
            doc.cycles.insert(format!("{name}/cycle/{i}"), CycleDoc { of: Some(sname.clone()), chain });
        }
    }
    Ok(doc)
}

fn join_labels_dot(s: &[usize], labels: &[Label]) -> String {
    s.iter().map(|&v| labels[v].to_string()).collect::<Vec<_>>().join(".")
}

/// The canonical form of a file, after checking that it parses.
pub fn canon(path: &Path) -> Result<String, ToolError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ToolError::Io { path: path.to_path_buf(), message: e.to_string() })?;
    let doc = FileDoc::parse(&text).map_err(|error| ToolError::Parse { path: path.to_path_buf(), error })?;
    Ok(doc.canonical())
}

/// Cochain of a system loaded from a file, for callers outside the CLI.
pub fn cochain_of(ws: &mut Workspace, from: &Path, r: &str) -> Result<TwistingCochain, ToolError> {
    let s = ws.system(from, r)?;
    euler_cochain_of_cells(&s).map_err(invalid)
}

/// `δτ = 0` for a cochain, as text.
pub fn cocycle_status(t: &TwistingCochain) -> &'static str {
    if t.base.simplices(t.n + 2).is_empty() {
        "n/a"
    } else if verify_cocycle(t).is_ok() {
        "yes"
    } else {
        "no"
    }
}
