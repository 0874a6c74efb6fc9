//! Batch experiments written as CSV: local value statistics and the
//! coboundary solve for even fiber dimension.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use eulerch::build::{polygon_aggregation, simplex_sphere, subdivision_tower};
use eulerch::euler::{euler_cochain_of_cells, euler_local, solve_coboundary, TwistingCochain};
use eulerch::locsys::{CellLocalSystem, SimplicialBase};
use eulerch::trigest::{cellular_system, simplicial_values};
use eulerch::BigRational;

use crate::commands::cocycle_status;
use crate::workspace::{Kind, ToolError, Workspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Stat {
    Bounds,
    EvenN,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOptions {
    pub inputs: Vec<PathBuf>,
    /// Number of generated inputs added to the files.
    pub generate: usize,
    pub seed: u64,
}

const BOUNDS_HEADER: [&str; 5] = ["source", "name", "simplex", "e_ch", "abs"];
const EVEN_HEADER: [&str; 7] = ["source", "name", "n", "simplices", "cocycle", "solvable", "period_free"];

fn csv_error(e: impl std::fmt::Display) -> ToolError {
    ToolError::Invalid(format!("csv: {e}"))
}

pub fn experiment(stat: Stat, opts: &ExperimentOptions) -> Result<String, ToolError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match stat {
        Stat::Bounds => {
            w.write_record(BOUNDS_HEADER).map_err(csv_error)?;
            for row in bounds_rows(opts)? {
                w.write_record(&row).map_err(csv_error)?;
            }
        }
        Stat::EvenN => {
            w.write_record(EVEN_HEADER).map_err(csv_error)?;
            for row in even_rows(opts)? {
                w.write_record(&row).map_err(csv_error)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn abs_decimal(q: &BigRational) -> String {
    q.abs().to_f64().map_or_else(|| "nan".into(), |x| format!("{x:.6}"))
}

fn value_row(source: &str, name: &str, simplex: &str, q: &BigRational) -> Vec<String> {
    vec![source.into(), name.into(), simplex.into(), q.to_string(), abs_decimal(q)]
}

fn bounds_rows(opts: &ExperimentOptions) -> Result<Vec<Vec<String>>, ToolError> {
    let mut rows = Vec::new();
    let mut ws = Workspace::new();
    for path in &opts.inputs {
        let source = path.display().to_string();
        for (kind, key) in ws.entries(path)? {
            match kind {
                Kind::Chain => {
                    let chain = ws.chain_at(&key)?;
                    let q = euler_local(&chain).map_err(|e| ToolError::Invalid(e.to_string()))?;
                    rows.push(value_row(&source, &key.1, "", &q));
                }
                Kind::System => {
                    let s = ws.system_at(&key)?;
                    let t = euler_cochain_of_cells(&s).map_err(|e| ToolError::Invalid(e.to_string()))?;
                    rows.extend(cochain_rows(&source, &key.1, &t));
                }
                Kind::Bundle => {
                    let b = ws.bundle_at(&key)?;
                    let sd = cellular_system(&b.bundle).map_err(|e| ToolError::Invalid(e.to_string()))?;
                    let t = euler_cochain_of_cells(&sd.system).map_err(|e| ToolError::Invalid(e.to_string()))?;
                    for (s, q) in simplicial_values(&b.bundle, &sd, &t) {
                        let labels: Vec<String> = s.iter().map(|&v| b.base_labels[v].to_string()).collect();
                        rows.push(value_row(&source, &key.1, &labels.join(" "), &q));
                    }
                }
                _ => {}
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(opts.seed);
    for i in 0..opts.generate {
        let (sizes, q) = random_polygon_chain(&mut rng);
        rows.push(value_row("generated", &format!("polygon-chain-{i}"), &sizes, &q));
    }
    Ok(rows)
}

fn cochain_rows(source: &str, name: &str, t: &TwistingCochain) -> Vec<Vec<String>> {
    let labels = t.base.labels();
    t.simplices()
        .iter()
        .zip(&t.values)
        .map(|(s, q)| {
            let sl: Vec<&str> = s.iter().map(|&v| labels[v].as_str()).collect();
            value_row(source, name, &sl.join(" "), q)
        })
        .collect()
}

/// Split `total` into `parts` positive sizes.
fn random_sizes(rng: &mut StdRng, total: usize, parts: usize) -> Vec<usize> {
    let mut sizes = vec![1; parts];
    for _ in parts..total {
        sizes[rng.random_range(0..parts)] += 1;
    }
    sizes
}

/// A chain `m0-gon → m1-gon → m2-gon` of random polygon aggregations and its
/// local value; the first column describes the polygon sizes.
fn random_polygon_chain(rng: &mut StdRng) -> (String, BigRational) {
    let m2 = rng.random_range(2..=4);
    let m1 = m2 + rng.random_range(0..=4);
    let m0 = m1 + rng.random_range(0..=4);
    let outer = polygon_aggregation(&random_sizes(rng, m1, m2));
    let inner = polygon_aggregation(&random_sizes(rng, m0, m1));
    let q = euler_local(&[inner, outer]).expect("polygon chains compose");
    (format!("{m0}>{m1}>{m2}"), q)
}

fn even_rows(opts: &ExperimentOptions) -> Result<Vec<Vec<String>>, ToolError> {
    let mut rows = Vec::new();
    let mut ws = Workspace::new();
    for path in &opts.inputs {
        let source = path.display().to_string();
        for (kind, key) in ws.entries(path)? {
            let system = match kind {
                Kind::System => ws.system_at(&key)?,
                Kind::Bundle => {
                    let b = ws.bundle_at(&key)?;
                    cellular_system(&b.bundle).map_err(|e| ToolError::Invalid(e.to_string()))?.system
                }
                _ => continue,
            };
            if system.n() % 2 == 0 {
                rows.push(even_row(&source, &key.1, &system)?);
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(opts.seed);
    for i in 0..opts.generate {
        let tower = subdivision_tower(Arc::new(simplex_sphere(3)), 4, |m| rng.random_range(0..m));
        let s = CellLocalSystem::from_tower(&tower).map_err(|e| ToolError::Invalid(e.to_string()))?;
        rows.push(even_row("generated", &format!("tower-{i}"), &s)?);
        rows.push(even_row("generated", &format!("tower-{i}-boundary"), &boundary_of_simplex(&s))?);
    }
    Ok(rows)
}

/// Restrict a system over `Δ^m` to `∂Δ^m`.
fn boundary_of_simplex(s: &CellLocalSystem) -> CellLocalSystem {
    let base = s.base();
    let m = base.vertex_count() - 1;
    let facets: Vec<Vec<&str>> =
        (0..=m).map(|skip| (0..=m).filter(|&v| v != skip).map(|v| base.label(v)).collect()).collect();
    let sub = SimplicialBase::new(base.labels().to_vec(), &facets).expect("faces use known labels");
    let maps: BTreeMap<(usize, usize), Vec<usize>> =
        s.maps().iter().filter(|(e, _)| sub.complex().contains(&[e.0, e.1])).map(|(e, m)| (*e, m.clone())).collect();
    CellLocalSystem::new(sub, s.fibers().to_vec(), maps).expect("restrictions of valid systems are valid")
}

fn even_row(source: &str, name: &str, s: &CellLocalSystem) -> Result<Vec<String>, ToolError> {
    let t = euler_cochain_of_cells(s).map_err(|e| ToolError::Invalid(e.to_string()))?;
    let top = t.base.simplices(t.n + 2).len();
    let solvable = if solve_coboundary(&t).is_some() { "yes" } else { "no" };
    // Over Q a cocycle is a coboundary iff all its periods vanish.
    let zero_periods = eulerch::euler::integer_cycles(&t)
        .iter()
        .all(|z| eulerch::euler::period(&t, z).map(|q| q == BigRational::from_integer(0.into())).unwrap_or(false));
    Ok(vec![
        source.into(),
        name.into(),
        t.n.to_string(),
        top.to_string(),
        cocycle_status(&t).into(),
        solvable.into(),
        if zero_periods { "yes" } else { "no" }.into(),
    ])
}
