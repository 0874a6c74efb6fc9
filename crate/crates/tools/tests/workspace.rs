mod common;

use std::path::Path;

use proptest::prelude::*;

use eulerch::build::{polygon, polygon_aggregation, polygon_coarsening};
use eulerch::euler::{euler_cochain_of_cells, euler_local, formal_euler, hodge_sdrs};
use eulerch::locsys::{to_chain_system, CellLocalSystem};
use eulerch::simplicial::simplex_boundary;
use eulerch::trigest::{cellular_system, hopf_bundle, product_bundle};
use eulerch_tools::commands::{bundle_document, complex_document};
use eulerch_tools::doc::{CycleDoc, FileDoc};
use eulerch_tools::ingest;
use eulerch_tools::workspace::{check_complex, cycle_vector, Kind, ToolError, Workspace};

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn data_hopf_bundle_is_the_generator_output() {
    let mut ws = Workspace::new();
    let path = common::data("hopf_bundle.json");
    let key = ws.resolve(&path, "hopf", Kind::Bundle).unwrap();
    assert_eq!(ws.bundle_at(&key).unwrap().bundle, hopf_bundle());
}

#[test]
fn data_polygon_chain_matches_generators() {
    let mut ws = Workspace::new();
    let path = common::data("polygon_chain.json");
    let key = ws.resolve(&path, "six-three-two", Kind::Chain).unwrap();
    let chain = ws.chain_at(&key).unwrap();
    assert_eq!(chain, vec![polygon_aggregation(&[1, 2, 3]), polygon_aggregation(&[2, 1])]);
    let key = ws.resolve(&path, "twelve-six-three", Kind::Chain).unwrap();
    assert_eq!(ws.chain_at(&key).unwrap(), vec![polygon_coarsening(2, 6), polygon_coarsening(2, 3)]);
}

#[test]
fn local_value_agrees_with_the_formal_value_of_the_tower_system() {
    let mut ws = Workspace::new();
    let path = common::data("polygon_chain.json");
    let key = ws.resolve(&path, "six-three-two", Kind::Chain).unwrap();
    let chain = ws.chain_at(&key).unwrap();
    let ls = to_chain_system(&CellLocalSystem::from_tower(&chain).unwrap()).unwrap();
    let sdrs = hodge_sdrs(&ls).unwrap();
    assert_eq!(euler_local(&chain).unwrap(), formal_euler(&ls, &sdrs, &[0, 1, 2]).unwrap());
}

#[test]
fn references_across_files() {
    let dir = tempfile::tempdir().unwrap();
    let tri = FileDoc::Complex(complex_document(&polygon(3))).canonical();
    write(dir.path(), "tri.json", &tri);
    let six = FileDoc::Complex(complex_document(&polygon(6))).canonical();
    write(dir.path(), "shapes.json", &format!("{{\"complexes\": {{\"six\": {six}}}}}"));
    let a = polygon_coarsening(2, 3);
    let (s, t) = (a.source().poset(), a.target().poset());
    let map: Vec<String> =
        a.cell_map().iter().enumerate().map(|(c, &x)| format!("\"{}\": \"{}\"", s.id(c), t.id(x))).collect();
    let text =
        format!("{{\"source\": \"shapes.json#six\", \"target\": \"tri.json\", \"cell_map\": {{{}}}}}", map.join(", "));
    let p = write(dir.path(), "agg.json", &text);
    let mut ws = Workspace::new();
    assert_eq!(ws.aggregation(&p, "agg").unwrap(), a);

    let missing = ws.resolve(&p, "shapes.json#seven", Kind::Complex).unwrap_err();
    assert!(matches!(missing, ToolError::Reference(_)));
    assert_eq!(missing.exit_code(), 2);
    let two = write(dir.path(), "two.json", &format!("{{\"complexes\": {{\"a\": {tri}, \"b\": {tri}}}}}"));
    assert!(matches!(ws.resolve(&two, "two.json", Kind::Complex), Err(ToolError::Reference(_))));
}

#[test]
fn fundamental_class_sign_selects_the_orientation() {
    let mut doc = complex_document(&polygon(4));
    let (_, s) = check_complex(&doc);
    assert_eq!(s.unwrap(), polygon(4));
    for v in doc.orientation.as_mut().unwrap().fund_class.values_mut() {
        *v = -1;
    }
    let (_, s) = check_complex(&doc);
    assert_eq!(s.unwrap(), polygon(4).reversed());
    *doc.orientation.as_mut().unwrap().fund_class.values_mut().next().unwrap() = 1;
    let (r, s) = check_complex(&doc);
    assert!(s.is_none());
    assert!(r.reason().unwrap().contains("all be 1 or all be -1"));
}

#[test]
fn cycle_keys_in_any_vertex_order() {
    let base = simplex_boundary(3);
    let labels: Vec<String> = (0..4).map(|i| i.to_string()).collect();
    let doc =
        |pairs: &[(&str, i64)]| CycleDoc { of: None, chain: pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect() };
    let a = cycle_vector(&doc(&[("1,2,3", 1), ("0,2,3", -1), ("0,1,3", 1), ("0,1,2", -1)]), &labels, &base, 2).unwrap();
    let b = cycle_vector(&doc(&[("2,1,3", -1), ("0,3,2", 1), ("3,0,1", 1), ("0,1,2", -1)]), &labels, &base, 2).unwrap();
    assert_eq!(a, b);
    assert!(matches!(cycle_vector(&doc(&[("0,1", 1)]), &labels, &base, 2), Err(ToolError::Invalid(_))));
    assert!(matches!(cycle_vector(&doc(&[("0,1,9", 1)]), &labels, &base, 2), Err(ToolError::Invalid(_))));
}

#[test]
fn ingested_product_bundle_reloads_to_the_same_cochain() {
    let dir = tempfile::tempdir().unwrap();
    let b = product_bundle(&simplex_boundary(2), &simplex_boundary(3));
    let mut d = eulerch_tools::Document::default();
    d.bundles.insert("product".into(), bundle_document(&b));
    let text = FileDoc::Document(d).canonical();
    let p = write(dir.path(), "product.json", &text);
    let doc = ingest(&p).unwrap();
    let q = write(dir.path(), "system.json", &FileDoc::Document(doc).canonical());
    let mut ws = Workspace::new();
    let key = ws.resolve(&q, "product/system", Kind::System).unwrap();
    let loaded = euler_cochain_of_cells(&ws.system_at(&key).unwrap()).unwrap();
    let direct = euler_cochain_of_cells(&cellular_system(&b).unwrap().system).unwrap();
    assert_eq!(loaded.values, direct.values);
}

proptest! {
    #[test]
    fn canonical_form_is_a_fixed_point(m in 2usize..10, seed in 0u64..1000) {
        let s = polygon(m);
        let n = s.poset().len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut x = seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (x >> 33) as usize % (i + 1));
        }
        let doc = FileDoc::Complex(complex_document(&s.relabeled(&order)));
        let once = doc.canonical();
        let reparsed = FileDoc::parse(&once).unwrap();
        prop_assert_eq!(&reparsed, &doc);
        prop_assert_eq!(reparsed.canonical(), once);
    }
}
