//! Regenerate the sample files under `data/`:
//! `cargo run -p eulerch-tools --example write_data -- crates/tools/data`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use eulerch::build::{polygon, polygon_aggregation, polygon_coarsening, simplex_sphere, subdivision_tower};
use eulerch::locsys::{CellLocalSystem, SimplicialBase};
use eulerch::simplicial::simplex_boundary;
use eulerch::trigest::{hopf_bundle, product_bundle};
use eulerch_tools::commands::{add_system, bundle_document, complex_document};
use eulerch_tools::doc::{AggregationDoc, CycleDoc, Document, FileDoc};

fn write(dir: &Path, name: &str, doc: FileDoc) {
    let path = dir.join(name);
    std::fs::write(&path, doc.canonical()).expect("write data file");
    println!("wrote {}", path.display());
}

fn polygon_chain() -> Document {
    let mut doc = Document::default();
    for m in [2, 3, 6, 12] {
        doc.complexes.insert(format!("gon{m}"), complex_document(&polygon(m)));
    }
    let aggs = [
        ("gon12-to-gon6", polygon_coarsening(2, 6)),
        ("gon6-to-gon3", polygon_coarsening(2, 3)),
        ("gon6-to-gon3-uneven", polygon_aggregation(&[1, 2, 3])),
        ("gon3-to-gon2", polygon_aggregation(&[2, 1])),
    ];
    for (name, a) in aggs {
        let (s, t) = (a.source().poset(), a.target().poset());
        let cell_map =
            a.cell_map().iter().enumerate().map(|(c, &x)| (s.id(c).to_string(), t.id(x).to_string())).collect();
        let (m0, m1) = (a.source().w(), a.target().w());
        doc.aggregations
            .insert(name.into(), AggregationDoc { source: format!("gon{m0}"), target: format!("gon{m1}"), cell_map });
    }
    doc.chains.insert("twelve-six-three".into(), vec!["gon12-to-gon6".into(), "gon6-to-gon3".into()]);
    doc.chains.insert("six-three-two".into(), vec!["gon6-to-gon3-uneven".into(), "gon3-to-gon2".into()]);
    doc
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "crates/tools/data".into()));
    std::fs::create_dir_all(&dir).expect("create data directory");

    write(&dir, "triangle.json", FileDoc::Complex(complex_document(&polygon(3))));
    write(&dir, "polygon_chain.json", FileDoc::Document(polygon_chain()));

    let mut hopf = Document::default();
    hopf.bundles.insert("hopf".into(), bundle_document(&hopf_bundle()));
    let fund: BTreeMap<String, i64> =
        [("1,2,3", 1), ("0,2,3", -1), ("0,1,3", 1), ("0,1,2", -1)].into_iter().map(|(k, v)| (k.into(), v)).collect();
    hopf.cycles.insert("fundamental".into(), CycleDoc { of: Some("hopf".into()), chain: fund });
    write(&dir, "hopf_bundle.json", FileDoc::Document(hopf));

    let mut product = Document::default();
    product.bundles.insert(
        "circle-times-sphere".into(),
        bundle_document(&product_bundle(&simplex_boundary(2), &simplex_boundary(3))),
    );
    write(&dir, "product_bundle.json", FileDoc::Document(product));

    let mut constant = Document::default();
    let base = SimplicialBase::from_complex(&simplex_boundary(3));
    let sys = CellLocalSystem::constant(base, Arc::new(polygon(3)));
    add_system(&mut constant, "constant", &sys, |v| sys.base().label(v).to_string()).expect("aligned");
    write(&dir, "constant_circle.json", FileDoc::Document(constant));

    let mut seed = 7u64;
    let tower = subdivision_tower(Arc::new(simplex_sphere(3)), 4, |m| {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 33) as usize % m
    });
    let sys = CellLocalSystem::from_tower(&tower).expect("towers are valid systems");
    let mut tower_doc = Document::default();
    add_system(&mut tower_doc, "tower", &sys, |v| sys.base().label(v).to_string()).expect("aligned");
    write(&dir, "tower_n2.json", FileDoc::Document(tower_doc));
}
