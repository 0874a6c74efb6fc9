#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::RngExt;

use eulerch::aggmap::{fund_sign, subdivision_chain_map, Aggregation};
use eulerch::build::{polygon, polygon_aggregation, prism_sphere, simplex_sphere, subdivision_tower};
use eulerch::cellx::{CellPoset, SphereComplex};
use eulerch::locsys::{is_automorphism, CellLocalSystem};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn random_sizes(rng: &mut StdRng, total: usize, parts: usize) -> Vec<usize> {
    let mut sizes = vec![1; parts];
    for _ in parts..total {
        sizes[rng.random_range(0..parts)] += 1;
    }
    sizes
}

/// A tower of `len` polygon aggregations, finest first.
pub fn polygon_tower(rng: &mut StdRng, len: usize) -> Vec<Aggregation> {
    let mut m = vec![rng.random_range(2..=4)];
    for _ in 0..len {
        let last = *m.last().unwrap();
        m.push(last + rng.random_range(0..=3));
    }
    m.reverse();
    (0..len).map(|i| polygon_aggregation(&random_sizes(rng, m[i], m[i + 1]))).collect()
}

/// Towers of stellar subdivisions of a triangle, a tetrahedron boundary or
/// a prism boundary.
pub fn stellar_tower(rng: &mut StdRng, n: usize, len: usize) -> Vec<Aggregation> {
    let start = match (n, rng.random_range(0..2)) {
        (1, _) => polygon(3),
        (2, 0) => simplex_sphere(3),
        (2, _) => prism_sphere(2, 1),
        _ => simplex_sphere(n + 1),
    };
    subdivision_tower(Arc::new(start), len, |m| rng.random_range(0..m))
}

pub fn system(tower: &[Aggregation]) -> CellLocalSystem {
    CellLocalSystem::from_tower(tower).expect("towers are valid systems")
}

/// A non-identity automorphism of a small poset accepted by `accept`,
/// found by backtracking along covering relations.
pub fn automorphism(p: &CellPoset, accept: impl Fn(&[usize]) -> bool) -> Option<Vec<usize>> {
    let n = p.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        order.push(root);
        let mut i = order.len() - 1;
        while i < order.len() {
            let c = order[i];
            for &x in p.faces(c).iter().chain(p.cofaces(c)) {
                if !seen[x] {
                    seen[x] = true;
                    order.push(x);
                }
            }
            i += 1;
        }
    }
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut budget = 200_000usize;
    if search(p, &order, 0, &mut phi, &mut used, &mut budget, &accept) {
        Some(phi)
    } else {
        None
    }
}

fn search(
    p: &CellPoset,
    order: &[usize],
    k: usize,
    phi: &mut [usize],
    used: &mut [bool],
    budget: &mut usize,
    accept: &dyn Fn(&[usize]) -> bool,
) -> bool {
    if k == order.len() {
        return phi.iter().enumerate().any(|(i, &x)| i != x) && is_automorphism(p, phi) && accept(phi);
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let c = order[k];
    for t in 0..p.len() {
        if used[t] || p.dim(t) != p.dim(c) || (k == 0 && t == c) {
            continue;
        }
        let consistent = p.faces(c).iter().all(|&f| phi[f] == usize::MAX || p.faces(t).contains(&phi[f]))
            && p.cofaces(c).iter().all(|&f| phi[f] == usize::MAX || p.cofaces(t).contains(&phi[f]))
            && p.faces(c).len() == p.faces(t).len()
            && p.cofaces(c).len() == p.cofaces(t).len();
        if !consistent {
            continue;
        }
        phi[c] = t;
        used[t] = true;
        if search(p, order, k + 1, phi, used, budget, accept) {
            return true;
        }
        phi[c] = usize::MAX;
        used[t] = false;
    }
    false
}

/// Whether the automorphism `phi` of `s` preserves its orientation.
pub fn preserves_orientation(s: &SphereComplex, phi: &[usize]) -> bool {
    let c = subdivision_chain_map(s, s, phi).expect("automorphisms are subdivisions");
    fund_sign(s, s, &c) == Some(1)
}
