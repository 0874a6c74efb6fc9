//! Local systems of sphere complexes over a simplicial base.
//!
//! The base carries one global vertex order, so every simplex is a strictly
//! increasing vertex list. A cell system assigns a sphere to each vertex and
//! an aggregation `fiber(u) → fiber(v)` to each edge `u < v`; its chain
//! system stores the contravariant subdivision maps `L(u, v) : R(v) → R(u)`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::aggmap::{fund_sign, subdivision_chain_map, validate_aggregation, Aggregation};
use crate::cellx::SphereComplex;
use crate::ratlin::{IntMatrix, RatMatrix};
use crate::simplicial::{Simplex, SimplicialComplex};

mod total;

pub use total::{total_complex, total_homology, vertical_sdr, Coefficients, SmallCell, TotalComplex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocError {
    UnknownVertex(String),
    FiberCount { expected: usize, found: usize },
    DimensionMismatch { vertex: usize },
    MissingTransition { edge: (usize, usize) },
    BadTransition { edge: (usize, usize), reason: String },
    FunctorialityBroken { simplex: Simplex },
    NonOrientable { edge: (usize, usize) },
}

impl fmt::Display for LocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocError::UnknownVertex(v) => write!(f, "unknown base vertex {v:?}"),
            LocError::FiberCount { expected, found } => write!(f, "expected {expected} fibers, found {found}"),
            LocError::DimensionMismatch { vertex } => write!(f, "fiber over vertex {vertex} has the wrong dimension"),
            LocError::MissingTransition { edge } => write!(f, "no transition on edge {edge:?}"),
            LocError::BadTransition { edge, reason } => write!(f, "transition on edge {edge:?}: {reason}"),
            LocError::FunctorialityBroken { simplex } => write!(f, "transitions do not compose on {simplex:?}"),
            LocError::NonOrientable { edge } => write!(f, "fiber orientations cannot be aligned along {edge:?}"),
        }
    }
}

/// A simplicial complex on the vertices `0..m`, with a label per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialBase {
    labels: Vec<String>,
    complex: SimplicialComplex,
}

impl SimplicialBase {
    /// `labels` fixes the global order; simplices are given by labels.
    pub fn new<S: AsRef<str>>(labels: Vec<String>, simplices: &[Vec<S>]) -> Result<Self, LocError> {
        let pos: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut facets: Vec<Simplex> = (0..labels.len()).map(|i| vec![i]).collect();
        for s in simplices {
            let mut f = Vec::with_capacity(s.len());
            for v in s {
                f.push(*pos.get(v.as_ref()).ok_or_else(|| LocError::UnknownVertex(v.as_ref().to_string()))?);
            }
            facets.push(f);
        }
        Ok(SimplicialBase { complex: SimplicialComplex::from_facets(facets), labels })
    }

    /// Renumber the vertices of `c` to `0..m` in increasing order; the labels
    /// are the original vertex numbers.
    pub fn from_complex(c: &SimplicialComplex) -> Self {
        let verts = c.vertices();
        let pos: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let facets: Vec<Simplex> = c.facets().iter().map(|s| s.iter().map(|v| pos[v]).collect()).collect();
        SimplicialBase {
            labels: verts.iter().map(ToString::to_string).collect(),
            complex: SimplicialComplex::from_facets(facets),
        }
    }

    /// The standard simplex `Δ^m` on vertices `0..=m`.
    pub fn simplex(m: usize) -> Self {
        Self::from_complex(&SimplicialComplex::from_facets([(0..=m).collect::<Vec<_>>()]))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> Option<usize> {
        self.complex.dim()
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.complex.simplices(k)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.simplices(1).iter().map(|e| (e[0], e[1])).collect()
    }
}

/// A sphere per base vertex and a cell map per base edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellLocalSystem {
    base: SimplicialBase,
    fibers: Vec<Arc<SphereComplex>>,
    maps: BTreeMap<(usize, usize), Vec<usize>>,
}

impl CellLocalSystem {
    pub fn new(
        base: SimplicialBase,
        fibers: Vec<Arc<SphereComplex>>,
        maps: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self, LocError> {
        let s = CellLocalSystem { base, fibers, maps };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<(), LocError> {
        let m = self.base.vertex_count();
        if self.fibers.len() != m {
            return Err(LocError::FiberCount { expected: m, found: self.fibers.len() });
        }
        let n = self.fibers.first().map_or(0, |f| f.n());
        if let Some(v) = self.fibers.iter().position(|f| f.n() != n) {
            return Err(LocError::DimensionMismatch { vertex: v });
        }
        for edge in self.base.edges() {
            let map = self.maps.get(&edge).ok_or(LocError::MissingTransition { edge })?;
            let r = validate_aggregation(&self.fibers[edge.0], &self.fibers[edge.1], map);
            if let Some(reason) = r.reason() {
                return Err(LocError::BadTransition { edge, reason });
            }
        }
        for t in self.base.simplices(2) {
            let (a, b, c) = (t[0], t[1], t[2]);
            let ab = &self.maps[&(a, b)];
            let bc = &self.maps[&(b, c)];
            let ac = &self.maps[&(a, c)];
            if ab.iter().enumerate().any(|(x, &y)| bc[y] != ac[x]) {
                return Err(LocError::FunctorialityBroken { simplex: t.clone() });
            }
        }
        Ok(())
    }

    /// All fibers equal, all transitions the identity.
    pub fn constant(base: SimplicialBase, fiber: Arc<SphereComplex>) -> Self {
        let id: Vec<usize> = (0..fiber.poset().len()).collect();
        let maps = base.edges().into_iter().map(|e| (e, id.clone())).collect();
        CellLocalSystem { fibers: vec![fiber; base.vertex_count()], base, maps }
    }

    /// The system over `Δ^m` given by a tower `S_0 → S_1 → … → S_m`.
    pub fn from_tower(tower: &[Aggregation]) -> Result<Self, LocError> {
        let m = tower.len();
        let base = SimplicialBase::simplex(m);
        let mut fibers: Vec<Arc<SphereComplex>> = tower.iter().map(|a| a.source().clone()).collect();
        fibers.push(tower.last().expect("nonempty tower").target().clone());
        let mut maps = BTreeMap::new();
        for i in 0..m {
            let mut cur: Vec<usize> = (0..fibers[i].poset().len()).collect();
            for (j, a) in tower.iter().enumerate().skip(i) {
                cur = cur.iter().map(|&c| a.cell_map()[c]).collect();
                maps.insert((i, j + 1), cur.clone());
            }
        }
        Self::new(base, fibers, maps)
    }

    pub fn base(&self) -> &SimplicialBase {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.fibers[0].n()
    }

    pub fn fiber(&self, v: usize) -> &Arc<SphereComplex> {
        &self.fibers[v]
    }

    pub fn fibers(&self) -> &[Arc<SphereComplex>] {
        &self.fibers
    }

    pub fn cell_map(&self, u: usize, v: usize) -> &[usize] {
        &self.maps[&(u, v)]
    }

    pub fn maps(&self) -> &BTreeMap<(usize, usize), Vec<usize>> {
        &self.maps
    }

    /// Renumber the cells of the fiber over `v` (new cell `i` is old cell
    /// `order[i]`), adjusting the transitions.
    pub fn relabel_fiber(&self, v: usize, order: &[usize]) -> Self {
        let mut inv = vec![0; order.len()];
        for (i, &o) in order.iter().enumerate() {
            inv[o] = i;
        }
        let mut out = self.clone();
        out.fibers[v] = Arc::new(self.fibers[v].relabeled(order));
        for (&(a, b), map) in out.maps.iter_mut() {
            if a == v {
                *map = order.iter().map(|&o| map[o]).collect();
            }
            if b == v {
                *map = map.iter().map(|&c| inv[c]).collect();
            }
        }
        out
    }

    /// Reverse the orientation of one cell in the fiber over `v`.
    pub fn flip_fiber_cell(&self, v: usize, cell: usize) -> Self {
        let mut out = self.clone();
        out.fibers[v] = Arc::new(self.fibers[v].flip_cell(cell));
        out
    }

    /// Transport along a poset automorphism `phi` of the fiber over `v`:
    /// maps into `v` are followed by `phi`, maps out of `v` precomposed
    /// with `phi⁻¹`.
    pub fn twisted_by(&self, v: usize, phi: &[usize]) -> Self {
        let p = self.fibers[v].poset();
        assert!(is_automorphism(p, phi), "not an automorphism of the fiber");
        let mut inv = vec![0; phi.len()];
        for (i, &o) in phi.iter().enumerate() {
            inv[o] = i;
        }
        let mut out = self.clone();
        for (&(a, b), map) in out.maps.iter_mut() {
            if b == v {
                *map = map.iter().map(|&c| phi[c]).collect();
            }
            if a == v {
                *map = inv.iter().map(|&c| map[c]).collect();
            }
        }
        out
    }

    /// The same system with fibers reversed so that every transition
    /// carries the fundamental class to the fundamental class.
    pub fn aligned(&self) -> Result<Self, LocError> {
        let (flip, _) = alignment(self)?;
        let fibers = self
            .fibers
            .iter()
            .zip(&flip)
            .map(|(f, &s)| if s == -1 { Arc::new(f.reversed()) } else { f.clone() })
            .collect();
        Ok(CellLocalSystem { base: self.base.clone(), fibers, maps: self.maps.clone() })
    }
}

/// `phi` is a bijection preserving dimensions and covering relations.
pub fn is_automorphism(p: &crate::cellx::CellPoset, phi: &[usize]) -> bool {
    if phi.len() != p.len() {
        return false;
    }
    let mut seen = vec![false; phi.len()];
    for &x in phi {
        if x >= phi.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    (0..p.len()).all(|c| p.dim(phi[c]) == p.dim(c))
        && p.covers().into_iter().all(|(a, b)| p.faces(phi[b]).contains(&phi[a]))
}

/// Oriented fibers and contravariant chain maps `L(u, v) : R(v) → R(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLocalSystem {
    base: SimplicialBase,
    fibers: Vec<Arc<SphereComplex>>,
    maps: BTreeMap<(usize, usize), Vec<IntMatrix>>,
}

impl ChainLocalSystem {
    /// Checks chain maps, augmentation and fundamental classes, and
    /// `L(a, c) = L(a, b) L(b, c)` on every 2-simplex.
    pub fn new(
        base: SimplicialBase,
        fibers: Vec<Arc<SphereComplex>>,
        maps: BTreeMap<(usize, usize), Vec<IntMatrix>>,
    ) -> Result<Self, LocError> {
        let s = ChainLocalSystem { base, fibers, maps };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<(), LocError> {
        let m = self.base.vertex_count();
        if self.fibers.len() != m {
            return Err(LocError::FiberCount { expected: m, found: self.fibers.len() });
        }
        let n = self.n();
        if let Some(v) = self.fibers.iter().position(|f| f.n() != n) {
            return Err(LocError::DimensionMismatch { vertex: v });
        }
        for edge in self.base.edges() {
            let l = self.maps.get(&edge).ok_or(LocError::MissingTransition { edge })?;
            let (fu, fv) = (&self.fibers[edge.0], &self.fibers[edge.1]);
            let bad = |reason: &str| LocError::BadTransition { edge, reason: reason.to_string() };
            if l.len() != n + 1 || (0..=n).any(|k| l[k].shape() != (fu.rank(k), fv.rank(k))) {
                return Err(bad("wrong shape"));
            }
            if !(1..=n).all(|k| fu.gamma(k) * &l[k] == &l[k - 1] * fv.gamma(k)) {
                return Err(bad("not a chain map"));
            }
            let ones_u = IntMatrix::row_vector(vec![BigInt::one(); fu.w()]);
            let ones_v = IntMatrix::row_vector(vec![BigInt::one(); fv.w()]);
            if &ones_u * &l[0] != ones_v {
                return Err(bad("augmentation not preserved"));
            }
            if fund_sign(fu, fv, l) != Some(1) {
                return Err(bad("fundamental class not preserved"));
            }
        }
        for t in self.base.simplices(2) {
            let (a, b, c) = (t[0], t[1], t[2]);
            let ok = (0..=n).all(|k| self.maps[&(a, c)][k] == &self.maps[&(a, b)][k] * &self.maps[&(b, c)][k]);
            if !ok {
                return Err(LocError::FunctorialityBroken { simplex: t.clone() });
            }
        }
        Ok(())
    }

    pub fn constant(base: SimplicialBase, fiber: Arc<SphereComplex>) -> Self {
        let id: Vec<IntMatrix> = (0..=fiber.n()).map(|k| IntMatrix::identity(fiber.rank(k))).collect();
        let maps = base.edges().into_iter().map(|e| (e, id.clone())).collect();
        ChainLocalSystem { fibers: vec![fiber; base.vertex_count()], base, maps }
    }

    pub fn base(&self) -> &SimplicialBase {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.fibers[0].n()
    }

    pub fn fiber(&self, v: usize) -> &Arc<SphereComplex> {
        &self.fibers[v]
    }

    pub fn fibers(&self) -> &[Arc<SphereComplex>] {
        &self.fibers
    }

    /// `L(u, v)_k : R_k(v) → R_k(u)` for `u < v` spanning an edge.
    pub fn map(&self, u: usize, v: usize, k: usize) -> &IntMatrix {
        &self.maps[&(u, v)][k]
    }

    pub fn map_rat(&self, u: usize, v: usize, k: usize) -> RatMatrix {
        self.map(u, v, k).to_rat()
    }

    pub fn maps(&self) -> &BTreeMap<(usize, usize), Vec<IntMatrix>> {
        &self.maps
    }

    /// Every fiber with the opposite orientation.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.fibers = self.fibers.iter().map(|f| Arc::new(f.reversed())).collect();
        out
    }
}

/// Orient the transitions: solve for the subdivision chain maps and reverse
/// fibers so that every transition preserves the fundamental class. In each
/// connected component the fiber over the smallest vertex keeps its given
/// orientation.
pub fn to_chain_system(cs: &CellLocalSystem) -> Result<ChainLocalSystem, LocError> {
    let (flip, chains) = alignment(cs)?;
    let fibers =
        cs.fibers.iter().zip(&flip).map(|(f, &s)| if s == -1 { Arc::new(f.reversed()) } else { f.clone() }).collect();
    ChainLocalSystem::new(cs.base.clone(), fibers, chains)
}

/// Per-vertex orientation signs (`-1` where the fiber is reversed) and the
/// subdivision chain maps of the given orientations.
fn alignment(cs: &CellLocalSystem) -> Result<(Vec<i8>, BTreeMap<(usize, usize), Vec<IntMatrix>>), LocError> {
    let base = &cs.base;
    let m = base.vertex_count();
    let mut chains = BTreeMap::new();
    let mut signs = BTreeMap::new();
    for edge in base.edges() {
        let (u, v) = edge;
        let map = &cs.maps[&edge];
        let c = subdivision_chain_map(&cs.fibers[u], &cs.fibers[v], map)
            .map_err(|e| LocError::BadTransition { edge, reason: format!("{e}") })?;
        let s = fund_sign(&cs.fibers[u], &cs.fibers[v], &c).ok_or_else(|| LocError::BadTransition {
            edge,
            reason: "fundamental class not carried to a fundamental class".to_string(),
        })?;
        signs.insert(edge, s);
        chains.insert(edge, c);
    }
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); m];
    for (&(u, v), &s) in &signs {
        adj[u].push((v, s));
        adj[v].push((u, s));
    }
    let mut flip: Vec<Option<i8>> = vec![None; m];
    for root in 0..m {
        if flip[root].is_some() {
            continue;
        }
        flip[root] = Some(1);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let fu = flip[u].expect("visited");
            for &(v, s) in &adj[u] {
                let want = fu * s;
                match flip[v] {
                    None => {
                        flip[v] = Some(want);
                        queue.push_back(v);
                    }
                    Some(f) if f != want => {
                        return Err(LocError::NonOrientable { edge: (u.min(v), u.max(v)) });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok((flip.into_iter().map(|f| f.expect("every vertex is visited")).collect(), chains))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn base_from_labels() {
        let b = SimplicialBase::new(vec!["a".into(), "b".into(), "c".into()], &[vec!["a", "c"], vec!["b"]]).unwrap();
        assert_eq!(b.edges(), vec![(0, 2)]);
        assert_eq!(b.find("c"), Some(2));
        assert!(matches!(SimplicialBase::new(labels(2), &[vec!["0", "9"]]), Err(LocError::UnknownVertex(_))));
        assert_eq!(SimplicialBase::simplex(3).complex().counts(), vec![4, 6, 4, 1]);
    }

    #[test]
    fn constant_system_has_identity_maps() {
        let s = Arc::new(build::polygon(5));
        let c = to_chain_system(&CellLocalSystem::constant(SimplicialBase::simplex(2), s)).unwrap();
        for l in c.maps().values() {
            assert!(l.iter().all(IntMatrix::is_identity));
        }
    }

    #[test]
    fn one_edge_matches_aggregation() {
        let a = build::polygon_coarsening(2, 3);
        let cs = CellLocalSystem::from_tower(core::slice::from_ref(&a)).unwrap();
        let c = to_chain_system(&cs).unwrap();
        for k in 0..=1 {
            assert_eq!(c.map(0, 1, k), a.chain(k));
        }
    }

    #[test]
    fn broken_composition_detected() {
        let s = Arc::new(build::polygon(4));
        let mut maps = BTreeMap::new();
        let id: Vec<usize> = (0..8).collect();
        // the rotation by one step, as a cell map
        let p = s.poset();
        let rot: Vec<usize> = (0..8)
            .map(|c| {
                let name = p.id(c);
                let (kind, i) = name.split_at(1);
                let i: usize = i.parse().unwrap();
                p.find(&format!("{kind}{}", (i + 1) % 4)).unwrap()
            })
            .collect();
        maps.insert((0, 1), rot);
        maps.insert((1, 2), id.clone());
        maps.insert((0, 2), id);
        let e = CellLocalSystem::new(SimplicialBase::simplex(2), vec![s.clone(), s.clone(), s], maps).unwrap_err();
        assert_eq!(e, LocError::FunctorialityBroken { simplex: vec![0, 1, 2] });
    }

    #[test]
    fn orientation_alignment_reverses_fibers() {
        let a = build::polygon_coarsening(2, 3);
        let fibers = vec![Arc::new(a.source().reversed()), a.target().clone()];
        let mut maps = BTreeMap::new();
        maps.insert((0, 1), a.cell_map().to_vec());
        let cs = CellLocalSystem::new(SimplicialBase::simplex(1), fibers, maps).unwrap();
        let c = to_chain_system(&cs).unwrap();
        assert_eq!(c.fiber(0).fund_class(), cs.fiber(0).fund_class());
        assert_eq!(**c.fiber(1), a.target().reversed());
    }

    #[test]
    fn tower_system_is_functorial() {
        let tower = build::subdivision_tower(Arc::new(build::simplex_sphere(3)), 3, |m| m / 2);
        let cs = CellLocalSystem::from_tower(&tower).unwrap();
        let c = to_chain_system(&cs).unwrap();
        assert_eq!(c.base().simplices(3).len(), 1);
        assert_eq!(c.reversed().reversed(), c);
    }

    #[test]
    fn gauge_moves_preserve_validity() {
        let tower = build::polygon_coarsening(2, 6);
        let cs = CellLocalSystem::from_tower(core::slice::from_ref(&tower)).unwrap();
        let order: Vec<usize> = (0..cs.fiber(1).poset().len()).rev().collect();
        assert!(to_chain_system(&cs.relabel_fiber(1, &order)).is_ok());
        assert!(to_chain_system(&cs.flip_fiber_cell(0, 13)).is_ok());
        let p = cs.fiber(1).poset();
        let rot: Vec<usize> = (0..p.len())
            .map(|c| {
                let (kind, i) = p.id(c).split_at(1);
                p.find(&format!("{kind}{}", (i.parse::<usize>().unwrap() + 2) % 6)).unwrap()
            })
            .collect();
        assert!(is_automorphism(p, &rot));
        assert!(to_chain_system(&cs.twisted_by(1, &rot)).is_ok());
    }
}
