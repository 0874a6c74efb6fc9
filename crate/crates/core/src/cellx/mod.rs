//! Face posets of regular cell complexes, their orientation into based
//! integer chain complexes, duality and homological sphere validation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::simplicial::SimplicialComplex;

mod orient;
mod validate;

pub use orient::{chain_sphere, dual, orient, orient_with, BasedChainComplex, SphereComplex};
pub use validate::{has_sphere_homology, validate_sphere, validated};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellError {
    DuplicateId(String),
    UnknownId(String),
    BadCover { face: String, cell: String },
    Invalid(String),
    SignInconsistency(String),
    NotSpherical(String),
    BadFundClass(String),
}

impl fmt::Display for CellError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellError::DuplicateId(id) => write!(f, "duplicate cell id {id:?}"),
            CellError::UnknownId(id) => write!(f, "unknown cell id {id:?}"),
            CellError::BadCover { face, cell } => {
                write!(f, "covering pair ({face:?}, {cell:?}) does not raise dimension by one")
            }
            CellError::Invalid(r) => write!(f, "invalid sphere: {r}"),
            CellError::SignInconsistency(id) => {
                write!(f, "no consistent incidence signs on the boundary of {id:?}")
            }
            CellError::NotSpherical(r) => write!(f, "not a homology sphere: {r}"),
            CellError::BadFundClass(r) => write!(f, "bad fundamental class: {r}"),
        }
    }
}

/// A finite graded poset given by its covering pairs. Cells are numbered
/// `0..len()` in input order; within each dimension that order is the basis
/// order of every matrix built from the poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellPoset {
    ids: Vec<String>,
    dims: Vec<usize>,
    faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
    by_dim: Vec<Vec<usize>>,
    pos: Vec<usize>,
    lookup: BTreeMap<String, usize>,
}

impl CellPoset {
    pub fn new<S: Into<String>>(
        cells: impl IntoIterator<Item = (S, usize)>,
        covers: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self, CellError> {
        let mut ids = Vec::new();
        let mut dims = Vec::new();
        let mut lookup = BTreeMap::new();
        for (id, d) in cells {
            let id: String = id.into();
            if lookup.insert(id.clone(), ids.len()).is_some() {
                return Err(CellError::DuplicateId(id));
            }
            ids.push(id);
            dims.push(d);
        }
        let mut pairs = Vec::new();
        for (a, b) in covers {
            let (a, b): (String, String) = (a.into(), b.into());
            let ia = *lookup.get(&a).ok_or_else(|| CellError::UnknownId(a.clone()))?;
            let ib = *lookup.get(&b).ok_or_else(|| CellError::UnknownId(b.clone()))?;
            if dims[ia] + 1 != dims[ib] {
                return Err(CellError::BadCover { face: a, cell: b });
            }
            pairs.push((ia, ib));
        }
        Ok(Self::assemble(ids, dims, pairs))
    }

    /// Build from dimensions and covering pairs of indices; ids are the
    /// decimal indices.
    pub fn from_indexed(dims: Vec<usize>, covers: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let ids = (0..dims.len()).map(|i| alloc::format!("{i}")).collect();
        let pairs: Vec<(usize, usize)> = covers.into_iter().collect();
        for &(a, b) in &pairs {
            assert_eq!(dims[a] + 1, dims[b], "cover must raise dimension by one");
        }
        Self::assemble(ids, dims, pairs)
    }

    /// Same as [`CellPoset::from_indexed`] with explicit ids.
    pub fn from_parts(ids: Vec<String>, dims: Vec<usize>, covers: impl IntoIterator<Item = (usize, usize)>) -> Self {
        assert_eq!(ids.len(), dims.len());
        let pairs: Vec<(usize, usize)> = covers.into_iter().collect();
        for &(a, b) in &pairs {
            assert_eq!(dims[a] + 1, dims[b], "cover must raise dimension by one");
        }
        Self::assemble(ids, dims, pairs)
    }

    fn assemble(ids: Vec<String>, dims: Vec<usize>, pairs: Vec<(usize, usize)>) -> Self {
        let n = ids.len();
        let mut face_sets = vec![BTreeSet::new(); n];
        let mut coface_sets = vec![BTreeSet::new(); n];
        for (a, b) in pairs {
            face_sets[b].insert(a);
            coface_sets[a].insert(b);
        }
        let top = dims.iter().copied().max().map_or(0, |d| d + 1);
        let mut by_dim = vec![Vec::new(); top];
        let mut pos = vec![0; n];
        for (c, &d) in dims.iter().enumerate() {
            pos[c] = by_dim[d].len();
            by_dim[d].push(c);
        }
        let lookup = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        CellPoset {
            ids,
            dims,
            faces: face_sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            cofaces: coface_sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            by_dim,
            pos,
            lookup,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, c: usize) -> &str {
        &self.ids[c]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn find(&self, id: &str) -> Option<usize> {
        self.lookup.get(id).copied()
    }

    pub fn dim(&self, c: usize) -> usize {
        self.dims[c]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Largest cell dimension, `None` if empty.
    pub fn top_dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    /// Cells of dimension `k` in basis order.
    pub fn cells(&self, k: usize) -> &[usize] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.cells(k).len()
    }

    /// Position of `c` among the cells of its dimension.
    pub fn pos(&self, c: usize) -> usize {
        self.pos[c]
    }

    /// Cells covered by `c`.
    pub fn faces(&self, c: usize) -> &[usize] {
        &self.faces[c]
    }

    /// Cells covering `c`.
    pub fn cofaces(&self, c: usize) -> &[usize] {
        &self.cofaces[c]
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in 0..self.len() {
            for &f in &self.faces[c] {
                out.push((f, c));
            }
        }
        out
    }

    /// All cells `≤ c`.
    pub fn closed_ideal(&self, c: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                stack.extend_from_slice(&self.faces[x]);
            }
        }
        seen
    }

    /// All cells `< c`.
    pub fn open_ideal(&self, c: usize) -> BTreeSet<usize> {
        let mut s = self.closed_ideal(c);
        s.remove(&c);
        s
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.dims[a] <= self.dims[b] && (a == b || self.closed_ideal(b).contains(&a))
    }

    /// The order complex, with one vertex per cell (vertex `i` is cell `i`).
    pub fn order_complex(&self) -> SimplicialComplex {
        self.order_complex_of(&(0..self.len()).collect())
    }

    /// Order complex of a downward-closed set of cells.
    pub fn order_complex_of(&self, cells: &BTreeSet<usize>) -> SimplicialComplex {
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let maximal = cells.iter().copied().filter(|&c| !self.cofaces[c].iter().any(|d| cells.contains(d)));
        for m in maximal {
            let mut path = vec![m];
            self.descend(cells, &mut path, &mut chains);
        }
        SimplicialComplex::from_facets(chains)
    }

    fn descend(&self, cells: &BTreeSet<usize>, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("nonempty path");
        let below: Vec<usize> = self.faces[last].iter().copied().filter(|f| cells.contains(f)).collect();
        if below.is_empty() {
            out.push(path.clone());
            return;
        }
        for f in below {
            path.push(f);
            self.descend(cells, path, out);
            path.pop();
        }
    }

    /// The opposite poset of an `n`-dimensional poset: the cell `c` gets
    /// dimension `n - dim c`, ids and input order are kept.
    pub fn opposite(&self, n: usize) -> CellPoset {
        let dims = self.dims.iter().map(|&d| n - d).collect();
        let pairs = self.covers().into_iter().map(|(a, b)| (b, a)).collect();
        Self::assemble(self.ids.clone(), dims, pairs)
    }

    /// Reorder the cells: the new cell `k` is the old cell `order[k]`.
    pub fn reordered(&self, order: &[usize]) -> CellPoset {
        assert_eq!(order.len(), self.len());
        let mut inv = vec![usize::MAX; self.len()];
        for (k, &o) in order.iter().enumerate() {
            inv[o] = k;
        }
        let ids = order.iter().map(|&o| self.ids[o].clone()).collect();
        let dims = order.iter().map(|&o| self.dims[o]).collect();
        let pairs = self.covers().into_iter().map(|(a, b)| (inv[a], inv[b])).collect();
        Self::assemble(ids, dims, pairs)
    }

    /// Euler characteristic from cell counts.
    pub fn cell_euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;

    #[test]
    fn order_complex_examples() {
        let point = CellPoset::from_indexed(vec![0], []);
        assert_eq!(point.order_complex().counts(), vec![1]);
        let interval = CellPoset::from_indexed(vec![0, 0, 1], [(0, 2), (1, 2)]);
        assert_eq!(interval.order_complex().counts(), vec![3, 2]);
        let tri = build::polygon(3);
        let oc = tri.poset().order_complex();
        assert_eq!(oc.counts(), vec![6, 6]);
        // brute force: chains of a graded poset of rank 1 are the cells and
        // the covering pairs
        assert_eq!(oc.count(1), tri.poset().covers().len());
    }

    #[test]
    fn construction_errors() {
        let e = CellPoset::new([("a", 0), ("a", 1)], []).unwrap_err();
        assert_eq!(e, CellError::DuplicateId("a".into()));
        let e = CellPoset::new([("a", 0), ("b", 2)], [("a", "b")]).unwrap_err();
        assert!(matches!(e, CellError::BadCover { .. }));
        let e = CellPoset::new([("a", 0)], [("a", "z")]).unwrap_err();
        assert_eq!(e, CellError::UnknownId("z".into()));
    }

    #[test]
    fn ideals_and_order() {
        let s = build::simplex_sphere(3);
        let p = s.poset();
        let top = p.cells(2)[0];
        assert_eq!(p.closed_ideal(top).len(), 7);
        assert_eq!(p.open_ideal(top).len(), 6);
        assert!(p.leq(p.faces(top)[0], top));
        let opp = p.opposite(2);
        assert_eq!(opp.count(0), 4);
        assert_eq!(opp.count(1), 6);
    }
}
