//! Aggregations (coarsening maps) between sphere complexes and the
//! subdivision chain maps they induce.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cellx::{has_sphere_homology, SphereComplex};
use crate::ratlin::{IntMatrix, RatMatrix};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AggError {
    Invalid(String),
    NoConsistentSigns(String),
    /// `R_n [S_1] = -[S_0]`: the two orientations disagree.
    OrientationMismatch,
    Mismatch,
}

impl fmt::Display for AggError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggError::Invalid(r) => write!(f, "invalid aggregation: {r}"),
            AggError::NoConsistentSigns(r) => write!(f, "no consistent subdivision signs: {r}"),
            AggError::OrientationMismatch => f.write_str("aggregation reverses the fundamental class"),
            AggError::Mismatch => f.write_str("middle complexes of the composition differ"),
        }
    }
}

/// A coarsening `source → target` of `n`-spheres: `cell_map[c]` is the
/// target cell whose interior contains the interior of source cell `c`.
/// `chain[k]` is the degree-`k` subdivision map `R_k(target) → R_k(source)`,
/// a `(#source k-cells) × (#target k-cells)` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregation {
    source: Arc<SphereComplex>,
    target: Arc<SphereComplex>,
    cell_map: Vec<usize>,
    chain: Vec<IntMatrix>,
}

impl Aggregation {
    /// Validate the cell map, solve for the chain map and check that it
    /// carries `[target]` to `[source]`.
    pub fn new(source: Arc<SphereComplex>, target: Arc<SphereComplex>, cell_map: Vec<usize>) -> Result<Self, AggError> {
        let report = validate_aggregation(&source, &target, &cell_map);
        if let Some(r) = report.reason() {
            return Err(AggError::Invalid(r));
        }
        let chain = subdivision_chain_map(&source, &target, &cell_map)?;
        if fund_sign(&source, &target, &chain) != Some(1) {
            return Err(AggError::OrientationMismatch);
        }
        Ok(Aggregation { source, target, cell_map, chain })
    }

    pub fn identity(s: Arc<SphereComplex>) -> Self {
        let n = s.n();
        let chain = (0..=n).map(|k| IntMatrix::identity(s.rank(k))).collect();
        Aggregation { cell_map: (0..s.poset().len()).collect(), source: s.clone(), target: s, chain }
    }

    pub fn source(&self) -> &Arc<SphereComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SphereComplex> {
        &self.target
    }

    pub fn cell_map(&self) -> &[usize] {
        &self.cell_map
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    /// `R_k : R_k(target) → R_k(source)`.
    pub fn chain(&self, k: usize) -> &IntMatrix {
        &self.chain[k]
    }

    pub fn chain_rat(&self, k: usize) -> RatMatrix {
        self.chain[k].to_rat()
    }

    pub fn chains(&self) -> &[IntMatrix] {
        &self.chain
    }

    pub fn is_identity(&self) -> bool {
        self.cell_map.iter().enumerate().all(|(i, &j)| i == j) && self.chain.iter().all(IntMatrix::is_identity)
    }

    /// Exact check of `γ^{S_0}_k R_k = R_{k-1} γ^{S_1}_k` in every degree.
    pub fn is_chain_map(&self) -> bool {
        (1..=self.n()).all(|k| self.source.gamma(k) * &self.chain[k] == &self.chain[k - 1] * self.target.gamma(k))
    }
}

/// `R_n [S_1] = σ [S_0]`; returns `σ` or `None` if neither sign fits.
pub fn fund_sign(source: &SphereComplex, target: &SphereComplex, chain: &[IntMatrix]) -> Option<i8> {
    let n = source.n();
    let img = &chain[n] * &target.fund_column();
    let s0 = source.fund_column();
    if img == s0 {
        Some(1)
    } else if img == -&s0 {
        Some(-1)
    } else {
        None
    }
}

/// Combinatorial checks that `cell_map` is an aggregation `source → target`.
pub fn validate_aggregation(source: &SphereComplex, target: &SphereComplex, cell_map: &[usize]) -> Report {
    let mut r = Report::new("aggregation");
    let (p0, p1) = (source.poset(), target.poset());
    if !r.check("dimension", source.n() == target.n(), format!("source n={}, target n={}", source.n(), target.n())) {
        return r;
    }
    if !r.check(
        "total map",
        cell_map.len() == p0.len() && cell_map.iter().all(|&c| c < p1.len()),
        "every source cell needs a target cell",
    ) {
        return r;
    }

    let mut bad = None;
    for c in 0..p0.len() {
        if p1.dim(cell_map[c]) < p0.dim(c) {
            bad = Some(format!("{:?} maps to the lower-dimensional {:?}", p0.id(c), p1.id(cell_map[c])));
            break;
        }
    }
    if !r.check("interiors into interiors", bad.is_none(), bad.unwrap_or_default()) {
        return r;
    }

    let mut bad = None;
    for (a, b) in p0.covers() {
        if !p1.leq(cell_map[a], cell_map[b]) {
            bad = Some(format!("cover ({:?}, {:?}) is not preserved", p0.id(a), p0.id(b)));
            break;
        }
    }
    if !r.check("order preserving", bad.is_none(), bad.unwrap_or_default()) {
        return r;
    }

    let mut bad = None;
    for &v in p1.cells(0) {
        let pre: Vec<usize> = (0..p0.len()).filter(|&c| cell_map[c] == v).collect();
        if pre.len() != 1 {
            bad = Some(format!("target vertex {:?} has {} preimages", p1.id(v), pre.len()));
            break;
        }
    }
    if !r.check("vertices", bad.is_none(), bad.unwrap_or_default()) {
        return r;
    }

    let mut bad = None;
    for c in 0..p1.len() {
        let k = p1.dim(c);
        if k == 0 {
            continue;
        }
        let below = p1.closed_ideal(c);
        let closed: BTreeSet<usize> = (0..p0.len()).filter(|&x| below.contains(&cell_map[x])).collect();
        let open: BTreeSet<usize> = closed.iter().copied().filter(|&x| cell_map[x] != c).collect();
        let top_dim = closed.iter().map(|&x| p0.dim(x)).max();
        let has_top = (0..p0.len()).any(|x| cell_map[x] == c && p0.dim(x) == k);
        if top_dim != Some(k) || !has_top {
            bad = Some(format!("no {k}-cells over {:?}", p1.id(c)));
            break;
        }
        let h = p0.order_complex_of(&closed).homology_z();
        if !(h.is_torsion_free() && trimmed(&h.betti) == [1]) {
            bad = Some(format!("preimage of {:?} is not acyclic", p1.id(c)));
            break;
        }
        let hb = p0.order_complex_of(&open).homology_z();
        if !has_sphere_homology(&hb, k as isize - 1) {
            bad = Some(format!("preimage of the boundary of {:?} is not a sphere", p1.id(c)));
            break;
        }
    }
    r.check("preimages are balls", bad.is_none(), bad.unwrap_or_default());
    r
}

fn trimmed(b: &[usize]) -> Vec<usize> {
    let mut v = b.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Solve for the subdivision chain map degree by degree. Degree 0 puts `+1`
/// on the unique source vertex over each target vertex; in degree `k` the
/// image of a target cell is the unique combination of the source `k`-cells
/// over it whose boundary is `R_{k-1}` of the cell's boundary.
pub fn subdivision_chain_map(
    source: &SphereComplex,
    target: &SphereComplex,
    cell_map: &[usize],
) -> Result<Vec<IntMatrix>, AggError> {
    let (p0, p1) = (source.poset(), target.poset());
    let n = source.n();
    let mut chain: Vec<IntMatrix> = Vec::with_capacity(n + 1);

    let mut t0 = Vec::new();
    for &v in p1.cells(0) {
        let pre: Vec<usize> = p0.cells(0).iter().copied().filter(|&x| cell_map[x] == v).collect();
        if pre.len() != 1 {
            return Err(AggError::Invalid(format!("target vertex {:?} has {} preimages", p1.id(v), pre.len())));
        }
        t0.push((p0.pos(pre[0]), p1.pos(v), BigInt::one()));
    }
    chain.push(IntMatrix::from_triplets(p0.count(0), p1.count(0), t0));

    for k in 1..=n {
        let g0 = source.gamma(k).to_rat();
        let g1 = target.gamma(k);
        let rhs_all = (&chain[k - 1] * g1).to_rat();
        let mut t = Vec::new();
        for &c in p1.cells(k) {
            let cands: Vec<usize> =
                p0.cells(k).iter().copied().filter(|&x| cell_map[x] == c).map(|x| p0.pos(x)).collect();
            let col = p1.pos(c);
            let all_rows: Vec<usize> = (0..p0.count(k - 1)).collect();
            let a = g0.select(&all_rows, &cands);
            let b = rhs_all.select(&all_rows, &[col]);
            let err = || AggError::NoConsistentSigns(format!("over {:?}", p1.id(c)));
            let x = a.solve(&b).map_err(|_| err())?.ok_or_else(err)?;
            if a.rank() != cands.len() {
                return Err(err());
            }
            for (i, &src) in cands.iter().enumerate() {
                let v = x.get(i, 0);
                let iv = if v == crate::ratlin::rat(1) {
                    BigInt::one()
                } else if v == crate::ratlin::rat(-1) {
                    -BigInt::one()
                } else {
                    return Err(err());
                };
                t.push((src, col, iv));
            }
        }
        let rk = IntMatrix::from_triplets(p0.count(k), p1.count(k), t);
        debug_assert!(source.gamma(k) * &rk == &chain[k - 1] * g1);
        chain.push(rk);
    }
    Ok(chain)
}

/// `a : S_0 → S_1` followed by `b : S_1 → S_2`.
pub fn compose(a: &Aggregation, b: &Aggregation) -> Result<Aggregation, AggError> {
    if !(Arc::ptr_eq(&a.target, &b.source) || a.target == b.source) {
        return Err(AggError::Mismatch);
    }
    let cell_map = a.cell_map.iter().map(|&c| b.cell_map[c]).collect();
    let chain = a.chain.iter().zip(&b.chain).map(|(x, y)| x * y).collect();
    Ok(Aggregation { source: a.source.clone(), target: b.target.clone(), cell_map, chain })
}

/// Quasi-isomorphism check: `R_0` preserves the augmentation and `R_n`
/// the fundamental class, so both induce isomorphisms on homology.
pub fn preserves_homology(a: &Aggregation) -> bool {
    let ones_src = IntMatrix::row_vector(vec![BigInt::one(); a.source.w()]);
    let ones_tgt = IntMatrix::row_vector(vec![BigInt::one(); a.target.w()]);
    let r0 = &ones_src * &a.chain[0] == ones_tgt;
    r0 && fund_sign(&a.source, &a.target, &a.chain) == Some(1)
        && a.chain.iter().all(|m| m.entries().all(|(_, _, v)| !v.is_zero()))
}
