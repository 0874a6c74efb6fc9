//! Triangulated sphere bundles: prism fiber complexes over base simplices,
//! their degenerations, and the aggregation system they induce on the
//! barycentric subdivision of the base.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cellx::{dual, orient, validate_sphere, CellError, CellPoset};
use crate::euler::{euler_cochain_of_cells, EulerError, TwistingCochain};
use crate::locsys::{CellLocalSystem, LocError, SimplicialBase};
use crate::report::Report;
use crate::simplicial::{face, Simplex, SimplicialComplex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrigError {
    UnmappedVertex(usize),
    NotSimplicial(Simplex),
    NotSurjective(Simplex),
    FiberDimension,
    NotASphere { simplex: Simplex, reason: String },
    Cell(CellError),
    Loc(LocError),
    Euler(EulerError),
}

impl fmt::Display for TrigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrigError::UnmappedVertex(v) => write!(f, "total vertex {v} has no image"),
            TrigError::NotSimplicial(s) => write!(f, "image of {s:?} is not a base simplex"),
            TrigError::NotSurjective(s) => write!(f, "nothing maps onto base simplex {s:?}"),
            TrigError::FiberDimension => f.write_str("total space must exceed the base by at least one dimension"),
            TrigError::NotASphere { simplex, reason } => write!(f, "stalk over {simplex:?} is not a sphere: {reason}"),
            TrigError::Cell(e) => write!(f, "{e}"),
            TrigError::Loc(e) => write!(f, "{e}"),
            TrigError::Euler(e) => write!(f, "{e}"),
        }
    }
}

impl From<CellError> for TrigError {
    fn from(e: CellError) -> Self {
        TrigError::Cell(e)
    }
}

impl From<LocError> for TrigError {
    fn from(e: LocError) -> Self {
        TrigError::Loc(e)
    }
}

impl From<EulerError> for TrigError {
    fn from(e: EulerError) -> Self {
        TrigError::Euler(e)
    }
}

/// A simplicial map `p : E → B` given on vertices. The numeric order of the
/// base vertices is the global order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialBundle {
    total: SimplicialComplex,
    base: SimplicialComplex,
    map: BTreeMap<usize, usize>,
    n: usize,
}

impl SimplicialBundle {
    pub fn new(
        total: SimplicialComplex,
        base: SimplicialComplex,
        map: BTreeMap<usize, usize>,
    ) -> Result<Self, TrigError> {
        for v in total.vertices() {
            if !map.contains_key(&v) {
                return Err(TrigError::UnmappedVertex(v));
            }
        }
        let (de, db) = (total.dim().unwrap_or(0), base.dim().unwrap_or(0));
        if de <= db {
            return Err(TrigError::FiberDimension);
        }
        let b = SimplicialBundle { total, base, map, n: de - db };
        for k in 0..=de {
            for t in b.total.simplices(k) {
                if !b.base.contains(&b.image(t)) {
                    return Err(TrigError::NotSimplicial(t.clone()));
                }
            }
        }
        let mut hit: BTreeMap<Simplex, ()> = BTreeMap::new();
        for k in 0..=de {
            for t in b.total.simplices(k) {
                hit.insert(b.image(t), ());
            }
        }
        for k in 0..=db {
            for s in b.base.simplices(k) {
                if !hit.contains_key(s) {
                    return Err(TrigError::NotSurjective(s.clone()));
                }
            }
        }
        Ok(b)
    }

    pub fn total(&self) -> &SimplicialComplex {
        &self.total
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn vertex_map(&self) -> &BTreeMap<usize, usize> {
        &self.map
    }

    /// Fiber dimension `dim E - dim B`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The vertex set of `p(τ)`, increasing.
    pub fn image(&self, t: &[usize]) -> Simplex {
        let mut s: Simplex = t.iter().map(|v| self.map[v]).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Simplices of `E` mapping onto `σ`, by dimension then
    /// lexicographically.
    pub fn stalk(&self, sigma: &[usize]) -> Vec<Simplex> {
        let lo = sigma.len() - 1;
        let hi = self.total.dim().unwrap_or(0);
        (lo..=hi).flat_map(|k| self.total.simplices(k).iter()).filter(|t| self.image(t) == sigma).cloned().collect()
    }
}

fn simplex_id(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|v| format!("{v}")).collect();
    parts.join(".")
}

/// The prism poset over `σ`: cells are the simplices onto `σ`, of dimension
/// `dim τ - dim σ`, ordered by inclusion.
pub fn fiber_poset(b: &SimplicialBundle, sigma: &[usize]) -> CellPoset {
    let stalk = b.stalk(sigma);
    let pos: BTreeMap<&Simplex, usize> = stalk.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let dims = stalk.iter().map(|t| t.len() - sigma.len()).collect();
    let mut covers = Vec::new();
    for (j, t) in stalk.iter().enumerate() {
        for i in 0..t.len() {
            if let Some(&f) = pos.get(&face(t, i)) {
                covers.push((f, j));
            }
        }
    }
    CellPoset::from_parts(stalk.iter().map(|t| simplex_id(t)).collect(), dims, covers)
}

/// [`fiber_poset`], checked to be an `n`-sphere.
pub fn fiber_complex(b: &SimplicialBundle, sigma: &[usize]) -> Result<CellPoset, TrigError> {
    let p = fiber_poset(b, sigma);
    match validate_sphere(&p, b.n).reason() {
        None => Ok(p),
        Some(reason) => Err(TrigError::NotASphere { simplex: sigma.to_vec(), reason }),
    }
}

/// The map `P(σ) → P(σ')` for a face `σ' ⊆ σ`: a prism `τ` goes to the
/// face spanned by its vertices over `σ'`.
pub fn restriction(b: &SimplicialBundle, sigma: &[usize], sub: &[usize]) -> Vec<usize> {
    assert!(sub.iter().all(|v| sigma.contains(v)), "not a face");
    let target = b.stalk(sub);
    let pos: BTreeMap<&Simplex, usize> = target.iter().enumerate().map(|(i, t)| (t, i)).collect();
    b.stalk(sigma)
        .iter()
        .map(|t| {
            let r: Simplex = t.iter().copied().filter(|v| sub.contains(&b.map[v])).collect();
            pos[&r]
        })
        .collect()
}

/// Degeneration along the `0`-th vertex: `P(σ) → P(d_0 σ)`.
pub fn degeneration(b: &SimplicialBundle, sigma: &[usize]) -> Vec<usize> {
    assert!(sigma.len() >= 2, "a vertex has no faces to degenerate to");
    restriction(b, sigma, &face(sigma, 0))
}

/// The first derived subdivision. Its vertices are the simplices of `b`,
/// ordered by decreasing dimension and then lexicographically; its
/// simplices are the flags. Returns the base and the simplex behind each
/// vertex.
pub fn barycentric(b: &SimplicialComplex) -> (SimplicialBase, Vec<Simplex>) {
    let top = b.dim().unwrap_or(0);
    let verts: Vec<Simplex> = (0..=top).rev().flat_map(|k| b.simplices(k).iter().cloned()).collect();
    let index: BTreeMap<&Simplex, usize> = verts.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut flags: Vec<Simplex> = Vec::new();
    // maximal flags below each top simplex
    fn extend(s: &Simplex, acc: &mut Vec<usize>, index: &BTreeMap<&Simplex, usize>, out: &mut Vec<Simplex>) {
        acc.push(index[s]);
        if s.len() == 1 {
            out.push(acc.clone());
        } else {
            for i in 0..s.len() {
                extend(&face(s, i), acc, index, out);
            }
        }
        acc.pop();
    }
    for f in b.facets() {
        extend(&f, &mut Vec::new(), &index, &mut flags);
    }
    let labels: Vec<String> = verts.iter().map(|s| simplex_id(s)).collect();
    let named: Vec<Vec<&str>> = flags.iter().map(|f| f.iter().map(|&v| labels[v].as_str()).collect()).collect();
    let base = SimplicialBase::new(labels.clone(), &named).expect("labels are known");
    (base, verts)
}

/// The aggregation system on `Sd B`: the fiber over the barycenter of `σ`
/// is the dual of the prism complex `P(σ)`, and the edge from `σ` to a face
/// `σ'` carries the dual of the restriction `P(σ) → P(σ')`.
#[derive(Debug, Clone)]
pub struct DerivedSystem {
    pub system: CellLocalSystem,
    /// The base simplex behind each vertex of `Sd B`.
    pub simplices: Vec<Simplex>,
}

pub fn cellular_system(b: &SimplicialBundle) -> Result<DerivedSystem, TrigError> {
    let (sd, verts) = barycentric(&b.base);
    let mut fibers = Vec::with_capacity(verts.len());
    for s in &verts {
        let p = fiber_complex(b, s)?;
        fibers.push(Arc::new(dual(&orient(&p)?)));
    }
    let mut maps = BTreeMap::new();
    for (u, v) in sd.edges() {
        maps.insert((u, v), restriction(b, &verts[u], &verts[v]));
    }
    let system = CellLocalSystem::new(sd, fibers, maps)?;
    Ok(DerivedSystem { system, simplices: verts })
}

/// Per-stalk sphericity of every base simplex.
pub fn validate_bundle(b: &SimplicialBundle) -> Report {
    let mut r = Report::new(format!("bundle with fiber dimension {}", b.n));
    for k in 0..=b.base.dim().unwrap_or(0) {
        for s in b.base.simplices(k) {
            let p = fiber_poset(b, s);
            let v = validate_sphere(&p, b.n);
            let detail = format!("{} cells, euler {}", p.len(), p.cell_euler_characteristic());
            r.check(format!("stalk {}", simplex_id(s)), v.is_ok(), v.reason().unwrap_or(detail));
        }
    }
    r
}

/// `sd(σ) = Σ_i (-1)^i b_σ * sd(d_i σ)` as a chain on `Sd B`, keyed by flags
/// in vertex order.
pub fn subdivide(sd_simplices: &[Simplex], sigma: &[usize]) -> BTreeMap<Simplex, i64> {
    let index: BTreeMap<&[usize], usize> = sd_simplices.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    fn go(
        s: &[usize],
        index: &BTreeMap<&[usize], usize>,
        out: &mut BTreeMap<Simplex, i64>,
        prefix: &mut Vec<usize>,
        sign: i64,
    ) {
        prefix.push(index[s]);
        if s.len() == 1 {
            *out.entry(prefix.clone()).or_insert(0) += sign;
        } else {
            for i in 0..s.len() {
                let sg = if i % 2 == 0 { sign } else { -sign };
                go(&face(s, i), index, out, prefix, sg);
            }
        }
        prefix.pop();
    }
    let mut out = BTreeMap::new();
    go(sigma, &index, &mut out, &mut Vec::new(), 1);
    out.retain(|_, c| *c != 0);
    out
}

/// The subdivision of a chain on `B` (coefficients per `k`-simplex of `B`)
/// as a chain on `Sd B` (per `k`-simplex of `Sd B`).
pub fn subdivide_chain(base: &SimplicialComplex, sd: &DerivedSystem, k: usize, z: &[BigInt]) -> Vec<BigInt> {
    let sdb = sd.system.base();
    let mut out = vec![BigInt::zero(); sdb.simplices(k).len()];
    for (s, c) in base.simplices(k).iter().zip(z) {
        if c.is_zero() {
            continue;
        }
        for (flag, e) in subdivide(&sd.simplices, s) {
            let i = sdb.complex().index_of(&flag).expect("flags are simplices");
            out[i] += c * BigInt::from(e);
        }
    }
    out
}

/// Value per `(n+1)`-simplex of `B`: the Euler cochain of the derived
/// system summed over the subdivision of the simplex.
pub fn simplicial_values(b: &SimplicialBundle, sd: &DerivedSystem, t: &TwistingCochain) -> Vec<(Simplex, BigRational)> {
    b.base
        .simplices(b.n + 1)
        .iter()
        .map(|s| {
            let mut sum = BigRational::zero();
            for (flag, e) in subdivide(&sd.simplices, s) {
                let v = t.value(&flag).expect("flags are simplices");
                sum += v * BigRational::from_integer(BigInt::from(e));
            }
            (s.clone(), sum)
        })
        .collect()
}

/// The simplicial formula on one `(n+1)`-simplex of `B`.
pub fn simplicial_formula(b: &SimplicialBundle, sigma: &[usize]) -> Result<BigRational, TrigError> {
    let sd = cellular_system(b)?;
    let t = euler_cochain_of_cells(&sd.system)?;
    simplicial_values(b, &sd, &t)
        .into_iter()
        .find(|(s, _)| s.as_slice() == sigma)
        .map(|(_, v)| v)
        .ok_or_else(|| TrigError::Euler(EulerError::NotASimplex(sigma.to_vec())))
}

/// The staircase triangulation of `fiber × base`, with total vertex
/// `i · m + j` for the `i`-th fiber vertex and `j`-th base vertex
/// (`m` base vertices), projecting to the base.
pub fn product_bundle(fiber: &SimplicialComplex, base: &SimplicialComplex) -> SimplicialBundle {
    let fv = fiber.vertices();
    let bv = base.vertices();
    let m = bv.len();
    let fpos: BTreeMap<usize, usize> = fv.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let bpos: BTreeMap<usize, usize> = bv.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut facets = Vec::new();
    for s in fiber.facets() {
        for t in base.facets() {
            staircases(s.len() - 1, t.len() - 1, &mut |path| {
                facets.push(path.iter().map(|&(i, j)| fpos[&s[i]] * m + bpos[&t[j]]).collect::<Vec<_>>());
            });
        }
    }
    let total = SimplicialComplex::from_facets(facets);
    let map = total.vertices().into_iter().map(|v| (v, bv[v % m])).collect();
    SimplicialBundle::new(total, base.clone(), map).expect("products are bundles")
}

/// Every monotone lattice path from `(0, 0)` to `(k, l)`.
fn staircases(k: usize, l: usize, f: &mut impl FnMut(&[(usize, usize)])) {
    fn go(k: usize, l: usize, path: &mut Vec<(usize, usize)>, f: &mut impl FnMut(&[(usize, usize)])) {
        let (i, j) = *path.last().expect("nonempty");
        if i == k && j == l {
            f(path);
            return;
        }
        if i < k {
            path.push((i + 1, j));
            go(k, l, path, f);
            path.pop();
        }
        if j < l {
            path.push((i, j + 1));
            go(k, l, path, f);
            path.pop();
        }
    }
    go(k, l, &mut vec![(0, 0)], f);
}

/// Tetrahedra of a 12-vertex triangulated 3-sphere over `∂Δ³`: total vertex
/// `3b + a` lies over base vertex `b`.
const HOPF_TETRAHEDRA: [[usize; 4]; 36] = [
    [0, 1, 4, 7],
    [0, 1, 4, 11],
    [0, 1, 7, 11],
    [0, 2, 3, 6],
    [0, 2, 3, 10],
    [0, 2, 6, 10],
    [0, 3, 4, 7],
    [0, 3, 4, 10],
    [0, 3, 6, 7],
    [0, 4, 10, 11],
    [0, 6, 7, 11],
    [0, 6, 10, 11],
    [1, 2, 3, 6],
    [1, 2, 3, 10],
    [1, 2, 6, 10],
    [1, 3, 5, 6],
    [1, 3, 5, 11],
    [1, 3, 9, 10],
    [1, 3, 9, 11],
    [1, 4, 5, 6],
    [1, 4, 5, 11],
    [1, 4, 6, 8],
    [1, 4, 7, 8],
    [1, 6, 8, 10],
    [1, 7, 8, 10],
    [1, 7, 9, 10],
    [1, 7, 9, 11],
    [3, 4, 7, 10],
    [3, 5, 6, 11],
    [3, 6, 7, 11],
    [3, 7, 9, 10],
    [3, 7, 9, 11],
    [4, 5, 6, 11],
    [4, 6, 8, 10],
    [4, 6, 10, 11],
    [4, 7, 8, 10],
];

/// A simplicial circle bundle `S³ → S²` with Euler number `±1`.
pub fn hopf_bundle() -> SimplicialBundle {
    let total = SimplicialComplex::from_facets(HOPF_TETRAHEDRA);
    let base = crate::simplicial::simplex_boundary(3);
    let map = (0..12).map(|v| (v, v / 3)).collect();
    SimplicialBundle::new(total, base, map).expect("the Hopf data is simplicial")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::simplex_boundary;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::from_facets([[0, 1, 2]])
    }

    #[test]
    fn barycentric_counts() {
        let edge = SimplicialComplex::from_facets([[0, 1]]);
        assert_eq!(barycentric(&edge).0.complex().counts(), vec![3, 2]);
        assert_eq!(barycentric(&triangle()).0.complex().counts(), vec![7, 12, 6]);
        let (sd, verts) = barycentric(&simplex_boundary(3));
        assert_eq!(sd.complex().counts(), vec![14, 36, 24]);
        assert_eq!(verts[0], vec![0, 1, 2]);
        assert_eq!(sd.label(0), "0.1.2");
        assert_eq!(verts[13], vec![3]);
    }

    #[test]
    fn staircase_stalks() {
        let circle = simplex_boundary(2);
        let edge = SimplicialComplex::from_facets([[0, 1]]);
        let b = product_bundle(&circle, &edge);
        assert_eq!(b.n(), 1);
        assert_eq!(b.total().count(2), 6);
        let p = fiber_complex(&b, &[0, 1]).unwrap();
        assert_eq!(p.count(0), 6);
        assert_eq!(p.count(1), 6);
        assert_eq!(fiber_complex(&b, &[0]).unwrap().count(1), 3);
        assert!(validate_bundle(&b).is_ok());
    }

    #[test]
    fn degenerations_commute() {
        let b = product_bundle(&simplex_boundary(2), &triangle());
        let s = [0, 1, 2];
        let d0 = degeneration(&b, &s);
        let d1 = degeneration(&b, &[1, 2]);
        let both = restriction(&b, &s, &[2]);
        assert!(d0.iter().zip(&both).all(|(&x, &y)| d1[x] == y));
        let (p, q) = (fiber_poset(&b, &s), fiber_poset(&b, &[1, 2]));
        for (a, c) in p.covers() {
            assert!(q.leq(d0[a], d0[c]));
        }
    }

    #[test]
    fn collapse_is_not_a_bundle() {
        // a triangle over an edge: the fiber over vertex 0 is a point
        let total = SimplicialComplex::from_facets([[0, 1, 2]]);
        let base = SimplicialComplex::from_facets([[0, 1]]);
        let map = [(0, 0), (1, 1), (2, 1)].into_iter().collect();
        let b = SimplicialBundle::new(total, base, map).unwrap();
        assert!(matches!(fiber_complex(&b, &[0]), Err(TrigError::NotASphere { .. })));
        assert!(!validate_bundle(&b).is_ok());
    }

    #[test]
    fn product_system_has_zero_periods() {
        let base = simplex_boundary(3);
        let b = product_bundle(&simplex_boundary(2), &base);
        let sd = cellular_system(&b).unwrap();
        let t = euler_cochain_of_cells(&sd.system).unwrap();
        assert!(crate::euler::verify_cocycle(&t).is_ok());
        let vals = simplicial_values(&b, &sd, &t);
        let z = base.integer_cycles(2);
        let z: Vec<BigInt> = (0..z.nrows()).map(|i| z.get(i, 0)).collect();
        let by_simplex = vals
            .iter()
            .zip(&z)
            .fold(BigRational::zero(), |a, ((_, v), c)| a + v * BigRational::from_integer(c.clone()));
        let direct = crate::euler::period(&t, &subdivide_chain(&base, &sd, 2, &z)).unwrap();
        assert_eq!(by_simplex, direct);
        assert!(direct.is_zero());
    }

    #[test]
    fn subdivision_is_a_chain_map() {
        let base = simplex_boundary(3);
        let b = product_bundle(&simplex_boundary(2), &base);
        let sd = cellular_system(&b).unwrap();
        let z = base.integer_cycles(2);
        let z: Vec<BigInt> = (0..z.nrows()).map(|i| z.get(i, 0)).collect();
        let w = subdivide_chain(&base, &sd, 2, &z);
        let col = crate::ratlin::IntMatrix::column(w);
        assert!((&sd.system.base().complex().boundary(2) * &col).is_zero());
        assert!(!col.is_zero());
    }

    #[test]
    fn hopf_data_is_a_three_sphere() {
        let b = hopf_bundle();
        let h = b.total().homology_z();
        assert_eq!(h.betti, vec![1, 0, 0, 1]);
        assert!(h.is_torsion_free());
        assert!(validate_bundle(&b).is_ok());
    }

    #[test]
    fn aligned_fibers_preserve_fundamental_classes() {
        let sd = cellular_system(&hopf_bundle()).unwrap();
        let a = sd.system.aligned().unwrap();
        for (&(u, v), map) in a.maps() {
            let c = crate::aggmap::subdivision_chain_map(a.fiber(u), a.fiber(v), map).unwrap();
            assert_eq!(crate::aggmap::fund_sign(a.fiber(u), a.fiber(v), &c), Some(1));
        }
        assert_eq!(euler_cochain_of_cells(&a).unwrap(), euler_cochain_of_cells(&sd.system).unwrap());
    }
}
