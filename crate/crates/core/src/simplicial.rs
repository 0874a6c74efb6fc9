//! Finite abstract simplicial complexes on vertices `0..`, whose numeric
//! order is the global (local) vertex order, and homology of integer chain
//! complexes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::ratlin::IntMatrix;

/// A simplex as its strictly increasing vertex list.
pub type Simplex = Vec<usize>;

/// The `i`-th face `d_i s`: drop the `i`-th vertex.
pub fn face(s: &[usize], i: usize) -> Simplex {
    let mut f = s.to_vec();
    f.remove(i);
    f
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<BTreeMap<Simplex, usize>>,
}

impl SimplicialComplex {
    /// Downward closure of the given simplices. Vertex lists are sorted and
    /// deduplicated; simplices of each dimension are kept in lexicographic
    /// order.
    pub fn from_facets<I, S>(facets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut sets: Vec<BTreeSet<Simplex>> = Vec::new();
        for f in facets {
            let mut s: Simplex = f.as_ref().to_vec();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            add_closure(&mut sets, s);
        }
        let by_dim: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = by_dim.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        SimplicialComplex { by_dim, index }
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let k = s.len().checked_sub(1)?;
        self.index.get(k)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    /// Maximal simplices, by dimension then lexicographically.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut cofaced: BTreeSet<&Simplex> = BTreeSet::new();
        for k in 1..self.by_dim.len() {
            for s in &self.by_dim[k] {
                for i in 0..s.len() {
                    if let Some(f) = self.index[k - 1].get_key_value(&face(s, i)) {
                        cofaced.insert(f.0);
                    }
                }
            }
        }
        self.by_dim.iter().flatten().filter(|s| !cofaced.contains(s)).cloned().collect()
    }

    /// `∂_k : C_k → C_{k-1}` with `∂σ = Σ (-1)^i d_iσ`. For `k = 0` this is
    /// the `0 × count(0)` map.
    pub fn boundary(&self, k: usize) -> IntMatrix {
        if k == 0 {
            return IntMatrix::zeros(0, self.count(0));
        }
        let mut t = Vec::new();
        for (j, s) in self.simplices(k).iter().enumerate() {
            for i in 0..s.len() {
                let r = self.index[k - 1][&face(s, i)];
                t.push((r, j, sign(i)));
            }
        }
        IntMatrix::from_triplets(self.count(k - 1), self.count(k), t)
    }

    pub fn boundaries(&self) -> Vec<IntMatrix> {
        (1..self.by_dim.len()).map(|k| self.boundary(k)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    pub fn homology_z(&self) -> HomologyDescription {
        integral_homology(&self.counts(), &self.boundaries())
    }

    pub fn betti_q(&self) -> Vec<usize> {
        rational_betti(&self.counts(), &self.boundaries())
    }

    /// A `Z`-basis of the `k`-cycles, one column per cycle.
    pub fn integer_cycles(&self, k: usize) -> IntMatrix {
        self.boundary(k).integer_kernel()
    }

    /// The subcomplex of simplices all of whose vertices satisfy `keep`.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> SimplicialComplex {
        SimplicialComplex::from_facets(self.by_dim.iter().flatten().filter(|s| s.iter().all(|&v| keep(v))))
    }

    /// The link of a simplex.
    pub fn link(&self, s: &[usize]) -> SimplicialComplex {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        let mut out = Vec::new();
        for l in self.by_dim.iter().skip(s.len()) {
            for t in l {
                if set.iter().all(|v| t.contains(v)) {
                    let rest: Simplex = t.iter().copied().filter(|v| !set.contains(v)).collect();
                    out.push(rest);
                }
            }
        }
        SimplicialComplex::from_facets(out)
    }
}

fn add_closure(sets: &mut Vec<BTreeSet<Simplex>>, s: Simplex) {
    let k = s.len() - 1;
    while sets.len() <= k {
        sets.push(BTreeSet::new());
    }
    if !sets[k].insert(s.clone()) || k == 0 {
        return;
    }
    for i in 0..s.len() {
        add_closure(sets, face(&s, i));
    }
}

fn sign(i: usize) -> BigInt {
    if i % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Homology groups `H_k = Z^{betti[k]} ⊕ ⨁ Z/t` for `t` in `torsion[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyDescription {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyDescription {
    /// Order of the torsion subgroup of `H_k`.
    pub fn torsion_order(&self, k: usize) -> BigInt {
        self.torsion.get(k).map_or_else(BigInt::one, |t| t.iter().product())
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }
}

/// Integral homology of `C_0 ← C_1 ← …` where `dims[k] = rank C_k` and
/// `boundaries[k-1] = ∂_k`.
pub fn integral_homology(dims: &[usize], boundaries: &[IntMatrix]) -> HomologyDescription {
    check_shapes(dims, boundaries);
    let factors: Vec<Vec<BigInt>> = boundaries.iter().map(IntMatrix::invariant_factors).collect();
    let rank = |k: usize| if k == 0 || k > factors.len() { 0 } else { factors[k - 1].len() };
    let betti = (0..dims.len()).map(|k| dims[k] - rank(k) - rank(k + 1)).collect();
    let torsion = (0..dims.len())
        .map(|k| factors.get(k).map(|f| f.iter().filter(|d| !d.is_one()).cloned().collect()).unwrap_or_default())
        .collect();
    HomologyDescription { betti, torsion }
}

/// Betti numbers over `Q`, computed by rational elimination (independent
/// of the Smith normal form path used by [`integral_homology`]).
pub fn rational_betti(dims: &[usize], boundaries: &[IntMatrix]) -> Vec<usize> {
    check_shapes(dims, boundaries);
    let ranks: Vec<usize> = boundaries.iter().map(|b| b.to_rat().rank()).collect();
    let rank = |k: usize| if k == 0 || k > ranks.len() { 0 } else { ranks[k - 1] };
    (0..dims.len()).map(|k| dims[k] - rank(k) - rank(k + 1)).collect()
}

fn check_shapes(dims: &[usize], boundaries: &[IntMatrix]) {
    assert!(boundaries.len() + 1 >= dims.len().max(1), "missing boundary maps");
    for (k, b) in boundaries.iter().enumerate() {
        let k = k + 1;
        let rows = dims.get(k - 1).copied().unwrap_or(0);
        let cols = dims.get(k).copied().unwrap_or(0);
        assert_eq!(b.shape(), (rows, cols), "boundary {k} has the wrong shape");
    }
}

/// The boundary of the standard `d`-simplex on vertices `0..=d`.
pub fn simplex_boundary(d: usize) -> SimplicialComplex {
    SimplicialComplex::from_facets((0..=d).map(|i| face(&(0..=d).collect::<Vec<_>>(), i)))
}
