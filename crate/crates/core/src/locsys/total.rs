//! The total complex `C_•(B; L_•)` and its vertical retraction onto
//! `C_•(B) ⊗ H(S^n)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::ChainLocalSystem;
use crate::hodge::{GradedSdr, SdrData};
use crate::ratlin::{IntMatrix, RatMatrix};
use crate::report::Report;
use crate::simplicial::{face, integral_homology, rational_betti, HomologyDescription};

fn sign(i: usize) -> BigInt {
    if i % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Basis element `σ_p ⊗ c_q`: base degree `p`, index of `σ` among the
/// `p`-simplices, position of `c` among the `q`-cells of the fiber over the
/// last vertex of `σ`.
pub type TotCell = (usize, usize, usize);

/// A generator of `C_•(B) ⊗ H(S^n)`: `σ_p ⊗ h_0` or `σ_p ⊗ h_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SmallCell {
    pub p: usize,
    pub simplex: usize,
    pub top: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalComplex {
    n: usize,
    base_dim: usize,
    basis: Vec<Vec<TotCell>>,
    index: Vec<BTreeMap<TotCell, usize>>,
    horizontal: Vec<IntMatrix>,
    vertical: Vec<IntMatrix>,
}

/// Assemble `Tot` with basis ordered by `(p, σ, cell)` in each degree.
/// `∂(σ ⊗ c) = Σ_{i<p} (-1)^i d_iσ ⊗ c + (-1)^p d_pσ ⊗ L(v_{p-1}, v_p) c`
/// and `γ̃(σ ⊗ c) = (-1)^p σ ⊗ γ c`.
pub fn total_complex(ls: &ChainLocalSystem) -> TotalComplex {
    let n = ls.n();
    let base = ls.base();
    let bdim = base.dim().unwrap_or(0);
    let top = bdim + n;
    let mut basis: Vec<Vec<TotCell>> = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let mut cells = Vec::new();
        for p in d.saturating_sub(n)..=d.min(bdim) {
            let q = d - p;
            for (si, s) in base.simplices(p).iter().enumerate() {
                let rank = ls.fiber(s[p]).rank(q);
                cells.extend((0..rank).map(|c| (p, si, c)));
            }
        }
        basis.push(cells);
    }
    let index: Vec<BTreeMap<TotCell, usize>> =
        basis.iter().map(|b| b.iter().enumerate().map(|(i, &c)| (c, i)).collect()).collect();

    let mut gamma_t: BTreeMap<(usize, usize), IntMatrix> = BTreeMap::new();
    let mut l_t: BTreeMap<(usize, usize, usize), IntMatrix> = BTreeMap::new();
    let mut horizontal = Vec::with_capacity(top + 1);
    let mut vertical = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let rows = if d == 0 { 0 } else { basis[d - 1].len() };
        let mut h = Vec::new();
        let mut v = Vec::new();
        for (col, &(p, si, c)) in basis[d].iter().enumerate() {
            let q = d - p;
            let s = &base.simplices(p)[si];
            if p >= 1 {
                for i in 0..p {
                    let fi = base.complex().index_of(&face(s, i)).expect("faces are present");
                    h.push((index[d - 1][&(p - 1, fi, c)], col, sign(i)));
                }
                let fp = base.complex().index_of(&face(s, p)).expect("faces are present");
                let key = (s[p - 1], s[p], q);
                let lt = l_t.entry(key).or_insert_with(|| ls.map(s[p - 1], s[p], q).transpose());
                for (r, x) in lt.row(c) {
                    h.push((index[d - 1][&(p - 1, fp, *r)], col, sign(p) * x));
                }
            }
            if q >= 1 {
                let fiber = ls.fiber(s[p]);
                let gt = gamma_t.entry((s[p], q)).or_insert_with(|| fiber.gamma(q).transpose());
                for (r, x) in gt.row(c) {
                    v.push((index[d - 1][&(p, si, *r)], col, sign(p) * x));
                }
            }
        }
        horizontal.push(IntMatrix::from_triplets(rows, basis[d].len(), h));
        vertical.push(IntMatrix::from_triplets(rows, basis[d].len(), v));
    }
    TotalComplex { n, base_dim: bdim, basis, index, horizontal, vertical }
}

impl TotalComplex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn top(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, d: usize) -> &[TotCell] {
        &self.basis[d]
    }

    pub fn position(&self, d: usize, cell: TotCell) -> Option<usize> {
        self.index.get(d)?.get(&cell).copied()
    }

    /// `∂ : Tot_d → Tot_{d-1}`.
    pub fn horizontal(&self, d: usize) -> &IntMatrix {
        &self.horizontal[d]
    }

    /// `γ̃ : Tot_d → Tot_{d-1}`.
    pub fn vertical(&self, d: usize) -> &IntMatrix {
        &self.vertical[d]
    }

    pub fn total(&self, d: usize) -> IntMatrix {
        &self.horizontal[d] + &self.vertical[d]
    }

    /// `total(1..=top)`, the boundary list for homology.
    pub fn boundaries(&self) -> Vec<IntMatrix> {
        (1..=self.top()).map(|d| self.total(d)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.basis.iter().enumerate().map(|(d, b)| if d % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) }).sum()
    }

    /// `∂² = 0`, `γ̃² = 0`, `∂γ̃ + γ̃∂ = 0` and `(∂ + γ̃)² = 0`.
    pub fn check(&self) -> Report {
        let mut r = Report::new(format!("total complex, degrees 0..={}", self.top()));
        for d in 2..=self.top() {
            let (h0, h1) = (&self.horizontal[d - 1], &self.horizontal[d]);
            let (v0, v1) = (&self.vertical[d - 1], &self.vertical[d]);
            r.check(format!("horizontal squares to zero at {d}"), (h0 * h1).is_zero(), "");
            r.check(format!("vertical squares to zero at {d}"), (v0 * v1).is_zero(), "");
            r.check(format!("anticommutation at {d}"), (&(h0 * v1) + &(v0 * h1)).is_zero(), "");
            r.check(format!("total squares to zero at {d}"), (&self.total(d - 1) * &self.total(d)).is_zero(), "");
        }
        r
    }

    /// Generators of `C_•(B) ⊗ H(S^n)` in total degree `d`: the `σ ⊗ h_n`
    /// with `p = d - n` first, then the `σ ⊗ h_0` with `p = d`.
    pub fn small_basis(&self, ls: &ChainLocalSystem, d: usize) -> Vec<SmallCell> {
        let mut out = Vec::new();
        let base = ls.base();
        if d >= self.n && d - self.n <= self.base_dim {
            let p = d - self.n;
            out.extend((0..base.simplices(p).len()).map(|s| SmallCell { p, simplex: s, top: true }));
        }
        if d <= self.base_dim {
            out.extend((0..base.simplices(d).len()).map(|s| SmallCell { p: d, simplex: s, top: false }));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Q,
    Z,
}

/// Homology of `Tot`. Over `Q` the torsion lists are empty.
pub fn total_homology(t: &TotalComplex, coefficients: Coefficients) -> HomologyDescription {
    let dims = t.dims();
    let bs = t.boundaries();
    match coefficients {
        Coefficients::Z => integral_homology(&dims, &bs),
        Coefficients::Q => HomologyDescription {
            torsion: dims.iter().map(|_| Vec::new()).collect(),
            betti: rational_betti(&dims, &bs),
        },
    }
}

/// The retraction of `(Tot, γ̃)` onto `C_•(B) ⊗ H(S^n)` with zero
/// differential, built from one retraction per base vertex:
/// `i(σ ⊗ h) = σ ⊗ i(h)`, `p(σ ⊗ c) = σ ⊗ p(c)`, `F̃(σ ⊗ c) = (-1)^p σ ⊗ F c`,
/// each over the last vertex of `σ`. Perturbing it by `∂` yields the
/// twisted differential.
pub fn vertical_sdr(t: &TotalComplex, ls: &ChainLocalSystem, sdrs: &[SdrData]) -> GradedSdr {
    let n = t.n;
    let top = t.top();
    let base = ls.base();
    let last = |p: usize, si: usize| base.simplices(p)[si][p];
    let small: Vec<Vec<SmallCell>> = (0..=top).map(|d| t.small_basis(ls, d)).collect();
    let rat_sign = |p: usize| if p % 2 == 0 { BigRational::one() } else { -BigRational::one() };

    let mut big_d = Vec::with_capacity(top + 1);
    let mut small_d = Vec::with_capacity(top + 1);
    let mut i = Vec::with_capacity(top + 1);
    let mut p_maps = Vec::with_capacity(top + 1);
    let mut h = Vec::with_capacity(top + 1);
    for d in 0..=top {
        big_d.push(t.vertical[d].to_rat());
        let rows = if d == 0 { 0 } else { small[d - 1].len() };
        small_d.push(RatMatrix::zeros(rows, small[d].len()));

        let mut ti = Vec::new();
        let mut tp = Vec::new();
        for (col, s) in small[d].iter().enumerate() {
            let v = last(s.p, s.simplex);
            let (vec_i, vec_p) = if s.top { (&sdrs[v].i_n, &sdrs[v].p_n) } else { (&sdrs[v].i0, &sdrs[v].p0) };
            for (c, _, x) in vec_i.entries() {
                ti.push((t.index[d][&(s.p, s.simplex, c)], col, x.clone()));
            }
            for (_, c, x) in vec_p.entries() {
                tp.push((col, t.index[d][&(s.p, s.simplex, c)], x.clone()));
            }
        }
        i.push(RatMatrix::from_triplets(t.basis[d].len(), small[d].len(), ti));
        p_maps.push(RatMatrix::from_triplets(small[d].len(), t.basis[d].len(), tp));

        let up = if d < top { t.basis[d + 1].len() } else { 0 };
        let mut th = Vec::new();
        if d < top {
            for (col, &(p, si, c)) in t.basis[d].iter().enumerate() {
                let q = d - p;
                if q >= n {
                    continue;
                }
                let f = sdrs[last(p, si)].big_f(q + 1);
                let sg = rat_sign(p);
                for (r, _, x) in f.entries().filter(|(_, cc, _)| *cc == c) {
                    th.push((t.index[d + 1][&(p, si, r)], col, &sg * x));
                }
            }
        }
        h.push(RatMatrix::from_triplets(up, t.basis[d].len(), th));
    }
    GradedSdr { big_d, small_d, i, p: p_maps, h }
}
