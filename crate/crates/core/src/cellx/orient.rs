use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CellError, CellPoset};
use crate::ratlin::{rat, IntMatrix, RatMatrix};

/// An oriented regular cell `n`-sphere: the face poset, integer boundary
/// matrices `γ_1 … γ_n` in the poset's basis order, and the fundamental
/// class `[S]` (entries `±1`, one per top cell).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereComplex {
    poset: CellPoset,
    n: usize,
    gamma: Vec<IntMatrix>,
    fund: Vec<i8>,
}

impl SphereComplex {
    pub fn poset(&self) -> &CellPoset {
        &self.poset
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vertices.
    pub fn w(&self) -> usize {
        self.poset.count(0)
    }

    /// Number of top cells.
    pub fn f(&self) -> usize {
        self.poset.count(self.n)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.poset.count(k)
    }

    /// `γ_k : R_k → R_{k-1}` for `1 ≤ k ≤ n`.
    pub fn gamma(&self, k: usize) -> &IntMatrix {
        assert!((1..=self.n).contains(&k), "γ_{k} is not stored");
        &self.gamma[k - 1]
    }

    pub fn fund_class(&self) -> &[i8] {
        &self.fund
    }

    pub fn fund_column(&self) -> IntMatrix {
        IntMatrix::column(self.fund.iter().map(|&s| BigInt::from(s)).collect())
    }

    /// The incidence number `[face : cell]` from the boundary matrices.
    pub fn incidence(&self, face: usize, cell: usize) -> BigInt {
        let k = self.poset.dim(cell);
        if k == 0 || self.poset.dim(face) + 1 != k {
            return BigInt::zero();
        }
        self.gamma(k).get(self.poset.pos(face), self.poset.pos(cell))
    }

    /// The same cells with the opposite fundamental class.
    pub fn reversed(&self) -> SphereComplex {
        let mut out = self.clone();
        for s in &mut out.fund {
            *s = -*s;
        }
        out
    }

    /// Reverse the orientation of the cell `c` (of dimension at least 1;
    /// vertices carry the augmentation and are never flipped).
    pub fn flip_cell(&self, c: usize) -> SphereComplex {
        let k = self.poset.dim(c);
        assert!(k >= 1, "vertex orientations are fixed by the augmentation");
        let p = self.poset.pos(c);
        let mut out = self.clone();
        out.gamma[k - 1] = out.gamma[k - 1].flip_col(p);
        if k < self.n {
            out.gamma[k] = out.gamma[k].flip_row(p);
        } else {
            out.fund[p] = -out.fund[p];
        }
        out
    }

    /// Reverse the orientation of every top cell while keeping `[S]`; this
    /// reverses the orientation of the sphere.
    pub fn with_top_cells_flipped(&self) -> SphereComplex {
        let mut out = self.clone();
        out.gamma[self.n - 1] = -&out.gamma[self.n - 1];
        out
    }

    /// Renumber the cells (the new cell `i` is the old cell `order[i]`)
    /// without changing any orientation.
    pub fn relabeled(&self, order: &[usize]) -> SphereComplex {
        let poset = self.poset.reordered(order);
        let old_pos = |k: usize| -> Vec<usize> { poset.cells(k).iter().map(|&c| self.poset.pos(order[c])).collect() };
        let gamma = (1..=self.n).map(|k| self.gamma[k - 1].select(&old_pos(k - 1), &old_pos(k))).collect();
        let fund = old_pos(self.n).into_iter().map(|p| self.fund[p]).collect();
        SphereComplex { poset, n: self.n, gamma, fund }
    }

    /// Exact check of `γγ = 0`, `p_0 γ_1 = 0` and `γ_n [S] = 0`.
    pub fn is_chain_complex(&self) -> bool {
        let ok_sq = self.gamma.windows(2).all(|w| (&w[0] * &w[1]).is_zero());
        let ones = IntMatrix::row_vector(vec![BigInt::one(); self.w()]);
        ok_sq && (&ones * &self.gamma[0]).is_zero() && (&self.gamma[self.n - 1] * &self.fund_column()).is_zero()
    }
}

/// [`orient_with`] with every top cell oriented along the fundamental class.
pub fn orient(p: &CellPoset) -> Result<SphereComplex, CellError> {
    orient_with(p, None)
}

/// Choose incidence signs by increasing dimension and orient the top cells.
///
/// Edges get `+1` on their first vertex. For a cell of dimension `k ≥ 2` the
/// first face gets `+1` and the others are reached through shared ridges,
/// where `γ_{k-1} γ_k = 0` forces the sign. Top cells are finally oriented
/// so that `[S]` equals `fund` (all ones by default).
pub fn orient_with(p: &CellPoset, fund: Option<&[i8]>) -> Result<SphereComplex, CellError> {
    let n = match p.top_dim() {
        Some(n) if n >= 1 => n,
        _ => return Err(CellError::Invalid("top dimension must be at least 1".into())),
    };
    let mut gamma: Vec<IntMatrix> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut t = Vec::new();
        for &c in p.cells(k) {
            let signs = if k == 1 {
                if p.faces(c).len() != 2 {
                    return Err(CellError::Invalid(format!("edge {:?} does not have two vertices", p.id(c))));
                }
                vec![1i8, -1]
            } else {
                cell_signs(p, &gamma[k - 2], c)?
            };
            for (&f, s) in p.faces(c).iter().zip(signs) {
                t.push((p.pos(f), p.pos(c), BigInt::from(s)));
            }
        }
        gamma.push(IntMatrix::from_triplets(p.count(k - 1), p.count(k), t));
    }

    let top = top_orientation(p, &gamma[n - 1])?;
    let target: Vec<i8> = match fund {
        None => vec![1; p.count(n)],
        Some(f) => {
            if f.len() != p.count(n) || f.iter().any(|&s| s != 1 && s != -1) {
                return Err(CellError::BadFundClass(format!("expected {} entries equal to 1 or -1", p.count(n))));
            }
            f.to_vec()
        }
    };
    let mut g = gamma.pop().expect("n >= 1");
    for (j, (&t, &s)) in target.iter().zip(&top).enumerate() {
        if t != s {
            g = g.flip_col(j);
        }
    }
    gamma.push(g);
    let s = SphereComplex { poset: p.clone(), n, gamma, fund: target };
    debug_assert!(s.is_chain_complex());
    Ok(s)
}

/// Signs of the faces of `c` (in `p.faces(c)` order).
fn cell_signs(p: &CellPoset, lower: &IntMatrix, c: usize) -> Result<Vec<i8>, CellError> {
    let faces = p.faces(c);
    let mut sign: Vec<Option<i8>> = vec![None; faces.len()];
    let inc = |f: usize, g: usize| -> i8 {
        let v = lower.get(p.pos(g), p.pos(f));
        if v.is_one() {
            1
        } else {
            -1
        }
    };
    let mut queue = VecDeque::new();
    if faces.is_empty() {
        return Err(CellError::SignInconsistency(p.id(c).into()));
    }
    sign[0] = Some(1);
    queue.push_back(0);
    while let Some(a) = queue.pop_front() {
        let fa = faces[a];
        let sa = sign[a].expect("queued faces are signed");
        for &g in p.faces(fa) {
            let others: Vec<usize> = (0..faces.len()).filter(|&b| b != a && p.faces(faces[b]).contains(&g)).collect();
            if others.len() != 1 {
                return Err(CellError::SignInconsistency(p.id(c).into()));
            }
            let b = others[0];
            let sb = -sa * inc(fa, g) * inc(faces[b], g);
            match sign[b] {
                None => {
                    sign[b] = Some(sb);
                    queue.push_back(b);
                }
                Some(x) if x != sb => return Err(CellError::SignInconsistency(p.id(c).into())),
                _ => {}
            }
        }
    }
    sign.into_iter().map(|s| s.ok_or_else(|| CellError::SignInconsistency(p.id(c).into()))).collect()
}

/// The cycle in top degree normalized to `+1` on the first top cell,
/// propagated across codimension-one cells.
fn top_orientation(p: &CellPoset, g: &IntMatrix) -> Result<Vec<i8>, CellError> {
    let n = p.top_dim().expect("nonempty");
    let tops = p.cells(n);
    let mut sign: Vec<Option<i8>> = vec![None; tops.len()];
    let gt = g.transpose();
    let unit = |v: &BigInt| if v.is_one() { 1i8 } else { -1 };
    if tops.is_empty() {
        return Err(CellError::NotSpherical("no top cells".into()));
    }
    sign[0] = Some(1);
    let mut queue = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        let sa = sign[a].expect("queued");
        for (r, va) in gt.row(a) {
            let ridge = p.cells(n - 1)[*r];
            if p.cofaces(ridge).len() != 2 {
                return Err(CellError::NotSpherical(format!(
                    "{:?} lies in {} top cells",
                    p.id(ridge),
                    p.cofaces(ridge).len()
                )));
            }
            for (b, vb) in g.row(*r) {
                if *b == a {
                    continue;
                }
                let sb = -sa * unit(va) * unit(vb);
                match sign[*b] {
                    None => {
                        sign[*b] = Some(sb);
                        queue.push_back(*b);
                    }
                    Some(x) if x != sb => return Err(CellError::NotSpherical("not orientable".into())),
                    _ => {}
                }
            }
        }
    }
    let out: Option<Vec<i8>> = sign.into_iter().collect();
    let out = out.ok_or_else(|| CellError::NotSpherical("top cells are not connected".into()))?;
    if g.to_rat().rank() + 1 != tops.len() {
        return Err(CellError::NotSpherical("top cycle space is not one-dimensional".into()));
    }
    Ok(out)
}

/// The dual sphere on the opposite poset. Its boundary matrices are the
/// transposed ones in reflected degrees; the lowest one is twisted by `[S]`
/// so that the all-ones augmentation vanishes on it, and its fundamental
/// class is the all-ones vector on the original vertices.
pub fn dual(s: &SphereComplex) -> SphereComplex {
    let n = s.n;
    let poset = s.poset.opposite(n);
    let mut gamma = Vec::with_capacity(n);
    for k in 1..=n {
        let mut g = s.gamma(n - k + 1).transpose();
        if k == 1 {
            for (j, &sg) in s.fund.iter().enumerate() {
                if sg < 0 {
                    g = g.flip_row(j);
                }
            }
        }
        gamma.push(g);
    }
    let out = SphereComplex { fund: vec![1; poset.count(n)], poset, n, gamma };
    debug_assert!(out.is_chain_complex());
    out
}

/// A sphere's rational chain complex with its augmentation `p_0` and
/// orientation `i_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasedChainComplex {
    pub n: usize,
    pub dims: Vec<usize>,
    /// `gammas[k-1] = γ_k`.
    pub gammas: Vec<RatMatrix>,
    /// `1 × w` row of ones.
    pub p0: RatMatrix,
    /// `[S]` as an `f × 1` column.
    pub i_n: RatMatrix,
}

impl BasedChainComplex {
    /// `γ_k` for `0 ≤ k ≤ n + 1`; the two ends are the zero maps.
    pub fn gamma(&self, k: usize) -> RatMatrix {
        if k == 0 {
            RatMatrix::zeros(0, self.dims[0])
        } else if k == self.n + 1 {
            RatMatrix::zeros(self.dims[self.n], 0)
        } else {
            self.gammas[k - 1].clone()
        }
    }

    pub fn w(&self) -> usize {
        self.dims[0]
    }

    pub fn f(&self) -> usize {
        self.dims[self.n]
    }
}

pub fn chain_sphere(s: &SphereComplex) -> BasedChainComplex {
    let n = s.n();
    let gammas: Vec<RatMatrix> = (1..=n).map(|k| s.gamma(k).to_rat()).collect();
    let p0 = RatMatrix::row_vector(vec![rat(1); s.w()]);
    let i_n = RatMatrix::column(s.fund_class().iter().map(|&x| rat(x as i64)).collect());
    assert!((&p0 * &gammas[0]).is_zero(), "augmentation does not vanish on boundaries");
    assert!((&gammas[n - 1] * &i_n).is_zero(), "fundamental class is not a cycle");
    BasedChainComplex { n, dims: (0..=n).map(|k| s.rank(k)).collect(), gammas, p0, i_n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;
    use crate::cellx::validate_sphere;
    use proptest::prelude::*;

    fn ones(v: &[i8]) -> bool {
        v.iter().all(|&x| x == 1)
    }

    #[test]
    fn triangle_circle() {
        let s = build::polygon(3);
        assert!(s.is_chain_complex());
        let g = s.gamma(1);
        assert!(g.entries().all(|(_, _, v)| v.is_one() || *v == -BigInt::one()));
        assert_eq!(g.nnz(), 6);
        assert!(ones(s.fund_class()));
        let c = chain_sphere(&s);
        assert_eq!(c.dims, vec![3, 3]);
        assert_eq!(c.p0, RatMatrix::row_vector(vec![rat(1); 3]));
        assert_eq!(c.i_n, RatMatrix::column(vec![rat(1); 3]));
    }

    #[test]
    fn two_gon() {
        let c = chain_sphere(&build::polygon(2));
        assert_eq!(c.p0.shape(), (1, 2));
        assert_eq!(c.i_n.shape(), (2, 1));
    }

    #[test]
    fn tetrahedron_boundary() {
        let s = build::simplex_sphere(3);
        assert_eq!(s.fund_class().len(), 4);
        assert!(s.is_chain_complex());
        assert_eq!(s.gamma(2).to_rat().kernel().ncols(), 1);
        let c = chain_sphere(&s);
        assert_eq!(c.p0.ncols(), 4);
        assert_eq!(c.i_n.nrows(), 4);
    }

    #[test]
    fn explicit_fund_class() {
        let p = build::polygon(4).poset().clone();
        let s = orient_with(&p, Some(&[1, -1, 1, 1])).unwrap();
        assert_eq!(s.fund_class(), &[1, -1, 1, 1]);
        assert!(s.is_chain_complex());
        assert!(matches!(orient_with(&p, Some(&[1, 2, 1, 1])), Err(CellError::BadFundClass(_))));
    }

    #[test]
    fn non_orientable_sign_failure() {
        // a Möbius-like identification: three edges glued into one 2-cell
        // whose boundary passes an edge twice is not regular; the poset
        // breaks the ridge count.
        let p = CellPoset::from_indexed(
            vec![0, 0, 1, 1, 1, 2],
            [(0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4), (2, 5), (3, 5), (4, 5)],
        );
        assert!(orient(&p).is_err());
    }

    #[test]
    fn dual_examples() {
        let tri = build::polygon(3);
        let d = dual(&tri);
        assert_eq!(d.poset().count(0), 3);
        assert_eq!(d.poset().count(1), 3);
        assert!(validate_sphere(d.poset(), 1).is_ok());
        let t = build::simplex_sphere(3);
        let dt = dual(&t);
        assert_eq!((dt.rank(0), dt.rank(1), dt.rank(2)), (4, 6, 4));
        assert!(validate_sphere(dt.poset(), 2).is_ok());
        assert_eq!(dt.poset().order_complex().euler_characteristic(), 2);
        assert_eq!(dual(&dt), t);
    }

    #[test]
    fn dual_of_twisted_orientation() {
        let s = build::simplex_sphere(3).flip_cell(build::simplex_sphere(3).poset().cells(2)[1]);
        let dd = dual(&dual(&s));
        assert!(dd.is_chain_complex());
        assert!(ones(dd.fund_class()));
        assert_eq!(dd.poset(), s.poset());
    }

    #[test]
    fn flips_and_relabels_preserve_chain_identities() {
        let s = build::simplex_sphere(4);
        let mut t = s.clone();
        for c in 0..s.poset().len() {
            if s.poset().dim(c) > 0 && c % 3 == 0 {
                t = t.flip_cell(c);
            }
        }
        assert!(t.is_chain_complex());
        let order: Vec<usize> = (0..s.poset().len()).rev().collect();
        let r = t.relabeled(&order);
        assert!(r.is_chain_complex());
        assert_eq!(r.reversed().reversed(), r);
    }

    proptest! {
        #[test]
        fn orientation_of_polygons(m in 2usize..14) {
            let s = build::polygon(m);
            prop_assert!(s.is_chain_complex());
            let d = dual(&s);
            prop_assert!(validate_sphere(d.poset(), 1).is_ok());
            prop_assert_eq!(dual(&d), s);
        }
    }
}
