use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::elim::{self, Reduced};
use super::{IntMatrix, LinAlgError, RatMatrix};

/// Reduced row echelon form over `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rref {
    /// The nonzero rows of the reduced form, pivot entries equal to one.
    pub rows: RatMatrix,
    /// Pivot column of each row of `rows`.
    pub pivots: Vec<usize>,
}

impl RatMatrix {
    fn row_slices(&self) -> Vec<&[(usize, BigRational)]> {
        (0..self.nrows()).map(|i| self.row(i)).collect()
    }

    fn reduce(&self, jordan: bool) -> Reduced {
        let rows = elim::integer_rows(&self.row_slices(), None);
        elim::echelon(rows, self.ncols(), jordan)
    }

    pub fn rank(&self) -> usize {
        self.reduce(false).pivots.len()
    }

    pub fn rref(&self) -> Rref {
        let red = self.reduce(true);
        let r = red.pivots.len();
        let rows = (0..r).map(|k| {
            let pv = red.rows[k][0].1.clone();
            red.rows[k].iter().map(move |(j, v)| (k, *j, BigRational::new(v.clone(), pv.clone()))).collect::<Vec<_>>()
        });
        Rref { rows: RatMatrix::from_triplets(r, self.ncols(), rows.flatten()), pivots: red.pivots }
    }

    /// One solution `x` of `self * x = b` (free variables set to zero), or
    /// `None` when the system is inconsistent. `b` may have several columns.
    pub fn solve(&self, b: &RatMatrix) -> Result<Option<RatMatrix>, LinAlgError> {
        if b.nrows() != self.nrows() {
            return Err(LinAlgError::Shape { op: "solve", left: self.shape(), right: b.shape() });
        }
        let n = self.ncols();
        let rows = elim::integer_rows(&self.row_slices(), Some((&b.row_slices(), n)));
        let red = elim::echelon(rows, n, true);
        let r = red.pivots.len();
        if red.rows[r..].iter().any(|row| !row.is_empty()) {
            return Ok(None);
        }
        let mut x = RatMatrix::zeros(n, b.ncols());
        for (k, &c) in red.pivots.iter().enumerate() {
            let pv = &red.rows[k][0].1;
            for (j, v) in &red.rows[k] {
                if *j >= n {
                    x.set(c, j - n, BigRational::new(v.clone(), pv.clone()));
                }
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<RatMatrix, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::NotSquare { rows: self.nrows(), cols: self.ncols() });
        }
        let n = self.nrows();
        let id = RatMatrix::identity(n);
        let rows = elim::integer_rows(&self.row_slices(), Some((&id.row_slices(), n)));
        let red = elim::echelon(rows, n, true);
        if red.pivots.len() < n {
            return Err(LinAlgError::Singular);
        }
        let mut x = RatMatrix::zeros(n, n);
        for (k, &c) in red.pivots.iter().enumerate() {
            let pv = &red.rows[k][0].1;
            for (j, v) in &red.rows[k][1..] {
                x.set(c, j - n, BigRational::new(v.clone(), pv.clone()));
            }
        }
        Ok(x)
    }

    pub fn determinant(&self) -> Result<BigRational, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::NotSquare { rows: self.nrows(), cols: self.ncols() });
        }
        // det(A) = det(L A) / det(L) with L the diagonal of row lcms.
        let mut scale = BigInt::one();
        let mut dense = Vec::with_capacity(self.nrows());
        for i in 0..self.nrows() {
            let mut l = BigInt::one();
            for (_, v) in self.row(i) {
                l = num_integer::Integer::lcm(&l, v.denom());
            }
            let mut r = alloc::vec![BigInt::zero(); self.ncols()];
            for (j, v) in self.row(i) {
                r[*j] = v.numer() * (&l / v.denom());
            }
            scale *= &l;
            dense.push(r);
        }
        Ok(BigRational::new(elim::bareiss_det(dense), scale))
    }

    /// Basis of the right kernel over `Q`, one basis vector per column.
    pub fn kernel(&self) -> RatMatrix {
        let rref = self.rref();
        let n = self.ncols();
        let is_pivot: Vec<bool> = {
            let mut v = alloc::vec![false; n];
            for &c in &rref.pivots {
                v[c] = true;
            }
            v
        };
        let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let mut out = RatMatrix::zeros(n, free.len());
        for (t, &f) in free.iter().enumerate() {
            out.set(f, t, BigRational::one());
            for (k, &c) in rref.pivots.iter().enumerate() {
                let v = rref.rows.get(k, f);
                if !v.is_zero() {
                    out.set(c, t, -v);
                }
            }
        }
        out
    }

    /// Moore–Penrose inverse through a full-rank factorisation `M = F G`,
    /// `M† = Gᵀ (G Gᵀ)⁻¹ (Fᵀ F)⁻¹ Fᵀ`. `F` is the pivot columns of `M` and
    /// `G` the nonzero rows of its reduced echelon form.
    pub fn moore_penrose(&self) -> RatMatrix {
        let rref = self.rref();
        if rref.pivots.is_empty() {
            return RatMatrix::zeros(self.ncols(), self.nrows());
        }
        let all_rows: Vec<usize> = (0..self.nrows()).collect();
        let f = self.select(&all_rows, &rref.pivots);
        let g = rref.rows;
        let ft = f.transpose();
        let gt = g.transpose();
        let ggt_inv = (&g * &gt).inverse().expect("G has full row rank");
        let ftf_inv = (&ft * &f).inverse().expect("F has full column rank");
        &(&(&gt * &ggt_inv) * &ftf_inv) * &ft
    }

    /// Weighted Moore–Penrose inverse for the inner products
    /// `diag(dom)` on the domain and `diag(cod)` on the codomain (all
    /// weights positive): `W⁻¹Gᵀ(GW⁻¹Gᵀ)⁻¹(FᵀVF)⁻¹FᵀV` with `W = diag(dom)`,
    /// `V = diag(cod)`.
    pub fn weighted_moore_penrose(&self, dom: &[BigRational], cod: &[BigRational]) -> RatMatrix {
        assert_eq!(dom.len(), self.ncols());
        assert_eq!(cod.len(), self.nrows());
        assert!(dom.iter().chain(cod).all(|w| w > &BigRational::zero()), "weights must be positive");
        let rref = self.rref();
        if rref.pivots.is_empty() {
            return RatMatrix::zeros(self.ncols(), self.nrows());
        }
        let all_rows: Vec<usize> = (0..self.nrows()).collect();
        let f = self.select(&all_rows, &rref.pivots);
        let g = rref.rows;
        let w_inv =
            RatMatrix::from_triplets(dom.len(), dom.len(), dom.iter().enumerate().map(|(i, w)| (i, i, w.recip())));
        let v = RatMatrix::from_triplets(cod.len(), cod.len(), cod.iter().enumerate().map(|(i, w)| (i, i, w.clone())));
        let ftv = &f.transpose() * &v;
        let wgt = &w_inv * &g.transpose();
        let inner_g = (&g * &wgt).inverse().expect("G has full row rank");
        let inner_f = (&ftv * &f).inverse().expect("F has full column rank");
        &(&(&wgt * &inner_g) * &inner_f) * &ftv
    }

    pub fn from_int(m: &IntMatrix) -> RatMatrix {
        m.map(|v| BigRational::from_integer(v.clone()))
    }

    /// The same matrix over `Z`, if every entry is an integer.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.entries().all(|(_, _, v)| v.is_integer()) {
            Some(self.map(|v| v.to_integer()))
        } else {
            None
        }
    }

    /// Entry of a `1 x 1` matrix.
    pub fn scalar(&self) -> Option<BigRational> {
        (self.shape() == (1, 1)).then(|| self.get(0, 0))
    }
}

impl IntMatrix {
    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix::from_int(self)
    }

    pub fn from_i64(rows: &[&[i64]]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows_with_cols(
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
            cols,
        )
    }
}

impl RatMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> RatMatrix {
        IntMatrix::from_i64(rows).to_rat()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_weights_give_the_plain_inverse() {
        let m = RatMatrix::from_i64(&[&[1, 2, 0], &[2, 4, 1]]);
        let ones = alloc::vec![rat(1); 3];
        assert_eq!(m.weighted_moore_penrose(&ones, &ones[..2]), m.moore_penrose());
    }

    #[test]
    fn weighted_inverse_identities() {
        // A A⁺ A = A, A⁺ A A⁺ = A⁺, and the projections are self-adjoint
        // for the weighted inner products
        let m = RatMatrix::from_i64(&[&[-1, 0, 1], &[1, -1, 0], &[0, 1, -1]]);
        let dom = [rat(1), ratio(2, 3), rat(5)];
        let cod = [rat(3), ratio(1, 7), rat(2)];
        let p = m.weighted_moore_penrose(&dom, &cod);
        assert_eq!(&(&m * &p) * &m, m);
        assert_eq!(&(&p * &m) * &p, p);
        let diag = |w: &[BigRational]| {
            RatMatrix::from_triplets(w.len(), w.len(), w.iter().enumerate().map(|(i, x)| (i, i, x.clone())))
        };
        let (wd, wc) = (diag(&dom), diag(&cod));
        let mp = &m * &p;
        assert!((&wc * &mp).is_symmetric());
        let pm = &p * &m;
        assert!((&wd * &pm).is_symmetric());
    }

    fn penrose_holds(m: &RatMatrix, p: &RatMatrix) -> bool {
        let mp = m * p;
        let pm = p * m;
        &mp * m == *m && &pm * p == *p && mp.is_symmetric() && pm.is_symmetric()
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(RatMatrix::identity(3).inverse().unwrap(), RatMatrix::identity(3));
        let m = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let expected =
            RatMatrix::from_rows(alloc::vec![alloc::vec![rat(-2), rat(1)], alloc::vec![ratio(3, 2), ratio(-1, 2)],]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, expected);
        assert!((&m * &inv).is_identity());
        assert_eq!(RatMatrix::from_i64(&[&[1, 1], &[1, 1]]).inverse(), Err(LinAlgError::Singular));
        assert!(matches!(RatMatrix::zeros(2, 3).inverse(), Err(LinAlgError::NotSquare { .. })));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::identity(4).rank(), 4);
        assert_eq!(RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        // boundary of the 3-gon circle
        let g = RatMatrix::from_i64(&[&[-1, 0, 1], &[1, -1, 0], &[0, 1, -1]]);
        assert_eq!(g.rank(), 2);
        assert_eq!(RatMatrix::zeros(0, 4).rank(), 0);
    }

    #[test]
    fn moore_penrose_examples() {
        let z = RatMatrix::zeros(2, 3);
        assert_eq!(z.moore_penrose(), RatMatrix::zeros(3, 2));
        let m = RatMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.moore_penrose(), m.inverse().unwrap());
        let g = RatMatrix::from_i64(&[&[-1, 0, 1], &[1, -1, 0], &[0, 1, -1]]);
        let gp = g.moore_penrose();
        assert!(penrose_holds(&g, &gp));
        // for a circulant difference operator the pseudoinverse is -(1/3)·gᵀ
        assert_eq!(gp, g.transpose().scale(&ratio(1, 3)));
    }

    #[test]
    fn determinant_and_kernel() {
        let m = RatMatrix::from_rows(alloc::vec![alloc::vec![ratio(1, 2), rat(1)], alloc::vec![rat(3), ratio(2, 3)],]);
        assert_eq!(m.determinant().unwrap(), ratio(1, 3) - rat(3));
        let g = RatMatrix::from_i64(&[&[-1, 0, 1], &[1, -1, 0], &[0, 1, -1]]);
        let k = g.kernel();
        assert_eq!(k.ncols(), 1);
        assert!((&g * &k).is_zero());
    }

    #[test]
    fn solve_consistency() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        let b = RatMatrix::from_i64(&[&[1], &[3]]);
        assert_eq!(a.solve(&b).unwrap(), None);
        let b = RatMatrix::from_i64(&[&[1], &[2]]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(&a * &x, b);
    }

    fn small_rat() -> impl Strategy<Value = BigRational> {
        (-4i64..=4, 1i64..=3).prop_map(|(p, q)| ratio(p, q))
    }

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(small_rat(), c), r)
                .prop_map(move |rows| RatMatrix::from_rows_with_cols(rows, c))
        })
    }

    proptest! {
        #[test]
        fn penrose_identities_hold(m in small_matrix()) {
            let p = m.moore_penrose();
            prop_assert_eq!(p.shape(), (m.ncols(), m.nrows()));
            prop_assert!(penrose_holds(&m, &p));
        }

        #[test]
        fn inverse_multiplies_back(m in small_matrix()) {
            if m.is_square() {
                match m.inverse() {
                    Ok(inv) => {
                        prop_assert!((&inv * &m).is_identity());
                        prop_assert!((&m * &inv).is_identity());
                    }
                    Err(e) => {
                        prop_assert_eq!(e, LinAlgError::Singular);
                        prop_assert!(m.determinant().unwrap().is_zero());
                    }
                }
            }
        }

        #[test]
        fn rank_plus_nullity(m in small_matrix()) {
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.ncols(), m.ncols());
            prop_assert!((&m * &k).is_zero());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
