use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::elim::{combine, densify, SparseRow};
use super::IntMatrix;

/// Smith normal form `U · A · V = D` with `U`, `V` unimodular and `D`
/// diagonal with `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// The nonzero diagonal entries of `D`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.nrows().min(self.d.ncols())).map(|i| self.d.get(i, i)).filter(|v| !v.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct Dense {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    m: usize,
    n: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

impl Dense {
    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap(i, k);
        if let Some(u) = &mut self.u {
            u.swap(i, k);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        for r in &mut self.a {
            r.swap(j, k);
        }
        if let Some(v) = &mut self.v {
            for r in v {
                r.swap(j, k);
            }
        }
    }

    /// row_i += q * row_k
    fn add_row(&mut self, i: usize, k: usize, q: &BigInt) {
        fn op(m: &mut [Vec<BigInt>], i: usize, k: usize, q: &BigInt) {
            let src = m[k].clone();
            for (x, s) in m[i].iter_mut().zip(&src) {
                if !s.is_zero() {
                    *x += q * s;
                }
            }
        }
        op(&mut self.a, i, k, q);
        if let Some(u) = &mut self.u {
            op(u, i, k, q);
        }
    }

    /// col_j += q * col_k
    fn add_col(&mut self, j: usize, k: usize, q: &BigInt) {
        fn op(m: &mut [Vec<BigInt>], j: usize, k: usize, q: &BigInt) {
            for r in m.iter_mut() {
                if !r[k].is_zero() {
                    let d = q * &r[k];
                    r[j] += d;
                }
            }
        }
        op(&mut self.a, j, k, q);
        if let Some(v) = &mut self.v {
            op(v, j, k, q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
                if x.abs().is_one() {
                    return best;
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let steps = self.m.min(self.n);
        for t in 0..steps {
            let Some((pi, pj)) = self.min_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in (t + 1)..self.m {
                    if !self.a[i][t].is_zero() {
                        let q = &self.a[i][t] / &self.a[t][t];
                        self.add_row(i, t, &-q);
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in (t + 1)..self.n {
                    if !self.a[t][j].is_zero() {
                        let q = &self.a[t][j] / &self.a[t][t];
                        self.add_col(j, t, &-q);
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    // bring the smallest remainder of row/column t to the pivot
                    let mut best = (t, t);
                    for i in (t + 1)..self.m {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in (t + 1)..self.n {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let p = self.a[t][t].clone();
                let bad = ((t + 1)..self.m).find(|&i| ((t + 1)..self.n).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

impl IntMatrix {
    pub fn smith_normal_form(&self) -> Smith {
        let (m, n) = self.shape();
        let mut d = Dense { a: self.to_dense(), u: Some(identity(m)), v: Some(identity(n)), m, n };
        d.run();
        Smith {
            u: IntMatrix::from_rows_with_cols(d.u.unwrap_or_default(), m),
            d: IntMatrix::from_rows_with_cols(d.a, n),
            v: IntMatrix::from_rows_with_cols(d.v.unwrap_or_default(), n),
        }
    }

    /// Nonzero invariant factors in divisibility order. Unit pivots are
    /// eliminated sparsely first; only the remaining core is reduced densely.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let (m, n) = self.shape();
        let mut rows: Vec<SparseRow> = (0..m).map(|i| self.row(i).to_vec()).collect();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (i, r) in rows.iter().enumerate() {
            for (j, _) in r {
                col_rows[*j].insert(i);
            }
        }
        let mut units = 0usize;
        loop {
            // unit pivot with the smallest Markowitz count
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, r) in rows.iter().enumerate() {
                for (j, v) in r {
                    if v.abs().is_one() {
                        let cost = (r.len() - 1) * (col_rows[*j].len() - 1);
                        if best.is_none_or(|b| cost < b.2) {
                            best = Some((i, *j, cost));
                        }
                    }
                }
                if matches!(best, Some((_, _, 0))) {
                    break;
                }
            }
            let Some((r, c, _)) = best else { break };
            let pivot_row = core::mem::take(&mut rows[r]);
            let u = pivot_row.iter().find(|(j, _)| *j == c).map(|(_, v)| v.clone()).expect("pivot present");
            for (j, _) in &pivot_row {
                col_rows[*j].remove(&r);
            }
            let targets: Vec<usize> = col_rows[c].iter().copied().collect();
            for i in targets {
                let f =
                    rows[i].iter().find(|(j, _)| *j == c).map(|(_, v)| v.clone()).expect("column index is consistent");
                let new = combine(&BigInt::one(), &rows[i], &(&f * &u), &pivot_row);
                for (j, _) in &rows[i] {
                    col_rows[*j].remove(&i);
                }
                for (j, _) in &new {
                    col_rows[*j].insert(i);
                }
                rows[i] = new;
            }
            units += 1;
        }
        let live_rows: Vec<usize> = (0..m).filter(|&i| !rows[i].is_empty()).collect();
        let live_cols: Vec<usize> = (0..n).filter(|&j| !col_rows[j].is_empty()).collect();
        let mut out = vec![BigInt::one(); units];
        if !live_rows.is_empty() {
            let mut col_pos = vec![usize::MAX; n];
            for (k, &j) in live_cols.iter().enumerate() {
                col_pos[j] = k;
            }
            let core: Vec<SparseRow> =
                live_rows.iter().map(|&i| rows[i].iter().map(|(j, v)| (col_pos[*j], v.clone())).collect()).collect();
            let mut d =
                Dense { a: densify(&core, live_cols.len()), u: None, v: None, m: live_rows.len(), n: live_cols.len() };
            d.run();
            for t in 0..d.m.min(d.n) {
                if !d.a[t][t].is_zero() {
                    out.push(d.a[t][t].clone());
                }
            }
        }
        out
    }

    /// Columns form a `Z`-basis of the integer kernel.
    pub fn integer_kernel(&self) -> IntMatrix {
        let s = self.smith_normal_form();
        let r = s.rank();
        let n = self.ncols();
        let all: Vec<usize> = (0..n).collect();
        let keep: Vec<usize> = (r..n).collect();
        s.v.select(&all, &keep)
    }

    /// Exact rank (over `Q`) of an integer matrix.
    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    pub fn determinant(&self) -> Option<BigInt> {
        self.is_square().then(|| super::elim::bareiss_det(self.to_dense()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) {
        let s = m.smith_normal_form();
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert_eq!(f, m.invariant_factors());
    }

    #[test]
    fn examples() {
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(z.smith_normal_form().d, z);
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(m.smith_normal_form().d, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
        check(&m);
        let id = IntMatrix::identity(3);
        assert_eq!(id.smith_normal_form().d, id);
    }

    #[test]
    fn kernel_is_saturated() {
        // kernel of [2 4] over Z is spanned by (-2, 1), not (-4, 2)
        let m = IntMatrix::from_i64(&[&[2, 4]]);
        let k = m.integer_kernel();
        assert_eq!(k.ncols(), 1);
        assert!((&m * &k).is_zero());
        let g = num_integer::Integer::gcd(&k.get(0, 0), &k.get(1, 0));
        assert!(g.is_one());
    }

    proptest! {
        #[test]
        fn smith_contract(rows in (0usize..5, 0usize..5).prop_flat_map(|(r, c)|
            proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r)
                .prop_map(move |v| (v, c)))) {
            let (v, c) = rows;
            let m = IntMatrix::from_rows_with_cols(
                v.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(), c);
            check(&m);
        }
    }
}
