//! Integer-preserving row reduction.
//!
//! Rational rows are first scaled to integer rows. Every elimination step
//! replaces a row by an integer combination `a*row - b*pivot` and then
//! divides out the row content, so no fractions appear until the final
//! normalisation by the pivot entries.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type SparseRow = Vec<(usize, BigInt)>;

/// Divide a row by the gcd of its entries.
pub(crate) fn make_primitive(row: &mut SparseRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// `a * x - b * y` on sparse rows.
pub(crate) fn combine(a: &BigInt, x: &[(usize, BigInt)], b: &BigInt, y: &[(usize, BigInt)]) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut k) = (0, 0);
    while i < x.len() || k < y.len() {
        if k >= y.len() || (i < x.len() && x[i].0 < y[k].0) {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if i >= x.len() || y[k].0 < x[i].0 {
            out.push((y[k].0, -(b * &y[k].1)));
            k += 1;
        } else {
            let v = a * &x[i].1 - b * &y[k].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

/// Scale `[m | aug]` row by row to integers (multiplying each row by the lcm
/// of its denominators) and make each row primitive.
pub(crate) fn integer_rows(
    m: &[&[(usize, BigRational)]],
    aug: Option<(&[&[(usize, BigRational)]], usize)>,
) -> Vec<SparseRow> {
    let mut out = Vec::with_capacity(m.len());
    for (i, row) in m.iter().enumerate() {
        let extra: &[(usize, BigRational)] = match aug {
            Some((a, _)) => a[i],
            None => &[],
        };
        let offset = aug.map_or(0, |(_, off)| off);
        let mut l = BigInt::one();
        for (_, v) in row.iter().chain(extra.iter()) {
            l = l.lcm(v.denom());
        }
        let mut r: SparseRow = row.iter().map(|(j, v)| (*j, v.numer() * (&l / v.denom()))).collect();
        r.extend(extra.iter().map(|(j, v)| (offset + j, v.numer() * (&l / v.denom()))));
        make_primitive(&mut r);
        out.push(r);
    }
    out
}

pub(crate) struct Reduced {
    pub rows: Vec<SparseRow>,
    /// `pivots[k]` is the pivot column of row `k`.
    pub pivots: Vec<usize>,
}

/// Row echelon form over the first `elim_cols` columns; with `jordan` the
/// pivot columns are also cleared above the pivots (reduced form up to the
/// scaling of each pivot row).
pub(crate) fn echelon(mut rows: Vec<SparseRow>, elim_cols: usize, jordan: bool) -> Reduced {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..elim_cols {
        if rank == rows.len() {
            break;
        }
        // Rows below the current rank have nothing left of column c, so the
        // candidates are exactly those whose leading entry sits at c.
        let mut best: Option<usize> = None;
        for k in rank..rows.len() {
            if rows[k].first().map(|e| e.0) != Some(c) {
                continue;
            }
            best = match best {
                None => Some(k),
                Some(b) => {
                    let (vk, vb) = (rows[k][0].1.abs(), rows[b][0].1.abs());
                    if vk < vb || (vk == vb && rows[k].len() < rows[b].len()) {
                        Some(k)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let Some(best) = best else { continue };
        rows.swap(rank, best);
        let pivot_row = rows[rank].clone();
        let pv = pivot_row[0].1.clone();
        for k in (rank + 1)..rows.len() {
            if rows[k].first().map(|e| e.0) == Some(c) {
                eliminate(&mut rows[k], &pivot_row, &pv, c);
            }
        }
        if jordan {
            for k in 0..rank {
                if rows[k].binary_search_by_key(&c, |e| e.0).is_ok() {
                    eliminate(&mut rows[k], &pivot_row, &pv, c);
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    Reduced { rows, pivots }
}

fn eliminate(row: &mut SparseRow, pivot_row: &[(usize, BigInt)], pv: &BigInt, c: usize) {
    let f = match row.binary_search_by_key(&c, |e| e.0) {
        Ok(k) => row[k].1.clone(),
        Err(_) => return,
    };
    let g = pv.gcd(&f);
    let a = pv / &g;
    let b = &f / &g;
    let mut new = combine(&a, row, &b, pivot_row);
    make_primitive(&mut new);
    *row = new;
}

/// Determinant of a square integer matrix by Bareiss elimination. All
/// divisions are exact.
pub(crate) fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                let (q, r) = v.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Dense copy of sparse rows with `cols` columns.
pub(crate) fn densify(rows: &[SparseRow], cols: usize) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let mut d = vec![BigInt::zero(); cols];
            for (j, v) in r {
                d[*j] = v.clone();
            }
            d
        })
        .collect()
}
