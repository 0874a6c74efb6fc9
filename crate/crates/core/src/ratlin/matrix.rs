use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::{LinAlgError, Scalar};

/// A `rows x cols` matrix stored as sorted sparse rows without explicit
/// zeros. Equality is structural and therefore exact.
///
/// A `0 x k` or `k x 0` matrix is legal and acts as the empty map.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, T::one())]).collect();
        Matrix { rows: n, cols: n, data }
    }

    /// Build from dense rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`Matrix::from_rows`] but with an explicit column count, so that
    /// `k x 0` shapes can be expressed.
    pub fn from_rows_with_cols(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let n = rows.len();
        let data = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Matrix { rows: n, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if !v.is_zero() {
                    m.data[i].push((j, v));
                }
            }
        }
        m
    }

    /// Build from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in entries {
            assert!(i < rows && j < cols, "triplet out of range");
            let slot = acc[i].entry(j).or_insert_with(T::zero);
            *slot = slot.add_ref(&v);
        }
        Matrix {
            rows,
            cols,
            data: acc.into_iter().map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect(),
        }
    }

    /// Column vector.
    pub fn column(values: Vec<T>) -> Self {
        Self::from_rows_with_cols(values.into_iter().map(|v| vec![v]).collect(), 1)
    }

    /// Row vector.
    pub fn row_vector(values: Vec<T>) -> Self {
        let n = values.len();
        Self::from_rows_with_cols(vec![values], n)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&T> {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let row = &self.data[i];
        row.binary_search_by_key(&j, |(c, _)| *c).ok().map(|k| &row[k].1)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entry(i, j).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => {
                if v.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    row.insert(k, (j, v));
                }
            }
        }
    }

    /// Nonzero entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.data[i]
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        self.data
            .iter()
            .map(|r| {
                let mut out = vec![T::zero(); self.cols];
                for (j, v) in r {
                    out[*j] = v.clone();
                }
                out
            })
            .collect()
    }

    /// Iterate over all nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Vec<(usize, T)>> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r {
                data[*j].push((i, v.clone()));
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, LinAlgError> {
        if self.cols != rhs.rows {
            return Err(LinAlgError::Shape { op: "mul", left: self.shape(), right: rhs.shape() });
        }
        let mut data = Vec::with_capacity(self.rows);
        let mut acc: BTreeMap<usize, T> = BTreeMap::new();
        for r in &self.data {
            acc.clear();
            for (k, a) in r {
                for (j, b) in &rhs.data[*k] {
                    let p = a.mul_ref(b);
                    match acc.get_mut(j) {
                        Some(slot) => *slot = slot.add_ref(&p),
                        None => {
                            acc.insert(*j, p);
                        }
                    }
                }
            }
            data.push(core::mem::take(&mut acc).into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(Matrix { rows: self.rows, cols: rhs.cols, data })
    }

    fn zip_rows(&self, rhs: &Self, op: &'static str, sub: bool) -> Result<Self, LinAlgError> {
        if self.shape() != rhs.shape() {
            return Err(LinAlgError::Shape { op, left: self.shape(), right: rhs.shape() });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| merge_rows(a, b, sub)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, LinAlgError> {
        self.zip_rows(rhs, "add", false)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, LinAlgError> {
        self.zip_rows(rhs, "sub", true)
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map_nonzero(|v| v.mul_ref(s))
    }

    fn map_nonzero(&self, mut f: impl FnMut(&T) -> T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(j, v)| (*j, f(v))).filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        }
    }

    /// Apply `f` to every nonzero entry, producing a matrix over another
    /// scalar type. `f(0)` must be `0`.
    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(j, v)| (*j, f(v))).filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.data.iter().enumerate().all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1 == T::one())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// The submatrix on the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = BTreeMap::new();
        for (k, c) in cols.iter().enumerate() {
            col_pos.insert(*c, k);
        }
        let data = rows
            .iter()
            .map(|&i| {
                let mut r: Vec<(usize, T)> =
                    self.data[i].iter().filter_map(|(j, v)| col_pos.get(j).map(|k| (*k, v.clone()))).collect();
                r.sort_by_key(|(k, _)| *k);
                r
            })
            .collect();
        Matrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Write `block` into `self` with its top-left corner at `(r0, c0)`,
    /// overwriting the covered region.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            let row = &mut self.data[r0 + i];
            row.retain(|(j, _)| *j < c0 || *j >= c0 + block.cols);
            for (j, v) in &block.data[i] {
                row.push((c0 + j, v.clone()));
            }
            row.sort_by_key(|(j, _)| *j);
        }
    }

    /// Stack horizontally: `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        out.place(0, 0, self);
        out.place(0, self.cols, rhs);
        out
    }

    /// Stack vertically.
    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn flip_row(&self, i: usize) -> Self {
        let mut out = self.clone();
        for e in &mut out.data[i] {
            e.1 = e.1.neg_ref();
        }
        out
    }

    pub fn flip_col(&self, j: usize) -> Self {
        let mut out = self.clone();
        for r in &mut out.data {
            if let Ok(k) = r.binary_search_by_key(&j, |(c, _)| *c) {
                r[k].1 = r[k].1.neg_ref();
            }
        }
        out
    }

    /// Reorder rows: row `k` of the result is row `perm[k]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        self.select(perm, &(0..self.cols).collect::<Vec<_>>())
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        self.select(&(0..self.rows).collect::<Vec<_>>(), perm)
    }
}

fn merge_rows<T: Scalar>(a: &[(usize, T)], b: &[(usize, T)], sub: bool) -> Vec<(usize, T)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let take_a = k >= b.len() || (i < a.len() && a[i].0 < b[k].0);
        let take_b = i >= a.len() || (k < b.len() && b[k].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = if sub { b[k].1.neg_ref() } else { b[k].1.clone() };
            out.push((b[k].0, v));
            k += 1;
        } else {
            let v = if sub { a[i].1.sub_ref(&b[k].1) } else { a[i].1.add_ref(&b[k].1) };
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        match self.try_mul(rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        match self.try_add(rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        match self.try_sub(rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map_nonzero(T::neg_ref)
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.to_dense().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, v) in r.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
