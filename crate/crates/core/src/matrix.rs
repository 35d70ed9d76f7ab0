//! Dense matrices over an exact field with Gaussian elimination.
//!
//! Matrices act on column vectors: a map `k^c → k^r` is an `r × c` matrix.
//! Every algorithm is exact; rank, kernels, solving and complements are all
//! derived from one reduced row echelon routine.

use std::fmt;

use crate::field::Field;

/// A dense row-major matrix carrying its field context.
#[derive(Clone)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<F: Field> Eq for Matrix<F> {}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    /// The reduced matrix (zero rows at the bottom).
    pub reduced: Matrix<F>,
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    /// The zero matrix.
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    /// The identity matrix.
    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from a closure on `(row, col)`.
    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { field: field.clone(), rows, cols, data }
    }

    /// Builds a matrix from row vectors; `cols` is needed for the 0-row case.
    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        Self { field: field.clone(), rows: r, cols, data }
    }

    /// Builds a matrix from small integers.
    pub fn from_i64(field: &F, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Self::from_fn(field, rows, cols, |i, j| field.from_i64(entries[i * cols + j]))
    }

    /// The matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let cols = columns.len();
        Self::from_fn(field, rows, cols, |i, j| columns[j][i].clone())
    }

    /// The field context.
    pub fn field(&self) -> &F {
        &self.field
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    /// Sets entry `(i, j)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    /// `true` if every entry vanishes.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in apply");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !f.is_zero(a) && !f.is_zero(x) {
                        acc = f.add(&acc, &f.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in sum");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Self { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in difference");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Self { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.neg(a)).collect();
        Self { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.mul(a, c)).collect();
        Self { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Multiplies by `(-1)^k`.
    pub fn sign(&self, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Sub-matrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(&self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Horizontal concatenation `[A | B | …]`; all blocks must share the row count.
    pub fn hstack(field: &F, rows: usize, blocks: &[&Self]) -> Self {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "row mismatch in hstack");
            out.paste(0, off, b);
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation; all blocks must share the column count.
    pub fn vstack(field: &F, cols: usize, blocks: &[&Self]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "column mismatch in vstack");
            out.paste(off, 0, b);
            off += b.rows;
        }
        out
    }

    /// Block diagonal matrix.
    pub fn block_diag(field: &F, blocks: &[&Self]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.paste(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, block: &Self) {
        assert!(r + block.rows <= self.rows && c + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    /// Reduced row echelon form.
    pub fn echelon(&self) -> Echelon<F> {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            let pivot_row: Vec<F::Elem> = m.row(r)[c..].to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for (off, pv) in pivot_row.iter().enumerate() {
                    if f.is_zero(pv) {
                        continue;
                    }
                    let j = c + off;
                    let v = f.sub(m.get(i, j), &f.mul(&factor, pv));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    /// Rank.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate on the smaller side.
        if self.rows < self.cols {
            self.transpose().echelon().pivots.len()
        } else {
            self.echelon().pivots.len()
        }
    }

    /// A basis of the kernel, as the columns of a `cols × k` matrix.
    pub fn kernel(&self) -> Self {
        let f = &self.field;
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let mut out = Self::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for (r, &pc) in ech.pivots.iter().enumerate() {
                let v = f.neg(ech.reduced.get(r, fc));
                out.set(pc, k, v);
            }
        }
        out
    }

    /// Solves `self · X = rhs`; `None` if inconsistent.  Free variables are 0.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "row mismatch in solve");
        let f = &self.field;
        let aug = Self::hstack(f, self.rows, &[self, rhs]);
        let ech = aug.echelon();
        if ech.pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(f, self.cols, rhs.cols);
        for (r, &pc) in ech.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, ech.reduced.get(r, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        if self.rows == 0 {
            return Some(self.clone());
        }
        let id = Self::identity(&self.field, self.rows);
        let ech = Self::hstack(&self.field, self.rows, &[self, &id]).echelon();
        if ech.pivots.len() < self.rows || ech.pivots[self.rows - 1] >= self.cols {
            return None;
        }
        let cols: Vec<usize> = (self.cols..2 * self.cols).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        Some(ech.reduced.select(&rows, &cols))
    }

    /// Indices of columns of `ext` that, together with the columns of
    /// `base`, form a basis of `span(base) + span(ext)`.
    pub fn extend_basis(base: &Self, ext: &Self) -> Vec<usize> {
        assert_eq!(base.rows, ext.rows, "row mismatch in extend_basis");
        let f = base.field.clone();
        let joined = Self::hstack(&f, base.rows, &[base, ext]);
        joined.echelon().pivots.into_iter().filter(|&p| p >= base.cols).map(|p| p - base.cols).collect()
    }
}
