use std::fmt;

use rand::Rng;

use super::field::Field;
use crate::error::{Error, Result};

/// Dense row-major matrix over an exact field.
#[derive(Clone)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over {}",
            self.rows,
            self.cols,
            self.field.describe()
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    /// Panics if the rows have unequal length.
    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix {
            field,
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64_rows(field: F, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, rows)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, x) in col.iter().enumerate() {
                m.data[r * m.cols + c] = x.clone();
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(field: F, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.sample(rng)).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.field.clone(), self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.data[r * cols.len() + j] = self.get(r, c).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// `[self | v]`.
    pub fn with_column(&self, v: &[F::Elem]) -> Result<Self> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let cols = self.cols + 1;
        let mut data = Vec::with_capacity(self.rows * cols);
        for (r, x) in v.iter().enumerate() {
            data.extend_from_slice(self.row(r));
            data.push(x.clone());
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, other.get(k, c)));
                }
            }
        }
        Ok(out)
    }

    /// `M v`.
    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    /// `zᵀ M`.
    pub fn vec_mul(&self, z: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if z.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                z.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (r, zr) in z.iter().enumerate() {
            if f.is_zero(zr) {
                continue;
            }
            for (c, x) in self.row(r).iter().enumerate() {
                out[c] = f.add(&out[c], &f.mul(zr, x));
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    ///
    /// Pivots are the first nonzero entry found scanning down each column.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(p) = (pr..rows).find(|&r| !f.is_zero(&self.data[r * cols + c])) else {
                continue;
            };
            if p != pr {
                for k in 0..cols {
                    self.data.swap(p * cols + k, pr * cols + k);
                }
            }
            let inv = f.inv(&self.data[pr * cols + c]);
            for k in c..cols {
                self.data[pr * cols + k] = f.mul(&self.data[pr * cols + k], &inv);
            }
            let pivot_row: Vec<F::Elem> = self.data[pr * cols + c..(pr + 1) * cols].to_vec();
            for r in 0..rows {
                if r == pr {
                    continue;
                }
                let factor = self.data[r * cols + c].clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for (k, pv) in (c..cols).zip(&pivot_row) {
                    let idx = r * cols + k;
                    self.data[idx] = f.sub(&self.data[idx], &f.mul(&factor, pv));
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    /// Forward elimination only; returns the rank.
    fn eliminate_in_place(&mut self) -> usize {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pr = 0;
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(p) = (pr..rows).find(|&r| !f.is_zero(&self.data[r * cols + c])) else {
                continue;
            };
            if p != pr {
                for k in c..cols {
                    self.data.swap(p * cols + k, pr * cols + k);
                }
            }
            let inv = f.inv(&self.data[pr * cols + c]);
            for r in pr + 1..rows {
                let x = self.data[r * cols + c].clone();
                if f.is_zero(&x) {
                    continue;
                }
                let factor = f.mul(&x, &inv);
                for k in c..cols {
                    let sub = f.mul(&factor, &self.data[pr * cols + k]);
                    let idx = r * cols + k;
                    self.data[idx] = f.sub(&self.data[idx], &sub);
                }
            }
            pr += 1;
        }
        pr
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        if self.rows > self.cols {
            self.transpose().eliminate_in_place()
        } else {
            self.clone().eliminate_in_place()
        }
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Result<F::Elem> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(det_in_place(&self.field, self.rows, &mut self.data.clone()))
    }

    /// True iff `v` lies in the column span.
    pub fn in_column_span(&self, v: &[F::Elem]) -> Result<bool> {
        let aug = self.with_column(v)?;
        Ok(aug.rank() == self.rank())
    }

    /// Rows form a basis of `{z : zᵀ M = 0}`.
    pub fn left_kernel_basis(&self) -> Self {
        self.transpose().right_kernel_rows()
    }

    /// Columns form a basis of `{x : M x = 0}`.
    pub fn right_kernel_basis(&self) -> Self {
        self.right_kernel_rows().transpose()
    }

    /// Kernel vectors of `M x = 0`, one per row.
    fn right_kernel_rows(&self) -> Self {
        let f = self.field.clone();
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f.clone(), free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.data[k * self.cols + fc] = f.one();
            for (pi, &pc) in pivots.iter().enumerate() {
                out.data[k * self.cols + pc] = f.neg(r.get(pi, fc));
            }
        }
        out
    }
}

/// Determinant by elimination on a scratch buffer of `n * n` entries.
pub(crate) fn det_in_place<F: Field>(f: &F, n: usize, a: &mut [F::Elem]) -> F::Elem {
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !f.is_zero(&a[r * n + c])) else {
            return f.zero();
        };
        if p != c {
            for k in c..n {
                a.swap(p * n + k, c * n + k);
            }
            det = f.neg(&det);
        }
        let piv = a[c * n + c].clone();
        det = f.mul(&det, &piv);
        let inv = f.inv(&piv);
        for r in c + 1..n {
            let x = a[r * n + c].clone();
            if f.is_zero(&x) {
                continue;
            }
            let factor = f.mul(&x, &inv);
            for k in c + 1..n {
                let sub = f.mul(&factor, &a[c * n + k]);
                a[r * n + k] = f.sub(&a[r * n + k], &sub);
            }
        }
    }
    det
}

/// Incrementally maintained row-reduced basis of a subspace.
///
/// Used where many span tests share a growing set of generators.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    len: usize,
    // each row normalized so its pivot entry is one
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F, len: usize) -> Self {
        EchelonBasis {
            field,
            len,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.len, "vector length");
        let f = &self.field;
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let x = v[*p].clone();
            if f.is_zero(&x) {
                continue;
            }
            for (vi, ri) in v.iter_mut().zip(row) {
                if !f.is_zero(ri) {
                    *vi = f.sub(vi, &f.mul(&x, ri));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let r = self.reduce(v);
        let f = &self.field;
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]);
        let r: Vec<F::Elem> = r.iter().map(|x| f.mul(x, &inv)).collect();
        self.rows.push((p, r));
        true
    }
}
