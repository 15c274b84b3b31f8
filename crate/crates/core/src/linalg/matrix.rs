use std::fmt;

use crate::error::{Error, Result};

/// Dense rectangular matrix of `f64`, stored column-major.
///
/// Columns are contiguous slices, which is what every hot loop in this crate
/// (column norms, Gram products, column-oriented triangular solves) walks.
/// Public constructors reject non-finite entries.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: idx % rows,
                col: idx / rows,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally sized rows.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let mut data = vec![0.0; m * n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                data[j * m + i] = v;
            }
        }
        Self::from_col_major(m, n, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self::from_col_major(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// `rows x cols` matrix with ones on the leading diagonal.
    pub fn identity(rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for k in 0..rows.min(cols) {
            out.data[k * rows + k] = 1.0;
        }
        out
    }

    /// Internal constructor that skips the finiteness scan. Pipelines use it
    /// for intermediate results where an overflow is reported downstream.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub(crate) fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Splits storage into the first `j` columns (read-only) and the rest.
    pub(crate) fn split_at_col_mut(&mut self, j: usize) -> (&[f64], &mut [f64]) {
        let (l, r) = self.data.split_at_mut(j * self.rows);
        (l, r)
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.rows)
    }

    /// Column-major backing storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for (i, &v) in self.col(j).iter().enumerate() {
                out.set(j, i, v);
            }
        }
        out
    }

    /// `self * other`, accumulated column by column.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (k, &b) in other.col(j).iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                for (d, &a) in dst.iter_mut().zip(self.col(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self * r` for an upper-triangular right factor.
    pub fn mul_upper(&self, r: &UpperTriangular) -> Result<DenseMatrix> {
        if self.cols != r.dim() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by triangular {}x{}",
                self.rows,
                self.cols,
                r.dim(),
                r.dim()
            )));
        }
        let mut out = Self::zeros(self.rows, r.dim());
        for j in 0..r.dim() {
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for k in 0..=j {
                let b = r.get(k, j);
                for (d, &a) in dst.iter_mut().zip(self.col(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, c: f64) -> DenseMatrix {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|v| v * c).collect())
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(f64, f64) -> f64) -> Result<DenseMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_raw(self.rows, self.cols, data))
    }

    /// Scales column `j` by `d[j]`.
    pub fn scale_columns(&self, d: &[f64]) -> Result<DenseMatrix> {
        if d.len() != self.cols {
            return Err(Error::Shape("column scale length".into()));
        }
        let mut out = self.clone();
        for (j, &s) in d.iter().enumerate() {
            out.col_mut(j).iter_mut().for_each(|v| *v *= s);
        }
        Ok(out)
    }

    /// Copies the leading `cols` columns.
    pub fn leading_columns(&self, cols: usize) -> DenseMatrix {
        assert!(cols > 0 && cols <= self.cols);
        Self::from_raw(self.rows, cols, self.data[..self.rows * cols].to_vec())
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, " ")?;
            for j in 0..self.cols.min(8) {
                write!(f, " {:>12.5e}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Square upper-triangular matrix; entries below the diagonal are exactly zero.
#[derive(Clone, PartialEq)]
pub struct UpperTriangular {
    dim: usize,
    data: Vec<f64>,
}

impl UpperTriangular {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for k in 0..dim {
            data[k * dim + k] = 1.0;
        }
        Self { dim, data }
    }

    /// Takes the upper triangle of a square dense matrix. Fails if anything
    /// below the diagonal is nonzero.
    pub fn from_dense(a: &DenseMatrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::Shape("triangular factor must be square".into()));
        }
        let dim = a.rows();
        for j in 0..dim {
            for i in (j + 1)..dim {
                if a.get(i, j) != 0.0 {
                    return Err(Error::Shape(format!("nonzero below diagonal at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            dim,
            data: a.as_slice().to_vec(),
        })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_dense(&DenseMatrix::from_rows(rows)?)
    }

    pub(crate) fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.dim + i]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i <= j);
        self.data[j * self.dim + i] = v;
    }

    /// Column `j` above and on the diagonal.
    #[inline]
    pub fn col_upper(&self, j: usize) -> &[f64] {
        &self.data[j * self.dim..j * self.dim + j + 1]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|k| self.get(k, k)).collect()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_raw(self.dim, self.dim, self.data.clone())
    }

    /// Product of two upper-triangular matrices, touching only the
    /// nonzero triangle: `(A B)(i,j) = sum_{k=i..=j} A(i,k) B(k,j)`.
    pub fn mul(&self, other: &UpperTriangular) -> Result<UpperTriangular> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!(
                "triangular dims {} and {}",
                self.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for j in 0..n {
            for i in 0..=j {
                let mut acc = 0.0;
                for k in i..=j {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for UpperTriangular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UpperTriangular({:?})", self.to_dense())
    }
}

/// Square matrix that is bitwise symmetric.
#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Checks exact symmetry.
    pub fn from_dense(a: &DenseMatrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::Shape("symmetric matrix must be square".into()));
        }
        let n = a.rows();
        for j in 0..n {
            for i in (j + 1)..n {
                if a.get(i, j) != a.get(j, i) {
                    return Err(Error::Shape(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            dim: n,
            data: a.as_slice().to_vec(),
        })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_dense(&DenseMatrix::from_rows(rows)?)
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_raw(dim, DenseMatrix::identity(dim, dim).into_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_raw(dim, vec![0.0; dim * dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.dim + i]
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_raw(self.dim, self.dim, self.data.clone())
    }
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymmetricMatrix({:?})", self.to_dense())
    }
}
