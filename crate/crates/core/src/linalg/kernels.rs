//! The four kernels every CholeskyQR variant is assembled from.

use super::matrix::{DenseMatrix, SymmetricMatrix, UpperTriangular};
use crate::error::{Error, Result};

#[inline]
/// Inner product with eight interleaved partial sums, combined pairwise.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    const LANES: usize = 8;
    let mut acc = [0.0; LANES];
    let (ca, cb) = (a.chunks_exact(LANES), b.chunks_exact(LANES));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for l in 0..LANES {
            acc[l] += x[l] * y[l];
        }
    }
    let quad = [acc[0] + acc[4], acc[1] + acc[5], acc[2] + acc[6], acc[3] + acc[7]];
    ((quad[0] + quad[2]) + (quad[1] + quad[3])) + tail
}

/// Gram matrix `TᵀT`. The upper triangle is computed and mirrored, so the
/// result is bitwise symmetric.
pub fn gram(t: &DenseMatrix) -> SymmetricMatrix {
    let n = t.cols();
    let mut data = vec![0.0; n * n];
    for j in 0..n {
        let cj = t.col(j);
        for i in 0..=j {
            let v = dot(t.col(i), cj);
            data[j * n + i] = v;
            data[i * n + j] = v;
        }
    }
    SymmetricMatrix::from_raw(n, data)
}

/// Upper Cholesky factor `V` with `VᵀV = U`.
///
/// A pivot that is not strictly positive (including NaN) is a breakdown.
pub fn cholesky(u: &SymmetricMatrix) -> Result<UpperTriangular> {
    let n = u.dim();
    let mut v = UpperTriangular::zeros(n);
    for j in 0..n {
        for i in 0..j {
            let mut acc = u.get(i, j);
            for k in 0..i {
                acc -= v.get(k, i) * v.get(k, j);
            }
            v.set(i, j, acc / v.get(i, i));
        }
        let mut pivot = u.get(j, j);
        for k in 0..j {
            let x = v.get(k, j);
            pivot -= x * x;
        }
        if !(pivot > 0.0) {
            return Err(Error::Breakdown { index: j, pivot });
        }
        v.set(j, j, pivot.sqrt());
    }
    Ok(v)
}

/// `U + sI`.
pub fn add_shift(u: &SymmetricMatrix, shift: f64) -> Result<SymmetricMatrix> {
    if !(shift >= 0.0) || !shift.is_finite() {
        return Err(Error::Domain(format!("shift must be finite and nonnegative, got {shift}")));
    }
    let n = u.dim();
    let mut out = u.clone();
    let data = out.data_mut();
    for k in 0..n {
        data[k * n + k] += shift;
    }
    Ok(out)
}

/// Solves `Q V = T` for `Q` by substitution, one column of `Q` at a time.
///
/// Each row of `Q` sees the same operation order as row-wise back
/// substitution; `V⁻¹` is never formed.
pub fn solve_triangular_right(t: &DenseMatrix, v: &UpperTriangular) -> Result<DenseMatrix> {
    let n = v.dim();
    if t.cols() != n {
        return Err(Error::Shape(format!(
            "right-hand side has {} columns, factor is {n}x{n}",
            t.cols()
        )));
    }
    if let Some(index) = (0..n).find(|&k| v.get(k, k) == 0.0) {
        return Err(Error::SingularTriangular { index });
    }
    let m = t.rows();
    let mut q = DenseMatrix::from_raw(m, n, t.as_slice().to_vec());
    for j in 0..n {
        let (done, rest) = q.split_at_col_mut(j);
        let col = &mut rest[..m];
        for k in 0..j {
            let c = v.get(k, j);
            let qk = &done[k * m..(k + 1) * m];
            for (x, &y) in col.iter_mut().zip(qk) {
                *x -= y * c;
            }
        }
        let d = v.get(j, j);
        col.iter_mut().for_each(|x| *x /= d);
    }
    Ok(q)
}
