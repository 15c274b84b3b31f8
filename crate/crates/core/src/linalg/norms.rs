use super::householder::householder_qr;
use super::jacobi::symmetric_eigenvalues;
use super::kernels::{dot, gram};
use super::matrix::{DenseMatrix, UpperTriangular};
use crate::error::Result;

/// Euclidean norm of every column.
pub fn column_norms(t: &DenseMatrix) -> Vec<f64> {
    t.columns().map(|c| dot(c, c).sqrt()).collect()
}

/// g-norm: the largest Euclidean column norm.
pub fn g_norm(t: &DenseMatrix) -> f64 {
    column_norms(t).into_iter().fold(0.0, f64::max)
}

pub fn fro_norm(t: &DenseMatrix) -> f64 {
    dot(t.as_slice(), t.as_slice()).sqrt()
}

/// Largest singular value, from Jacobi eigenvalues of the smaller Gram
/// matrix.
pub fn two_norm(t: &DenseMatrix) -> Result<f64> {
    let g = if t.cols() <= t.rows() {
        gram(t)
    } else {
        gram(&t.transpose())
    };
    let eig = symmetric_eigenvalues(&g)?;
    Ok(eig[0].max(0.0).sqrt())
}

/// Smallest singular value of a matrix with `rows >= cols`.
///
/// Reduces to the triangular factor `R` of a Householder QR, then takes the
/// largest eigenvalue of the Gram matrix of `R⁻¹`, so the answer comes from
/// the top of a spectrum instead of the bottom. Relative accuracy is roughly
/// `u * κ₂(T)`; beyond `κ₂ ≈ 1e8` treat the value as indicative only.
pub fn min_singular_value(t: &DenseMatrix) -> Result<f64> {
    assert!(t.rows() >= t.cols(), "min_singular_value needs rows >= cols");
    let (_, r) = householder_qr(t);
    if r.diagonal().iter().any(|&d| d == 0.0) {
        return Ok(0.0);
    }
    let inv = upper_inverse(&r);
    let top = symmetric_eigenvalues(&gram(&inv))?[0];
    Ok(1.0 / top.sqrt())
}

fn upper_inverse(r: &UpperTriangular) -> DenseMatrix {
    let n = r.dim();
    let mut inv = DenseMatrix::zeros(n, n);
    for j in 0..n {
        inv.set(j, j, 1.0 / r.get(j, j));
        for i in (0..j).rev() {
            let mut acc = 0.0;
            for k in (i + 1)..=j {
                acc += r.get(i, k) * inv.get(k, j);
            }
            inv.set(i, j, -acc / r.get(i, i));
        }
    }
    inv
}
