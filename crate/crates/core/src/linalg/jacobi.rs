//! Cyclic Jacobi eigenvalue iteration for small symmetric matrices.

use super::matrix::{DenseMatrix, SymmetricMatrix};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 50;
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenvalues of `a` in descending order.
///
/// Sweeps row by row over the strict upper triangle until the off-diagonal
/// Frobenius mass drops below `1e-14 * ‖A‖_F`.
pub fn symmetric_eigenvalues(a: &SymmetricMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(a, false)?.0)
}

/// Eigenvalues in descending order and the matching orthonormal
/// eigenvectors as columns.
pub fn symmetric_eigen(a: &SymmetricMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let (values, vectors) = jacobi(a, true)?;
    Ok((values, vectors.expect("vectors requested")))
}

fn jacobi(a: &SymmetricMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<DenseMatrix>)> {
    let n = a.dim();
    let mut v: Vec<f64> = if want_vectors {
        DenseMatrix::identity(n, n).into_vec()
    } else {
        Vec::new()
    };
    let mut w: Vec<f64> = a.to_dense().into_vec();
    let idx = |i: usize, j: usize| j * n + i;

    let total: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * total;
    let off = |w: &[f64]| -> f64 {
        let mut s = 0.0;
        for j in 0..n {
            for i in 0..j {
                s += 2.0 * w[idx(i, j)] * w[idx(i, j)];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&w) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Convergence { sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[idx(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = w[idx(p, p)];
                let aqq = w[idx(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = w[idx(k, p)];
                    let akq = w[idx(k, q)];
                    let new_p = c * akp - s * akq;
                    let new_q = s * akp + c * akq;
                    w[idx(k, p)] = new_p;
                    w[idx(p, k)] = new_p;
                    w[idx(k, q)] = new_q;
                    w[idx(q, k)] = new_q;
                }
                w[idx(p, p)] = app - t * apq;
                w[idx(q, q)] = aqq + t * apq;
                w[idx(p, q)] = 0.0;
                w[idx(q, p)] = 0.0;
                if want_vectors {
                    for k in 0..n {
                        let vkp = v[idx(k, p)];
                        let vkq = v[idx(k, q)];
                        v[idx(k, p)] = c * vkp - s * vkq;
                        v[idx(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| w[idx(b, b)].total_cmp(&w[idx(a, a)]));
    let eig = order.iter().map(|&k| w[idx(k, k)]).collect();
    let vectors = want_vectors.then(|| {
        let data = order.iter().flat_map(|&k| v[k * n..(k + 1) * n].to_vec()).collect();
        DenseMatrix::from_raw(n, n, data)
    });
    Ok((eig, vectors))
}
