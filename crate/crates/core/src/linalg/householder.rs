//! Householder QR and seeded random orthogonal matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::kernels::dot;
use super::matrix::{DenseMatrix, UpperTriangular};

/// Thin Householder QR `A = Q R` of an `m x n` matrix with `m >= n`.
///
/// Signs are fixed so that `R` has a nonnegative diagonal, which makes the
/// factorization unique for full-rank input.
pub fn householder_qr(a: &DenseMatrix) -> (DenseMatrix, UpperTriangular) {
    let (m, n) = a.shape();
    assert!(m >= n, "householder_qr needs rows >= cols");
    let mut work = a.clone();
    // Unit-norm reflector vectors; an all-zero vector means "skip".
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut diag = vec![0.0; n];

    for k in 0..n {
        let x = &work.col(k)[k..];
        let norm = dot(x, x).sqrt();
        if norm == 0.0 {
            reflectors.push(vec![0.0; m - k]);
            continue;
        }
        let alpha = if x[0] >= 0.0 { -norm } else { norm };
        let mut v = x.to_vec();
        v[0] -= alpha;
        let vnorm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|e| *e /= vnorm);
        diag[k] = alpha;
        let col = work.col_mut(k);
        col[k] = alpha;
        col[k + 1..].iter_mut().for_each(|e| *e = 0.0);
        for j in (k + 1)..n {
            let cj = &mut work.col_mut(j)[k..];
            let c = 2.0 * dot(&v, cj);
            for (e, &vi) in cj.iter_mut().zip(&v) {
                *e -= c * vi;
            }
        }
        reflectors.push(v);
    }

    // Accumulate Q = H_0 ... H_{n-1} [I_n; 0].
    let mut q = DenseMatrix::identity(m, n);
    for k in (0..n).rev() {
        let v = &reflectors[k];
        for j in 0..n {
            let cj = &mut q.col_mut(j)[k..];
            let c = 2.0 * dot(v, cj);
            if c == 0.0 {
                continue;
            }
            for (e, &vi) in cj.iter_mut().zip(v) {
                *e -= c * vi;
            }
        }
    }

    let mut r = UpperTriangular::identity(n);
    for j in 0..n {
        for i in 0..=j {
            r.set(i, j, work.get(i, j));
        }
    }
    for k in 0..n {
        if diag[k] < 0.0 {
            q.col_mut(k).iter_mut().for_each(|e| *e = -*e);
            for j in k..n {
                r.set(k, j, -r.get(k, j));
            }
        }
    }
    (q, r)
}

/// Seeded `rows x cols` matrix of independent standard normals, filled
/// column by column.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..rows * cols).map(|_| StandardNormal.sample(&mut rng)).collect();
    DenseMatrix::from_raw(rows, cols, data)
}

/// `rows x cols` matrix of independent `U[0, 1)` entries, deterministic in
/// `seed`.
pub fn uniform_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.random::<f64>()).collect();
    DenseMatrix::from_raw(rows, cols, data)
}

/// Haar-distributed `dim x dim` orthogonal matrix, deterministic in `seed`.
pub fn random_orthogonal(dim: usize, seed: u64) -> DenseMatrix {
    random_orthonormal_columns(dim, dim, seed)
}

/// First `cols` columns of [`random_orthogonal`]`(rows, seed)` (in exact
/// arithmetic): the Gaussian draw is column-major, so its leading columns do
/// not depend on how many columns are drawn, and QR is column-progressive.
pub fn random_orthonormal_columns(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    assert!(rows >= cols && cols >= 1);
    householder_qr(&gaussian_matrix(rows, cols, seed)).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fro_norm;
    use crate::linalg::kernels::gram;

    fn orth_defect(q: &DenseMatrix) -> f64 {
        let g = gram(q).to_dense();
        fro_norm(&g.sub(&DenseMatrix::identity(q.cols(), q.cols())).unwrap())
    }

    #[test]
    fn one_by_one_is_plus_minus_one() {
        for seed in 0..20 {
            let w = random_orthogonal(1, seed);
            assert_eq!(w.get(0, 0).abs(), 1.0);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(random_orthogonal(17, 3), random_orthogonal(17, 3));
        assert_ne!(random_orthogonal(17, 3), random_orthogonal(17, 4));
    }

    #[test]
    fn dim_64_is_orthogonal() {
        let w = random_orthogonal(64, 7);
        assert!(orth_defect(&w) <= 6.4e-12);
    }

    #[test]
    fn qr_reconstructs_and_r_diag_nonnegative() {
        let a = gaussian_matrix(30, 6, 11);
        let (q, r) = householder_qr(&a);
        assert!(r.diagonal().iter().all(|&d| d >= 0.0));
        let err = fro_norm(&q.mul_upper(&r).unwrap().sub(&a).unwrap());
        assert!(err < 1e-13 * fro_norm(&a));
        assert!(orth_defect(&q) < 1e-14);
    }

    #[test]
    fn thin_columns_match_full() {
        let full = random_orthogonal(40, 5);
        let thin = random_orthonormal_columns(40, 6, 5);
        let lead = full.leading_columns(6);
        let diff = fro_norm(&thin.sub(&lead).unwrap());
        assert!(diff < 1e-13, "{diff}");
    }
}
