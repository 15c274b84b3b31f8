//! Dense storage and the numerical kernels behind every pipeline.

mod householder;
mod jacobi;
mod kernels;
mod matrix;
mod norms;

pub use householder::{gaussian_matrix, householder_qr, random_orthogonal, random_orthonormal_columns, uniform_matrix};
pub use jacobi::{symmetric_eigen, symmetric_eigenvalues, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use kernels::{add_shift, cholesky, gram, solve_triangular_right};
pub use matrix::{DenseMatrix, SymmetricMatrix, UpperTriangular};
pub use norms::{column_norms, fro_norm, g_norm, min_singular_value, two_norm};
