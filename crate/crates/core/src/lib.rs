//! Tall-skinny QR factorization with the CholeskyQR family.
//!
//! The crate provides CholeskyQR, CholeskyQR2, shifted CholeskyQR, shifted
//! CholeskyQR3 and 3C for dense `m x n` matrices with `m >= n`, with shifts
//! chosen either by the classical column-based formula or by the smaller
//! formula that follows from a randomized rounding-error model. Around the
//! pipelines sit:
//!
//! * [`linalg`]: column-major storage and the Gram/Cholesky/solve kernels,
//! * [`error_model`]: the closed-form error factors, probabilities, shifts
//!   and sufficient conditions,
//! * [`matrixgen`]: seeded test matrices with prescribed condition number,
//! * [`metrics`]: orthogonality, residual, p-values and theoretical bounds,
//! * [`harness`]: parameter sweeps, presets and CSV/Markdown tables.
//!
//! ```
//! use cholqr::{algorithms, error_model::{Precision, ShiftStrategy}, matrixgen, metrics};
//!
//! let gm = matrixgen::generate(256, 8, 1e12, 1).unwrap();
//! let shift = ShiftStrategy::randomized(6.0, Precision::Binary64).unwrap();
//! let res = algorithms::shifted_cholesky_qr3(&gm.matrix, &shift).unwrap();
//! assert!(metrics::orthogonality_error(&res.q) < 1e-13);
//! ```

pub mod algorithms;
pub mod error;
pub mod error_model;
pub mod harness;
pub mod linalg;
pub mod matrixgen;
pub mod metrics;

pub use error::{Error, Result};
