//! Seeded test matrices `T = W·Σ·Yᵀ` with `‖T‖₂ = 1` and prescribed `κ₂(T)`.
//!
//! `Σ = diag(1, σ^{1/(n-1)}, …, σ^{(n-2)/(n-1)}, σ)` with `σ = 1/κ`. `W` has
//! orthonormal columns drawn from the Haar measure; only the leading `n`
//! columns of an `m x m` orthogonal `W` ever touch `T`, so only those are
//! built. `Y` holds the left singular vectors of an `n x n` matrix with
//! uniform `[0, 1)` entries, see [`right_factor`].

use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    gram, min_singular_value, random_orthonormal_columns, symmetric_eigen, two_norm, uniform_matrix, DenseMatrix,
};

/// Above this condition number, `κ₂` cannot be measured reliably in binary64
/// and the generator's prescribed value is reported instead.
pub const MEASURABLE_KAPPA: f64 = 1e7;
pub const MAX_KAPPA: f64 = 1e16;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedMatrix {
    pub matrix: DenseMatrix,
    pub kappa_target: f64,
    /// The prescribed singular values, largest first.
    pub sigma_values: Vec<f64>,
    pub seed: u64,
}

/// Seed used for `Y` when `W` uses `seed`.
pub fn right_factor_seed(seed: u64) -> u64 {
    seed.wrapping_add(1)
}

/// Orthogonal `n x n` factor `Y`: left singular vectors, by decreasing
/// singular value, of a seeded matrix with `U[0, 1)` entries.
///
/// The leading vector is close to `(1, …, 1)/√n`, so the dominant singular
/// direction of `T` is spread evenly over its columns and `‖T‖_g / ‖T‖₂`
/// sits near the lower end of `[1/√n, 1]`. A Haar-distributed `Y` instead
/// concentrates it on a few columns.
pub fn right_factor(n: usize, seed: u64) -> Result<DenseMatrix> {
    let a = uniform_matrix(n, n, seed);
    Ok(symmetric_eigen(&gram(&a.transpose()))?.1)
}

/// Geometric singular values from 1 down to exactly `1/kappa`.
pub fn geometric_sigmas(n: usize, kappa: f64) -> Vec<f64> {
    let sigma_min = 1.0 / kappa;
    (0..n)
        .map(|i| match i {
            0 => 1.0,
            _ if i == n - 1 => sigma_min,
            _ => sigma_min.powf(i as f64 / (n - 1) as f64),
        })
        .collect()
}

pub fn generate(m: usize, n: usize, kappa: f64, seed: u64) -> Result<GeneratedMatrix> {
    if n < 2 || m < n {
        return Err(Error::Domain(format!("need m >= n >= 2, got {m}x{n}")));
    }
    if !(1.0..=MAX_KAPPA).contains(&kappa) {
        return Err(Error::Domain(format!("kappa must lie in [1, 1e16], got {kappa}")));
    }
    let sigma_values = geometric_sigmas(n, kappa);
    let w = random_orthonormal_columns(m, n, seed);
    let y = right_factor(n, right_factor_seed(seed))?;
    let matrix = w.scale_columns(&sigma_values)?.matmul(&y.transpose())?;
    Ok(GeneratedMatrix {
        matrix,
        kappa_target: kappa,
        sigma_values,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KappaProvenance {
    Measured,
    Metadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaMeasurement {
    pub value: f64,
    pub provenance: KappaProvenance,
}

/// `κ₂(T)`: measured for targets up to `1e7` (and checked against the
/// prescribed value to `1e-4` relative), taken from metadata beyond.
pub fn measured_kappa(gm: &GeneratedMatrix) -> Result<KappaMeasurement> {
    if gm.kappa_target > MEASURABLE_KAPPA {
        return Ok(KappaMeasurement {
            value: gm.kappa_target,
            provenance: KappaProvenance::Metadata,
        });
    }
    let hi = two_norm(&gm.matrix)?;
    let lo = min_singular_value(&gm.matrix)?;
    let value = hi / lo;
    let rel = ((value - gm.kappa_target) / gm.kappa_target).abs();
    if rel > 1e-4 {
        return Err(Error::Domain(format!(
            "measured kappa {value:e} disagrees with target {:e}",
            gm.kappa_target
        )));
    }
    Ok(KappaMeasurement {
        value,
        provenance: KappaProvenance::Measured,
    })
}

/// Writes `"m n"` and then one line per row, 17 significant digits each.
pub fn write_text<W: Write>(t: &DenseMatrix, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", t.rows(), t.cols())?;
    for i in 0..t.rows() {
        let row: Vec<String> = (0..t.cols()).map(|j| format!("{:.16e}", t.get(i, j))).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_text<R: BufRead>(input: R) -> Result<DenseMatrix> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))??;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad dimension '{s}'"))))
        .collect::<Result<_>>()?;
    let [m, n] = dims[..] else {
        return Err(Error::Parse(format!("header must be 'm n', got '{header}'")));
    };
    let mut rows = Vec::with_capacity(m);
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad value '{s}' on row {i}"))))
            .collect::<Result<_>>()?;
        if vals.len() != n {
            return Err(Error::Parse(format!("row {i} has {} values, expected {n}", vals.len())));
        }
        rows.push(vals);
    }
    if rows.len() != m {
        return Err(Error::Parse(format!("expected {m} rows, got {}", rows.len())));
    }
    DenseMatrix::from_fn(m, n, |i, j| rows[i][j])
}
