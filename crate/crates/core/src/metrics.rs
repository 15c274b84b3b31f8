//! Quality metrics, p-values and the closed-form bounds they are checked
//! against.

use serde::Serialize;

use crate::algorithms::{Algorithm, FactorizationResult};
use crate::error::Result;
use crate::error_model::{BoundFamily, ProblemShape};
use crate::linalg::{fro_norm, g_norm, gram, two_norm, DenseMatrix, UpperTriangular};

/// Relative slack within which a p-value outside `[1/√n, 1]` is treated as
/// rounding noise and snapped to the interval.
pub const P_SNAP_TOL: f64 = 1e-10;

/// `‖QᵀQ − I‖_F`.
pub fn orthogonality_error(q: &DenseMatrix) -> f64 {
    let n = q.cols();
    let mut g = gram(q).to_dense().into_vec();
    for k in 0..n {
        g[k * n + k] -= 1.0;
    }
    g.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `‖QR − T‖_F`.
pub fn residual_error(q: &DenseMatrix, r: &UpperTriangular, t: &DenseMatrix) -> Result<f64> {
    Ok(fro_norm(&q.mul_upper(r)?.sub(t)?))
}

/// `g / two` for an input with `n` columns. Returns `None` for a zero
/// 2-norm. Values that miss `[1/√n, 1]` by less than [`P_SNAP_TOL`] are
/// snapped onto it; larger excursions are returned as computed.
pub fn p_ratio(g: f64, two: f64, n: usize) -> Option<f64> {
    if !(two > 0.0) {
        return None;
    }
    let p = g / two;
    let lo = 1.0 / (n as f64).sqrt();
    if p > 1.0 && p <= 1.0 + P_SNAP_TOL {
        Some(1.0)
    } else if p < lo && p >= lo * (1.0 - P_SNAP_TOL) {
        Some(lo)
    } else {
        Some(p)
    }
}

/// `p = ‖T‖_g / ‖T‖₂`.
pub fn p_value(t: &DenseMatrix) -> Result<f64> {
    let two = two_norm(t)?;
    Ok(p_ratio(g_norm(t), two, t.cols()).unwrap_or(f64::NAN))
}

/// Orthogonality bound of the selected analysis.
///
/// CholeskyQR2 uses `p₂`, shifted CholeskyQR3 and 3C use `p₃`.
pub fn bound_orthogonality(
    family: BoundFamily,
    shape: ProblemShape,
    u: f64,
    lambda: f64,
    p2: f64,
    p3: f64,
) -> f64 {
    let (m, n) = (shape.m() as f64, shape.n() as f64);
    match family {
        BoundFamily::CholeskyQr2 => 6.0 * lambda * p2 * p2 * shape.randomized_factor(u),
        BoundFamily::ShiftedCholeskyQr3 => 6.0 * lambda * p3 * p3 * shape.randomized_factor(u),
        BoundFamily::ThreeC => 3645.0 * p3 * p3 * (m.sqrt() + (n + 1.0).sqrt()).powi(3) * n * u,
    }
}

/// Weight on `λ·n√n·u·‖T‖₂` in the residual bound of each analysis.
pub fn residual_weight(family: BoundFamily, p1: f64, p2: f64, p3: f64) -> f64 {
    match family {
        BoundFamily::CholeskyQr2 => 1.2 * p1 + 1.32 * p2 + 1.32 * p1 * p2,
        BoundFamily::ShiftedCholeskyQr3 => {
            1.67 * p1 + 2.18 * p2 + 2.20 * p1 * p2 + 2.70 * p3 + 2.71 * p1 * p3
        }
        BoundFamily::ThreeC => 1.67 * p1 + 3.35 * p2 + 3.38 * p1 * p2 + 4.08 * p3 + 4.12 * p1 * p3,
    }
}

#[allow(clippy::too_many_arguments)]
pub fn bound_residual(
    family: BoundFamily,
    shape: ProblemShape,
    u: f64,
    lambda: f64,
    p1: f64,
    p2: f64,
    p3: f64,
    two_norm_t: f64,
) -> f64 {
    let n = shape.n() as f64;
    residual_weight(family, p1, p2, p3) * lambda * n * n.sqrt() * u * two_norm_t
}

/// Parameters the bounds are evaluated with.
#[derive(Debug, Clone, Copy)]
pub struct ReportContext {
    pub algorithm: Algorithm,
    pub lambda: f64,
    pub unit_roundoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualityReport {
    pub orthogonality: f64,
    pub residual_abs: f64,
    pub residual_rel: f64,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub p3: Option<f64>,
    /// Only for pipelines with a closed-form analysis.
    pub bound_orth: Option<f64>,
    pub bound_resid: Option<f64>,
    /// (orthogonality within bound, residual within bound)
    pub bound_satisfied: Option<(bool, bool)>,
}

/// Measures a finished run and evaluates its bounds with the measured
/// p-values from the trace.
pub fn make_report(result: &FactorizationResult, t: &DenseMatrix, ctx: &ReportContext) -> Result<QualityReport> {
    let orthogonality = orthogonality_error(&result.q);
    let residual_abs = residual_error(&result.q, &result.r, t)?;
    let residual_rel = residual_abs / fro_norm(t);
    let trace = &result.trace;
    let (p1, p2, p3) = (trace.p(0), trace.p(1), trace.p(2));

    let mut report = QualityReport {
        orthogonality,
        residual_abs,
        residual_rel,
        p1,
        p2,
        p3,
        bound_orth: None,
        bound_resid: None,
        bound_satisfied: None,
    };

    if let Some(family) = ctx.algorithm.bound_family() {
        let shape = ProblemShape::new(t.rows(), t.cols())?;
        let two_t = match trace.stages.first().and_then(|s| s.two_norm_in) {
            Some(v) => v,
            None => two_norm(t)?,
        };
        // CholeskyQR2 has no third pass; its p₃ slot is unused.
        let (q1, q2, q3) = (p1.unwrap_or(1.0), p2.unwrap_or(1.0), p3.unwrap_or(1.0));
        let bo = bound_orthogonality(family, shape, ctx.unit_roundoff, ctx.lambda, q2, q3);
        let br = bound_residual(family, shape, ctx.unit_roundoff, ctx.lambda, q1, q2, q3, two_t);
        report.bound_orth = Some(bo);
        report.bound_resid = Some(br);
        report.bound_satisfied = Some((orthogonality <= bo, residual_abs <= br));
    }
    Ok(report)
}
