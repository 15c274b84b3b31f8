//! The five CholeskyQR pipelines, each instrumented stage by stage.
//!
//! Every pass records the g-norm and 2-norm of its input, the resulting
//! p-value and the shift it applied. The 2-norm comes from the Gram matrix
//! the pass forms anyway, so instrumentation costs one small eigensolve per
//! pass. A breakdown aborts the pipeline and returns the partial trace.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::error_model::{BoundFamily, ProblemShape, ShiftNorm, ShiftStrategy};
use crate::linalg::{
    add_shift, cholesky, g_norm, gram, solve_triangular_right, symmetric_eigenvalues, DenseMatrix,
    UpperTriangular,
};
use crate::metrics::p_ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    CholeskyQr,
    CholeskyQr2,
    ShiftedCholeskyQr,
    ShiftedCholeskyQr3,
    ThreeC,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::CholeskyQr,
        Algorithm::CholeskyQr2,
        Algorithm::ShiftedCholeskyQr,
        Algorithm::ShiftedCholeskyQr3,
        Algorithm::ThreeC,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::CholeskyQr => "cqr",
            Algorithm::CholeskyQr2 => "cqr2",
            Algorithm::ShiftedCholeskyQr => "scqr",
            Algorithm::ShiftedCholeskyQr3 => "sc3",
            Algorithm::ThreeC => "3c",
        }
    }

    /// Number of CholeskyQR-type passes.
    pub fn pass_count(self) -> usize {
        match self {
            Algorithm::CholeskyQr | Algorithm::ShiftedCholeskyQr => 1,
            Algorithm::CholeskyQr2 => 2,
            Algorithm::ShiftedCholeskyQr3 | Algorithm::ThreeC => 3,
        }
    }

    /// Number of passes that take a shift.
    pub fn shifted_passes(self) -> usize {
        match self {
            Algorithm::CholeskyQr | Algorithm::CholeskyQr2 => 0,
            Algorithm::ShiftedCholeskyQr | Algorithm::ShiftedCholeskyQr3 => 1,
            Algorithm::ThreeC => 2,
        }
    }

    pub fn bound_family(self) -> Option<BoundFamily> {
        match self {
            Algorithm::CholeskyQr2 => Some(BoundFamily::CholeskyQr2),
            Algorithm::ShiftedCholeskyQr3 => Some(BoundFamily::ShiftedCholeskyQr3),
            Algorithm::ThreeC => Some(BoundFamily::ThreeC),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "cqr" | "choleskyqr" => Ok(Algorithm::CholeskyQr),
            "cqr2" | "choleskyqr2" => Ok(Algorithm::CholeskyQr2),
            "scqr" | "shiftedcholeskyqr" => Ok(Algorithm::ShiftedCholeskyQr),
            "sc3" | "scqr3" | "shiftedcholeskyqr3" => Ok(Algorithm::ShiftedCholeskyQr3),
            "3c" | "threec" => Ok(Algorithm::ThreeC),
            other => Err(Error::Parse(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// What happened in one CholeskyQR or shifted CholeskyQR pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub stage_name: &'static str,
    /// 0 for unshifted passes.
    pub shift_applied: f64,
    pub g_norm_in: f64,
    pub two_norm_in: Option<f64>,
    /// `g_norm_in / two_norm_in`.
    pub p_value: Option<f64>,
    pub breakdown: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InstrumentationTrace {
    pub stages: Vec<StageRecord>,
}

impl InstrumentationTrace {
    /// p-value of the input to pass `k` (0-based).
    pub fn p(&self, k: usize) -> Option<f64> {
        self.stages.get(k).and_then(|s| s.p_value)
    }

    pub fn shift(&self, k: usize) -> Option<f64> {
        self.stages.get(k).map(|s| s.shift_applied)
    }

    /// Index of the pass that broke down, if any.
    pub fn breakdown_stage(&self) -> Option<usize> {
        self.stages.iter().position(|s| s.breakdown)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationResult {
    pub q: DenseMatrix,
    pub r: UpperTriangular,
    pub trace: InstrumentationTrace,
}

/// A pipeline that stopped early. `stage` is 0-based.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{algorithm} failed in pass {}: {source}", .stage + 1)]
pub struct PipelineError {
    pub algorithm: Algorithm,
    pub stage: usize,
    #[source]
    pub source: Error,
    pub trace: InstrumentationTrace,
}

impl PipelineError {
    pub fn is_breakdown(&self) -> bool {
        matches!(self.source, Error::Breakdown { .. })
    }
}

pub type PipelineResult = Result<FactorizationResult, PipelineError>;

struct Pass {
    q: DenseMatrix,
    v: UpperTriangular,
}

/// Runs one pass on `t`, appending its record to `trace`.
fn run_pass(
    t: &DenseMatrix,
    shift: Option<&ShiftStrategy>,
    stage_name: &'static str,
    trace: &mut InstrumentationTrace,
) -> Result<Pass, Error> {
    let shape = ProblemShape::new(t.rows(), t.cols())?;
    let u = gram(t);
    let g = g_norm(t);
    let two = symmetric_eigenvalues(&u).ok().map(|e| e[0].max(0.0).sqrt());
    let p = two.and_then(|s| p_ratio(g, s, t.cols()));
    let s = match shift {
        None => 0.0,
        Some(strategy) => {
            let norm = match strategy.norm {
                ShiftNorm::GNorm => g,
                ShiftNorm::TwoNorm => two.ok_or(Error::Convergence {
                    sweeps: crate::linalg::MAX_SWEEPS,
                })?,
            };
            strategy.shift(shape, norm)
        }
    };
    let mut record = StageRecord {
        stage_name,
        shift_applied: s,
        g_norm_in: g,
        two_norm_in: two,
        p_value: p,
        breakdown: false,
    };
    let shifted = add_shift(&u, s)?;
    let v = match cholesky(&shifted) {
        Ok(v) => v,
        Err(e) => {
            record.breakdown = true;
            trace.stages.push(record);
            return Err(e);
        }
    };
    trace.stages.push(record);
    let q = solve_triangular_right(t, &v)?;
    Ok(Pass { q, v })
}

/// Runs a chain of passes; `shifts[k]` is the strategy of pass `k` or `None`.
fn run_chain(
    algorithm: Algorithm,
    t: &DenseMatrix,
    passes: &[(&'static str, Option<&ShiftStrategy>)],
) -> PipelineResult {
    let mut trace = InstrumentationTrace::default();
    let mut input = t.clone();
    let mut r: Option<UpperTriangular> = None;
    for (stage, &(name, shift)) in passes.iter().enumerate() {
        let fail = |source: Error, trace: &InstrumentationTrace| PipelineError {
            algorithm,
            stage,
            source,
            trace: trace.clone(),
        };
        let pass = run_pass(&input, shift, name, &mut trace).map_err(|e| fail(e, &trace))?;
        r = Some(match r {
            None => pass.v,
            Some(prev) => pass.v.mul(&prev).map_err(|e| fail(e, &trace))?,
        });
        input = pass.q;
    }
    Ok(FactorizationResult {
        q: input,
        r: r.expect("at least one pass"),
        trace,
    })
}

/// `U = TᵀT`, `V = chol(U)`, `Q = T V⁻¹`.
pub fn cholesky_qr(t: &DenseMatrix) -> PipelineResult {
    run_chain(Algorithm::CholeskyQr, t, &[("cholesky_qr", None)])
}

/// Two CholeskyQR passes; `R = V₁·V`.
pub fn cholesky_qr2(t: &DenseMatrix) -> PipelineResult {
    run_chain(
        Algorithm::CholeskyQr2,
        t,
        &[("cholesky_qr", None), ("cholesky_qr", None)],
    )
}

/// CholeskyQR on `TᵀT + sI`. The returned `Q` is only better conditioned
/// than `T`, not orthonormal.
pub fn shifted_cholesky_qr(t: &DenseMatrix, strategy: &ShiftStrategy) -> PipelineResult {
    run_chain(
        Algorithm::ShiftedCholeskyQr,
        t,
        &[("shifted_cholesky_qr", Some(strategy))],
    )
}

/// Shifted CholeskyQR followed by CholeskyQR2; `R = V₃·(V₁·V)`.
pub fn shifted_cholesky_qr3(t: &DenseMatrix, strategy: &ShiftStrategy) -> PipelineResult {
    run_chain(
        Algorithm::ShiftedCholeskyQr3,
        t,
        &[
            ("shifted_cholesky_qr", Some(strategy)),
            ("cholesky_qr", None),
            ("cholesky_qr", None),
        ],
    )
}

/// Two shifted passes (`s₁` from `‖T‖`, `s₂` from the first `Q`) and a
/// final CholeskyQR; `R = V₃·(V₁·V)`.
pub fn three_c(t: &DenseMatrix, first: &ShiftStrategy, second: &ShiftStrategy) -> PipelineResult {
    run_chain(
        Algorithm::ThreeC,
        t,
        &[
            ("shifted_cholesky_qr", Some(first)),
            ("shifted_cholesky_qr", Some(second)),
            ("cholesky_qr", None),
        ],
    )
}

/// Dispatches by [`Algorithm`]. Unshifted pipelines ignore the strategies;
/// single-shift pipelines use `first`.
pub fn run(
    algorithm: Algorithm,
    t: &DenseMatrix,
    first: &ShiftStrategy,
    second: &ShiftStrategy,
) -> PipelineResult {
    match algorithm {
        Algorithm::CholeskyQr => cholesky_qr(t),
        Algorithm::CholeskyQr2 => cholesky_qr2(t),
        Algorithm::ShiftedCholeskyQr => shifted_cholesky_qr(t, first),
        Algorithm::ShiftedCholeskyQr3 => shifted_cholesky_qr3(t, first),
        Algorithm::ThreeC => three_c(t, first, second),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_model::Precision;
    use crate::linalg::{fro_norm, random_orthonormal_columns};

    fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    fn rand6() -> ShiftStrategy {
        ShiftStrategy::randomized(6.0, Precision::Binary64).unwrap()
    }

    #[test]
    fn orthonormal_input_is_fixed_point() {
        let t = random_orthonormal_columns(64, 8, 3);
        let eye = UpperTriangular::identity(8).to_dense();
        let cases: Vec<(PipelineResult, f64)> = vec![
            (cholesky_qr(&t), 1e-14),
            (cholesky_qr2(&t), 1e-14),
            (shifted_cholesky_qr(&t, &rand6()), 1e-10),
            (shifted_cholesky_qr3(&t, &rand6()), 1e-10),
            (three_c(&t, &rand6(), &rand6()), 1e-9),
        ];
        for (res, tol) in cases {
            let res = res.unwrap();
            assert!(max_abs_diff(&res.q, &t) < tol);
            assert!(max_abs_diff(&res.r.to_dense(), &eye) < tol);
        }
    }

    #[test]
    fn square_triangular_input() {
        let t = DenseMatrix::from_rows(&[&[2.0, 3.0], &[0.0, 4.0]]).unwrap();
        let res = cholesky_qr(&t).unwrap();
        assert!(max_abs_diff(&res.r.to_dense(), &t) < 1e-14);
        assert!(max_abs_diff(&res.q, &DenseMatrix::identity(2, 2)) < 1e-14);
        assert_eq!(res.trace.stages.len(), 1);
        assert_eq!(res.trace.stages[0].shift_applied, 0.0);
    }

    #[test]
    fn trace_lengths_and_shifts() {
        let t = random_orthonormal_columns(50, 5, 9);
        let s = rand6();
        for alg in Algorithm::ALL {
            let res = run(alg, &t, &s, &s).unwrap();
            assert_eq!(res.trace.stages.len(), alg.pass_count(), "{alg}");
            let shifted = res.trace.stages.iter().filter(|st| st.shift_applied > 0.0).count();
            assert_eq!(shifted, alg.shifted_passes(), "{alg}");
            assert!(res.r.diagonal().iter().all(|&d| d > 0.0));
        }
    }

    #[test]
    fn breakdown_carries_partial_trace() {
        // rank-deficient: second column duplicates the first
        let t = DenseMatrix::from_fn(10, 2, |i, _| (i + 1) as f64).unwrap();
        let err = cholesky_qr2(&t).unwrap_err();
        assert!(err.is_breakdown());
        assert_eq!(err.stage, 0);
        assert_eq!(err.trace.stages.len(), 1);
        assert!(err.trace.stages[0].breakdown);
        assert_eq!(err.trace.breakdown_stage(), Some(0));
    }

    #[test]
    fn shift_uses_stage_input_norm() {
        let t = random_orthonormal_columns(40, 4, 2).scale(3.0);
        let s = ShiftStrategy::deterministic(Precision::Binary64);
        let res = shifted_cholesky_qr(&t, &s).unwrap();
        let shape = ProblemShape::new(40, 4).unwrap();
        let want = s.shift(shape, g_norm(&t));
        assert_eq!(res.trace.stages[0].shift_applied, want);
        let rebuilt = res.q.mul_upper(&res.r).unwrap();
        assert!(fro_norm(&rebuilt.sub(&t).unwrap()) < 1e-13);
    }

    #[test]
    fn two_norm_shift_variant() {
        let t = random_orthonormal_columns(40, 4, 2).scale_columns(&[1.0, 0.5, 0.25, 0.1]).unwrap();
        let g = rand6();
        let two = rand6().with_norm(ShiftNorm::TwoNorm);
        let a = shifted_cholesky_qr(&t, &g).unwrap();
        let b = shifted_cholesky_qr(&t, &two).unwrap();
        // g-norm and 2-norm coincide here (largest column carries σ₁)
        let ratio = a.trace.stages[0].shift_applied / b.trace.stages[0].shift_applied;
        assert!((ratio - 1.0).abs() < 1e-12);
    }
}
