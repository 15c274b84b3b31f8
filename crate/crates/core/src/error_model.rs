//! Closed-form rounding-error quantities: accumulation factors, success
//! probabilities, shift formulas, parameter settings and the sufficient
//! conditions on `κ₂(T)` for each pipeline.
//!
//! Everything here is a pure function of its arguments. Probabilities are
//! returned unclamped; a negative value means the corresponding bound carries
//! no guarantee for that parameter choice.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `λ` the randomized model is used with.
pub const LAMBDA_MAX: f64 = 10.0;

/// Floating-point format whose unit roundoff drives every formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Precision {
    Binary64,
    Binary32,
}

impl Precision {
    /// Unit roundoff: `2⁻⁵³` or `2⁻²⁴`.
    pub fn unit_roundoff(self) -> f64 {
        match self {
            Precision::Binary64 => f64::EPSILON / 2.0,
            Precision::Binary32 => f32::EPSILON as f64 / 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Binary64 => "f64",
            Precision::Binary32 => "f32",
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f64" | "binary64" => Ok(Precision::Binary64),
            "f32" | "binary32" => Ok(Precision::Binary32),
            other => Err(Error::Parse(format!("unknown precision '{other}'"))),
        }
    }
}

/// `m x n` problem size with `m >= n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemShape {
    m: usize,
    n: usize,
}

impl ProblemShape {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::Domain(format!("need m >= n >= 1, got {m}x{n}")));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn mf(&self) -> f64 {
        self.m as f64
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `√m·n·u + √(n+1)·n·u`, the factor shared by every randomized bound.
    pub fn randomized_factor(&self, u: f64) -> f64 {
        let (m, n) = (self.mf(), self.nf());
        m.sqrt() * n * u + (n + 1.0).sqrt() * n * u
    }

    /// `m·n·u + n(n+1)·u`, the deterministic counterpart.
    pub fn deterministic_factor(&self, u: f64) -> f64 {
        let (m, n) = (self.mf(), self.nf());
        m * n * u + n * (n + 1.0) * u
    }
}

/// Default `λ`: 6 for the 1024x32 class of problems, 8 once `max(m, n²)`
/// exceeds 4096.
pub fn default_lambda(shape: ProblemShape) -> f64 {
    let n2 = shape.n().saturating_mul(shape.n());
    if shape.m().max(n2) <= 4096 {
        6.0
    } else {
        8.0
    }
}

pub fn validate_lambda(lambda: f64) -> Result<f64> {
    if lambda > 0.0 && lambda <= LAMBDA_MAX {
        Ok(lambda)
    } else {
        Err(Error::Domain(format!("lambda must lie in (0, {LAMBDA_MAX}], got {lambda}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ShiftMode {
    /// `s = 11(mnu + n(n+1)u)‖·‖²`
    Deterministic,
    /// `s = 11λ(√m·nu + √(n+1)·nu)‖·‖²`
    Randomized,
}

impl ShiftMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ShiftMode::Deterministic => "deterministic",
            ShiftMode::Randomized => "randomized",
        }
    }
}

impl FromStr for ShiftMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deterministic" | "det" | "column" => Ok(ShiftMode::Deterministic),
            "randomized" | "rand" => Ok(ShiftMode::Randomized),
            other => Err(Error::Parse(format!("unknown shift mode '{other}'"))),
        }
    }
}

/// Which norm of the stage input scales the shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ShiftNorm {
    #[default]
    GNorm,
    TwoNorm,
}

/// How a shifted Cholesky stage picks `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftStrategy {
    pub mode: ShiftMode,
    /// Only read in randomized mode.
    pub lambda: f64,
    pub precision: Precision,
    pub norm: ShiftNorm,
}

impl ShiftStrategy {
    pub fn deterministic(precision: Precision) -> Self {
        Self {
            mode: ShiftMode::Deterministic,
            lambda: 1.0,
            precision,
            norm: ShiftNorm::GNorm,
        }
    }

    pub fn randomized(lambda: f64, precision: Precision) -> Result<Self> {
        Ok(Self {
            mode: ShiftMode::Randomized,
            lambda: validate_lambda(lambda)?,
            precision,
            norm: ShiftNorm::GNorm,
        })
    }

    pub fn with_norm(mut self, norm: ShiftNorm) -> Self {
        self.norm = norm;
        self
    }

    /// Shift for a stage whose input has the given shape and norm.
    pub fn shift(&self, shape: ProblemShape, norm: f64) -> f64 {
        let u = self.precision.unit_roundoff();
        match self.mode {
            ShiftMode::Deterministic => shift_deterministic(shape, u, norm),
            ShiftMode::Randomized => shift_randomized(shape, u, self.lambda, norm),
        }
    }
}

/// `γₖ = k·u / (1 − k·u)`.
pub fn gamma(k: u64, u: f64) -> Result<f64> {
    let ku = k as f64 * u;
    if ku >= 1.0 {
        return Err(Error::Domain(format!("gamma needs k*u < 1, got {ku}")));
    }
    Ok(ku / (1.0 - ku))
}

/// `γ̃ₖ(λ) = exp(λ√k·u + k·u²/(1−u)) − 1`.
pub fn gamma_tilde(k: u64, u: f64, lambda: f64) -> f64 {
    let k = k as f64;
    (lambda * k.sqrt() * u + k * u * u / (1.0 - u)).exp_m1()
}

/// `2·exp(−λ²(1−u)²/2)`, i.e. `1 − P(λ)` without cancellation.
fn failure_mass(lambda: f64, u: f64) -> f64 {
    let a = lambda * (1.0 - u);
    2.0 * (-0.5 * a * a).exp()
}

/// `P(λ) = 1 − 2·exp(−λ²(1−u)²/2)`.
pub fn prob_p(lambda: f64, u: f64) -> f64 {
    1.0 - failure_mass(lambda, u)
}

/// `Q(λ, N) = 1 − N·(1 − P(λ))`.
pub fn prob_q(lambda: f64, count: f64, u: f64) -> f64 {
    1.0 - count * failure_mass(lambda, u)
}

/// Rounding-event counts that feed `Q(λ, ·)` for each kind of stage.
pub mod events {
    /// Gram product `TᵀT`: `m·n²`.
    pub fn gram(m: usize, n: usize) -> f64 {
        m as f64 * (n as f64).powi(2)
    }

    /// Cholesky of an `n x n` matrix: `n³/6 + n²/2 + n/3`.
    pub fn cholesky(n: usize) -> f64 {
        let n = n as f64;
        n * (n + 1.0) * (2.0 * n + 1.0) / 6.0
    }

    /// One triangular solve: `n(n+1)/2`.
    pub fn triangular_solve(n: usize) -> f64 {
        let n = n as f64;
        n * (n + 1.0) / 2.0
    }

    /// Triangular-triangular product: `n³`.
    pub fn triangular_product(n: usize) -> f64 {
        (n as f64).powi(3)
    }
}

fn pass_probability(shape: ProblemShape, lambda: f64, u: f64) -> f64 {
    prob_q(lambda, events::gram(shape.m(), shape.n()), u)
        * prob_q(lambda, events::cholesky(shape.n()), u)
        * prob_q(lambda, events::triangular_solve(shape.n()), u)
}

/// Probability with which the CholeskyQR2 bounds hold.
pub fn probability_cholesky_qr2(shape: ProblemShape, lambda: f64, u: f64) -> f64 {
    pass_probability(shape, lambda, u).powi(2)
        * prob_q(lambda, events::triangular_product(shape.n()), u)
}

/// Probability with which the single shifted pass bounds hold.
pub fn probability_shifted(shape: ProblemShape, lambda: f64, u: f64) -> f64 {
    pass_probability(shape, lambda, u)
}

/// Probability with which the condition-number relation after the shifted
/// pass holds.
pub fn probability_condition_growth(shape: ProblemShape, lambda: f64, u: f64) -> f64 {
    let a = prob_q(lambda, events::gram(shape.m(), shape.n()), u)
        * prob_q(lambda, events::cholesky(shape.n()), u);
    a * a * prob_q(lambda, events::triangular_solve(shape.n()), u)
}

/// Probability with which the three-pass (SC3 and 3C) bounds hold.
pub fn probability_three_pass(shape: ProblemShape, lambda: f64, u: f64) -> f64 {
    pass_probability(shape, lambda, u).powi(3)
        * prob_q(lambda, events::triangular_product(shape.n()), u).powi(2)
}

/// `s = 11(m·n·u + n(n+1)·u)·g²`.
pub fn shift_deterministic(shape: ProblemShape, u: f64, gnorm: f64) -> f64 {
    11.0 * shape.deterministic_factor(u) * gnorm * gnorm
}

/// `s = 11λ(√m·n·u + √(n+1)·n·u)·g²`.
pub fn shift_randomized(shape: ProblemShape, u: f64, lambda: f64, gnorm: f64) -> f64 {
    11.0 * lambda * shape.randomized_factor(u) * gnorm * gnorm
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub label: &'static str,
    pub lhs: f64,
    pub threshold: f64,
    pub satisfied: bool,
}

impl Condition {
    fn new(label: &'static str, lhs: f64, threshold: f64) -> Self {
        Self {
            label,
            lhs,
            threshold,
            satisfied: lhs <= threshold,
        }
    }
}

/// Which set of size assumptions a problem meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SettingsRegime {
    /// Both `1/2200` conditions hold; the randomized analysis applies.
    Probabilistic,
    /// Only the `1/64` conditions of the deterministic analysis hold.
    DeterministicOnly,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettingsReport {
    /// `max(λ√m·n·u, m·n·u) ≤ 1/2200` and `max(λ√(n+1)·n·u, n(n+1)·u) ≤ 1/2200`.
    pub probabilistic: [Condition; 2],
    /// `m·n·u ≤ 1/64` and `n(n+1)·u ≤ 1/64`.
    pub deterministic: [Condition; 2],
}

impl SettingsReport {
    pub fn regime(&self) -> SettingsRegime {
        if self.probabilistic.iter().all(|c| c.satisfied) {
            SettingsRegime::Probabilistic
        } else if self.deterministic.iter().all(|c| c.satisfied) {
            SettingsRegime::DeterministicOnly
        } else {
            SettingsRegime::Neither
        }
    }
}

pub fn check_settings(shape: ProblemShape, u: f64, lambda: f64) -> SettingsReport {
    let (m, n) = (shape.m() as f64, shape.n() as f64);
    let tight = 1.0 / 2200.0;
    let loose = 1.0 / 64.0;
    SettingsReport {
        probabilistic: [
            Condition::new(
                "max(lambda*sqrt(m)*n*u, m*n*u) <= 1/2200",
                (lambda * m.sqrt() * n * u).max(m * n * u),
                tight,
            ),
            Condition::new(
                "max(lambda*sqrt(n+1)*n*u, n*(n+1)*u) <= 1/2200",
                (lambda * (n + 1.0).sqrt() * n * u).max(n * (n + 1.0) * u),
                tight,
            ),
        ],
        deterministic: [
            Condition::new("m*n*u <= 1/64", m * n * u, loose),
            Condition::new("n*(n+1)*u <= 1/64", n * (n + 1.0) * u, loose),
        ],
    }
}

/// Pipelines that come with closed-form orthogonality/residual bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundFamily {
    CholeskyQr2,
    ShiftedCholeskyQr3,
    ThreeC,
}

/// Largest `κ₂(T)` for which the selected analysis guarantees its bounds.
///
/// * CholeskyQR2: `δᵢ = 8pᵢκ₂(T)√(λ(√m·n·u + √(n+1)·n·u)) ≤ 1` for both
///   `p₁` and `p₂`, so the larger of the two governs.
/// * Shifted CholeskyQR3: `1 / (86λ·p₁p₂(√m·n·u + √(n+1)·n·u))`.
/// * 3C: `1 / (4.89λ·p₁p₂·n√n·u)`.
pub fn sufficient_kappa(
    family: BoundFamily,
    shape: ProblemShape,
    u: f64,
    lambda: f64,
    p1: f64,
    p2: f64,
) -> f64 {
    let n = shape.n() as f64;
    match family {
        BoundFamily::CholeskyQr2 => {
            1.0 / (8.0 * p1.max(p2) * (lambda * shape.randomized_factor(u)).sqrt())
        }
        BoundFamily::ShiftedCholeskyQr3 => {
            1.0 / (86.0 * lambda * p1 * p2 * shape.randomized_factor(u))
        }
        BoundFamily::ThreeC => 1.0 / (4.89 * lambda * p1 * p2 * n * n.sqrt() * u),
    }
}

/// Deterministic CholeskyQR2 condition `8κ₂(T)√(m·n·u + n(n+1)·u) ≤ 1`,
/// solved for `κ₂(T)`.
pub fn sufficient_kappa_deterministic_cholesky_qr2(shape: ProblemShape, u: f64) -> f64 {
    1.0 / (8.0 * shape.deterministic_factor(u).sqrt())
}
