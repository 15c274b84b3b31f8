use crate::algorithms::Algorithm;
use crate::error::{Error, Result};
use crate::error_model::{ProblemShape, ShiftMode};

use super::config::{ExperimentConfig, LambdaSetting, ShiftPair};

pub const PRESET_NAMES: [&str; 10] = [
    "table-sr", "table-sc", "table-com", "table-3cb", "table-3cs", "table-3cc", "table-pc",
    "table-pn", "table-pm", "table-3cp",
];

const KAPPA_SWEEP: [f64; 5] = [1e8, 1e10, 1e12, 1e14, 1e15];
const KAPPA_SWEEP_3C: [f64; 5] = [1e8, 1e10, 1e12, 1e14, 5e15];

fn base(
    shapes: &[(usize, usize)],
    kappas: &[f64],
    algorithms: &[Algorithm],
    modes: &[ShiftPair],
    lambda: f64,
) -> Result<ExperimentConfig> {
    let mut c = ExperimentConfig::new(shapes[0].0, shapes[0].1)?;
    c.shapes = shapes
        .iter()
        .map(|&(m, n)| ProblemShape::new(m, n))
        .collect::<Result<_>>()?;
    c.kappas = kappas.to_vec();
    c.algorithms = algorithms.to_vec();
    c.shift_modes = modes.to_vec();
    c.lambda = LambdaSetting::Fixed(lambda);
    c.seeds = (1..=10).collect();
    Ok(c)
}

/// Configuration reproducing one of the published experiment tables.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    use Algorithm::{ShiftedCholeskyQr3 as Sc3, ThreeC};
    use ShiftMode::{Deterministic as Det, Randomized as Rand};
    let rand = ShiftPair::same(Rand);
    let det = ShiftPair::same(Det);
    let sq = [(1024, 32)];
    match name {
        "table-sr" | "table-pc" => base(&sq, &KAPPA_SWEEP, &[Sc3], &[rand], 6.0),
        "table-sc" => base(&sq, &KAPPA_SWEEP, &[Sc3], &[det], 6.0),
        "table-com" => base(&sq, &[5e15], &[ThreeC, Sc3], &[rand], 6.0),
        "table-3cb" => base(&sq, &KAPPA_SWEEP_3C, &[ThreeC], &[rand], 6.0),
        "table-3cs" => base(
            &sq,
            &KAPPA_SWEEP_3C,
            &[ThreeC],
            &[ShiftPair {
                first: Det,
                second: Rand,
            }],
            6.0,
        ),
        "table-3cc" => base(&sq, &KAPPA_SWEEP_3C, &[ThreeC], &[det], 6.0),
        "table-pn" => base(
            &[(4096, 128), (4096, 256), (4096, 512), (4096, 1024), (4096, 2048)],
            &[1e12],
            &[Sc3],
            &[rand],
            8.0,
        ),
        "table-pm" => base(
            &[(256, 128), (512, 128), (1024, 128), (2048, 128), (4096, 128)],
            &[1e12],
            &[Sc3],
            &[rand],
            8.0,
        ),
        "table-3cp" => base(&sq, &KAPPA_SWEEP, &[ThreeC], &[rand], 6.0),
        other => Err(Error::Config(format!(
            "unknown preset '{other}' (known: {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}
