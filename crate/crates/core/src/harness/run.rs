use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{self, Algorithm, InstrumentationTrace};
use crate::error::{Error, Result};
use crate::error_model::{ProblemShape, ShiftMode, ShiftStrategy};
use crate::matrixgen;
use crate::metrics::{make_report, ReportContext};

use super::config::{ExperimentConfig, ShiftPair};

/// Outcome of one cell. Stages are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Ok,
    Breakdown { stage: usize },
    /// A non-breakdown numerical failure, e.g. a singular triangular factor.
    Failed { stage: usize },
}

impl Status {
    pub fn is_ok(&self) -> bool {
        matches!(self, Status::Ok)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Ok => f.write_str("ok"),
            Status::Breakdown { stage } => write!(f, "breakdown:stage_{stage}"),
            Status::Failed { stage } => write!(f, "error:stage_{stage}"),
        }
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "ok" {
            return Ok(Status::Ok);
        }
        let bad = || Error::Parse(format!("bad status '{s}'"));
        let (kind, stage) = s.split_once(":stage_").ok_or_else(bad)?;
        let stage: usize = stage.parse().map_err(|_| bad())?;
        match kind {
            "breakdown" => Ok(Status::Breakdown { stage }),
            "error" => Ok(Status::Failed { stage }),
            _ => Err(bad()),
        }
    }
}

/// One row of the output table. Metric fields are `None` when the run did
/// not complete; p-values and shifts of the passes that did run are kept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub m: usize,
    pub n: usize,
    pub kappa: f64,
    pub algorithm: Algorithm,
    pub shift_mode: String,
    pub lambda: f64,
    pub seed: u64,
    pub status: Status,
    pub orthogonality: Option<f64>,
    pub residual_abs: Option<f64>,
    pub residual_rel: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub p3: Option<f64>,
    pub shift_s1: Option<f64>,
    pub shift_s2: Option<f64>,
    pub bound_orth: Option<f64>,
    pub bound_resid: Option<f64>,
    pub wall_time_ms: Option<f64>,
}

impl ExperimentRecord {
    fn order(&self, other: &Self) -> std::cmp::Ordering {
        (self.m, self.n)
            .cmp(&(other.m, other.n))
            .then(self.kappa.total_cmp(&other.kappa))
            .then(self.algorithm.cmp(&other.algorithm))
            .then(self.shift_mode.cmp(&other.shift_mode))
            .then(self.seed.cmp(&other.seed))
    }

    /// Both measured errors within the evaluated bounds. `None` without
    /// bounds or without a completed run.
    pub fn within_bounds(&self) -> Option<bool> {
        Some(self.orthogonality? <= self.bound_orth? && self.residual_abs? <= self.bound_resid?)
    }
}

#[derive(Debug, Clone)]
struct Cell {
    shape: ProblemShape,
    kappa: f64,
    algorithm: Algorithm,
    shifts: ShiftPair,
    seed: u64,
}

fn cells(config: &ExperimentConfig) -> Vec<Cell> {
    let mut out = Vec::new();
    for &shape in &config.shapes {
        for &kappa in &config.kappas {
            for &algorithm in &config.algorithms {
                let mut labels: Vec<String> = Vec::new();
                for &shifts in &config.shift_modes {
                    // Unshifted and single-shift pipelines see fewer distinct
                    // settings than there are pairs.
                    let label = shifts.label_for(algorithm);
                    if labels.contains(&label) {
                        continue;
                    }
                    labels.push(label);
                    for &seed in &config.seeds {
                        out.push(Cell {
                            shape,
                            kappa,
                            algorithm,
                            shifts,
                            seed,
                        });
                    }
                }
            }
        }
    }
    out
}

fn strategy(mode: ShiftMode, lambda: f64, config: &ExperimentConfig) -> Result<ShiftStrategy> {
    Ok(match mode {
        ShiftMode::Deterministic => ShiftStrategy::deterministic(config.precision),
        ShiftMode::Randomized => ShiftStrategy::randomized(lambda, config.precision)?,
    })
}

fn shifts_from(trace: &InstrumentationTrace, algorithm: Algorithm) -> (Option<f64>, Option<f64>) {
    let k = algorithm.shifted_passes();
    let s1 = if k >= 1 { trace.shift(0) } else { None };
    let s2 = if k >= 2 { trace.shift(1) } else { None };
    (s1, s2)
}

fn run_cell(cell: &Cell, config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let lambda = config.lambda.resolve(cell.shape);
    let first = strategy(cell.shifts.first, lambda, config)?;
    let second = strategy(cell.shifts.second, lambda, config)?.with_norm(config.s2_norm);
    let gm = matrixgen::generate(cell.shape.m(), cell.shape.n(), cell.kappa, cell.seed)?;
    let t = &gm.matrix;

    let mut record = ExperimentRecord {
        m: cell.shape.m(),
        n: cell.shape.n(),
        kappa: cell.kappa,
        algorithm: cell.algorithm,
        shift_mode: cell.shifts.label_for(cell.algorithm),
        lambda,
        seed: cell.seed,
        status: Status::Ok,
        orthogonality: None,
        residual_abs: None,
        residual_rel: None,
        p1: None,
        p2: None,
        p3: None,
        shift_s1: None,
        shift_s2: None,
        bound_orth: None,
        bound_resid: None,
        wall_time_ms: None,
    };

    let start = Instant::now();
    let outcome = algorithms::run(cell.algorithm, t, &first, &second);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    if config.timing {
        record.wall_time_ms = Some(elapsed);
    }

    let trace = match &outcome {
        Ok(res) => &res.trace,
        Err(e) => &e.trace,
    };
    (record.p1, record.p2, record.p3) = (trace.p(0), trace.p(1), trace.p(2));
    (record.shift_s1, record.shift_s2) = shifts_from(trace, cell.algorithm);

    match outcome {
        Ok(res) => {
            let ctx = ReportContext {
                algorithm: cell.algorithm,
                lambda,
                unit_roundoff: config.precision.unit_roundoff(),
            };
            let rep = make_report(&res, t, &ctx)?;
            record.orthogonality = Some(rep.orthogonality);
            record.residual_abs = Some(rep.residual_abs);
            record.residual_rel = Some(rep.residual_rel);
            record.bound_orth = rep.bound_orth;
            record.bound_resid = rep.bound_resid;
        }
        Err(e) if e.is_breakdown() => record.status = Status::Breakdown { stage: e.stage + 1 },
        Err(e) => record.status = Status::Failed { stage: e.stage + 1 },
    }
    Ok(record)
}

/// Runs every cell of `config`. Breakdowns become records; only invalid
/// configurations and internal errors are returned as `Err`. The output is
/// sorted and independent of the thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    config.validate()?;
    let work = cells(config);
    let exec = || -> Result<Vec<ExperimentRecord>> {
        work.par_iter().map(|c| run_cell(c, config)).collect()
    };
    let mut records = match config.threads {
        None => exec()?,
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(exec)?,
    };
    records.sort_by(|a, b| a.order(b));
    Ok(records)
}
