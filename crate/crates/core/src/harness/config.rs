use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::algorithms::Algorithm;
use crate::error::{Error, Result};
use crate::error_model::{default_lambda, validate_lambda, Precision, ProblemShape, ShiftMode, ShiftNorm};

/// Shift modes for the (up to two) shifted passes of a pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ShiftPair {
    pub first: ShiftMode,
    pub second: ShiftMode,
}

impl ShiftPair {
    pub fn same(mode: ShiftMode) -> Self {
        Self {
            first: mode,
            second: mode,
        }
    }

    /// Label for a cell: `none` for unshifted pipelines, one mode for a
    /// single shift, `first+second` for 3C.
    pub fn label_for(&self, algorithm: Algorithm) -> String {
        match algorithm.shifted_passes() {
            0 => "none".to_string(),
            1 => self.first.as_str().to_string(),
            _ => format!("{}+{}", self.first.as_str(), self.second.as_str()),
        }
    }
}

/// Parses one `--shift-mode` value into the pairs it stands for.
pub fn parse_shift_modes(s: &str) -> Result<Vec<ShiftPair>> {
    match s {
        "both" => Ok(vec![
            ShiftPair::same(ShiftMode::Deterministic),
            ShiftPair::same(ShiftMode::Randomized),
        ]),
        _ => {
            if let Some((a, b)) = s.split_once('+') {
                Ok(vec![ShiftPair {
                    first: a.parse()?,
                    second: b.parse()?,
                }])
            } else {
                Ok(vec![ShiftPair::same(s.parse()?)])
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LambdaSetting {
    Auto,
    Fixed(f64),
}

impl LambdaSetting {
    pub fn resolve(&self, shape: ProblemShape) -> f64 {
        match *self {
            LambdaSetting::Auto => default_lambda(shape),
            LambdaSetting::Fixed(l) => l,
        }
    }
}

impl FromStr for LambdaSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(LambdaSetting::Auto);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("lambda must be a number or 'auto', got '{s}'")))?;
        Ok(LambdaSetting::Fixed(validate_lambda(v)?))
    }
}

impl fmt::Display for LambdaSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSetting::Auto => f.write_str("auto"),
            LambdaSetting::Fixed(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::Parse(format!("unknown format '{other}'"))),
        }
    }
}

/// Parses `"1..10"` (inclusive) or `"1,4,9"`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parse(format!("bad seed list '{s}'"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if b < a {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect()
    }
}

pub fn parse_kappas(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad kappa '{p}'")))
        })
        .collect()
}

/// A full sweep: every (shape, κ, algorithm, shift pair, seed) combination
/// is one cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub shapes: Vec<ProblemShape>,
    pub kappas: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub shift_modes: Vec<ShiftPair>,
    pub lambda: LambdaSetting,
    pub seeds: Vec<u64>,
    pub precision: Precision,
    /// Norm that scales the second shift of 3C.
    pub s2_norm: ShiftNorm,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Record wall-clock time per cell. Off by default so output is
    /// byte-reproducible.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        Ok(Self {
            shapes: vec![ProblemShape::new(m, n)?],
            kappas: Vec::new(),
            algorithms: Vec::new(),
            shift_modes: vec![ShiftPair::same(ShiftMode::Randomized)],
            lambda: LambdaSetting::Auto,
            seeds: (1..=10).collect(),
            precision: Precision::Binary64,
            s2_norm: ShiftNorm::GNorm,
            output_path: None,
            output_format: OutputFormat::Csv,
            threads: None,
            timing: false,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Config(what.to_string()))
            }
        };
        need(!self.shapes.is_empty(), "no problem shapes")?;
        need(!self.kappas.is_empty(), "kappa list is empty")?;
        need(!self.algorithms.is_empty(), "algorithm list is empty")?;
        need(!self.seeds.is_empty(), "seed list is empty")?;
        need(!self.shift_modes.is_empty(), "shift mode list is empty")?;
        need(self.threads != Some(0), "threads must be positive")?;
        for k in &self.kappas {
            if !(1.0..=crate::matrixgen::MAX_KAPPA).contains(k) {
                return Err(Error::Config(format!("kappa {k:e} outside [1, 1e16]")));
            }
        }
        for s in &self.shapes {
            if s.n() < 2 {
                return Err(Error::Config(format!("n must be at least 2, got {}", s.n())));
            }
            validate_lambda(self.lambda.resolve(*s)).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    /// Non-fatal remarks about the configuration.
    pub fn warnings(&self) -> Vec<String> {
        self.shapes
            .iter()
            .filter(|s| s.m() < 4 * s.n())
            .map(|s| format!("{}x{} is not tall-skinny (m < 4n)", s.m(), s.n()))
            .collect()
    }
}
