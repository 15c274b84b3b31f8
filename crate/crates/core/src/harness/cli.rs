use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::Parser;

use crate::algorithms::Algorithm;
use crate::error::{Error, Result};
use crate::error_model::{Precision, ProblemShape, ShiftNorm};

use super::config::{parse_kappas, parse_seeds, parse_shift_modes, ExperimentConfig, LambdaSetting, OutputFormat};
use super::presets::preset;
use super::run::run_experiment;
use super::runlog::append_run;
use super::table::emit_table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BREAKDOWN: i32 = 2;

/// Run CholeskyQR-family experiments and print a results table.
#[derive(Debug, Parser)]
#[command(name = "cholqr-harness", version)]
pub struct Args {
    /// Named configuration, e.g. table-sr. Other flags override its fields.
    #[arg(long)]
    pub preset: Option<String>,
    /// One of cqr, cqr2, scqr, sc3, 3c (comma-separated for several).
    #[arg(long)]
    pub algorithm: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Condition numbers, comma-separated.
    #[arg(long)]
    pub kappa: Option<String>,
    /// deterministic, randomized, both, or FIRST+SECOND for 3C.
    #[arg(long = "shift-mode")]
    pub shift_mode: Option<String>,
    /// A value in (0, 10] or `auto`.
    #[arg(long)]
    pub lambda: Option<String>,
    /// `S1..S2` (inclusive) or a comma-separated list.
    #[arg(long)]
    pub seeds: Option<String>,
    /// f64 or f32.
    #[arg(long)]
    pub precision: Option<String>,
    /// Norm scaling the second 3C shift: g or two.
    #[arg(long = "s2-norm")]
    pub s2_norm: Option<String>,
    /// csv or markdown.
    #[arg(long, default_value = "csv")]
    pub format: String,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Record per-cell wall-clock time.
    #[arg(long)]
    pub timing: bool,
    /// Append the CSV and a JSON config echo to this directory.
    #[arg(long = "log-dir")]
    pub log_dir: Option<PathBuf>,
}

fn parse_algorithms(s: &str) -> Result<Vec<Algorithm>> {
    s.split(',').map(|a| a.trim().parse()).collect()
}

fn parse_s2_norm(s: &str) -> Result<ShiftNorm> {
    match s {
        "g" | "gnorm" => Ok(ShiftNorm::GNorm),
        "two" | "2" => Ok(ShiftNorm::TwoNorm),
        other => Err(Error::Parse(format!("unknown norm '{other}'"))),
    }
}

/// Builds the configuration described by the flags.
pub fn build_config(args: &Args) -> Result<ExperimentConfig> {
    let mut c = match &args.preset {
        Some(name) => preset(name)?,
        None => {
            let (Some(m), Some(n)) = (args.m, args.n) else {
                return Err(Error::Config("either --preset or both --m and --n are required".into()));
            };
            let mut c = ExperimentConfig::new(m, n)?;
            if args.algorithm.is_none() || args.kappa.is_none() {
                return Err(Error::Config("--algorithm and --kappa are required without --preset".into()));
            }
            c.lambda = LambdaSetting::Auto;
            c
        }
    };
    if args.preset.is_some() && (args.m.is_some() || args.n.is_some()) {
        let m = args.m.unwrap_or(c.shapes[0].m());
        let n = args.n.unwrap_or(c.shapes[0].n());
        c.shapes = vec![ProblemShape::new(m, n)?];
    }
    if let Some(a) = &args.algorithm {
        c.algorithms = parse_algorithms(a)?;
    }
    if let Some(k) = &args.kappa {
        c.kappas = parse_kappas(k)?;
    }
    if let Some(s) = &args.shift_mode {
        c.shift_modes = parse_shift_modes(s)?;
    }
    if let Some(l) = &args.lambda {
        c.lambda = l.parse()?;
    }
    if let Some(s) = &args.seeds {
        c.seeds = parse_seeds(s)?;
    }
    if let Some(p) = &args.precision {
        c.precision = p.parse::<Precision>()?;
    }
    if let Some(s) = &args.s2_norm {
        c.s2_norm = parse_s2_norm(s)?;
    }
    c.output_format = args.format.parse::<OutputFormat>()?;
    c.output_path = args.out.clone();
    c.threads = args.threads;
    c.timing = args.timing;
    c.validate()?;
    Ok(c)
}

/// Entry point of the `cholqr-harness` binary. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let config = match build_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }
    let records = match run_experiment(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let table = emit_table(&records, config.output_format);
    let written = match &config.output_path {
        Some(p) => fs::write(p, &table).map_err(Error::from),
        None => {
            print!("{table}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    if let Some(dir) = &args.log_dir {
        if let Err(e) = append_run(dir, &config, &records) {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    }
    if records.iter().all(|r| r.status.is_ok()) {
        EXIT_OK
    } else {
        EXIT_BREAKDOWN
    }
}
