use std::fmt::Write;

use serde::Serialize;

use crate::algorithms::Algorithm;
use crate::error::{Error, Result};

use super::config::OutputFormat;
use super::run::{ExperimentRecord, Status};

pub const CSV_COLUMNS: [&str; 19] = [
    "m",
    "n",
    "kappa",
    "algorithm",
    "shift_mode",
    "lambda",
    "seed",
    "status",
    "orthogonality",
    "residual_abs",
    "residual_rel",
    "p1",
    "p2",
    "p3",
    "shift_s1",
    "shift_s2",
    "bound_orth",
    "bound_resid",
    "wall_time_ms",
];

/// Marker for an absent value in CSV output.
pub const NA: &str = "na";
/// Marker for an absent value in Markdown output.
pub const DASH: &str = "−";

/// 17 significant digits; parses back to the identical `f64`.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_else(|| NA.to_string())
}

pub fn emit_table(records: &[ExperimentRecord], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => emit_csv(records),
        OutputFormat::Markdown => emit_markdown(records),
    }
}

pub fn emit_csv(records: &[ExperimentRecord]) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        let fields = [
            r.m.to_string(),
            r.n.to_string(),
            num(r.kappa),
            r.algorithm.to_string(),
            r.shift_mode.clone(),
            num(r.lambda),
            r.seed.to_string(),
            r.status.to_string(),
            opt(r.orthogonality),
            opt(r.residual_abs),
            opt(r.residual_rel),
            opt(r.p1),
            opt(r.p2),
            opt(r.p3),
            opt(r.shift_s1),
            opt(r.shift_s2),
            opt(r.bound_orth),
            opt(r.bound_resid),
            opt(r.wall_time_ms),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
    if header != CSV_COLUMNS.join(",") {
        return Err(Error::Parse(format!("unexpected header '{header}'")));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != CSV_COLUMNS.len() {
            return Err(Error::Parse(format!("row {i}: {} fields", f.len())));
        }
        let bad = |col: usize| Error::Parse(format!("row {i}: bad {} '{}'", CSV_COLUMNS[col], f[col]));
        let int = |col: usize| f[col].parse::<u64>().map_err(|_| bad(col));
        let float = |col: usize| f[col].parse::<f64>().map_err(|_| bad(col));
        let maybe = |col: usize| -> Result<Option<f64>> {
            if f[col] == NA {
                Ok(None)
            } else {
                float(col).map(Some)
            }
        };
        out.push(ExperimentRecord {
            m: int(0)? as usize,
            n: int(1)? as usize,
            kappa: float(2)?,
            algorithm: f[3].parse::<Algorithm>()?,
            shift_mode: f[4].to_string(),
            lambda: float(5)?,
            seed: int(6)?,
            status: f[7].parse::<Status>()?,
            orthogonality: maybe(8)?,
            residual_abs: maybe(9)?,
            residual_rel: maybe(10)?,
            p1: maybe(11)?,
            p2: maybe(12)?,
            p3: maybe(13)?,
            shift_s1: maybe(14)?,
            shift_s2: maybe(15)?,
            bound_orth: maybe(16)?,
            bound_resid: maybe(17)?,
            wall_time_ms: maybe(18)?,
        });
    }
    Ok(out)
}

/// Median; the mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[k] } else { 0.5 * (v[k - 1] + v[k]) })
}

/// Seed-aggregated view of all records sharing a configuration. Error
/// medians run over completed seeds; p-value medians over every seed that
/// reached the pass in question.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub m: usize,
    pub n: usize,
    pub kappa: f64,
    pub algorithm: Algorithm,
    pub shift_mode: String,
    pub seeds: usize,
    pub failures: usize,
    pub orthogonality: Option<f64>,
    pub residual_abs: Option<f64>,
    pub residual_rel: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub p3: Option<f64>,
}

/// Groups records (assumed sorted as produced by `run_experiment`).
pub fn summarize(records: &[ExperimentRecord]) -> Vec<CellSummary> {
    let same = |a: &ExperimentRecord, b: &ExperimentRecord| {
        (a.m, a.n, a.algorithm, &a.shift_mode) == (b.m, b.n, b.algorithm, &b.shift_mode)
            && a.kappa.to_bits() == b.kappa.to_bits()
    };
    records
        .chunk_by(same)
        .map(|group| {
            let ok: Vec<&ExperimentRecord> = group.iter().filter(|r| r.status.is_ok()).collect();
            let med = |f: fn(&ExperimentRecord) -> Option<f64>| {
                median(&ok.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
            };
            let med_all = |f: fn(&ExperimentRecord) -> Option<f64>| {
                median(&group.iter().filter_map(f).collect::<Vec<_>>())
            };
            let first = &group[0];
            CellSummary {
                m: first.m,
                n: first.n,
                kappa: first.kappa,
                algorithm: first.algorithm,
                shift_mode: first.shift_mode.clone(),
                seeds: group.len(),
                failures: group.len() - ok.len(),
                orthogonality: med(|r| r.orthogonality),
                residual_abs: med(|r| r.residual_abs),
                residual_rel: med(|r| r.residual_rel),
                p1: med_all(|r| r.p1),
                p2: med_all(|r| r.p2),
                p3: med_all(|r| r.p3),
            }
        })
        .collect()
}

fn sci(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2e}")).unwrap_or_else(|| DASH.to_string())
}

fn fixed(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| DASH.to_string())
}

/// One table per (algorithm, shift mode) with a column per `(m, n, κ)` and
/// seed medians in the cells. Error cells where more than half of the seeds
/// broke down show `−`; the failure row gives the exact count.
pub fn emit_markdown(records: &[ExperimentRecord]) -> String {
    let summaries = summarize(records);
    let mut groups: Vec<(Algorithm, String)> = Vec::new();
    for s in &summaries {
        let key = (s.algorithm, s.shift_mode.clone());
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    let mut out = String::new();
    for (alg, mode) in groups {
        let cols: Vec<&CellSummary> = summaries
            .iter()
            .filter(|s| s.algorithm == alg && s.shift_mode == mode)
            .collect();
        let one_shape = cols.iter().all(|s| (s.m, s.n) == (cols[0].m, cols[0].n));
        let _ = writeln!(out, "### {alg} ({mode})");
        if one_shape {
            let _ = writeln!(out, "\nm = {}, n = {}\n", cols[0].m, cols[0].n);
        } else {
            out.push('\n');
        }
        let heads: Vec<String> = cols
            .iter()
            .map(|s| {
                if one_shape {
                    format!("{:.0e}", s.kappa)
                } else {
                    format!("{}x{}, {:.0e}", s.m, s.n, s.kappa)
                }
            })
            .collect();
        let _ = writeln!(out, "| κ₂(T) | {} |", heads.join(" | "));
        let _ = writeln!(out, "|---|{}", "---|".repeat(cols.len()));
        let row = |out: &mut String, label: &str, cells: Vec<String>| {
            let _ = writeln!(out, "| {label} | {} |", cells.join(" | "));
        };
        let failed = |s: &CellSummary| 2 * s.failures > s.seeds;
        let err = |s: &CellSummary, v: Option<f64>| sci(if failed(s) { None } else { v });
        row(&mut out, "Orthogonality", cols.iter().map(|s| err(s, s.orthogonality)).collect());
        row(&mut out, "Residual", cols.iter().map(|s| err(s, s.residual_abs)).collect());
        let passes = alg.pass_count();
        let ps: [(&str, fn(&CellSummary) -> Option<f64>); 3] =
            [("p1", |s| s.p1), ("p2", |s| s.p2), ("p3", |s| s.p3)];
        for (label, f) in ps.iter().take(passes) {
            row(&mut out, label, cols.iter().map(|s| fixed(f(s))).collect());
        }
        row(
            &mut out,
            "Failures",
            cols.iter().map(|s| format!("{}/{}", s.failures, s.seeds)).collect(),
        );
        out.push('\n');
    }
    out
}
