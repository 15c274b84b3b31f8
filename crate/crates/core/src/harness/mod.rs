//! Parameter sweeps over generated matrices, with CSV and Markdown output.

pub mod cli;
mod config;
mod presets;
mod run;
mod runlog;
mod table;

pub use config::{
    parse_kappas, parse_seeds, parse_shift_modes, ExperimentConfig, LambdaSetting, OutputFormat, ShiftPair,
};
pub use presets::{preset, PRESET_NAMES};
pub use run::{run_experiment, ExperimentRecord, Status};
pub use runlog::{append_run, CONFIG_LOG};
pub use table::{emit_csv, emit_markdown, emit_table, median, parse_csv, summarize, CellSummary, CSV_COLUMNS};
