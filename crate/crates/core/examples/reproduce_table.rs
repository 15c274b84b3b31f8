//! Run a preset sweep, reduced to three seeds, and print it as Markdown.
//! `cargo run --release --example reproduce_table -- table-3cb` picks
//! another preset.

use cholqr::harness::{emit_markdown, preset, run_experiment};

pub fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "table-sr".to_string());
    run(&name);
}

pub fn run(name: &str) {
    let mut config = preset(name).expect("known preset");
    config.seeds = vec![1, 2, 3];
    let records = run_experiment(&config).expect("valid configuration");
    print!("{}", emit_markdown(&records));
}
