//! Generate a test matrix with prescribed condition number, check it, and
//! round-trip it through the text format.

use std::fs::File;
use std::io::{BufReader, BufWriter};

use cholqr::linalg::two_norm;
use cholqr::matrixgen::{generate, measured_kappa, read_text, write_text};
use cholqr::metrics::p_value;

pub fn main() {
    for kappa in [1e3, 1e6, 1e12] {
        let gm = generate(200, 10, kappa, 42).expect("valid shape");
        let k = measured_kappa(&gm).expect("generator is consistent");
        println!(
            "target {kappa:.0e}: kappa {:.6e} ({:?}), ‖T‖₂ = {:.15}, p = {:.4}",
            k.value,
            k.provenance,
            two_norm(&gm.matrix).expect("converges"),
            p_value(&gm.matrix).expect("converges")
        );
    }

    let gm = generate(64, 4, 1e5, 7).expect("valid shape");
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("t.txt");
    write_text(&gm.matrix, BufWriter::new(File::create(&path).expect("create"))).expect("write");
    let back = read_text(BufReader::new(File::open(&path).expect("open"))).expect("parse");
    assert_eq!(back, gm.matrix);
    println!("round trip through {} is exact", path.display());
}
