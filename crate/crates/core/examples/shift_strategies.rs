//! Deterministic versus randomized-model shifts: sizes and their effect on
//! shifted CholeskyQR3 near the breakdown limit.

use cholqr::algorithms::shifted_cholesky_qr3;
use cholqr::error_model::{shift_deterministic, shift_randomized, Precision, ProblemShape, ShiftStrategy};
use cholqr::matrixgen::generate;
use cholqr::metrics::orthogonality_error;

pub fn main() {
    let u = Precision::Binary64.unit_roundoff();
    for (m, n) in [(256, 16), (1024, 32), (4096, 64)] {
        let shape = ProblemShape::new(m, n).expect("m >= n");
        let det = shift_deterministic(shape, u, 1.0);
        let rand = shift_randomized(shape, u, 6.0, 1.0);
        println!("{m}x{n}: s_det = {det:.3e}, s_rand = {rand:.3e}, ratio {:.3}", rand / det);
    }

    let strategies = [
        ("deterministic", ShiftStrategy::deterministic(Precision::Binary64)),
        ("randomized", ShiftStrategy::randomized(6.0, Precision::Binary64).expect("valid lambda")),
    ];
    for kappa in [1e12, 1e14, 1e15] {
        let gm = generate(1024, 32, kappa, 3).expect("valid shape");
        for (name, s) in &strategies {
            let outcome = match shifted_cholesky_qr3(&gm.matrix, s) {
                Ok(res) => format!("orthogonality {:.2e}", orthogonality_error(&res.q)),
                Err(e) => format!("{e}"),
            };
            println!("kappa {kappa:.0e}, {name:<13} {outcome}");
        }
    }
}
