//! Cholesky breakdown: where it happens and what the partial trace says.

use cholqr::algorithms::{cholesky_qr2, shifted_cholesky_qr3};
use cholqr::error_model::{Precision, ShiftStrategy};
use cholqr::matrixgen::generate;

pub fn main() {
    let gm = generate(1024, 32, 1e10, 1).expect("valid shape");
    match cholesky_qr2(&gm.matrix) {
        Ok(_) => println!("cqr2 completed"),
        Err(e) => {
            println!("{e}");
            for (k, st) in e.trace.stages.iter().enumerate() {
                println!("  pass {}: p = {:?}, breakdown = {}", k + 1, st.p_value, st.breakdown);
            }
        }
    }

    let shift = ShiftStrategy::randomized(6.0, Precision::Binary64).expect("valid lambda");
    let ok = shifted_cholesky_qr3(&gm.matrix, &shift).is_ok();
    println!("shifted CholeskyQR3 on the same matrix completes: {ok}");
}
