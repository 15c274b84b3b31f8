//! Factor one generated matrix with every pipeline and compare the results.

use cholqr::algorithms::{self, Algorithm};
use cholqr::error_model::{Precision, ShiftStrategy};
use cholqr::matrixgen::generate;
use cholqr::metrics::{orthogonality_error, residual_error};

pub fn main() {
    let gm = generate(512, 16, 1e9, 1).expect("valid shape");
    let shift = ShiftStrategy::randomized(6.0, Precision::Binary64).expect("valid lambda");

    println!("{:<6} {:>14} {:>14}", "alg", "‖QᵀQ−I‖_F", "‖QR−T‖_F");
    for alg in Algorithm::ALL {
        match algorithms::run(alg, &gm.matrix, &shift, &shift) {
            Ok(res) => {
                let orth = orthogonality_error(&res.q);
                let resid = residual_error(&res.q, &res.r, &gm.matrix).expect("shapes agree");
                println!("{:<6} {orth:>14.3e} {resid:>14.3e}", alg.as_str());
            }
            Err(e) => println!("{:<6} {e}", alg.as_str()),
        }
    }
}
