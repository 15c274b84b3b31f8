//! Measured errors against the theoretical bounds, evaluated with the
//! p-values recorded during the run.

use cholqr::algorithms::{self, Algorithm};
use cholqr::error_model::{Precision, ShiftStrategy};
use cholqr::matrixgen::generate;
use cholqr::metrics::{make_report, ReportContext};

pub fn main() {
    let lambda = 6.0;
    let shift = ShiftStrategy::randomized(lambda, Precision::Binary64).expect("valid lambda");
    let cases = [
        (Algorithm::CholeskyQr2, 1e4),
        (Algorithm::ShiftedCholeskyQr3, 1e12),
        (Algorithm::ThreeC, 1e15),
    ];
    for (alg, kappa) in cases {
        let gm = generate(1024, 32, kappa, 5).expect("valid shape");
        let res = algorithms::run(alg, &gm.matrix, &shift, &shift).expect("inside the sufficient regime");
        let ctx = ReportContext {
            algorithm: alg,
            lambda,
            unit_roundoff: Precision::Binary64.unit_roundoff(),
        };
        let r = make_report(&res, &gm.matrix, &ctx).expect("report");
        println!(
            "{:<5} kappa {kappa:.0e}: orthogonality {:.2e} <= {:.2e}, residual {:.2e} <= {:.2e}, ok = {:?}",
            alg.as_str(),
            r.orthogonality,
            r.bound_orth.unwrap_or(f64::NAN),
            r.residual_abs,
            r.bound_resid.unwrap_or(f64::NAN),
            r.bound_satisfied
        );
    }
}
