//! The closed-form quantities behind the shifts: error factors, success
//! probabilities, the admissible-settings check and sufficient condition
//! numbers.

use cholqr::error_model::{
    check_settings, gamma, gamma_tilde, prob_p, prob_q, probability_three_pass, sufficient_kappa, BoundFamily,
    Precision, ProblemShape,
};

pub fn main() {
    let u = Precision::Binary64.unit_roundoff();
    for k in [64u64, 1024, 4096, 1 << 20] {
        println!(
            "k = {k:>7}: gamma = {:.3e}, gamma_tilde(6) = {:.3e}",
            gamma(k, u).expect("k*u < 1"),
            gamma_tilde(k, u, 6.0)
        );
    }
    for lambda in [4.0, 5.0, 6.0, 8.0] {
        println!(
            "lambda = {lambda}: P = {:.12}, Q(N = 2^20) = {:.4}",
            prob_p(lambda, u),
            prob_q(lambda, (1u64 << 20) as f64, u)
        );
    }

    let shape = ProblemShape::new(1024, 32).expect("m >= n");
    let report = check_settings(shape, u, 6.0);
    println!("settings at 1024x32, lambda 6: {:?}", report.regime());
    println!("3C success probability: {:.4}", probability_three_pass(shape, 6.0, u));
    for (name, family) in [
        ("cqr2", BoundFamily::CholeskyQr2),
        ("sc3", BoundFamily::ShiftedCholeskyQr3),
        ("3c", BoundFamily::ThreeC),
    ] {
        let worst = sufficient_kappa(family, shape, u, 6.0, 1.0, 1.0);
        let typical = sufficient_kappa(family, shape, u, 6.0, 0.23, 1.0);
        println!("{name:<4} kappa <= {worst:.2e} (p = 1), {typical:.2e} (p1 = 0.23)");
    }
}
