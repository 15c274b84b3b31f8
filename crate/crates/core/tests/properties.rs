use cholqr::algorithms::{self, Algorithm};
use cholqr::error_model::{gamma, gamma_tilde, prob_q, shift_deterministic, shift_randomized, Precision, ProblemShape, ShiftStrategy};
use cholqr::linalg::{fro_norm, g_norm, random_orthogonal, two_norm, DenseMatrix, UpperTriangular};
use cholqr::matrixgen::generate;
use cholqr::metrics::{p_value, residual_error};
use proptest::prelude::*;

const U: f64 = f64::EPSILON / 2.0;

fn matrix(max_m: usize, max_n: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        (n..=max_m).prop_flat_map(move |m| {
            prop::collection::vec(-10.0f64..10.0, m * n)
                .prop_map(move |data| DenseMatrix::from_col_major(m, n, data).unwrap())
        })
    })
}

fn pair_for_product() -> impl Strategy<Value = (DenseMatrix, DenseMatrix)> {
    (1usize..=6, 1usize..=6, 1usize..=6).prop_flat_map(|(a, b, c)| {
        (
            prop::collection::vec(-5.0f64..5.0, a * b),
            prop::collection::vec(-5.0f64..5.0, b * c),
        )
            .prop_map(move |(x, y)| {
                (
                    DenseMatrix::from_col_major(a, b, x).unwrap(),
                    DenseMatrix::from_col_major(b, c, y).unwrap(),
                )
            })
    })
}

fn same_shape_pair() -> impl Strategy<Value = (DenseMatrix, DenseMatrix)> {
    (1usize..=8, 1usize..=6).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(-5.0f64..5.0, m * n),
            prop::collection::vec(-5.0f64..5.0, m * n),
        )
            .prop_map(move |(x, y)| {
                (
                    DenseMatrix::from_col_major(m, n, x).unwrap(),
                    DenseMatrix::from_col_major(m, n, y).unwrap(),
                )
            })
    })
}

fn nonzero(t: &DenseMatrix) -> bool {
    t.as_slice().iter().any(|v| v.abs() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn g_norm_of_product((a, b) in pair_for_product()) {
        let lhs = g_norm(&a.matmul(&b).unwrap());
        let rhs = two_norm(&a).unwrap() * g_norm(&b);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300, "{lhs} > {rhs}");
    }

    #[test]
    fn g_norm_triangle((a, b) in same_shape_pair()) {
        let lhs = g_norm(&a.add(&b).unwrap());
        prop_assert!(lhs <= (g_norm(&a) + g_norm(&b)) * (1.0 + 4.0 * U));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn g_norm_brackets_two_norm(t in matrix(12, 6)) {
        prop_assume!(nonzero(&t));
        let (g, two) = (g_norm(&t), two_norm(&t).unwrap());
        let n = t.cols() as f64;
        prop_assert!(g <= two * (1.0 + 1e-12));
        prop_assert!(two <= n.sqrt() * g * (1.0 + 1e-12));
    }

    #[test]
    fn two_norm_unitarily_invariant(t in matrix(10, 6), s1 in 0u64..1000, s2 in 0u64..1000) {
        prop_assume!(nonzero(&t));
        let (m, n) = t.shape();
        let w = random_orthogonal(m, s1);
        let y = random_orthogonal(n, s2);
        let moved = w.matmul(&t).unwrap().matmul(&y.transpose()).unwrap();
        let (a, b) = (two_norm(&moved).unwrap(), two_norm(&t).unwrap());
        prop_assert!(((a - b) / b).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn p_value_in_range_and_scale_free(t in matrix(12, 6), c in prop_oneof![-1e6f64..-1e-6, 1e-6f64..1e6]) {
        prop_assume!(nonzero(&t));
        let n = t.cols() as f64;
        let p = p_value(&t).unwrap();
        prop_assert!(p >= 1.0 / n.sqrt() && p <= 1.0, "{p}");
        let q = p_value(&t.scale(c)).unwrap();
        prop_assert!((p - q).abs() <= 1e-12, "{p} vs {q}");
    }

    #[test]
    fn residual_ignores_column_signs(seed in 0u64..500, mask in 0u32..256) {
        let gm = generate(40, 8, 1e3, seed).unwrap();
        let res = algorithms::cholesky_qr2(&gm.matrix).unwrap();
        let d: Vec<f64> = (0..8).map(|j| if mask >> j & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let qd = res.q.scale_columns(&d).unwrap();
        let rd = res.r.to_dense();
        let rd = DenseMatrix::from_fn(8, 8, |i, j| d[i] * rd.get(i, j)).unwrap();
        let rd = UpperTriangular::from_dense(&rd).unwrap();
        let a = residual_error(&res.q, &res.r, &gm.matrix).unwrap();
        let b = residual_error(&qd, &rd, &gm.matrix).unwrap();
        prop_assert!((a - b).abs() <= 1e-15 * (1.0 + a));
    }

    #[test]
    fn reconstruction_envelope(seed in 0u64..10_000, log_kappa in 0.0f64..12.0, alg_idx in 0usize..5) {
        let (m, n) = (96, 8);
        let gm = generate(m, n, 10f64.powf(log_kappa), seed).unwrap();
        let t = &gm.matrix;
        let s = ShiftStrategy::randomized(6.0, Precision::Binary64).unwrap();
        let alg = Algorithm::ALL[alg_idx];
        if let Ok(res) = algorithms::run(alg, t, &s, &s) {
            let r = residual_error(&res.q, &res.r, t).unwrap();
            let env = 100.0 * (n as f64).powf(1.5) * U * fro_norm(t);
            prop_assert!(r <= env, "{alg}: {r} > {env}");
            prop_assert_eq!(res.trace.stages.len(), alg.pass_count());
            let lo = 1.0 / (n as f64).sqrt();
            for st in &res.trace.stages {
                let p = st.p_value.unwrap();
                prop_assert!(p >= lo && p <= 1.0, "p = {p}");
            }
        }
    }

    #[test]
    fn prob_q_monotone(l1 in 1.0f64..9.0, dl in 0.01f64..1.0, n1 in 1.0f64..1e6, dn in 1.0f64..1e6) {
        prop_assert!(prob_q(l1, n1 + dn, U) < prob_q(l1, n1, U));
        prop_assert!(prob_q(l1 + dl, n1, U) > prob_q(l1, n1, U));
    }

    #[test]
    fn shift_ordering(m in 2usize..5000, n in 2usize..64, lambda in 0.5f64..10.0) {
        prop_assume!(m >= n);
        let shape = ProblemShape::new(m, n).unwrap();
        let rand = shift_randomized(shape, U, lambda, 1.0);
        let det = shift_deterministic(shape, U, 1.0);
        let (m, n) = (m as f64, n as f64);
        let lhs = lambda * (m.sqrt() + (n + 1.0).sqrt());
        let rhs = m + n + 1.0;
        if (lhs - rhs).abs() > 1e-9 * rhs {
            prop_assert_eq!(rand < det, lhs < rhs);
        }
    }
}

#[test]
fn randomized_factor_beats_deterministic_at_scale() {
    for k in [64u64, 1024, 4096] {
        assert!(gamma_tilde(k, U, 6.0) < gamma(k, U).unwrap(), "k = {k}");
    }
}

#[test]
fn calculators_are_bitwise_pure() {
    let shape = ProblemShape::new(1024, 32).unwrap();
    let a = shift_randomized(shape, U, 6.0, 0.37);
    let b = shift_randomized(shape, U, 6.0, 0.37);
    assert_eq!(a.to_bits(), b.to_bits());
}
