mod common;

#[test]
fn hand_cases() {
    common::check_kernel_hand_cases().unwrap();
}

#[test]
fn random_instances_match_oracles() {
    let (count, failures) = common::run_kernel_oracles(300, 11);
    assert!(failures.is_empty(), "{} of {count} failed: {:?}", failures.len(), &failures[..failures.len().min(5)]);
}

#[test]
fn cyclic_and_classical_jacobi_agree() {
    use cholqr::linalg::{gram, symmetric_eigenvalues};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let t = common::random_instance(&mut rng);
        let ours = symmetric_eigenvalues(&gram(&t)).unwrap();
        let theirs = common::oracle_eigenvalues(&common::oracle_gram(&t));
        let scale = theirs[0].abs();
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() <= 1e-12 * scale, "{a} vs {b}");
        }
    }
}
