#![allow(dead_code)]

use cholqr::error_model::{
    gamma, gamma_tilde, prob_p, prob_q, shift_deterministic, shift_randomized, sufficient_kappa, BoundFamily,
    ProblemShape,
};
use cholqr::linalg::{
    cholesky, g_norm, gram, min_singular_value, solve_triangular_right, two_norm, DenseMatrix, UpperTriangular,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const U: f64 = f64::EPSILON / 2.0;

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Classical Jacobi: always rotates the largest off-diagonal entry. Kept
/// deliberately different from the library's cyclic sweep.
pub fn oracle_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut a = a.to_vec();
    let scale: f64 = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    for _ in 0..20_000 {
        let (mut p, mut q, mut big) = (0, 0, 0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if a[i][j].abs() > big {
                    (p, q, big) = (i, j, a[i][j].abs());
                }
            }
        }
        if big <= 1e-17 * scale {
            break;
        }
        let phi = 0.5 * (2.0 * a[p][q]).atan2(a[q][q] - a[p][p]);
        let (s, c) = phi.sin_cos();
        for k in 0..n {
            let (akp, akq) = (a[k][p], a[k][q]);
            a[k][p] = c * akp - s * akq;
            a[k][q] = s * akp + c * akq;
        }
        for k in 0..n {
            let (apk, aqk) = (a[p][k], a[q][k]);
            a[p][k] = c * apk - s * aqk;
            a[q][k] = s * apk + c * aqk;
        }
    }
    let mut e: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    e.sort_by(|x, y| y.total_cmp(x));
    e
}

/// `TᵀT` by the textbook triple loop.
pub fn oracle_gram(t: &DenseMatrix) -> Vec<Vec<f64>> {
    let (m, n) = t.shape();
    (0..n)
        .map(|i| (0..n).map(|j| (0..m).map(|k| t.get(k, i) * t.get(k, j)).sum()).collect())
        .collect()
}

pub fn oracle_column_norm_max(t: &DenseMatrix) -> f64 {
    let (m, n) = t.shape();
    (0..n)
        .map(|j| (0..m).map(|i| t.get(i, j).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

fn fro(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Random `m x n` instance with `m <= 64`, `n <= 8` and column scales spread
/// over three decades.
pub fn random_instance(rng: &mut ChaCha8Rng) -> DenseMatrix {
    let n = rng.random_range(1..=8);
    let m = rng.random_range(n..=64);
    let scales: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-1.5..1.5))).collect();
    DenseMatrix::from_fn(m, n, |_, j| {
        let z: f64 = StandardNormal.sample(rng);
        z * scales[j]
    })
    .unwrap()
}

/// Checks cholesky, solve_triangular_right, g_norm, two_norm and
/// min_singular_value on one instance against the oracles above. Returns a
/// description of the first violation.
pub fn check_kernels_on(t: &DenseMatrix) -> Result<(), String> {
    let (m, n) = t.shape();
    let nf = n as f64;
    let tf = t.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();

    let g = g_norm(t);
    let g_ref = oracle_column_norm_max(t);
    if rel(g, g_ref) > 4.0 * U * (m as f64).sqrt() {
        return Err(format!("g_norm {g} vs {g_ref} ({m}x{n})"));
    }

    let eig = oracle_eigenvalues(&oracle_gram(t));
    let two_ref = eig[0].max(0.0).sqrt();
    let two = two_norm(t).map_err(|e| e.to_string())?;
    if rel(two, two_ref) > 1e-9 {
        return Err(format!("two_norm {two} vs {two_ref} ({m}x{n})"));
    }
    if !(g <= two * (1.0 + 1e-12) && two <= nf.sqrt() * g * (1.0 + 1e-12)) {
        return Err(format!("g/two ordering violated: g={g} two={two}"));
    }

    let lo_ref = eig[n - 1].max(0.0).sqrt();
    if lo_ref > 0.0 && two_ref / lo_ref <= 1e6 {
        let lo = min_singular_value(t).map_err(|e| e.to_string())?;
        if rel(lo, lo_ref) > 1e-6 {
            return Err(format!("min_singular_value {lo} vs {lo_ref} ({m}x{n})"));
        }
    }

    let u = gram(t);
    let v = match cholesky(&u) {
        Ok(v) => v,
        // Only acceptable when the Gram matrix is numerically singular.
        Err(_) if lo_ref <= 1e-7 * two_ref => return Ok(()),
        Err(e) => return Err(format!("cholesky failed on a PD Gram: {e}")),
    };
    if v.diagonal().iter().any(|&d| !(d > 0.0)) {
        return Err("cholesky diagonal not positive".into());
    }
    let vtv = v.to_dense().transpose().matmul(&v.to_dense()).unwrap();
    let u_rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| u.get(i, j)).collect()).collect();
    let diff: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| vtv.get(i, j) - u_rows[i][j]).collect())
        .collect();
    if fro(&diff) > 10.0 * nf * U * fro(&u_rows) {
        return Err(format!("cholesky residual {} ({m}x{n})", fro(&diff)));
    }

    if two_ref / lo_ref <= 1e6 {
        let q = solve_triangular_right(t, &v).map_err(|e| e.to_string())?;
        let back = q.mul_upper(&v).unwrap().sub(t).unwrap();
        let r = back.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 10.0 * nf.powf(1.5) * U * tf {
            return Err(format!("solve residual {r} ({m}x{n})"));
        }
        let q_ref = oracle_solve(t, &v);
        let worst = q
            .as_slice()
            .iter()
            .zip(q_ref.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let qmax = q_ref.as_slice().iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if worst > 1e-8 * qmax.max(1.0) {
            return Err(format!("solve differs from row-wise substitution by {worst}"));
        }
    }
    Ok(())
}

/// Row-by-row forward substitution for `Q V = T`.
pub fn oracle_solve(t: &DenseMatrix, v: &UpperTriangular) -> DenseMatrix {
    let (m, n) = t.shape();
    let mut q = vec![vec![0.0; n]; m];
    for (i, row) in q.iter_mut().enumerate() {
        for j in 0..n {
            let mut acc = t.get(i, j);
            for k in 0..j {
                acc -= row[k] * v.get(k, j);
            }
            row[j] = acc / v.get(j, j);
        }
    }
    DenseMatrix::from_fn(m, n, |i, j| q[i][j]).unwrap()
}

/// Hand-checked kernel examples.
pub fn check_kernel_hand_cases() -> Result<(), String> {
    use cholqr::linalg::{add_shift, SymmetricMatrix};
    let sym = |r: &[&[f64]]| SymmetricMatrix::from_rows(r).unwrap();
    let v = cholesky(&sym(&[&[4.0, 2.0], &[2.0, 5.0]])).map_err(|e| e.to_string())?;
    if v != UpperTriangular::from_rows(&[&[2.0, 1.0], &[0.0, 2.0]]).unwrap() {
        return Err(format!("cholesky [[4,2],[2,5]] gave {v:?}"));
    }
    if cholesky(&sym(&[&[1.0, 2.0], &[2.0, 1.0]])).is_ok() {
        return Err("indefinite matrix did not break down".into());
    }
    if add_shift(&sym(&[&[1.0, 2.0], &[2.0, 1.0]]), 1.5).unwrap() != sym(&[&[2.5, 2.0], &[2.0, 2.5]]) {
        return Err("add_shift example".into());
    }
    let t = DenseMatrix::from_rows(&[&[2.0, 3.0], &[0.0, 4.0]]).unwrap();
    let v = UpperTriangular::from_rows(&[&[2.0, 1.0], &[0.0, 2.0]]).unwrap();
    let q = solve_triangular_right(&t, &v).unwrap();
    if q != DenseMatrix::from_rows(&[&[1.0, 1.0], &[0.0, 2.0]]).unwrap() {
        return Err(format!("solve example gave {q:?}"));
    }
    let singular = UpperTriangular::from_rows(&[&[0.0, 1.0], &[0.0, 2.0]]).unwrap();
    if solve_triangular_right(&t, &singular).is_ok() {
        return Err("zero diagonal accepted".into());
    }
    if g_norm(&DenseMatrix::from_rows(&[&[3.0, 0.0], &[4.0, 0.0]]).unwrap()) != 5.0 {
        return Err("g_norm 3-4-5".into());
    }
    let d = DenseMatrix::from_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 0.01], &[0.0, 0.0, 0.0]])
        .unwrap();
    if (two_norm(&d).unwrap() - 1.0).abs() > 1e-15 {
        return Err("two_norm of diagonal".into());
    }
    let tall = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 1e-6], &[0.0, 0.0]]).unwrap();
    if rel(min_singular_value(&tall).unwrap(), 1e-6) > 1e-9 {
        return Err("min_singular_value of diag(1, 1e-6)".into());
    }
    Ok(())
}

/// Runs the randomized kernel comparison; returns (instances, failures).
pub fn run_kernel_oracles(count: usize, seed: u64) -> (usize, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..count {
        let t = random_instance(&mut rng);
        if let Err(e) = check_kernels_on(&t) {
            failures.push(e);
        }
    }
    (count, failures)
}

pub struct GridRow {
    pub u: f64,
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub p1: f64,
    pub p2: f64,
    pub g: f64,
    pub expected: [f64; 9],
}

pub fn load_formula_grid() -> Vec<GridRow> {
    let text = include_str!("../data/formula_grid.csv");
    text.lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let num = |i: usize| f[i].parse::<f64>().unwrap();
            let u = match f[0] {
                "f64" => f64::EPSILON / 2.0,
                "f32" => (f32::EPSILON / 2.0) as f64,
                other => panic!("precision {other}"),
            };
            let mut expected = [0.0; 9];
            for (k, e) in expected.iter_mut().enumerate() {
                *e = num(7 + k);
            }
            GridRow {
                u,
                m: f[1].parse().unwrap(),
                n: f[2].parse().unwrap(),
                lambda: num(3),
                p1: num(4),
                p2: num(5),
                g: num(6),
                expected,
            }
        })
        .collect()
}

pub const GRID_NAMES: [&str; 9] = [
    "gamma",
    "gamma_tilde",
    "prob_p",
    "prob_q",
    "shift_det",
    "shift_rand",
    "kappa_cqr2",
    "kappa_sc3",
    "kappa_3c",
];

/// Evaluates every calculator on every grid row; returns the mismatches
/// beyond `tol` relative.
pub fn check_formula_grid(tol: f64) -> (usize, Vec<String>) {
    let rows = load_formula_grid();
    let mut bad = Vec::new();
    let mut checked = 0;
    for r in &rows {
        let shape = ProblemShape::new(r.m, r.n).unwrap();
        let k = if r.u < 1e-10 { r.m * r.n } else { r.n } as u64;
        let count = (r.m * r.n * r.n) as f64;
        let got = [
            gamma(k, r.u).unwrap(),
            gamma_tilde(k, r.u, r.lambda),
            prob_p(r.lambda, r.u),
            prob_q(r.lambda, count, r.u),
            shift_deterministic(shape, r.u, r.g),
            shift_randomized(shape, r.u, r.lambda, r.g),
            sufficient_kappa(BoundFamily::CholeskyQr2, shape, r.u, r.lambda, r.p1, r.p2),
            sufficient_kappa(BoundFamily::ShiftedCholeskyQr3, shape, r.u, r.lambda, r.p1, r.p2),
            sufficient_kappa(BoundFamily::ThreeC, shape, r.u, r.lambda, r.p1, r.p2),
        ];
        for (i, (&g, &e)) in got.iter().zip(&r.expected).enumerate() {
            checked += 1;
            if rel(g, e) > tol {
                bad.push(format!("{} at {}x{} lambda={} u={:e}: {g:e} vs {e:e}", GRID_NAMES[i], r.m, r.n, r.lambda, r.u));
            }
        }
    }
    (checked, bad)
}
