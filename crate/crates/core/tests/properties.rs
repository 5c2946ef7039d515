mod common;

use common::{gaussian, jacobi_eigenvalues, random_orthogonal, random_psd, random_skew, random_symmetric};
use nearstable::matrix::power_lambda_max_gram;
use nearstable::solvers::{momentum, next_alpha};
use nearstable::stability::spectral_norm;
use nearstable::{
    assemble, format_matrix, frob_norm, grad_d, lipschitz_pair, objective, parse_matrix,
    power_lambda_max, project_dh, project_psd, project_skew, rebalance, spectral_abscissa, sym_eig,
    DhState, LipschitzTracker, Matrix, SplitMix64,
};
use proptest::prelude::*;

/// `(n, seed)` pairs; matrices are drawn from the seeded generator so that
/// shrinking stays meaningful.
fn dims(max_n: usize) -> impl Strategy<Value = (usize, u64)> {
    (1..=max_n, any::<u64>())
}

fn sym_scale(m: &Matrix) -> f64 {
    m.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projections_are_idempotent((n, seed) in dims(8)) {
        let mut rng = SplitMix64::new(seed);
        let z = gaussian(n, n, &mut rng) * 3.0;
        let s = project_skew(&z).unwrap();
        prop_assert!((project_skew(&s).unwrap() - &s).norm() <= 1e-14 * sym_scale(&s));
        let p = project_psd(&z).unwrap();
        prop_assert!((project_psd(&p).unwrap() - &p).norm() <= 1e-12 * sym_scale(&p));
        let d = project_dh(&z).unwrap().d;
        prop_assert!((project_dh(&d).unwrap().d - &d).norm() <= 1e-12 * sym_scale(&d));
    }

    #[test]
    fn skew_and_symmetric_parts_are_orthogonal((n, seed) in dims(8)) {
        let mut rng = SplitMix64::new(seed);
        let z = gaussian(n, n, &mut rng);
        let skew = project_skew(&z).unwrap();
        let sym = &z - &skew;
        let lhs = z.norm_squared();
        let rhs = skew.norm_squared() + sym.norm_squared();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
        prop_assert!(skew.dot(&sym).abs() <= 1e-12 * lhs.max(1.0));
    }

    #[test]
    fn psd_projection_lands_in_cone((n, seed) in dims(8)) {
        let mut rng = SplitMix64::new(seed);
        let p = project_psd(&gaussian(n, n, &mut rng)).unwrap();
        prop_assert_eq!(&p, &p.transpose());
        let min = jacobi_eigenvalues(&p)[0];
        prop_assert!(min >= -1e-12 * sym_scale(&p), "lambda_min = {min}");
    }

    #[test]
    fn projections_are_nonexpansive((n, seed) in dims(8)) {
        let mut rng = SplitMix64::new(seed);
        let z1 = gaussian(n, n, &mut rng);
        let z2 = &z1 + gaussian(n, n, &mut rng) * rng.next_uniform();
        let gap = (&z1 - &z2).norm();
        let psd = (project_psd(&z1).unwrap() - project_psd(&z2).unwrap()).norm();
        let dh = (project_dh(&z1).unwrap().d - project_dh(&z2).unwrap().d).norm();
        prop_assert!(psd <= gap * (1.0 + 1e-12) + 1e-14);
        prop_assert!(dh <= gap * (1.0 + 1e-12) + 1e-14);
    }

    #[test]
    fn frobenius_norm_is_orthogonally_invariant((n, seed) in dims(10)) {
        let mut rng = SplitMix64::new(seed);
        let m = gaussian(n, n, &mut rng);
        let u = random_orthogonal(n, &mut rng);
        let v = random_orthogonal(n, &mut rng);
        let direct: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((frob_norm(&m) - direct).abs() <= 1e-14 * direct.max(1.0));
        prop_assert!((frob_norm(&(&u * &m * &v)) - direct).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn sym_eig_matches_jacobi_oracle((n, seed) in dims(12)) {
        let mut rng = SplitMix64::new(seed);
        let s = random_symmetric(n, &mut rng);
        let ours = sym_eig(&s).unwrap().values;
        let oracle = jacobi_eigenvalues(&s);
        for (a, b) in ours.iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-10 * sym_scale(&s), "{a} vs {b}");
        }
    }

    #[test]
    fn power_estimates_rise_toward_lambda_max((n, seed) in dims(10)) {
        let mut rng = SplitMix64::new(seed);
        let s = random_psd(n, &mut rng);
        let top = jacobi_eigenvalues(&s)[n - 1];
        let mut prev = 0.0;
        for steps in 1..=15 {
            let (est, _) = power_lambda_max(&s, None, steps);
            prop_assert!(est >= prev * (1.0 - 1e-12) - 1e-14);
            prop_assert!(est <= top * (1.0 + 1e-12) + 1e-14);
            prev = est;
        }
    }

    #[test]
    fn rebalance_preserves_product_and_objective((n, seed) in (2usize..=8, any::<u64>())) {
        let mut rng = SplitMix64::new(seed);
        let a = gaussian(n, n, &mut rng);
        let d = project_dh(&gaussian(n, n, &mut rng)).unwrap().d;
        let q = random_psd(n, &mut rng) * (0.01 + 10.0 * rng.next_uniform());
        let r = rebalance(&d, &q);
        prop_assume!(r.is_some());
        let r = r.unwrap();
        let prod = &d * &q;
        prop_assert!((&r.d * &r.q - &prod).norm() <= 1e-12 * prod.norm().max(1.0));
        let f = objective(&a, &d, &q);
        prop_assert!((objective(&a, &r.d, &r.q) - f).abs() <= 1e-10 * f.max(1.0));
        let ld = r.q.singular_values().max().powi(2);
        let lq = r.d.singular_values().max().powi(2);
        prop_assert!((ld - lq).abs() <= 1e-10 * ld.max(lq));
    }

    #[test]
    fn gradient_step_satisfies_descent_lemma((n, seed) in dims(8)) {
        let mut rng = SplitMix64::new(seed);
        let a = gaussian(n, n, &mut rng);
        let d = gaussian(n, n, &mut rng);
        let q = random_psd(n, &mut rng);
        let l = jacobi_eigenvalues(&(&q * q.transpose()))[n - 1];
        prop_assume!(l > 1e-12);
        let g = grad_d(&a, &d, &q);
        let f0 = objective(&a, &d, &q);
        let f1 = objective(&a, &(&d - &g / l), &q);
        prop_assert!(f1 <= f0 - g.norm_squared() / (2.0 * l) + 1e-10 * f0.max(1.0));
    }

    #[test]
    fn feasible_states_assemble_to_stable_matrices((n, seed) in dims(10)) {
        let mut rng = SplitMix64::new(seed);
        let state = DhState::new(random_skew(n, &mut rng), random_psd(n, &mut rng), random_psd(n, &mut rng)).unwrap();
        let x = assemble(&state);
        prop_assert!(spectral_abscissa(&x).unwrap() <= 1e-8 * spectral_norm(&x).max(f64::MIN_POSITIVE));
    }

    #[test]
    fn alpha_sequence_decreases_and_momentum_is_bounded(alpha1 in 0.001f64..0.999) {
        let mut alpha = alpha1;
        for _ in 0..500 {
            let next = next_alpha(alpha);
            prop_assert!(next > 0.0 && next < alpha);
            prop_assert!((next * next - (1.0 - next) * alpha * alpha).abs() <= 1e-15);
            let beta = momentum(alpha, next);
            prop_assert!((0.0..1.0).contains(&beta));
            alpha = next;
        }
    }

    #[test]
    fn text_format_round_trips_exactly((n, m, seed) in (1usize..6, 1usize..6, any::<u64>())) {
        let mut rng = SplitMix64::new(seed);
        let x = gaussian(n, m, &mut rng) * 10f64.powi((seed % 20) as i32 - 10);
        prop_assert_eq!(parse_matrix(&format_matrix(&x)).unwrap(), x);
    }
}

#[test]
fn sym_eig_reconstructs_random_matrices() {
    let mut rng = SplitMix64::new(41);
    for i in 0..100 {
        let n = 1 + i % 50;
        let s = random_symmetric(n, &mut rng);
        let eig = sym_eig(&s).unwrap();
        assert!((eig.reconstruct() - &s).norm() <= 1e-10 * s.norm().max(1.0), "n = {n}");
        let ortho = eig.basis.tr_mul(&eig.basis) - Matrix::identity(n, n);
        assert!(ortho.norm() <= 1e-10 * n as f64);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn power_method_agrees_with_dense_solver_on_gram_matrix() {
    let mut rng = SplitMix64::new(42);
    let m = gaussian(20, 20, &mut rng);
    let exact = sym_eig(&m.tr_mul(&m)).unwrap().max_value();
    let (est, _) = power_lambda_max_gram(&m, None, 500);
    assert!((est - exact).abs() <= 1e-4 * exact, "{est} vs {exact}");
}

#[test]
fn warm_started_tracker_converges() {
    let mut rng = SplitMix64::new(43);
    let d = gaussian(12, 12, &mut rng);
    let q = random_psd(12, &mut rng);
    let mut tracker = LipschitzTracker::default();
    let mut last = (0.0, 0.0);
    for _ in 0..200 {
        last = lipschitz_pair(&d, &q, &mut tracker);
    }
    let exact_d = sym_eig(&(&q * q.transpose())).unwrap().max_value();
    let exact_q = sym_eig(&d.tr_mul(&d)).unwrap().max_value();
    assert!((last.0 - exact_d).abs() <= 1e-6 * exact_d);
    assert!((last.1 - exact_q).abs() <= 1e-6 * exact_q);
}

#[test]
fn frobenius_invariance_on_nearly_dependent_draw() {
    let mut rng = SplitMix64::new(5322550703760447648);
    let m = gaussian(2, 2, &mut rng);
    let u = random_orthogonal(2, &mut rng);
    let v = random_orthogonal(2, &mut rng);
    assert!((frob_norm(&(&u * &m * &v)) - frob_norm(&m)).abs() <= 1e-12 * frob_norm(&m).max(1.0));
}
