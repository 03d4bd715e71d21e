use krein_ext::exitspace::{exit_extension, ExitParameter};
use krein_ext::extensions::{extremes, interval_extension, HermitianContractionData};
use krein_ext::functions::*;
use krein_ext::numcore::{
    c, checked_inverse, frob_dist, identity, op_norm, psd_sqrt, real_diag, ComplexMatrix,
};
use krein_ext::random::*;
use krein_ext::relations::{clfrm_value, in_class};
use krein_ext::{Tolerance, C64};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn instance(seed: u64, n: usize, k: usize, h: usize) -> (HermitianContractionData, ExitParameter) {
    let mut rng = instance_rng(seed, 0);
    let data = hermitian_contraction_data(&mut rng, n, k, &tol()).unwrap();
    let r = data.param_dim();
    let x = selfadjoint_block(&mut rng, r, h, 0.9);
    let x = ExitParameter::from_matrix(&x, r, &tol()).unwrap();
    (data, x)
}

fn disk(seed: u64) -> C64 {
    let mut rng = instance_rng(seed, 99);
    let v = gaussian_vector(&mut rng, 1)[0];
    v / (v.norm() + 1.0) * 0.95
}

#[test]
fn schur_frobenius_matches_direct_inverse() {
    for seed in 0..20 {
        let mut rng = instance_rng(seed, 1);
        let u = contraction(&mut rng, 5, 5, 0.9);
        let sys = PassiveSystem::from_block(&u, 2, &tol()).unwrap();
        let lambda = c(1.5, 0.7);
        let sf = schur_frobenius(&sys, lambda, &tol()).unwrap();
        let direct = checked_inverse(&(&u - identity(5) * lambda), &tol(), lambda).unwrap();
        assert!(frob_dist(&sf.full(), &direct) < 1e-10);
        let inv11 = &sys.d - &sys.c * checked_inverse(&(&sys.a - identity(3) * lambda), &tol(), lambda).unwrap() * &sys.b - identity(2) * lambda;
        assert!(frob_dist(&(&sf.top_left * inv11), &identity(2)) < 1e-10);
    }
}

#[test]
fn generalized_resolvent_on_h() {
    for seed in 0..20 {
        let (data, x) = instance(seed, 5, 2, 3);
        let bt = exit_extension(&data, &x, &tol()).unwrap();
        let z = disk(seed);
        let lhs = compressed_resolvent(&bt, 5, Side::H, z, &tol()).unwrap();
        let bh = b_hat(&data, &x, z, &tol()).unwrap();
        let rhs = checked_inverse(&(bh * z - identity(5)), &tol(), z).unwrap();
        assert!(frob_dist(&lhs, &rhs) < 1e-9, "seed {seed}");
    }
}

#[test]
fn compressed_resolvent_on_exit_space() {
    for seed in 0..20 {
        let (data, x) = instance(seed, 4, 2, 3);
        let bt = exit_extension(&data, &x, &tol()).unwrap();
        let sys = PassiveSystem::exit_side(&bt, 4, &tol()).unwrap();
        let z = disk(seed + 100);
        let lhs = compressed_resolvent(&bt, 4, Side::Exit, z, &tol()).unwrap();
        let theta = transfer(&sys, z, &tol()).unwrap();
        let rhs = checked_inverse(&(theta * z - identity(3)), &tol(), z).unwrap();
        assert!(frob_dist(&lhs, &rhs) < 1e-9, "seed {seed}");
        assert!(conjugate_symmetry_defect(&sys, z, &tol()).unwrap() < 1e-10);
    }
}

#[test]
fn limits_extrapolated_agree_with_induced_pair() {
    for seed in 0..10 {
        let (data, x) = instance(seed, 5, 2, 2);
        let (b0, b1) = b_hat_limits(&data, &x, &tol()).unwrap();
        let e = &data.embed;
        for (sign, exact) in [(-1.0, &b0), (1.0, &b1)] {
            let phi = phi_limit_extrapolated(&x, sign, &tol()).unwrap();
            let approx = &data.mid + e * phi * e.adjoint();
            assert!(frob_dist(&approx, exact) < 1e-5, "seed {seed} sign {sign}");
        }
    }
}

#[test]
fn q_pair_product_and_extreme_classes() {
    let (data, x) = instance(3, 5, 2, 2);
    let nb = data.n_space.basis().clone();
    let (b0, b1) = b_hat_limits(&data, &x, &tol()).unwrap();
    let m = nb.ncols();
    for k in 0..20 {
        let xi = c(2.0 * (k as f64 - 10.0) / 10.0, 0.3 + 0.1 * k as f64);
        let (q0, q1) = q_pair(&b0, &b1, &nb, xi, &tol()).unwrap();
        assert!(frob_dist(&(q0 * q1), &(-identity(m))) < 1e-8);
    }
    let (mu, big) = extremes(&data);
    let mu_q = |x: f64| q_pair(&mu, &big, &nb, c(x, 0.0), &tol()).map(|p| p.0);
    let big_q = |x: f64| q_pair(&mu, &big, &nb, c(x, 0.0), &tol()).map(|p| p.1);
    assert!(class_probe(&mu_q, QClass::SMu).passes_all());
    assert!(class_probe(&big_q, QClass::SM).passes_all());
}

#[test]
fn q_pair_of_interior_extension_fails_divergence() {
    let (data, _) = instance(4, 4, 2, 1);
    let nb = data.n_space.basis().clone();
    let (mu, big) = extremes(&data);
    let lo = interval_extension(&mu, &big, &(identity(data.param_dim()) * c(-0.5, 0.0)), &tol()).unwrap().matrix;
    let q = |x: f64| q_pair(&lo, &big, &nb, c(x, 0.0), &tol()).map(|p| p.0);
    let report = class_probe(&q, QClass::SMu);
    assert_eq!(report.outcome(2), Some(ProbeOutcome::Fail));
}

#[test]
fn krein_ovcharenko_against_canonical_resolvents() {
    for seed in 0..10 {
        let (data, _) = instance(seed, 5, 2, 1);
        let nb = data.n_space.basis().clone();
        let m = nb.ncols();
        let (mu, big) = extremes(&data);
        let spread = &big - &mu;
        for t in [0.0, 0.5, 1.0] {
            let k_n = identity(m) * c(t, 0.0);
            let y = identity(data.param_dim()) * c(2.0 * t - 1.0, 0.0);
            let ext = interval_extension(&mu, &big, &y, &tol()).unwrap().matrix;
            let xi = c(0.2, 1.1);
            let lhs = krein_ovcharenko(&mu, &spread, &k_n, &nb, xi, &tol()).unwrap();
            let rhs = checked_inverse(&(ext - identity(5) * xi), &tol(), xi).unwrap();
            assert!(frob_dist(&lhs, &rhs) < 1e-8, "seed {seed} t {t}");
        }
    }
}

#[test]
fn n_form_representation_matches_closed_form() {
    for seed in 0..20 {
        let (data, x) = instance(seed, 5, 2, 3);
        let bt = exit_extension(&data, &x, &tol()).unwrap();
        let sys = PassiveSystem::exit_side(&bt, 5, &tol()).unwrap();
        let mut rng = instance_rng(seed, 7);
        let h = gaussian_vector(&mut rng, 3);
        let g = gaussian_vector(&mut rng, 3);
        for lambda in [c(-1.0, 0.0), c(-0.5, 0.0), c(-2.0, 1.0), c(-1.0, 3.0)] {
            let w = disk_point(lambda, &tol()).unwrap();
            let theta = transfer(&sys, w, &tol()).unwrap();
            let oracle = clfrm_value(&theta, &h, &g, &tol()).unwrap();
            let value = n_form_value(&data, &x, lambda, &h, &g, &tol()).unwrap();
            assert!((value - oracle).norm() < 1e-7 * (1.0 + oracle.norm()), "seed {seed} {lambda}");
        }
    }
}

#[test]
fn n_lambda_is_nonnegative_on_negative_axis() {
    let (data, x) = instance(2, 4, 2, 2);
    let bt = exit_extension(&data, &x, &tol()).unwrap();
    let sys = PassiveSystem::exit_side(&bt, 4, &tol()).unwrap();
    for lambda in [-0.1, -1.0, -3.0] {
        let rel = n_lambda(&sys, c(lambda, 0.0), &tol()).unwrap();
        let op = rel.as_operator(&tol()).unwrap();
        assert!(krein_ext::numcore::min_eigenvalue(&krein_ext::numcore::hermitian_part(&op)) > -1e-10);
    }
}

/// `U = (I - S)(I + S)^{-1}` with `S = A^{1/2} (I + iG) A^{1/2}`, `|G| <= tan α`.
fn sectorial_system(seed: u64, alpha: f64, n: usize) -> PassiveSystem {
    let mut rng = instance_rng(seed, 5);
    let a = psd(&mut rng, n, n);
    let g = hermitian_contraction(&mut rng, n, alpha.tan());
    let root = psd_sqrt(&a, &tol()).unwrap();
    let s = &root * (identity(n) + g * c(0.0, 1.0)) * &root;
    let u = (identity(n) - &s) * checked_inverse(&(identity(n) + &s), &tol(), c(0.0, 0.0)).unwrap();
    PassiveSystem::from_block(&u, 1, &tol()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sectorial_transfer_values_stay_in_class(seed in 0u64..1000, r in 0.0f64..0.95, t in -3.0f64..3.0) {
        let alpha = 0.6;
        let sys = sectorial_system(seed, alpha, 4);
        prop_assert!(in_class(&sys.block(), alpha, &tol()));
        let x = C64::from_polar(r, t);
        let theta = transfer(&sys, x, &tol()).unwrap();
        let real = transfer(&sys, c(x.re.clamp(-0.95, 0.95), 0.0), &tol()).unwrap();
        prop_assert!(op_norm(&theta) <= 1.0 + 1e-9);
        prop_assert!(in_class(&real, alpha, &tol()));
    }

    #[test]
    fn transfer_at_origin_is_feedthrough(seed in 0u64..1000) {
        let mut rng = instance_rng(seed, 3);
        let u = contraction(&mut rng, 4, 4, 0.8);
        let sys = PassiveSystem::from_block(&u, 2, &tol()).unwrap();
        prop_assert!(frob_dist(&transfer(&sys, c(0.0, 0.0), &tol()).unwrap(), &sys.d) < 1e-14);
    }

    #[test]
    fn q_pair_product_is_minus_identity(seed in 0u64..1000, re in -3.0f64..3.0, im in 0.05f64..3.0) {
        let (data, x) = instance(seed, 4, 2, 2);
        let nb = data.n_space.basis().clone();
        let (b0, b1) = b_hat_limits(&data, &x, &tol()).unwrap();
        let (q0, q1) = q_pair(&b0, &b1, &nb, c(re, im), &tol()).unwrap();
        prop_assert!(frob_dist(&(q0 * q1), &(-identity(nb.ncols()))) < 1e-8);
    }
}

#[test]
fn constant_theta_gives_constant_n() {
    let sys = zero_state_system(real_diag(&[0.3, -0.6]));
    let a = n_lambda(&sys, c(-0.5, 0.0), &tol()).unwrap();
    let b = n_lambda(&sys, c(-4.0, 2.0), &tol()).unwrap();
    assert!(a.approx_eq(&b, &tol()));
    let _ = ComplexMatrix::zeros(0, 0);
}
