use krein_ext::exitspace::*;
use krein_ext::extensions::block_forms;
use krein_ext::numcore::*;
use krein_ext::random::*;
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn parameter(seed: u64, k: usize, h: usize) -> ExitParameter {
    let m = selfadjoint_block(&mut instance_rng(seed, 60), k, h, 0.95);
    ExitParameter::from_matrix(&m, k, &tol()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn z_gap_is_the_coupling_square(seed in 0u64..10_000, k in 1usize..=4, h in 1usize..=4) {
        let x = parameter(seed, k, h);
        let z = z_pair(&x, &tol()).unwrap();
        let forms = block_forms(&x.matrix(), k, &tol()).unwrap();
        let half_gap = (&z.z1 - &z.z0) * c(0.5, 0.0);
        prop_assert!(frob_dist(&(&forms.u * forms.u.adjoint()), &half_gap) <= 1e-8);
        prop_assert!(psd_le(&z.z0, &z.z1, &tol()));
        prop_assert!(op_norm(&z.z0) <= 1.0 + 1e-9 && op_norm(&z.z1) <= 1.0 + 1e-9);
    }

    #[test]
    fn rebuilt_parameter_keeps_the_z_pair(seed in 0u64..10_000, k in 1usize..=4, extra in 0usize..=2) {
        let z = z_pair(&parameter(seed, k, k), &tol()).unwrap();
        let p = gap_basis(&z, &tol()).ncols();
        let h = p + extra;
        let mut rng = instance_rng(seed, 61);
        let x22 = hermitian_contraction(&mut rng, h, 0.7);
        let v = isometry(&mut rng, h, p);
        let rebuilt = x_from_z_pair(&z, &x22, &v, &tol()).unwrap();
        prop_assert!(rebuilt.is_selfadjoint(&tol()) && op_norm(&rebuilt.matrix()) <= 1.0 + 1e-9);
        let again = z_pair(&rebuilt, &tol()).unwrap();
        prop_assert!(frob_dist(&again.z0, &z.z0) <= 1e-7);
        prop_assert!(frob_dist(&again.z1, &z.z1) <= 1e-7);
        prop_assert!(frob_dist(&rebuilt.x22, &x22) <= 1e-12);
    }

    #[test]
    fn coisometric_blocks_short_to_zero(seed in 0u64..10_000, k in 1usize..=5, h in 1usize..=5) {
        let h = h.min(k);
        let m = coisometric_block(&mut instance_rng(seed, 62), k, h, &tol()).unwrap();
        let x = ExitParameter::from_matrix(&m, k, &tol()).unwrap();
        let (plus, minus) = exit_shortings(&x, &tol()).unwrap();
        prop_assert!(plus <= 1e-8 && minus <= 1e-8);
        prop_assert!(op_norm(&x.x22) < 1.0);
    }

    #[test]
    fn exit_extension_extends_the_contraction(seed in 0u64..10_000, n in 1usize..=5, k in 0usize..=5, h in 1usize..=3) {
        let data = hermitian_contraction_data(&mut instance_rng(seed, 63), n, k.min(n), &tol()).unwrap();
        let x = parameter(seed, data.param_dim(), h);
        let ext = exit_extension(&data, &x, &tol()).unwrap();
        let lifted = ext.view((0, 0), (n, n)) * data.dom.basis();
        prop_assert!(frob_dist(&lifted, &data.b_column) <= 1e-9);
        prop_assert!((ext.view((n, 0), (h, n)) * data.dom.basis()).norm() <= 1e-9);
        prop_assert!(hermitian_deviation(&ext) <= 1e-10);
        prop_assert!(op_norm(&ext) <= 1.0 + 1e-9);
    }
}

#[test]
fn trivial_exit_space_coupling_leaves_z_equal() {
    // With X12 = 0 the shortings to K are I ± X11, so Z0 = Z1 = X11.
    let x11 = real_matrix(2, 2, &[0.3, 0.1, 0.1, -0.2]);
    let x = ExitParameter::selfadjoint(x11.clone(), zeros(2, 1), real_diag(&[0.5]), &tol()).unwrap();
    let z = z_pair(&x, &tol()).unwrap();
    assert!(frob_dist(&z.z0, &x11) < 1e-12);
    assert!(frob_dist(&z.z1, &x11) < 1e-12);
    assert_eq!(gap_basis(&z, &tol()).ncols(), 0);
}
