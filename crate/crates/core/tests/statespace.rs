mod common;

use nalgebra::DMatrix;
use ni_synth::statespace::{
    char_poly, controllable_canonical, eigvals, eval_by_solve, positive_feedback_tf, tf_from_ss,
    Channel, FrequencyGrid, Polynomial, RationalFunction, RealSchur, StateSpaceModel,
};
use ni_synth::synthesis::matching_distance;
use ni_synth::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_round_trip(rs in prop::collection::vec(-20.0f64..20.0, 1..7)) {
        let want: Vec<Complex64> = rs.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let p = Polynomial::from_roots(&want);
        let got = p.roots().unwrap();
        // Clustered roots lose accuracy like the square root of the spacing.
        prop_assert!(matching_distance(&got, &want) < 1e-4 * 20.0);
        for r in &got {
            prop_assert!(p.eval(*r).norm() <= 1e-6 * p.coeffs().iter().map(|c| c.abs()).sum::<f64>() * 20f64.powi(p.degree() as i32).max(1.0));
        }
    }

    #[test]
    fn transfer_function_matches_linear_solve(seed in any::<u64>(), w in 0.01f64..100.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (sys, _) = common::planted_system(&mut rng, 4);
        let s = Complex64::new(0.0, w);
        for ch in [Channel::W, Channel::U] {
            let g = tf_from_ss(&sys, ch).unwrap();
            if let Some(direct) = eval_by_solve(&sys, ch, s) {
                prop_assert!(close(g.eval(s), direct, 1e-6));
            }
        }
    }

    #[test]
    fn similarity_preserves_transfer_function(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (sys, _) = common::planted_system(&mut rng, 3);
        let t = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 0.0, 1.0, -1.0, 1.0, 0.0, 1.0]);
        let ti = t.clone().try_inverse().unwrap();
        let moved = StateSpaceModel::new(&t * &sys.a * &ti, &t * &sys.b1, &t * &sys.b2, &sys.c1 * &ti).unwrap();
        let s = Complex64::new(0.3, 2.0);
        let a = tf_from_ss(&sys, Channel::U).unwrap().eval(s);
        let b = tf_from_ss(&moved, Channel::U).unwrap().eval(s);
        prop_assert!(close(a, b, 1e-8));
    }

    #[test]
    fn reduce_preserves_values(
        zs in prop::collection::vec(-5.0f64..5.0, 0..3),
        ps in prop::collection::vec(-5.0f64..-0.1, 1..3),
        common_root in -4.0f64..-0.5,
    ) {
        let z: Vec<Complex64> = zs.iter().chain([common_root].iter()).map(|&r| Complex64::new(r, 0.0)).collect();
        let p: Vec<Complex64> = ps.iter().chain([common_root].iter()).chain([-7.0].iter()).map(|&r| Complex64::new(r, 0.0)).collect();
        let rf = RationalFunction::new(Polynomial::from_roots(&z), Polynomial::from_roots(&p)).unwrap();
        let r = rf.reduce().unwrap();
        prop_assert!(r.den().degree() < rf.den().degree());
        let s = Complex64::new(0.2, 1.7);
        prop_assert!(close(r.eval(s), rf.eval(s), 1e-6));
    }

    #[test]
    fn schur_reorder_keeps_spectrum(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (sys, _) = common::planted_system(&mut rng, n);
        let m = &sys.a;
        let mut schur = RealSchur::new(m).unwrap();
        let k = schur.reorder(|l| l.re <= 0.0).unwrap();
        let u = &schur.u;
        prop_assert!((u.transpose() * u - DMatrix::identity(n, n)).norm() < 1e-10);
        prop_assert!((u * &schur.t * u.transpose() - m).norm() <= 1e-9 * m.norm().max(1.0));
        let lead = schur.diagonal_eigenvalues();
        prop_assert!(lead[..k].iter().all(|l| l.re <= 1e-9 * l.norm().max(1.0)));
        prop_assert!(lead[k..].iter().all(|l| l.re > 0.0));
        let e = eigvals(m).unwrap();
        prop_assert!(matching_distance(&lead, &e) <= 1e-7 * m.norm().max(1.0));
    }
}

#[test]
fn characteristic_polynomial_of_companion() {
    let p = Polynomial::new(vec![1.0, 44.5, 582.5, 2375.0]);
    let cp = char_poly(&p.companion()).unwrap();
    for (a, b) in cp.coeffs().iter().zip(p.coeffs()) {
        assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
    }
}

#[test]
fn canonical_realization_round_trip() {
    let rf = RationalFunction::from_coeffs(&[12.812, 448.42, 3203.0], &[1.0, 44.5, 582.5, 2375.0]).unwrap();
    let r = controllable_canonical(&rf).unwrap();
    let back = r.transfer_function().unwrap();
    let s = Complex64::new(0.0, 3.0);
    assert!(close(back.eval(s), rf.eval(s), 1e-12));
}

#[test]
fn feedback_of_first_order_pair() {
    // 1/(s+1) with 1/(s+2) in positive feedback: (s+2)/(s^2+3s+1).
    let m = RationalFunction::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap();
    let n = RationalFunction::from_coeffs(&[1.0], &[1.0, 2.0]).unwrap();
    let g = positive_feedback_tf(&m, &n).unwrap();
    let want = RationalFunction::from_coeffs(&[1.0, 2.0], &[1.0, 3.0, 1.0]).unwrap();
    let s = Complex64::new(0.5, 0.5);
    assert!(close(g.eval(s), want.eval(s), 1e-12));
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(matches!(
        StateSpaceModel::siso(&[1.0, 2.0], &[1.0], &[1.0], &[1.0]),
        Err(Error::Dimension(_))
    ));
    assert!(matches!(
        StateSpaceModel::siso(&[f64::NAN], &[1.0], &[1.0], &[1.0]),
        Err(Error::NonFinite("A"))
    ));
    assert!(RationalFunction::from_coeffs(&[1.0], &[0.0]).is_err());
    assert!(FrequencyGrid::logspace(10.0, 1.0, 5).is_err());
    assert!(FrequencyGrid::logspace(0.0, 1.0, 5).is_err());
}
