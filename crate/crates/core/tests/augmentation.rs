use ni_synth::augmentation::{
    achievable_epsilon, augment_integrator, augment_pid, integrator_margin, pid_open_loop, PidGains,
};
use ni_synth::error::Precondition;
use ni_synth::modal::Mode;
use ni_synth::statespace::{tf_from_ss, Channel};
use ni_synth::synthesis::{admissible_epsilon_range, check_assumptions, matching_distance};
use ni_synth::Error;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integrator_range_is_zeta_omega(zeta in 1e-3f64..0.5, w in 0.5f64..500.0, k in 0.1f64..20.0, gain in 0.1f64..100.0) {
        let mode = Mode::new(gain, 2.0 * zeta * w, w * w).unwrap();
        let aug = augment_integrator(&mode, -k).unwrap();
        prop_assert!(check_assumptions(&aug.sys).is_empty());
        let r = admissible_epsilon_range(&aug.sys).unwrap();
        prop_assert!((r.gamma - zeta * w).abs() <= 1e-7 * w.max(1.0));
        prop_assert!((integrator_margin(&mode) - zeta * w).abs() <= 1e-12 * w);
    }

    #[test]
    fn pid_zeros_set_the_range(kp in -20.0f64..-0.5, ki in -80.0f64..-0.5, kd in -1.0f64..-0.05) {
        let mode = Mode::new(64.06, 0.0, 8.096e4).unwrap();
        let g = PidGains::new(kp, ki, kd);
        let aug = augment_pid(&mode, &g).unwrap();
        let e = achievable_epsilon(&g, mode.gain).unwrap();
        let zeros = tf_from_ss(&aug.sys, Channel::U).unwrap().reduce().unwrap().zeros().unwrap();
        prop_assert!(matching_distance(&zeros, &e.roots) <= 1e-6 * e.roots.iter().map(|z| z.norm()).fold(1.0, f64::max));
        let r = admissible_epsilon_range(&aug.sys).unwrap();
        prop_assert!((r.gamma - e.margin).abs() <= 1e-6 * e.margin.max(1.0));
    }
}

#[test]
fn example_pid_plant() {
    let mode = Mode::new(64.06, 0.0, 8.096e4).unwrap();
    let g = PidGains::new(-7.0, -50.0, -0.2);
    let aug = augment_pid(&mode, &g).unwrap();
    assert!((aug.sys.a[(2, 0)] - 3203.0).abs() < 1e-9);
    assert!((aug.sys.a[(2, 1)] + 80511.58).abs() < 1e-9);
    assert!((aug.sys.a[(2, 2)] - 12.812).abs() < 1e-12);
    let e = achievable_epsilon(&g, mode.gain).unwrap();
    assert!(matching_distance(&e.roots, &[Complex64::new(-10.0, 0.0), Complex64::new(-25.0, 0.0)]) < 1e-9);
    assert!((e.margin - 10.0).abs() < 1e-9);
    let l = pid_open_loop(&mode, &g).unwrap();
    assert!(l.relative_degree() >= 1);
}

#[test]
fn sign_requirements() {
    let mode = Mode::new(64.06, 2.089, 8.096e4).unwrap();
    assert!(matches!(
        augment_integrator(&mode, 1.0),
        Err(Error::SynthesisPreconditions(v)) if v == vec![Precondition::A2]
    ));
    let undamped = mode.undamped();
    assert!(matches!(
        augment_pid(&undamped, &PidGains::new(-7.0, -50.0, 0.2)),
        Err(Error::SynthesisPreconditions(v)) if v == vec![Precondition::A2]
    ));
    assert!(matches!(augment_pid(&mode, &PidGains::new(-7.0, -50.0, -0.2)), Err(Error::Precondition(_))));
}
