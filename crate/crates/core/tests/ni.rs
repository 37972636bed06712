mod common;

use ni_synth::ni::{
    check_internal_stability, check_lni, check_ni, check_sni, classify, classify_default,
    interconnection_poles, Condition, Property,
};
use ni_synth::statespace::{positive_feedback_tf, FrequencyGrid, RationalFunction};
use ni_synth::Error;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn tf(num: &[f64], den: &[f64]) -> RationalFunction {
    RationalFunction::from_coeffs(num, den).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn damped_modal_sums_are_sni(seed in any::<u64>(), modes in 1usize..5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = common::random_modal_sum(&mut rng, modes);
        let v = classify_default(&g).unwrap();
        prop_assert!(v.is_ni && v.is_sni && !v.is_lni);
    }

    #[test]
    fn negated_modal_sums_are_not_ni(seed in any::<u64>(), modes in 1usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = common::random_modal_sum(&mut rng, modes).scale(-1.0);
        let v = classify_default(&g).unwrap();
        prop_assert!(!v.is_ni);
        prop_assert!(v.violations.iter().any(|x| x.condition == Condition::ImaginaryPart));
    }

    #[test]
    fn gain_conditions_agree_with_loop_poles(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (m, n) = common::random_ni_pair(&mut rng);
        let r = check_internal_stability(&m, &n, 1e-8).unwrap();
        prop_assert!(r.hypotheses_met);
        let poles = positive_feedback_tf(&m, &n).unwrap().reduce().unwrap().poles().unwrap();
        prop_assert_eq!(r.internally_stable, common::max_re(&poles) < 0.0);
        let direct = interconnection_poles(&m, &n).unwrap();
        prop_assert_eq!(r.internally_stable, common::max_re(&direct) < 0.0);
    }
}

#[test]
fn undamped_modes_are_lossless() {
    let g = tf(&[64.06], &[1.0, 0.0, 8.096e4]).add(&tf(&[65.14], &[1.0, 0.0, 3.327e6]));
    let grid = FrequencyGrid::default_for(&g).unwrap();
    let v = check_lni(&g, &grid, 1e-8).unwrap();
    assert!(v.is_ni && v.is_lni && !v.is_sni);
}

#[test]
fn origin_poles() {
    assert!(classify_default(&tf(&[1.0], &[1.0, 0.0])).unwrap().is_ni);
    assert!(classify_default(&tf(&[1.0], &[1.0, 0.0, 0.0])).unwrap().is_ni);
    let neg = classify_default(&tf(&[-1.0], &[1.0, 0.0, 0.0])).unwrap();
    assert!(!neg.is_ni);
    assert!(neg.violations.iter().any(|v| v.condition == Condition::OriginPoleResidue));
    let triple = classify_default(&tf(&[1.0], &[1.0, 0.0, 0.0, 0.0])).unwrap();
    assert!(triple.violations.iter().any(|v| v.condition == Condition::OriginPoleMultiplicity));
}

#[test]
fn unstable_and_repeated_poles() {
    let v = classify_default(&tf(&[1.0], &[1.0, -1.0])).unwrap();
    assert!(v.violations.iter().any(|x| x.condition == Condition::UnstablePole));
    let rep = tf(&[1.0], &[1.0, 0.0, 2.0, 0.0, 1.0]);
    let v = classify_default(&rep).unwrap();
    assert!(v.violations.iter().any(|x| x.condition == Condition::RepeatedImaginaryPole));
}

#[test]
fn sign_changes_are_located() {
    // Im G changes sign at omega = 1 for (1 - s)/(s+1)^2 scaled: check the
    // crossing lands close to the exact value.
    let g = tf(&[-1.0, 0.0, 1.0], &[1.0, 3.0, 3.0, 1.0]);
    let grid = FrequencyGrid::logspace(0.01, 100.0, 400).unwrap();
    let v = check_ni(&g, &grid, 1e-8).unwrap();
    assert!(!v.is_ni);
    let exact: Vec<f64> = grid
        .points()
        .windows(2)
        .filter(|w| g.eval_freq(w[0]).unwrap().im.signum() != g.eval_freq(w[1]).unwrap().im.signum())
        .map(|w| w[0])
        .collect();
    assert!(!v.crossings.is_empty() && !exact.is_empty());
    for c in &v.crossings {
        assert!(g.eval_freq(*c).unwrap().im.abs() < 1e-6);
    }
}

#[test]
fn sni_and_lni_are_exclusive() {
    for g in [tf(&[1.0], &[1.0, 1.0]), tf(&[1.0], &[1.0, 0.0, 4.0]), tf(&[2.0, 1.0], &[1.0, 3.0, 2.0])] {
        let grid = FrequencyGrid::default_for(&g).unwrap();
        let v = classify(&g, &grid, 1e-8).unwrap();
        assert!(!(v.is_sni && v.is_lni));
        assert_eq!(v.holds(Property::Sni), check_sni(&g, &grid, 1e-8).unwrap().is_sni);
    }
}

#[test]
fn lemma_gain_conditions() {
    let m = tf(&[1.0], &[1.0, 0.2, 1.0]);
    let stable = check_internal_stability(&m, &tf(&[0.5], &[1.0, 1.0]), 1e-8).unwrap();
    assert!(stable.well_posed && stable.internally_stable);
    assert!((stable.cond2 + 1.0).abs() < 1e-12 && (stable.cond3 + 0.5).abs() < 1e-12);
    let unstable = check_internal_stability(&m, &tf(&[2.0], &[1.0, 1.0]), 1e-8).unwrap();
    assert!(!unstable.internally_stable);
    let origin = tf(&[1.0], &[1.0, 0.0]);
    assert!(matches!(
        check_internal_stability(&origin, &tf(&[1.0], &[1.0, 1.0]), 1e-8),
        Err(Error::PoleAtOrigin)
    ));
    let ill = check_internal_stability(&tf(&[1.0, 0.0], &[1.0, 1.0]), &tf(&[1.0, 0.0], &[1.0, 1.0]), 1e-8).unwrap();
    assert!(!ill.well_posed && ill.cond2.is_nan());
}
