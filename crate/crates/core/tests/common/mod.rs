#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::DMatrix;
use ni_synth::augmentation::{augment_pid, AugmentedSystem, PidGains};
use ni_synth::modal::{load_modal, ModalModel};
use ni_synth::statespace::{controllable_canonical, Polynomial, RationalFunction, StateSpaceModel};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn table1() -> ModalModel {
    load_modal(fixture("table1.modal")).expect("table1 fixture")
}

/// First mode of the beam fixture, undamped, PID (-7, -50, -0.2).
pub fn example_system() -> AugmentedSystem {
    let mode = table1().undamp().modes()[0];
    augment_pid(&mode, &PidGains::new(-7.0, -50.0, -0.2)).expect("example augmentation")
}

/// `n - 1` distinct stable values, real or in conjugate pairs, with
/// `-max Re` at least `0.2`.
pub fn stable_spectrum(rng: &mut StdRng, count: usize) -> Vec<Complex64> {
    loop {
        let mut v = Vec::with_capacity(count);
        while v.len() < count {
            let re = -rng.random_range(0.2..8.0);
            if count - v.len() >= 2 && rng.random_bool(0.4) {
                let im = rng.random_range(0.5..6.0);
                v.push(Complex64::new(re, im));
                v.push(Complex64::new(re, -im));
            } else {
                v.push(Complex64::new(re, 0.0));
            }
        }
        let separated = (0..v.len()).all(|i| (i + 1..v.len()).all(|j| (v[i] - v[j]).norm() > 0.3));
        if separated {
            return v;
        }
    }
}

fn random_matrix(rng: &mut StdRng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
}

/// Admissible planted system: `u -> z` has the given zeros, so `σ(A_q)` is
/// those zeros plus the origin. A random similarity hides the canonical form.
pub fn planted_system(rng: &mut StdRng, n: usize) -> (StateSpaceModel, Vec<Complex64>) {
    let zeros = stable_spectrum(rng, n - 1);
    let gain = rng.random_range(0.5..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let num = Polynomial::from_roots(&zeros).scale(gain);
    let mut den = vec![1.0];
    den.extend((0..n).map(|_| rng.random_range(-4.0..4.0)));
    let rf = RationalFunction::new(num, Polynomial::new(den)).expect("planted tf");
    let real = controllable_canonical(&rf).expect("canonical form");
    let (a0, b0, c0) = (real.a, DMatrix::from_column_slice(n, 1, real.b.as_slice()), DMatrix::from_row_slice(1, n, real.c.as_slice()));
    // The similarity may worsen ‖C1‖‖B2‖ / |C1 B2| by at most a factor of 4.
    let kappa0 = c0.norm() * b0.norm() / (&c0 * &b0)[(0, 0)].abs();
    let (t, ti) = loop {
        let t = DMatrix::identity(n, n) + random_matrix(rng, n, n) * 0.4;
        let s = t.clone().svd(false, false).singular_values;
        if s.min() <= 0.3 {
            continue;
        }
        let ti = t.clone().try_inverse().expect("well-conditioned similarity");
        let (b2, c1) = (&t * &b0, &c0 * &ti);
        if c1.norm() * b2.norm() <= 4.0 * kappa0 * (&c1 * &b2)[(0, 0)].abs() {
            break (t, ti);
        }
    };
    let a = &t * a0 * &ti;
    let b2 = &t * b0;
    let c1 = c0 * &ti;
    let r = random_matrix(rng, n, 1);
    let c1b2 = (&c1 * &b2)[(0, 0)];
    let target = rng.random_range(0.5..2.0);
    let b1 = &r + &b2 * ((target - (&c1 * &r)[(0, 0)]) / c1b2);
    (StateSpaceModel::new(a, b1, b2, c1).expect("planted model"), zeros)
}

/// Stable strictly proper NI function: a sum of damped modes.
pub fn random_modal_sum(rng: &mut StdRng, modes: usize) -> RationalFunction {
    let mut g = RationalFunction::zero();
    for _ in 0..modes {
        let w: f64 = rng.random_range(0.5..20.0);
        let zeta = rng.random_range(0.02..0.7);
        let gain = rng.random_range(0.1..5.0);
        let m = RationalFunction::from_coeffs(&[gain], &[1.0, 2.0 * zeta * w, w * w]).expect("mode");
        g = g.add(&m);
    }
    g
}

/// Strictly proper NI `M` and SNI `N` with `M(0) N(0)` spread around 1.
pub fn random_ni_pair(rng: &mut StdRng) -> (RationalFunction, RationalFunction) {
    loop {
        let nm = rng.random_range(1..=3);
        let m = random_modal_sum(rng, nm).reduce().expect("reduced M");
        let n = if rng.random_bool(0.5) {
            let a = rng.random_range(0.3..10.0);
            RationalFunction::from_coeffs(&[1.0], &[1.0, a]).expect("lag")
        } else {
            let k = rng.random_range(1..=2);
            random_modal_sum(rng, k).reduce().expect("reduced N")
        };
        let p = m.dc_gain().expect("M(0)") * n.dc_gain().expect("N(0)");
        let target = rng.random_range(0.2..1.8);
        if (target - 1.0f64).abs() < 0.05 {
            continue;
        }
        return (m, n.scale(target / p));
    }
}

pub fn max_re(zs: &[Complex64]) -> f64 {
    zs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}
