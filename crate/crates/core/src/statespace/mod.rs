//! Linear time-invariant building blocks: polynomials, scalar transfer
//! functions, state-space models and frequency grids.

pub mod grid;
pub mod linalg;
pub mod poly;
pub mod rational;

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;

pub use grid::FrequencyGrid;
pub use linalg::{eigvals, RealSchur};
pub use poly::Polynomial;
pub use rational::{positive_feedback_tf, RationalFunction};

use crate::error::{Error, Result};

/// Input channel of a [`StateSpaceModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// Disturbance input `w` (through `B1`).
    W,
    /// Control input `u` (through `B2`).
    U,
}

/// `ẋ = A x + B1 w + B2 u`, `z = C1 x`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceModel {
    pub a: DMatrix<f64>,
    pub b1: DMatrix<f64>,
    pub b2: DMatrix<f64>,
    pub c1: DMatrix<f64>,
}

impl StateSpaceModel {
    pub fn new(
        a: DMatrix<f64>,
        b1: DMatrix<f64>,
        b2: DMatrix<f64>,
        c1: DMatrix<f64>,
    ) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::NonSquare {
                rows: n,
                cols: a.ncols(),
            });
        }
        if b1.nrows() != n || b2.nrows() != n || c1.ncols() != n {
            return Err(Error::Dimension(format!(
                "A is {n}x{n} but B1 is {}x{}, B2 is {}x{}, C1 is {}x{}",
                b1.nrows(),
                b1.ncols(),
                b2.nrows(),
                b2.ncols(),
                c1.nrows(),
                c1.ncols()
            )));
        }
        for (m, name) in [(&a, "A"), (&b1, "B1"), (&b2, "B2"), (&c1, "C1")] {
            if m.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(StateSpaceModel { a, b1, b2, c1 })
    }

    /// Single-input single-output model from row-major slices.
    pub fn siso(a: &[f64], b1: &[f64], b2: &[f64], c1: &[f64]) -> Result<Self> {
        let n = c1.len();
        if a.len() != n * n || b1.len() != n || b2.len() != n {
            return Err(Error::Dimension(format!(
                "expected A with {} entries and B1, B2 with {n} entries",
                n * n
            )));
        }
        StateSpaceModel::new(
            DMatrix::from_row_slice(n, n, a),
            DMatrix::from_column_slice(n, 1, b1),
            DMatrix::from_column_slice(n, 1, b2),
            DMatrix::from_row_slice(1, n, c1),
        )
    }

    pub fn n_states(&self) -> usize {
        self.a.nrows()
    }

    pub fn is_siso(&self) -> bool {
        self.b1.ncols() == 1 && self.b2.ncols() == 1 && self.c1.nrows() == 1
    }

    pub fn ensure_siso(&self) -> Result<()> {
        if self.is_siso() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "single-channel model required, got m1={}, m2={}, p={}",
                self.b1.ncols(),
                self.b2.ncols(),
                self.c1.nrows()
            )))
        }
    }

    pub fn input(&self, channel: Channel) -> &DMatrix<f64> {
        match channel {
            Channel::W => &self.b1,
            Channel::U => &self.b2,
        }
    }

    /// Scalar `C1 B2`.
    pub fn c1b2(&self) -> f64 {
        (&self.c1 * &self.b2)[(0, 0)]
    }

    /// Scalar `C1 B1`.
    pub fn c1b1(&self) -> f64 {
        (&self.c1 * &self.b1)[(0, 0)]
    }

    /// `C1 (sI - A)^{-1} B` for the selected channel.
    pub fn transfer_function(&self, channel: Channel) -> Result<RationalFunction> {
        tf_from_ss(self, channel)
    }

    /// The same plant with `A` replaced by `A + B2 K`.
    pub fn with_state_feedback(&self, k: &RowDVector<f64>) -> Result<StateSpaceModel> {
        if k.len() != self.n_states() || self.b2.ncols() != 1 {
            return Err(Error::Dimension(format!(
                "gain has {} entries for {} states",
                k.len(),
                self.n_states()
            )));
        }
        let a = &self.a + &self.b2 * k;
        StateSpaceModel::new(a, self.b1.clone(), self.b2.clone(), self.c1.clone())
    }
}

/// Characteristic polynomial `det(sI - A)` assembled from the spectrum.
pub fn char_poly(a: &DMatrix<f64>) -> Result<Polynomial> {
    let ev = eigvals(a)?;
    Ok(Polynomial::from_roots(&ev))
}

fn siso_tf(a: &DMatrix<f64>, b: &DVector<f64>, c: &RowDVector<f64>) -> Result<RationalFunction> {
    let n = a.nrows();
    if n == 0 {
        return Err(Error::Dimension("model has no states".into()));
    }
    let den = char_poly(a)?;
    let bn = b.norm();
    let cn = c.norm();
    if bn == 0.0 || cn == 0.0 {
        return RationalFunction::new(Polynomial::zero(), den);
    }
    // det(sI - A + σ b̂ ĉ) = det(sI - A) (1 + σ ĉ (sI - A)^{-1} b̂)
    let sigma = a.norm().max(1.0);
    let bh = b / bn;
    let ch = c / cn;
    let shifted = a - (&bh * &ch) * sigma;
    let pert = char_poly(&shifted)?;
    let diff = &pert - &den;
    // Degree n coefficient cancels exactly; keep degrees 0..n-1 only.
    let tail: Vec<f64> = (0..n).rev().map(|k| diff.coeff(k)).collect();
    let num = Polynomial::new(tail).scale(bn * cn / sigma);
    RationalFunction::new(num, den)
}

/// Transfer function from the chosen input channel to `z`, `D = 0`.
/// The denominator is `det(sI - A)` of full degree `n` (not reduced).
pub fn tf_from_ss(sys: &StateSpaceModel, channel: Channel) -> Result<RationalFunction> {
    sys.ensure_siso()?;
    let b = sys.input(channel).column(0).into_owned();
    let c = sys.c1.row(0).into_owned();
    siso_tf(&sys.a, &b, &c)
}

/// Single-input single-output realization `(A, b, c)` without feedthrough.
#[derive(Debug, Clone, PartialEq)]
pub struct SisoRealization {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: RowDVector<f64>,
}

impl SisoRealization {
    pub fn transfer_function(&self) -> Result<RationalFunction> {
        siso_tf(&self.a, &self.b, &self.c)
    }
}

/// Controllable canonical form: `A` has ones on the superdiagonal and the
/// negated monic denominator coefficients (ascending) in its last row,
/// `b = e_n`, `c` carries the numerator coefficients in ascending order.
pub fn controllable_canonical(rf: &RationalFunction) -> Result<SisoRealization> {
    let r = rf.reduce()?;
    if !r.is_strictly_proper() {
        return Err(Error::Improper {
            num: r.num().degree(),
            den: r.den().degree(),
        });
    }
    let n = r.den().degree();
    let lead = r.den().leading();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = 1.0;
    }
    for j in 0..n {
        a[(n - 1, j)] = -r.den().coeff(j) / lead;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let c = RowDVector::from_iterator(n, (0..n).map(|j| r.num().coeff(j) / lead));
    Ok(SisoRealization { a, b, c })
}

/// Value of `C (sI - A)^{-1} B` by a direct linear solve.
pub fn eval_by_solve(sys: &StateSpaceModel, channel: Channel, s: Complex64) -> Option<Complex64> {
    let n = sys.n_states();
    let a = sys.a.map(|x| Complex64::new(x, 0.0));
    let m = DMatrix::<Complex64>::identity(n, n) * s - a;
    let b = sys.input(channel).column(0).map(|x| Complex64::new(x, 0.0));
    let x = m.lu().solve(&b)?;
    let c = sys.c1.row(0).map(|x| Complex64::new(x, 0.0));
    Some((c * x)[(0, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_identity() {
        let sys = StateSpaceModel::siso(&[-1.0], &[1.0], &[1.0], &[1.0]).unwrap();
        let g = tf_from_ss(&sys, Channel::U).unwrap();
        assert_eq!(g.den().coeffs(), &[1.0, 1.0]);
        assert!((g.num().coeffs()[0] - 1.0).abs() < 1e-14);
        assert_eq!(g.num().degree(), 0);
    }

    #[test]
    fn modal_realization_gives_second_order_term() {
        let (z, w, gamma) = (0.05_f64, 3.0_f64, 2.5);
        let a = [-2.0 * z * w, -w * w, 1.0, 0.0];
        let sys = StateSpaceModel::siso(&a, &[1.0, 0.0], &[1.0, 0.0], &[0.0, gamma]).unwrap();
        let g = tf_from_ss(&sys, Channel::U).unwrap().reduce().unwrap();
        assert_eq!(g.num().degree(), 0);
        assert!((g.num().coeffs()[0] - gamma).abs() < 1e-12);
        let d = g.den().coeffs();
        assert!((d[1] - 2.0 * z * w).abs() < 1e-12 && (d[2] - w * w).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let r = StateSpaceModel::new(
            DMatrix::zeros(2, 2),
            DMatrix::zeros(3, 1),
            DMatrix::zeros(2, 1),
            DMatrix::zeros(1, 2),
        );
        assert!(matches!(r, Err(Error::Dimension(_))));
        let r = StateSpaceModel::siso(&[f64::NAN], &[1.0], &[1.0], &[1.0]);
        assert!(matches!(r, Err(Error::NonFinite("A"))));
    }

    #[test]
    fn canonical_form_of_integrator() {
        let r = controllable_canonical(&RationalFunction::from_coeffs(&[1.0], &[1.0, 0.0]).unwrap())
            .unwrap();
        assert_eq!(r.a, DMatrix::from_element(1, 1, 0.0));
        assert_eq!(r.b[0], 1.0);
        assert_eq!(r.c[0], 1.0);
    }

    #[test]
    fn canonical_form_of_pid_loop() {
        let (g, wp2) = (64.06, 8.096e4);
        let (kp, ki, kd) = (-7.0, -50.0, -0.2);
        let l = RationalFunction::from_coeffs(&[g * kd, g * kp, g * ki], &[1.0, 0.0, wp2, 0.0])
            .unwrap();
        let r = controllable_canonical(&l).unwrap();
        let want_a = DMatrix::from_row_slice(3, 3, &[0., 1., 0., 0., 0., 1., 0., -wp2, 0.]);
        assert_eq!(r.a, want_a);
        assert_eq!(r.b.as_slice(), &[0.0, 0.0, 1.0]);
        let c = r.c.iter().copied().collect::<Vec<_>>();
        for (x, want) in c.iter().zip([-3203.0, -448.42, -12.812]) {
            assert!((x - want).abs() < 1e-9 * want.abs());
        }
    }

    #[test]
    fn improper_realization_rejected() {
        let f = RationalFunction::from_coeffs(&[1.0, 1.0], &[1.0, 2.0]).unwrap();
        assert!(matches!(controllable_canonical(&f), Err(Error::Improper { .. })));
    }
}
