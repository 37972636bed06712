use std::fmt;

use num_complex::Complex64;

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Relative distance below which a numerator root and a denominator root are
/// treated as the same point during reduction.
pub const CANCEL_TOL: f64 = 1e-7;

/// Default relative half-width of the interval excluded around a pole when
/// evaluating on the imaginary axis.
pub const DEFAULT_EXCLUSION: f64 = 1e-6;

/// Real-coefficient scalar rational function `num(s) / den(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if !num.is_finite() || !den.is_finite() {
            return Err(Error::NonFinite("rational function coefficients"));
        }
        Ok(RationalFunction { num, den })
    }

    /// Build from descending coefficient slices.
    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        RationalFunction::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()))
    }

    pub fn constant(k: f64) -> Self {
        RationalFunction {
            num: Polynomial::constant(k),
            den: Polynomial::constant(1.0),
        }
    }

    pub fn zero() -> Self {
        RationalFunction::constant(0.0)
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg(den) - deg(num)`.
    pub fn relative_degree(&self) -> isize {
        if self.num.is_zero() {
            return isize::MAX;
        }
        self.den.degree() as isize - self.num.degree() as isize
    }

    pub fn is_proper(&self) -> bool {
        self.relative_degree() >= 0
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.relative_degree() > 0
    }

    pub fn ensure_proper(&self) -> Result<()> {
        if self.is_proper() {
            Ok(())
        } else {
            Err(Error::Improper {
                num: self.num.degree(),
                den: self.den.degree(),
            })
        }
    }

    /// Raw value at `s`; infinite or NaN at a pole.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// Limit as `s -> ∞` (proper functions only).
    pub fn at_infinity(&self) -> Result<f64> {
        self.ensure_proper()?;
        if self.relative_degree() > 0 {
            Ok(0.0)
        } else {
            Ok(self.num.leading() / self.den.leading())
        }
    }

    /// Value at `s = 0`.
    pub fn dc_gain(&self) -> Result<f64> {
        let r = self.reduce()?;
        let d = r.den.coeff(0);
        if d == 0.0 {
            let z = Complex64::new(0.0, 0.0);
            return Err(Error::NearPole { point: z, pole: z });
        }
        Ok(r.num.coeff(0) / d)
    }

    /// Coprime form with a monic denominator. Numerator and denominator roots
    /// that coincide within [`CANCEL_TOL`] (relative to their magnitude) are
    /// divided out of both polynomials; when nothing cancels the original
    /// coefficients are kept apart from the monic scaling.
    pub fn reduce(&self) -> Result<RationalFunction> {
        if self.num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if num.degree() > 0 && den.degree() > 0 {
            let zs = num.roots()?;
            let ps = den.roots()?;
            let mut used = vec![false; ps.len()];
            for z in zs.iter().filter(|z| z.im >= 0.0) {
                let tol = CANCEL_TOL * z.norm().max(1.0);
                let hit = ps
                    .iter()
                    .enumerate()
                    .filter(|(i, p)| !used[*i] && if z.im == 0.0 { p.im == 0.0 } else { p.im > 0.0 })
                    .map(|(i, p)| (i, (p - z).norm()))
                    .filter(|(_, d)| *d <= tol)
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
                let Some((i, _)) = hit else { continue };
                used[i] = true;
                let r = 0.5 * (ps[i] + z);
                let factor = if z.im == 0.0 {
                    Polynomial::new(vec![1.0, -r.re])
                } else {
                    if let Some(j) = ps
                        .iter()
                        .enumerate()
                        .position(|(j, p)| !used[j] && *p == ps[i].conj())
                    {
                        used[j] = true;
                    }
                    Polynomial::new(vec![1.0, -2.0 * r.re, r.norm_sqr()])
                };
                num = num.div_rem(&factor).0;
                den = den.div_rem(&factor).0;
            }
        }
        let lead = den.leading();
        Ok(RationalFunction {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
        })
    }

    /// Poles of the reduced form, with multiplicity.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        self.reduce()?.den.roots()
    }

    /// Zeros of the reduced form; empty for a nonzero constant numerator.
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        if self.num.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        self.reduce()?.num.roots()
    }

    /// Value at `s = jω`, rejecting points within the default exclusion
    /// radius of a pole.
    pub fn eval_freq(&self, omega: f64) -> Result<Complex64> {
        let poles = self.poles()?;
        self.eval_freq_with(omega, &poles, DEFAULT_EXCLUSION)
    }

    /// As [`eval_freq`](Self::eval_freq) with precomputed poles and a
    /// relative exclusion radius `exclusion * max(1, |pole|)`.
    pub fn eval_freq_with(
        &self,
        omega: f64,
        poles: &[Complex64],
        exclusion: f64,
    ) -> Result<Complex64> {
        let s = Complex64::new(0.0, omega);
        if let Some(p) = poles
            .iter()
            .find(|p| (s - **p).norm() <= exclusion * p.norm().max(1.0))
        {
            return Err(Error::NearPole { point: s, pole: *p });
        }
        Ok(self.eval(s))
    }

    pub fn scale(&self, k: f64) -> RationalFunction {
        RationalFunction {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        if self.den == other.den {
            return RationalFunction {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
        }
        RationalFunction {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RationalFunction::new(&self.num * &other.den, &self.den * &other.num)
    }
}

/// Closed-loop map `w1 -> y1` of the positive-feedback loop `u1 = w1 + N y1`,
/// `y1 = M u1`, i.e. `M / (1 - M N)`, reduced.
pub fn positive_feedback_tf(m: &RationalFunction, n: &RationalFunction) -> Result<RationalFunction> {
    let m_inf = m.at_infinity()?;
    let n_inf = n.at_infinity()?;
    let gap = 1.0 - m_inf * n_inf;
    if gap.abs() <= 1e-12 {
        return Err(Error::IllPosed(gap));
    }
    let num = m.num() * n.den();
    let den = &(m.den() * n.den()) - &(m.num() * n.num());
    RationalFunction::new(num, den)?.reduce()
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[f64], d: &[f64]) -> RationalFunction {
        RationalFunction::from_coeffs(n, d).unwrap()
    }

    fn assert_coeffs(p: &Polynomial, want: &[f64], tol: f64) {
        assert_eq!(p.coeffs().len(), want.len(), "{p} vs {want:?}");
        for (a, b) in p.coeffs().iter().zip(want) {
            assert!((a - b).abs() <= tol * b.abs().max(1.0), "{p} vs {want:?}");
        }
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            RationalFunction::from_coeffs(&[1.0], &[0.0]),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn reduce_cancels_common_factor() {
        // (s+1)(s+2) / ((s+1)(s+3)(s^2+4))
        let num = &Polynomial::new(vec![1.0, 1.0]) * &Polynomial::new(vec![1.0, 2.0]);
        let den = &(&Polynomial::new(vec![2.0, 2.0]) * &Polynomial::new(vec![1.0, 3.0]))
            * &Polynomial::new(vec![1.0, 0.0, 4.0]);
        let r = RationalFunction::new(num, den).unwrap().reduce().unwrap();
        assert_coeffs(r.num(), &[0.5, 1.0], 1e-10);
        assert_coeffs(r.den(), &[1.0, 3.0, 4.0, 12.0], 1e-10);
    }

    #[test]
    fn reduce_cancels_imaginary_pair() {
        let num = &Polynomial::new(vec![1.0, 0.0, 9.0]) * &Polynomial::new(vec![1.0, 5.0]);
        let den = &Polynomial::new(vec![1.0, 0.0, 9.0]) * &Polynomial::new(vec![1.0, 1.0, 1.0]);
        let r = RationalFunction::new(num, den).unwrap().reduce().unwrap();
        assert_coeffs(r.num(), &[1.0, 5.0], 1e-10);
        assert_coeffs(r.den(), &[1.0, 1.0, 1.0], 1e-10);
    }

    #[test]
    fn reduce_keeps_coprime_coefficients() {
        let f = rf(&[2.0, 0.0, 6.0], &[2.0, 0.0, 8.0, 0.0]);
        let r = f.reduce().unwrap();
        assert_eq!(r.num().coeffs(), &[1.0, 0.0, 3.0]);
        assert_eq!(r.den().coeffs(), &[1.0, 0.0, 4.0, 0.0]);
    }

    #[test]
    fn first_order_frequency_value() {
        let f = rf(&[1.0], &[1.0, 1.0]);
        let v = f.eval_freq(1.0).unwrap();
        assert!((v - Complex64::new(0.5, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn nominal_dc_value_is_real() {
        let g = rf(&[64.06], &[1.0, 0.0, 8.096e4]);
        let v = g.eval_freq(0.0).unwrap();
        assert_eq!(v.im, 0.0);
        assert!((v.re - 64.06 / 8.096e4).abs() < 1e-18);
        assert!((v.re - 7.9126e-4).abs() < 1e-7);
    }

    #[test]
    fn near_pole_is_reported() {
        let g = rf(&[64.06], &[1.0, 0.0, 8.096e4]);
        let w = 8.096e4_f64.sqrt();
        assert!(matches!(g.eval_freq(w), Err(Error::NearPole { .. })));
        assert!(matches!(g.eval_freq(w * (1.0 + 1e-9)), Err(Error::NearPole { .. })));
        assert!(g.eval_freq(w * 1.001).is_ok());
    }

    #[test]
    fn closed_loop_poles_of_example() {
        let g = rf(&[12.81, 448.4, 3203.0], &[1.0, 44.5, 582.5, 2375.0]);
        let d = g.den().roots().unwrap();
        for (z, want) in d.iter().zip([-25.0, -10.0, -9.5]) {
            assert!((z - Complex64::new(want, 0.0)).norm() < 1e-6, "{z}");
        }
        // 12.81 s^2 + 448.4 s + 3203 vanishes at s = -10 exactly, so the
        // coprime form keeps only two poles.
        let p = g.poles().unwrap();
        assert_eq!(p.len(), 2);
        assert!((p[0] - Complex64::new(-25.0, 0.0)).norm() < 1e-6);
        assert!((p[1] - Complex64::new(-9.5, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn oscillator_poles() {
        let p = rf(&[1.0], &[1.0, 0.0, 4.0]).poles().unwrap();
        assert!((p[0] - Complex64::new(0.0, -2.0)).norm() < 1e-14);
        assert!((p[1] - Complex64::new(0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn zeros_of_pid_numerator() {
        let gamma = 64.06;
        let f = rf(&[-0.2 * gamma, -7.0 * gamma, -50.0 * gamma], &[1.0, 0.0, 8.096e4, 0.0]);
        let z = f.zeros().unwrap();
        assert!((z[0] - Complex64::new(-25.0, 0.0)).norm() < 1e-9);
        assert!((z[1] - Complex64::new(-10.0, 0.0)).norm() < 1e-9);
        assert!(rf(&[3.0], &[1.0, 1.0]).zeros().unwrap().is_empty());
        assert!(matches!(
            RationalFunction::zero().zeros(),
            Err(Error::IdenticallyZero)
        ));
    }

    #[test]
    fn feedback_examples() {
        let m = rf(&[1.0], &[1.0, 1.0]);
        let open = positive_feedback_tf(&m, &RationalFunction::zero()).unwrap();
        assert_coeffs(open.num(), &[1.0], 1e-14);
        assert_coeffs(open.den(), &[1.0, 1.0], 1e-14);

        let m = rf(&[1.0], &[1.0, 2.0]);
        let fb = positive_feedback_tf(&m, &RationalFunction::constant(1.0)).unwrap();
        assert_coeffs(fb.num(), &[1.0], 1e-14);
        assert_coeffs(fb.den(), &[1.0, 1.0], 1e-14);

        let ill = positive_feedback_tf(&RationalFunction::constant(1.0), &RationalFunction::constant(1.0));
        assert!(matches!(ill, Err(Error::IllPosed(_))));
    }

    #[test]
    fn complementary_sensitivity_via_negative_unity() {
        // L / (1 + L) = n_L / (n_L + d_L)
        let gamma = 64.06;
        let n_l = [-0.2 * gamma, -7.0 * gamma, -50.0 * gamma];
        let d_l = [1.0, 0.0, 8.096e4, 0.0];
        let l = rf(&n_l, &d_l);
        let t = positive_feedback_tf(&l, &RationalFunction::constant(-1.0)).unwrap();
        let want_den = &Polynomial::new(n_l.to_vec()) + &Polynomial::new(d_l.to_vec());
        let want = RationalFunction::new(Polynomial::new(n_l.to_vec()), want_den)
            .unwrap()
            .reduce()
            .unwrap();
        assert_coeffs(t.num(), want.num().coeffs(), 1e-12);
        assert_coeffs(t.den(), want.den().coeffs(), 1e-12);
    }

    #[test]
    fn improper_at_infinity_errors() {
        assert!(matches!(
            rf(&[1.0, 0.0], &[1.0]).at_infinity(),
            Err(Error::Improper { num: 1, den: 0 })
        ));
        assert_eq!(rf(&[2.0, 1.0], &[4.0, 1.0]).at_infinity().unwrap(), 0.5);
    }
}
