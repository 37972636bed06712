use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::linalg::eigvals;
use crate::error::Result;

/// Real polynomial, coefficients in descending degree order.
///
/// The zero polynomial is stored as `[0.0]`. Leading zeros are stripped on
/// construction, so `coeffs()[0]` is nonzero for every other polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut c: Vec<f64> = coeffs.into();
        let lead = c.iter().position(|&x| x != 0.0).unwrap_or(c.len());
        c.drain(..lead);
        if c.is_empty() {
            c.push(0.0);
        }
        Polynomial { coeffs: c }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// `s`
    pub fn s() -> Self {
        Polynomial::new(vec![1.0, 0.0])
    }

    /// Monic polynomial with the given roots. Roots with nonzero imaginary
    /// part must be supplied together with their conjugates; each pair is
    /// expanded as a real quadratic.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Polynomial::constant(1.0);
        let mut used = vec![false; roots.len()];
        for i in 0..roots.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let r = roots[i];
            if r.im == 0.0 {
                p = &p * &Polynomial::new(vec![1.0, -r.re]);
                continue;
            }
            let partner = (0..roots.len())
                .filter(|&j| !used[j])
                .min_by(|&a, &b| {
                    let da = (roots[a] - r.conj()).norm();
                    let db = (roots[b] - r.conj()).norm();
                    da.partial_cmp(&db).unwrap()
                });
            if let Some(j) = partner {
                used[j] = true;
            }
            p = &p * &Polynomial::new(vec![1.0, -2.0 * r.re, r.norm_sqr()]);
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `s^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> f64 {
        let d = self.degree();
        if k > d {
            0.0
        } else {
            self.coeffs[d - k]
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, k: f64) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(1.0 / self.leading())
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[..d]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (d - i) as f64)
                .collect::<Vec<_>>(),
        )
    }

    /// Quotient and remainder of `self / divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let n = self.degree();
        let d = divisor.degree();
        if n < d || self.is_zero() {
            return (Polynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; n - d + 1];
        let lead = divisor.leading();
        for i in 0..=(n - d) {
            let q = rem[i] / lead;
            quot[i] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= q * dc;
            }
        }
        let r = rem[(n - d + 1)..].to_vec();
        (Polynomial::new(quot), Polynomial::new(r))
    }

    /// Trailing zero coefficients, i.e. the multiplicity of the root at 0.
    pub fn origin_multiplicity(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.coeffs.iter().rev().take_while(|&&c| c == 0.0).count()
    }

    /// Companion matrix of the monic normalisation (top row carries the
    /// negated coefficients).
    pub fn companion(&self) -> DMatrix<f64> {
        let n = self.degree();
        let lead = self.leading();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            m[(0, j)] = -self.coeffs[j + 1] / lead;
        }
        for i in 1..n {
            m[(i, i - 1)] = 1.0;
        }
        m
    }

    /// All roots with multiplicity, sorted by ascending real part.
    ///
    /// Exact zero roots are split off first; the rest are companion-matrix
    /// eigenvalues refined by a few guarded Newton steps on the original
    /// coefficients.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.degree() == 0 {
            return Ok(Vec::new());
        }
        let zeros = self.origin_multiplicity();
        let core = Polynomial::new(self.coeffs[..self.coeffs.len() - zeros].to_vec());
        let mut out = vec![Complex64::new(0.0, 0.0); zeros];
        if core.degree() > 0 {
            let raw = eigvals(&core.companion())?;
            let dp = core.derivative();
            for z in raw {
                if z.im < 0.0 {
                    continue;
                }
                let z = polish(&core, &dp, z);
                out.push(z);
                if z.im > 0.0 {
                    out.push(z.conj());
                }
            }
        }
        out.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        Ok(out)
    }
}

fn polish(p: &Polynomial, dp: &Polynomial, mut z: Complex64) -> Complex64 {
    let real = z.im == 0.0;
    let mut fz = p.eval(z).norm();
    for _ in 0..4 {
        let d = dp.eval(z);
        if d.norm() == 0.0 || fz == 0.0 {
            break;
        }
        let mut cand = z - p.eval(z) / d;
        if real {
            cand.im = 0.0;
        }
        let fc = p.eval(cand).norm();
        if fc < fz && cand.re.is_finite() && cand.im.is_finite() && (real || cand.im > 0.0) {
            z = cand;
            fz = fc;
        } else {
            break;
        }
    }
    z
}

fn combine(a: &[f64], b: &[f64], sign: f64) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (i, &c) in a.iter().enumerate() {
        out[n - a.len() + i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[n - b.len() + i] += sign * c;
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::new(combine(&self.coeffs, &rhs.coeffs, 1.0))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::new(combine(&self.coeffs, &rhs.coeffs, -1.0))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 && !(d == 0) {
                continue;
            }
            let p = d - i;
            if !first {
                f.write_str(if c < 0.0 { " - " } else { " + " })?;
            } else if c < 0.0 {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match p {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a} s")?,
                _ => write!(f, "{a} s^{p}")?,
            }
        }
        Ok(())
    }
}
