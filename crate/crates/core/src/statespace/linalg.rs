//! Dense eigenvalue and ordered real Schur routines.
//!
//! The unordered quasi-triangular form comes from `nalgebra`'s Francis
//! iteration; block extraction, 2x2 standardization and block reordering are
//! done here so that the stable/anti-stable split is under our control.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SCHUR_SWEEPS: usize = 10_000;

// Francis iteration can stall on rare inputs at the tightest deflation test.
const SCHUR_THRESHOLDS: [f64; 4] = [f64::EPSILON, 8.0 * f64::EPSILON, 64.0 * f64::EPSILON, 1e-12];

fn schur(m: &DMatrix<f64>) -> Option<Schur<f64, nalgebra::Dyn>> {
    let iters = MAX_SCHUR_SWEEPS * m.nrows().max(1);
    SCHUR_THRESHOLDS
        .iter()
        .find_map(|&eps| Schur::try_new(m.clone(), eps, iters))
}

fn check_square(m: &DMatrix<f64>, what: &'static str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(what));
    }
    Ok(())
}

/// Diagonal similarity scaling (radix-2 Parlett–Reinsch) that equalises row
/// and column norms. Eigenvalues are unchanged; conditioning usually improves.
pub fn balance(m: &DMatrix<f64>) -> DMatrix<f64> {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    let n = m.nrows();
    let mut b = m.clone();
    for _ in 0..100 {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                c += b[(j, i)].abs();
                r += b[(i, j)].abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / RADIX {
                f *= RADIX;
                c *= SQRDX;
            }
            while c > r * RADIX {
                f /= RADIX;
                c /= SQRDX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    b[(i, j)] /= f;
                    b[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
    b
}

/// Eigenvalues of a 2x2 block `[[a, b], [c, d]]`.
pub(crate) fn eig2(a: f64, b: f64, c: f64, d: f64) -> (Complex64, Complex64) {
    let half_tr = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let disc = half_diff * half_diff + b * c;
    if disc < 0.0 {
        let im = (-disc).sqrt();
        (Complex64::new(half_tr, im), Complex64::new(half_tr, -im))
    } else {
        let sq = disc.sqrt();
        let big = if half_tr >= 0.0 {
            half_tr + sq
        } else {
            half_tr - sq
        };
        let det = a * d - b * c;
        let small = if big != 0.0 { det / big } else { 0.0 };
        (Complex64::new(big, 0.0), Complex64::new(small, 0.0))
    }
}

/// Diagonal blocks `(start, size)` of a quasi-upper-triangular matrix.
pub(crate) fn quasi_blocks(t: &DMatrix<f64>) -> Vec<(usize, usize)> {
    let n = t.nrows();
    let mut out = Vec::new();
    let mut k = 0;
    while k < n {
        if k + 1 < n && t[(k + 1, k)] != 0.0 {
            out.push((k, 2));
            k += 2;
        } else {
            out.push((k, 1));
            k += 1;
        }
    }
    out
}

fn block_eigs(t: &DMatrix<f64>, start: usize, size: usize) -> Vec<Complex64> {
    if size == 1 {
        vec![Complex64::new(t[(start, start)], 0.0)]
    } else {
        let (l1, l2) = eig2(
            t[(start, start)],
            t[(start, start + 1)],
            t[(start + 1, start)],
            t[(start + 1, start + 1)],
        );
        vec![l1, l2]
    }
}

fn sort_spectrum(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Full spectrum of a square real matrix, with multiplicity, sorted by
/// ascending real part then imaginary part. Complex eigenvalues come in exact
/// conjugate pairs.
pub fn eigvals(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    check_square(m, "matrix")?;
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (_, t) = schur(&balance(m))
        .or_else(|| schur(m))
        .or_else(|| schur(&m.transpose()))
        .ok_or(Error::SchurFailed)?
        .unpack();
    let mut out = Vec::with_capacity(n);
    for (start, size) in quasi_blocks(&t) {
        out.extend(block_eigs(&t, start, size));
    }
    sort_spectrum(&mut out);
    Ok(out)
}

/// Real Schur factorisation `A = U T Uᵀ` with `T` quasi-upper-triangular and
/// every 2x2 diagonal block carrying a complex-conjugate pair.
#[derive(Debug, Clone)]
pub struct RealSchur {
    pub u: DMatrix<f64>,
    pub t: DMatrix<f64>,
}

impl RealSchur {
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        check_square(m, "matrix")?;
        let n = m.nrows();
        if n == 0 {
            return Ok(RealSchur {
                u: DMatrix::zeros(0, 0),
                t: DMatrix::zeros(0, 0),
            });
        }
        let (u, t) = schur(m).ok_or(Error::SchurFailed)?.unpack();
        let mut s = RealSchur { u, t };
        s.clean_subdiagonal();
        s.split_real_blocks();
        Ok(s)
    }

    /// Eigenvalues in the order they appear along the diagonal.
    pub fn diagonal_eigenvalues(&self) -> Vec<Complex64> {
        quasi_blocks(&self.t)
            .into_iter()
            .flat_map(|(s, k)| block_eigs(&self.t, s, k))
            .collect()
    }

    pub fn blocks(&self) -> Vec<(usize, usize)> {
        quasi_blocks(&self.t)
    }

    fn clean_subdiagonal(&mut self) {
        let n = self.t.nrows();
        for i in 0..n {
            for j in 0..i.saturating_sub(1) {
                self.t[(i, j)] = 0.0;
            }
        }
        // Two consecutive nonzero subdiagonals cannot both be blocks.
        let mut k = 0;
        while k + 1 < n {
            if self.t[(k + 1, k)] != 0.0 {
                if k + 2 < n {
                    self.t[(k + 2, k + 1)] = 0.0;
                }
                k += 2;
            } else {
                k += 1;
            }
        }
    }

    /// Triangularise any 2x2 block whose eigenvalues are real.
    fn split_real_blocks(&mut self) {
        for (start, size) in quasi_blocks(&self.t) {
            if size != 2 {
                continue;
            }
            let (a, b, c, d) = (
                self.t[(start, start)],
                self.t[(start, start + 1)],
                self.t[(start + 1, start)],
                self.t[(start + 1, start + 1)],
            );
            let (l1, _) = eig2(a, b, c, d);
            if l1.im != 0.0 {
                continue;
            }
            let lam = l1.re;
            // Eigenvector of the block for `lam`.
            let v1 = (b, lam - a);
            let v2 = (lam - d, c);
            let (x, y) = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) {
                v1
            } else {
                v2
            };
            let h = x.hypot(y);
            if h == 0.0 {
                self.t[(start + 1, start)] = 0.0;
                continue;
            }
            let (cs, sn) = (x / h, y / h);
            let n = self.t.nrows();
            let mut g = DMatrix::<f64>::identity(n, n);
            g[(start, start)] = cs;
            g[(start + 1, start)] = sn;
            g[(start, start + 1)] = -sn;
            g[(start + 1, start + 1)] = cs;
            self.t = g.transpose() * &self.t * &g;
            self.u = &self.u * &g;
            self.t[(start + 1, start)] = 0.0;
        }
    }

    /// Swap the adjacent diagonal blocks starting at `j` (sizes `p`, `q`).
    fn swap_blocks(&mut self, j: usize, p: usize, q: usize) -> Result<()> {
        let k = p + q;
        let t11 = self.t.view((j, j), (p, p)).clone_owned();
        let t12 = self.t.view((j, j + p), (p, q)).clone_owned();
        let t22 = self.t.view((j + p, j + p), (q, q)).clone_owned();

        // T11 X - X T22 = T12 in Kronecker form, column-major vec(X).
        let mut sys = DMatrix::<f64>::zeros(p * q, p * q);
        for col in 0..q {
            for row in 0..p {
                let r = col * p + row;
                for i in 0..p {
                    sys[(r, col * p + i)] += t11[(row, i)];
                }
                for l in 0..q {
                    sys[(r, l * p + row)] -= t22[(l, col)];
                }
            }
        }
        let rhs = DVector::from_iterator(p * q, (0..q).flat_map(|c| (0..p).map(move |r| (r, c))).map(|(r, c)| t12[(r, c)]));
        let x = sys
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidArgument("cannot swap blocks with a shared eigenvalue".into()))?;

        let mut basis = DMatrix::<f64>::zeros(k, k);
        for c in 0..q {
            for r in 0..p {
                basis[(r, c)] = -x[c * p + r];
            }
            basis[(p + c, c)] = 1.0;
        }
        let local_q = basis.qr().q();

        let n = self.t.nrows();
        let mut g = DMatrix::<f64>::identity(n, n);
        g.view_mut((j, j), (k, k)).copy_from(&local_q);
        self.t = g.transpose() * &self.t * &g;
        self.u = &self.u * &g;
        for r in (j + q)..(j + k) {
            for c in j..(j + q) {
                self.t[(r, c)] = 0.0;
            }
        }
        if q == 2 && p == 1 {
            self.t[(j + 2, j + 1)] = 0.0;
        }
        if q == 1 && p == 2 {
            self.t[(j + 1, j)] = 0.0;
        }
        if q == 1 && p == 1 {
            self.t[(j + 1, j)] = 0.0;
        }
        Ok(())
    }

    /// Reorder so that blocks whose eigenvalues satisfy `leading` come first.
    /// Returns the dimension of the leading invariant subspace.
    pub fn reorder<F: Fn(Complex64) -> bool>(&mut self, leading: F) -> Result<usize> {
        loop {
            let blocks = quasi_blocks(&self.t);
            let selected: Vec<bool> = blocks
                .iter()
                .map(|&(s, k)| leading(block_eigs(&self.t, s, k)[0]))
                .collect();
            let first_unselected = selected.iter().position(|&s| !s);
            let target = first_unselected.and_then(|u| {
                (u + 1..blocks.len()).find(|&i| selected[i])
            });
            match target {
                None => {
                    return Ok(blocks
                        .iter()
                        .zip(&selected)
                        .filter(|(_, &s)| s)
                        .map(|(b, _)| b.1)
                        .sum())
                }
                Some(i) => {
                    let (s_prev, p) = blocks[i - 1];
                    let (_, q) = blocks[i];
                    self.swap_blocks(s_prev, p, q)?;
                    self.split_real_blocks();
                }
            }
        }
    }
}

/// Frobenius norm.
pub fn fro(m: &DMatrix<f64>) -> f64 {
    m.norm()
}
