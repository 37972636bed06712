//! Negative-imaginary property checks for scalar transfer functions and the
//! DC-gain stability test for positive-feedback interconnections.
//!
//! A function `G` is checked on a [`FrequencyGrid`]; pole conditions use the
//! reduced form. Grid tests compare `Im G(jω)` with `tol * |G(jω)|`, so the
//! verdicts do not change under positive scaling; pole locations use
//! `tol * max(1, |p|)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statespace::rational::CANCEL_TOL;
use crate::statespace::{FrequencyGrid, Polynomial, RationalFunction};

pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative width at which sign-change bisection stops.
const BISECT_REL_WIDTH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Ni,
    Sni,
    Lni,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// NI 1: pole with positive real part.
    UnstablePole,
    /// NI 2: `j(G - G*) < 0` at a sampled frequency.
    ImaginaryPart,
    /// NI 3: repeated pole on the imaginary axis away from the origin.
    RepeatedImaginaryPole,
    /// NI 3: residue `lim (s - jω0) j G(s)` is not real nonnegative.
    ImaginaryPoleResidue,
    /// NI 4: pole at the origin of multiplicity above two.
    OriginPoleMultiplicity,
    /// NI 4: `lim s² G(s) < 0` for a double pole at the origin.
    OriginPoleResidue,
    /// SNI 1: pole with `Re >= 0`.
    NotStrictlyStable,
    /// SNI 2: `j(G - G*)` not strictly positive at some `ω > 0`.
    NotStrictlyNegativeImaginary,
    /// LNI: nonzero imaginary part away from poles.
    NotLossless,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::UnstablePole => "pole in the open right half-plane",
            Condition::ImaginaryPart => "j(G - G*) negative",
            Condition::RepeatedImaginaryPole => "repeated imaginary-axis pole",
            Condition::ImaginaryPoleResidue => "residue at imaginary-axis pole not >= 0",
            Condition::OriginPoleMultiplicity => "origin pole of multiplicity > 2",
            Condition::OriginPoleResidue => "lim s^2 G(s) negative",
            Condition::NotStrictlyStable => "pole with Re >= 0",
            Condition::NotStrictlyNegativeImaginary => "j(G - G*) not strictly positive",
            Condition::NotLossless => "nonzero imaginary part",
        }
    }

    pub fn property(self) -> Property {
        match self {
            Condition::UnstablePole
            | Condition::ImaginaryPart
            | Condition::RepeatedImaginaryPole
            | Condition::ImaginaryPoleResidue
            | Condition::OriginPoleMultiplicity
            | Condition::OriginPoleResidue => Property::Ni,
            Condition::NotStrictlyStable | Condition::NotStrictlyNegativeImaginary => Property::Sni,
            Condition::NotLossless => Property::Lni,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Frequency(f64),
    Pole(Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub location: Location,
    pub condition: Condition,
    /// The measured quantity (real part, `-2 Im G`, residue, ...).
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct NiVerdict {
    pub is_ni: bool,
    pub is_sni: bool,
    pub is_lni: bool,
    pub violations: Vec<Violation>,
    pub checked_grid: FrequencyGrid,
    /// Frequencies skipped because they fall inside a pole's exclusion interval.
    pub excluded: Vec<f64>,
    /// Zero crossings of `Im G(jω)` bracketing a violation, located by bisection.
    pub crossings: Vec<f64>,
}

impl NiVerdict {
    pub fn holds(&self, p: Property) -> bool {
        match p {
            Property::Ni => self.is_ni,
            Property::Sni => self.is_sni,
            Property::Lni => self.is_lni,
        }
    }

    /// Violations that make property `p` fail. LNI includes the NI ones.
    pub fn violations_of(&self, p: Property) -> Vec<&Violation> {
        self.violations
            .iter()
            .filter(|v| {
                let q = v.condition.property();
                q == p || (p == Property::Lni && q == Property::Ni)
            })
            .collect()
    }
}

fn pole_tol(tol: f64, p: Complex64) -> f64 {
    tol * p.norm().max(1.0)
}

/// `q(s) = d(s) / (s - root)` by complex synthetic division.
fn deflate(d: &Polynomial, root: Complex64) -> Vec<Complex64> {
    let c = d.coeffs();
    let mut out = Vec::with_capacity(c.len().saturating_sub(1));
    let mut acc = Complex64::new(0.0, 0.0);
    for &a in &c[..c.len() - 1] {
        acc = acc * root + a;
        out.push(acc);
    }
    out
}

fn eval_complex(c: &[Complex64], s: Complex64) -> Complex64 {
    c.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * s + a)
}

fn pole_conditions(r: &RationalFunction, poles: &[Complex64], tol: f64, out: &mut Vec<Violation>) {
    let j = Complex64::new(0.0, 1.0);
    for &p in poles {
        let ptol = pole_tol(tol, p);
        if p.re > ptol {
            out.push(Violation {
                location: Location::Pole(p),
                condition: Condition::UnstablePole,
                value: p.re,
            });
        }
        if p.re >= -ptol {
            out.push(Violation {
                location: Location::Pole(p),
                condition: Condition::NotStrictlyStable,
                value: p.re,
            });
        }
    }

    let origin: Vec<&Complex64> = poles
        .iter()
        .filter(|p| p.norm() <= CANCEL_TOL)
        .collect();
    if origin.len() > 2 {
        out.push(Violation {
            location: Location::Pole(Complex64::new(0.0, 0.0)),
            condition: Condition::OriginPoleMultiplicity,
            value: origin.len() as f64,
        });
    } else if origin.len() == 2 {
        let s2 = Polynomial::new(vec![1.0, 0.0, 0.0]);
        let q = r.den().div_rem(&s2).0;
        let lim = r.num().coeff(0) / q.coeff(0);
        if lim < -tol {
            out.push(Violation {
                location: Location::Pole(Complex64::new(0.0, 0.0)),
                condition: Condition::OriginPoleResidue,
                value: lim,
            });
        }
    }

    for &p in poles.iter().filter(|p| p.im > 0.0 && p.re.abs() <= pole_tol(tol, **p)) {
        if p.norm() <= CANCEL_TOL {
            continue;
        }
        let cluster = poles
            .iter()
            .filter(|q| (**q - p).norm() <= CANCEL_TOL * p.norm().max(1.0))
            .count();
        if cluster > 1 {
            out.push(Violation {
                location: Location::Pole(p),
                condition: Condition::RepeatedImaginaryPole,
                value: cluster as f64,
            });
            continue;
        }
        let q = deflate(r.den(), p);
        let k = j * r.num().eval(p) / eval_complex(&q, p);
        let scale = k.norm().max(1.0);
        if k.re < -tol * scale || k.im.abs() > 1e-6 * scale {
            out.push(Violation {
                location: Location::Pole(p),
                condition: Condition::ImaginaryPoleResidue,
                value: k.re,
            });
        }
    }
}

/// Bisect (in log frequency) the bracket `[lo, hi]` on which `Im G` changes
/// sign, down to relative width [`BISECT_REL_WIDTH`].
fn locate_crossing(r: &RationalFunction, mut lo: f64, mut hi: f64) -> f64 {
    let im = |w: f64| r.eval(Complex64::new(0.0, w)).im;
    let lo_sign = im(lo) > 0.0;
    while (hi - lo) > BISECT_REL_WIDTH * hi {
        let mid = if lo > 0.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if (im(mid) > 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Evaluate every NI / SNI / LNI condition at once.
pub fn classify(rf: &RationalFunction, grid: &FrequencyGrid, tol: f64) -> Result<NiVerdict> {
    rf.ensure_proper()?;
    let r = rf.reduce()?;
    let poles = r.den().roots()?;
    let mut violations = Vec::new();
    pole_conditions(&r, &poles, tol, &mut violations);

    let mut excluded = Vec::new();
    let mut samples: Vec<(f64, f64, f64)> = Vec::with_capacity(grid.len());
    for &w in grid.points() {
        let g = match r.eval_freq_with(w, &poles, grid.exclusion_radius) {
            Ok(g) => g,
            Err(Error::NearPole { .. }) => {
                excluded.push(w);
                continue;
            }
            Err(e) => return Err(e),
        };
        let scale = g.norm();
        samples.push((w, g.im, scale));
        if -2.0 * g.im < -tol * scale {
            violations.push(Violation {
                location: Location::Frequency(w),
                condition: Condition::ImaginaryPart,
                value: -2.0 * g.im,
            });
        }
        if w > 0.0 {
            // Same scale for both, so SNI and LNI cannot hold at once.
            if !(-g.im > tol * scale) {
                violations.push(Violation {
                    location: Location::Frequency(w),
                    condition: Condition::NotStrictlyNegativeImaginary,
                    value: -2.0 * g.im,
                });
            }
            if g.im.abs() > tol * scale {
                violations.push(Violation {
                    location: Location::Frequency(w),
                    condition: Condition::NotLossless,
                    value: g.im,
                });
            }
        }
    }

    let mut crossings = Vec::new();
    for pair in samples.windows(2) {
        let ((w0, i0, s0), (w1, i1, s1)) = (pair[0], pair[1]);
        let violates = |im: f64, s: f64| -2.0 * im < -tol * s;
        if (i0 > 0.0) != (i1 > 0.0) && i0 != 0.0 && i1 != 0.0 && (violates(i0, s0) || violates(i1, s1)) {
            crossings.push(locate_crossing(&r, w0, w1));
        }
    }

    let any = |p: Property| violations.iter().any(|v| v.condition.property() == p);
    let is_ni = !any(Property::Ni);
    let is_sni = !any(Property::Sni);
    let is_lni = is_ni && !any(Property::Lni);
    Ok(NiVerdict {
        is_ni,
        is_sni,
        is_lni,
        violations,
        checked_grid: grid.clone(),
        excluded,
        crossings,
    })
}

pub fn check_ni(rf: &RationalFunction, grid: &FrequencyGrid, tol: f64) -> Result<NiVerdict> {
    classify(rf, grid, tol)
}

pub fn check_sni(rf: &RationalFunction, grid: &FrequencyGrid, tol: f64) -> Result<NiVerdict> {
    classify(rf, grid, tol)
}

pub fn check_lni(rf: &RationalFunction, grid: &FrequencyGrid, tol: f64) -> Result<NiVerdict> {
    classify(rf, grid, tol)
}

/// [`classify`] on [`FrequencyGrid::default_for`] with [`DEFAULT_TOL`].
pub fn classify_default(rf: &RationalFunction) -> Result<NiVerdict> {
    let grid = FrequencyGrid::default_for(rf)?;
    classify(rf, &grid, DEFAULT_TOL)
}

/// Gain conditions for internal stability of the positive-feedback loop of
/// `M` and `N`, evaluated in scalar form.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    /// `1 - M(∞) N(∞) != 0`.
    pub well_posed: bool,
    /// `(1 - M(∞)N(∞))⁻¹ (M(∞)N(0) - 1)`.
    pub cond2: f64,
    /// `(1 - N(0)M(∞))⁻¹ (M(0)N(0) - 1)`.
    pub cond3: f64,
    pub internally_stable: bool,
    pub dc_values: (f64, f64),
    pub inf_values: (f64, f64),
    /// `M` is NI and `N` is SNI on their default grids.
    pub hypotheses_met: bool,
    pub warnings: Vec<String>,
}

pub fn check_internal_stability(
    m: &RationalFunction,
    n: &RationalFunction,
    tol: f64,
) -> Result<StabilityReport> {
    let mr = m.reduce()?;
    let nr = n.reduce()?;
    if mr.den().origin_multiplicity() > 0
        || mr.den().roots()?.iter().any(|p| p.norm() <= CANCEL_TOL)
    {
        return Err(Error::PoleAtOrigin);
    }
    let m0 = mr.dc_gain()?;
    let n0 = nr.dc_gain()?;
    let m_inf = mr.at_infinity()?;
    let n_inf = nr.at_infinity()?;

    let mut warnings = Vec::new();
    let mv = classify_default(&mr)?;
    if !mv.is_ni {
        warnings.push(format!(
            "M is not negative imaginary ({} violations)",
            mv.violations_of(Property::Ni).len()
        ));
    }
    let nv = classify_default(&nr)?;
    if !nv.is_sni {
        warnings.push(format!(
            "N is not strictly negative imaginary ({} violations)",
            nv.violations_of(Property::Sni).len()
        ));
    }

    let gap = 1.0 - m_inf * n_inf;
    let well_posed = gap.abs() > tol;
    let (cond2, cond3) = if well_posed {
        (
            (m_inf * n0 - 1.0) / gap,
            (m0 * n0 - 1.0) / (1.0 - n0 * m_inf),
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    let internally_stable = well_posed && cond2 < 0.0 && cond3 < 0.0;
    Ok(StabilityReport {
        well_posed,
        cond2,
        cond3,
        internally_stable,
        dc_values: (m0, n0),
        inf_values: (m_inf, n_inf),
        hypotheses_met: mv.is_ni && nv.is_sni,
        warnings,
    })
}

/// Roots of the loop characteristic polynomial `d_M d_N - n_M n_N` (reduced
/// `M`, `N`): the closed-loop poles of the interconnection, cancellations
/// included.
pub fn interconnection_poles(m: &RationalFunction, n: &RationalFunction) -> Result<Vec<Complex64>> {
    let mr = m.reduce()?;
    let nr = n.reduce()?;
    let chi = &(mr.den() * nr.den()) - &(mr.num() * nr.num());
    if chi.is_zero() {
        return Err(Error::IllPosed(0.0));
    }
    chi.roots()
}
