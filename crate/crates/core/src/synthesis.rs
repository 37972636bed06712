//! SNI state-feedback synthesis for single-channel plants
//! `ẋ = A x + B1 w + B2 u`, `z = C1 x`.
//!
//! With `Q = I - B2 (C1 B2)⁻¹ C1`, `A_q = Q A` and `A_r = Q (A + εI)`, the gain
//! `K = -(C1 B2)⁻¹ (C1 A + ε C1)` gives `C1 (A + εI + B2 K) = 0`, so the
//! Riccati certificate collapses to `P = 0` and the closed loop is SNI with
//! degree of stability `ε` whenever `A_q` and `A_r` have no unstable
//! eigenvalues.

use nalgebra::{DMatrix, RowDVector};
use num_complex::Complex64;

use crate::error::{Error, Precondition, Result};
use crate::ni;
use crate::statespace::{
    eigvals, tf_from_ss, Channel, FrequencyGrid, RationalFunction, RealSchur, StateSpaceModel,
};

/// Relative tolerance for treating an eigenvalue as on the imaginary axis.
pub const AXIS_TOL: f64 = 1e-9;
/// Relative threshold below which `C1 B2` (or `C1 B1`) counts as zero.
pub const SINGULAR_TOL: f64 = 1e-12;
/// Annihilation residual bound, relative to `‖C1 A‖`.
pub const ANNIHILATION_TOL: f64 = 1e-9;
/// Slack on `max Re σ(A + B2 K) <= -ε`.
pub const POLE_SLACK: f64 = 1e-7;
/// Relative gap below which two eigenvalues of `A_q` count as repeated.
pub const DISTINCT_TOL: f64 = 1e-6;
/// The structural zero of `A_q` must be below this times `‖A_q‖`.
pub const ZERO_EIG_TOL: f64 = 1e-7;

fn scale_of(l: Complex64) -> f64 {
    l.norm().max(1.0)
}

/// `Re λ <= AXIS_TOL · max(1, |λ|)`.
pub fn is_nonpositive(l: Complex64) -> bool {
    l.re <= AXIS_TOL * scale_of(l)
}

fn is_marginal(l: Complex64) -> bool {
    l.re.abs() <= AXIS_TOL * scale_of(l)
}

/// Guard band kept below the supremum `γ` of admissible `ε`.
pub fn epsilon_guard(gamma: f64) -> f64 {
    1e-9 * gamma.max(1.0)
}

/// Which of A1 (`C1 B2 != 0`) and A2 (`C1 B1 > 0`) fail.
pub fn check_assumptions(sys: &StateSpaceModel) -> Vec<Precondition> {
    let mut failed = Vec::new();
    if !sys.is_siso() {
        return vec![Precondition::A1, Precondition::A2];
    }
    let c = sys.c1.norm();
    if sys.c1b2().abs() <= SINGULAR_TOL * c * sys.b2.norm() || c == 0.0 {
        failed.push(Precondition::A1);
    }
    if !(2.0 * sys.c1b1() > SINGULAR_TOL * c * sys.b1.norm()) {
        failed.push(Precondition::A2);
    }
    failed
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSet {
    pub q: DMatrix<f64>,
    pub aq: DMatrix<f64>,
    pub ar: DMatrix<f64>,
    pub epsilon: f64,
}

impl ProjectionSet {
    /// `‖Q B2‖` and `‖Q² - Q‖`, both relative to `max(1, ‖Q‖)`.
    pub fn projector_residuals(&self, b2: &DMatrix<f64>) -> (f64, f64) {
        let s = self.q.norm().max(1.0);
        (
            (&self.q * b2).norm() / (s * b2.norm().max(f64::MIN_POSITIVE)),
            (&self.q * &self.q - &self.q).norm() / s,
        )
    }
}

pub fn build_projection(sys: &StateSpaceModel, epsilon: f64) -> Result<ProjectionSet> {
    sys.ensure_siso()?;
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon must be >= 0, got {epsilon}")));
    }
    if check_assumptions(sys).contains(&Precondition::A1) {
        return Err(Error::SynthesisPreconditions(vec![Precondition::A1]));
    }
    let n = sys.n_states();
    let q = DMatrix::identity(n, n) - &sys.b2 * &sys.c1 / sys.c1b2();
    let aq = &q * &sys.a;
    let ar = &aq + &q * epsilon;
    Ok(ProjectionSet { q, aq, ar, epsilon })
}

/// Spectrum of `m` when `C1 m = 0`: the structural origin eigenvalue is
/// returned exactly and the rest come from `m` compressed onto `ker C1`.
pub fn deflated_spectrum(m: &DMatrix<f64>, c1: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    let c = c1.row(0).transpose();
    let norm = c.norm();
    if n == 0 || norm == 0.0 {
        return eigvals(m);
    }
    // Householder reflector mapping C1^T onto e1; its other columns span ker C1.
    let mut v = c.clone();
    v[0] += norm.copysign(c[0]);
    let h = DMatrix::identity(n, n) - &v * v.transpose() * (2.0 / v.norm_squared());
    let w = h.columns(1, n - 1).into_owned();
    let mut eig = if n > 1 { eigvals(&(w.transpose() * m * &w))? } else { Vec::new() };
    eig.push(Complex64::new(0.0, 0.0));
    Ok(eig)
}

/// Ordered real Schur form of `A_r` and the transformed input/output data.
#[derive(Debug, Clone)]
pub struct SchurBlocks {
    pub u: DMatrix<f64>,
    pub atil: DMatrix<f64>,
    pub btil: DMatrix<f64>,
    pub ctil: DMatrix<f64>,
    pub ztil: DMatrix<f64>,
    pub r: f64,
    /// Dimension of the closed-left-half-plane block `Ã11`.
    pub n11: usize,
    /// Eigenvalues within the axis tolerance, all assigned to `Ã11`.
    pub marginal: Vec<Complex64>,
}

impl SchurBlocks {
    fn n(&self) -> usize {
        self.atil.nrows()
    }

    pub fn a11(&self) -> DMatrix<f64> {
        self.atil.view((0, 0), (self.n11, self.n11)).into_owned()
    }

    pub fn a12(&self) -> DMatrix<f64> {
        let n22 = self.n() - self.n11;
        self.atil.view((0, self.n11), (self.n11, n22)).into_owned()
    }

    pub fn a22(&self) -> DMatrix<f64> {
        let n22 = self.n() - self.n11;
        self.atil.view((self.n11, self.n11), (n22, n22)).into_owned()
    }

    /// `(B̃11, B̃22)`.
    pub fn b_split(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        split_rows(&self.btil, self.n11)
    }

    /// `(C̃11, C̃22)`.
    pub fn c_split(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        split_rows(&self.ctil, self.n11)
    }

    /// `(Z̃11, Z̃12, Z̃21, Z̃22)`.
    pub fn z_blocks(&self) -> [DMatrix<f64>; 4] {
        let (k, n) = (self.n11, self.n());
        [
            self.ztil.view((0, 0), (k, k)).into_owned(),
            self.ztil.view((0, k), (k, n - k)).into_owned(),
            self.ztil.view((k, 0), (n - k, k)).into_owned(),
            self.ztil.view((k, k), (n - k, n - k)).into_owned(),
        ]
    }
}

fn split_rows(m: &DMatrix<f64>, k: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    (
        m.rows(0, k).into_owned(),
        m.rows(k, m.nrows() - k).into_owned(),
    )
}

/// `Ã = Uᵀ A_r U` with the eigenvalues satisfying `Re <= tol·max(1,|λ|)`
/// leading, `B̃ = Uᵀ B1`, `C̃ = Uᵀ (B2 (C1 B2)⁻¹ - B1 R⁻¹)`,
/// `Z̃ = B̃ R⁻¹ B̃ᵀ - C̃ R C̃ᵀ`, `R = 2 C1 B1`.
pub fn schur_blocks(sys: &StateSpaceModel, epsilon: f64, tol: f64) -> Result<SchurBlocks> {
    let failed = check_assumptions(sys);
    if !failed.is_empty() {
        return Err(Error::SynthesisPreconditions(failed));
    }
    let proj = build_projection(sys, epsilon)?;
    let mut schur = RealSchur::new(&proj.ar)?;
    let n11 = schur.reorder(|l| l.re <= tol * scale_of(l))?;
    let marginal = eigvals(&proj.ar)?
        .into_iter()
        .filter(|l| l.re.abs() <= tol * scale_of(*l))
        .collect();
    let u = schur.u;
    let ut = u.transpose();
    let r = 2.0 * sys.c1b1();
    let atil = &ut * &proj.ar * &u;
    let btil = &ut * &sys.b1;
    let ctil = &ut * (&sys.b2 / sys.c1b2() - &sys.b1 / r);
    let ztil = &btil * btil.transpose() / r - &ctil * ctil.transpose() * r;
    Ok(SchurBlocks {
        u,
        atil,
        btil,
        ctil,
        ztil,
        r,
        n11,
        marginal,
    })
}

/// `K = -(C1 B2)⁻¹ (C1 A + ε C1)`; defined for any `ε >= 0` under A1.
pub fn feedback_gain(sys: &StateSpaceModel, epsilon: f64) -> Result<RowDVector<f64>> {
    sys.ensure_siso()?;
    if check_assumptions(sys).contains(&Precondition::A1) {
        return Err(Error::SynthesisPreconditions(vec![Precondition::A1]));
    }
    let row = (&sys.c1 * &sys.a + &sys.c1 * epsilon) * (-1.0 / sys.c1b2());
    Ok(RowDVector::from_iterator(row.ncols(), row.iter().copied()))
}

#[derive(Debug, Clone)]
pub struct Certificate {
    /// `C1 (A + εI + B2 K) = 0` within [`ANNIHILATION_TOL`].
    pub c1acl_zero: bool,
    /// `‖C1 (A + εI + B2 K)‖ / ‖C1 A‖`.
    pub c1acl_residual: f64,
    /// `σ(A_r)` has no eigenvalue with positive real part.
    pub ar_stable: bool,
    pub ar_eigenvalues: Vec<Complex64>,
    /// `‖S - A_r‖ / max(1, ‖A_r‖)` with `S = A_cl^ε - B1 R⁻¹ C1 A_cl^ε`.
    pub s_residual: f64,
    /// `σ(A + B2 K)`, ascending real part.
    pub poles: Vec<Complex64>,
    pub max_pole_re: f64,
    /// `max Re σ(A + B2 K) <= -ε + POLE_SLACK`.
    pub degree_ok: bool,
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub k: RowDVector<f64>,
    pub epsilon: f64,
    pub projection: ProjectionSet,
    pub closed_loop: StateSpaceModel,
    pub certificate: Certificate,
    /// `C1 (sI - A - B2 K)⁻¹ B1`, full degree (not reduced).
    pub g_cl: RationalFunction,
}

impl SynthesisResult {
    pub fn g_cl_reduced(&self) -> Result<RationalFunction> {
        self.g_cl.reduce()
    }
}

fn certificate(
    sys: &StateSpaceModel,
    k: &RowDVector<f64>,
    proj: &ProjectionSet,
) -> Result<Certificate> {
    let n = sys.n_states();
    let eps = proj.epsilon;
    let acl_eps = &sys.a + DMatrix::identity(n, n) * eps + &sys.b2 * k;
    let c1acl = &sys.c1 * &acl_eps;
    let scale = (&sys.c1 * &sys.a)
        .norm()
        .max(eps * sys.c1.norm())
        .max(f64::MIN_POSITIVE);
    let c1acl_residual = c1acl.norm() / scale;
    let r = 2.0 * sys.c1b1();
    let s = &acl_eps - &sys.b1 * &c1acl / r;
    let s_residual = (&s - &proj.ar).norm() / proj.ar.norm().max(1.0);
    let ar_eigenvalues = deflated_spectrum(&proj.ar, &sys.c1)?;
    let poles = eigvals(&(&sys.a + &sys.b2 * k))?;
    let max_pole_re = poles.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(Certificate {
        c1acl_zero: c1acl_residual <= ANNIHILATION_TOL,
        c1acl_residual,
        ar_stable: ar_eigenvalues.iter().all(|l| is_nonpositive(*l)),
        ar_eigenvalues,
        s_residual,
        poles,
        max_pole_re,
        degree_ok: max_pole_re <= -eps + POLE_SLACK,
    })
}

/// Gain, closed loop and `P = 0` certificate. Fails with the list of violated
/// preconditions among A1, A2, stability of `A_q` and `A_r`, and `ε > 0`.
pub fn synthesize(sys: &StateSpaceModel, epsilon: f64) -> Result<SynthesisResult> {
    sys.ensure_siso()?;
    if !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon must be finite, got {epsilon}")));
    }
    let mut failed = check_assumptions(sys);
    if !(epsilon > 0.0) {
        failed.push(Precondition::PositiveEpsilon);
    }
    if failed.contains(&Precondition::A1) {
        return Err(Error::SynthesisPreconditions(failed));
    }
    let proj = build_projection(sys, epsilon.max(0.0))?;
    if !deflated_spectrum(&proj.aq, &sys.c1)?.iter().all(|l| is_nonpositive(*l)) {
        failed.push(Precondition::AqStable);
    }
    if !deflated_spectrum(&proj.ar, &sys.c1)?.iter().all(|l| is_nonpositive(*l)) {
        failed.push(Precondition::ArStable);
    }
    if !failed.is_empty() {
        return Err(Error::SynthesisPreconditions(failed));
    }
    let k = feedback_gain(sys, epsilon)?;
    let certificate = certificate(sys, &k, &proj)?;
    let closed_loop = sys.with_state_feedback(&k)?;
    let g_cl = tf_from_ss(&closed_loop, Channel::W)?;
    Ok(SynthesisResult {
        k,
        epsilon,
        projection: proj,
        closed_loop,
        certificate,
        g_cl,
    })
}

/// Spectrum of `A_q` and the supremum `γ` of `ε` for which the synthesis is
/// guaranteed.
#[derive(Debug, Clone)]
pub struct EpsilonRange {
    /// `-Re λ_{n-1}`: minus the largest real part among the nonzero
    /// eigenvalues (clipped at 0); infinite for a one-state plant.
    pub gamma: f64,
    /// `σ(A_q)` ordered by ascending real part, structural zero last.
    pub spectrum: Vec<Complex64>,
    pub structural_zero: Complex64,
    /// The smallest eigenvalue is below `ZERO_EIG_TOL · ‖A_q‖`.
    pub structural_zero_ok: bool,
    /// No two eigenvalues within the relative gap `DISTINCT_TOL`.
    pub distinct: bool,
    pub notes: Vec<String>,
}

impl EpsilonRange {
    /// `0 < ε < γ - guard`.
    pub fn admits(&self, epsilon: f64) -> bool {
        epsilon > 0.0 && epsilon < self.gamma - epsilon_guard(self.gamma)
    }
}

pub fn admissible_epsilon_range(sys: &StateSpaceModel) -> Result<EpsilonRange> {
    let proj = build_projection(sys, 0.0)?;
    let mut eig = eigvals(&proj.aq)?;
    let zi = (0..eig.len())
        .min_by(|&a, &b| eig[a].norm().partial_cmp(&eig[b].norm()).unwrap())
        .ok_or_else(|| Error::Dimension("model has no states".into()))?;
    let zero = eig.remove(zi);
    let mut notes = Vec::new();
    let structural_zero_ok = zero.norm() <= ZERO_EIG_TOL * proj.aq.norm().max(f64::MIN_POSITIVE);
    if !structural_zero_ok {
        notes.push(format!(
            "smallest eigenvalue of A_q is {zero}, not structurally zero"
        ));
    }
    let unstable: Vec<Complex64> = eig.iter().copied().filter(|l| !is_nonpositive(*l)).collect();
    if !unstable.is_empty() {
        let mut msg = format!("A_q has unstable eigenvalues {unstable:?}");
        if unstable.len() == 1 || (unstable.len() == 2 && unstable[0] == unstable[1].conj()) {
            msg.push_str(
                "; a single anti-stable eigenvalue needs the general ARE synthesis, which is not performed",
            );
        }
        return Err(Error::Precondition(msg));
    }
    let mut distinct = true;
    let mut all = eig.clone();
    all.push(zero);
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let s = all[i].norm().max(all[j].norm()).max(1.0);
            if (all[i] - all[j]).norm() <= DISTINCT_TOL * s {
                distinct = false;
            }
        }
    }
    if !distinct {
        notes.push("A_q has repeated eigenvalues; the admissible range is not guaranteed".into());
    }
    let gamma = if eig.is_empty() {
        f64::INFINITY
    } else {
        let top = eig.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
        if eig.iter().any(|l| is_marginal(*l) && l.re >= top) {
            0.0
        } else {
            (-top).max(0.0)
        }
    };
    if eig.len() >= 2 {
        let mut res: Vec<f64> = eig.iter().map(|l| -l.re).collect();
        res.sort_by(|a, b| a.partial_cmp(b).unwrap());
        res.dedup_by(|a, b| (*a - *b).abs() <= DISTINCT_TOL * a.abs().max(1.0));
        if res.len() >= 2 {
            notes.push(format!(
                "for {} < epsilon < {}, A_r has one unstable eigenvalue; SNI there depends on the general ARE synthesis and is not certified",
                res[0], res[1]
            ));
        }
    }
    eig.push(zero);
    Ok(EpsilonRange {
        gamma,
        spectrum: eig,
        structural_zero: zero,
        structural_zero_ok,
        distinct,
        notes,
    })
}

/// Comparison of `σ(A_q)` with the zeros of `u -> z` plus the origin.
#[derive(Debug, Clone)]
pub struct Remark1Report {
    pub zeros: Vec<Complex64>,
    pub aq_eigenvalues: Vec<Complex64>,
    /// Max deviation under the best one-to-one matching (infinite when the
    /// counts differ).
    pub deviation: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Bottleneck matching distance between two multisets.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    if a.len() <= 8 {
        let mut idx: Vec<usize> = (0..b.len()).collect();
        let mut best = f64::INFINITY;
        permute(&mut idx, 0, &mut |p| {
            let d = a
                .iter()
                .zip(p)
                .map(|(x, &j)| (x - b[j]).norm())
                .fold(0.0, f64::max);
            best = best.min(d);
        });
        return best;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn permute(idx: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == idx.len() {
        f(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute(idx, k + 1, f);
        idx.swap(k, i);
    }
}

/// Zeros are taken from the full-degree numerator of `C1 adj(sI - A) B2`, so
/// they are the invariant zeros even when `(A, B2, C1)` is not minimal.
pub fn verify_remark1(sys: &StateSpaceModel) -> Result<Remark1Report> {
    let proj = build_projection(sys, 0.0)?;
    let aq_eigenvalues = eigvals(&proj.aq)?;
    let tf = tf_from_ss(sys, Channel::U)?;
    let mut zeros = tf.num().roots()?;
    zeros.push(Complex64::new(0.0, 0.0));
    let radius = aq_eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let threshold = 1e-6 * radius.max(1.0);
    let deviation = matching_distance(&zeros, &aq_eigenvalues);
    Ok(Remark1Report {
        zeros,
        aq_eigenvalues,
        deviation,
        threshold,
        pass: deviation <= threshold,
    })
}

#[derive(Debug, Clone)]
pub struct Obligation {
    pub name: &'static str,
    pub pass: bool,
    pub value: f64,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CertifyReport {
    pub obligations: Vec<Obligation>,
    /// `-max Re σ(A + B2 K)`.
    pub margin: f64,
    pub poles: Vec<Complex64>,
    pub sni: ni::NiVerdict,
    pub all_pass: bool,
}

/// Check the proof obligations for a supplied gain: annihilation, `A_r`
/// stability, `σ(A + B2 K)` left of `-ε`, and SNI of the closed loop `w -> z`.
pub fn certify(sys: &StateSpaceModel, k: &RowDVector<f64>, epsilon: f64) -> Result<CertifyReport> {
    sys.ensure_siso()?;
    if k.len() != sys.n_states() {
        return Err(Error::Dimension(format!(
            "gain has {} entries for {} states",
            k.len(),
            sys.n_states()
        )));
    }
    let proj = build_projection(sys, epsilon)?;
    let c = certificate(sys, k, &proj)?;
    let cl = sys.with_state_feedback(k)?;
    let g = tf_from_ss(&cl, Channel::W)?;
    let grid = FrequencyGrid::default_for(&g)?;
    let sni = ni::check_sni(&g, &grid, ni::DEFAULT_TOL)?;
    let worst_ar = c.ar_eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    let n_sni = sni.violations_of(ni::Property::Sni).len();
    let obligations = vec![
        Obligation {
            name: "annihilation",
            pass: c.c1acl_zero,
            value: c.c1acl_residual,
            detail: format!("|C1(A+eps I+B2 K)| / |C1 A| = {:.6e}", c.c1acl_residual),
        },
        Obligation {
            name: "ar_stable",
            pass: c.ar_stable,
            value: worst_ar,
            detail: format!("max Re sigma(A_r) = {worst_ar:.6e}"),
        },
        Obligation {
            name: "degree_of_stability",
            pass: c.degree_ok,
            value: -c.max_pole_re,
            detail: format!(
                "margin {:.6} against required {:.6}",
                -c.max_pole_re, epsilon
            ),
        },
        Obligation {
            name: "closed_loop_sni",
            pass: sni.is_sni,
            value: n_sni as f64,
            detail: format!("{n_sni} SNI violations on {} grid points", grid.len()),
        },
    ];
    let all_pass = obligations.iter().all(|o| o.pass);
    Ok(CertifyReport {
        obligations,
        margin: -c.max_pole_re,
        poles: c.poles,
        sni,
        all_pass,
    })
}
