//! Integrator and PID augmentation of a single-mode nominal plant so that the
//! realization satisfies `C1 B2 != 0` and `C1 B1 + B1ᵀ C1ᵀ > 0`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Precondition, Result};
use crate::modal::Mode;
use crate::statespace::{Channel, Polynomial, RationalFunction, StateSpaceModel};
use crate::synthesis::check_assumptions;

/// `C(s) = kp + ki / s + kd s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

impl PidGains {
    pub fn new(kp: f64, ki: f64, kd: f64) -> PidGains {
        PidGains { kp, ki, kd }
    }

    /// `kd s² + kp s + ki`.
    pub fn numerator(&self) -> Polynomial {
        Polynomial::new(vec![self.kd, self.kp, self.ki])
    }

    pub fn transfer_function(&self) -> RationalFunction {
        RationalFunction::new(self.numerator(), Polynomial::s()).expect("s is nonzero")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentationKind {
    Integrator,
    Pid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AugmentationParams {
    Integrator { ktilde: f64 },
    Pid(PidGains),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedSystem {
    pub sys: StateSpaceModel,
    pub kind: AugmentationKind,
    pub source: Mode,
    pub params: AugmentationParams,
}

impl AugmentedSystem {
    fn checked(self) -> Result<AugmentedSystem> {
        let failed = check_assumptions(&self.sys);
        if failed.is_empty() {
            Ok(self)
        } else {
            Err(Error::SynthesisPreconditions(failed))
        }
    }

    /// Transfer function `u -> z` (with `w = 0`).
    pub fn u_to_z(&self) -> Result<RationalFunction> {
        self.sys.transfer_function(Channel::U)
    }

    /// Transfer function `w -> z` (with `u = 0`).
    pub fn w_to_z(&self) -> Result<RationalFunction> {
        self.sys.transfer_function(Channel::W)
    }
}

/// Three-state realization of the nominal mode in series with `K̃ / s`:
/// `A = [[Ã, B̃], [-K̃ C̃, 0]]`, `B1 = [0; 0; -K̃]`, `B2 = [0; 0; K̃]`,
/// `C1 = [0, 0, 1]`. Requires `K̃ < 0`.
pub fn augment_integrator(mode: &Mode, ktilde: f64) -> Result<AugmentedSystem> {
    if !(ktilde < 0.0) {
        return Err(Error::SynthesisPreconditions(vec![Precondition::A2]));
    }
    let nom = mode.realization();
    let mut a = DMatrix::zeros(3, 3);
    a.view_mut((0, 0), (2, 2)).copy_from(&nom.a);
    a.view_mut((0, 2), (2, 1)).copy_from(&nom.b);
    a.view_mut((2, 0), (1, 2)).copy_from(&(&nom.c * -ktilde));
    let sys = StateSpaceModel::new(
        a,
        DMatrix::from_column_slice(3, 1, &[0.0, 0.0, -ktilde]),
        DMatrix::from_column_slice(3, 1, &[0.0, 0.0, ktilde]),
        DMatrix::from_row_slice(1, 3, &[0.0, 0.0, 1.0]),
    )?;
    AugmentedSystem {
        sys,
        kind: AugmentationKind::Integrator,
        source: *mode,
        params: AugmentationParams::Integrator { ktilde },
    }
    .checked()
}

/// Supremum of the degree of stability reachable with integrator
/// augmentation: `ζω = γ / 2`.
pub fn integrator_margin(mode: &Mode) -> f64 {
    0.5 * mode.gamma
}

/// Controllable-canonical realization of the nominal mode under PID
/// feedback: `A = [[0,1,0],[0,0,1],[-Γki, -(Γkp+δ), -Γkd]]`, `B2 = e3`,
/// `B1 = -e3`, `C1 = [Γki, Γkp, Γkd]`. The mode must be undamped and `kd < 0`.
pub fn augment_pid(mode: &Mode, g: &PidGains) -> Result<AugmentedSystem> {
    if mode.gamma != 0.0 {
        return Err(Error::Precondition(format!(
            "PID augmentation needs an undamped nominal mode (damping term {})",
            mode.gamma
        )));
    }
    if !(g.kd < 0.0) {
        return Err(Error::SynthesisPreconditions(vec![Precondition::A2]));
    }
    let gm = mode.gain;
    let a = DMatrix::from_row_slice(
        3,
        3,
        &[
            0.0,
            1.0,
            0.0,
            0.0,
            0.0,
            1.0,
            -gm * g.ki,
            -(gm * g.kp + mode.delta),
            -gm * g.kd,
        ],
    );
    let sys = StateSpaceModel::new(
        a,
        DMatrix::from_column_slice(3, 1, &[0.0, 0.0, -1.0]),
        DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]),
        DMatrix::from_row_slice(1, 3, &[gm * g.ki, gm * g.kp, gm * g.kd]),
    )?;
    AugmentedSystem {
        sys,
        kind: AugmentationKind::Pid,
        source: *mode,
        params: AugmentationParams::Pid(*g),
    }
    .checked()
}

/// `L(s) = C(s) G_n(s) = Γ (kd s² + kp s + ki) / (s (s² + δ))`, reduced.
/// The damping of `mode` is ignored.
pub fn pid_open_loop(mode: &Mode, g: &PidGains) -> Result<RationalFunction> {
    let num = g.numerator().scale(mode.gain);
    let den = Polynomial::new(vec![1.0, 0.0, mode.delta, 0.0]);
    RationalFunction::new(num, den)?.reduce()
}

/// Roots of `n_L(s)` and the resulting supremum of admissible `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonReport {
    pub roots: Vec<Complex64>,
    /// `-max Re(root)` when every root is in the open left half-plane, else 0.
    pub margin: f64,
    /// Roots with `Re >= 0`.
    pub obstructing: Vec<Complex64>,
}

pub fn achievable_epsilon(g: &PidGains, gain: f64) -> Result<EpsilonReport> {
    if g.kd == 0.0 {
        return Err(Error::InvalidArgument("kd must be nonzero".into()));
    }
    if !(gain > 0.0) {
        return Err(Error::InvalidArgument(format!("mode gain must be positive, got {gain}")));
    }
    let roots = g.numerator().scale(gain).roots()?;
    let obstructing: Vec<Complex64> = roots.iter().copied().filter(|z| z.re >= 0.0).collect();
    let margin = if obstructing.is_empty() {
        -roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    } else {
        0.0
    };
    Ok(EpsilonReport {
        roots,
        margin,
        obstructing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nominal() -> Mode {
        Mode::new(64.06, 0.0, 8.096e4).unwrap()
    }

    #[test]
    fn integrator_unit_example() {
        let m = Mode::new(1.0, 0.0, 1.0).unwrap();
        let aug = augment_integrator(&m, -1.0).unwrap();
        assert_eq!(
            aug.sys.a,
            DMatrix::from_row_slice(3, 3, &[0., -1., 1., 1., 0., 0., 0., 1., 0.])
        );
        assert_eq!(aug.sys.c1b2(), -1.0);
        assert_eq!(aug.sys.c1b1(), 1.0);
        assert!(matches!(
            augment_integrator(&m, 1.0),
            Err(Error::SynthesisPreconditions(_))
        ));
    }

    #[test]
    fn margin_is_half_damping() {
        let m = Mode::new(64.06, 2.089, 8.096e4).unwrap();
        assert!((integrator_margin(&m) - 1.0445).abs() < 1e-12);
        assert_eq!(integrator_margin(&m.undamped()), 0.0);
    }

    #[test]
    fn pid_realization_matches_example() {
        let aug = augment_pid(&nominal(), &PidGains::new(-7.0, -50.0, -0.2)).unwrap();
        let row: Vec<f64> = aug.sys.a.row(2).iter().copied().collect();
        for (x, want) in row.iter().zip([3203.0, -80511.58, 12.812]) {
            assert!((x - want).abs() < 1e-9 * want.abs(), "{x} vs {want}");
        }
        let c: Vec<f64> = aug.sys.c1.iter().copied().collect();
        for (x, want) in c.iter().zip([-3203.0, -448.42, -12.812]) {
            assert!((x - want).abs() < 1e-9 * want.abs());
        }
    }

    #[test]
    fn pid_unit_example() {
        let m = Mode::new(1.0, 0.0, 1.0).unwrap();
        let aug = augment_pid(&m, &PidGains::new(0.0, 0.0, -1.0)).unwrap();
        let row: Vec<f64> = aug.sys.a.row(2).iter().copied().collect();
        assert_eq!(row, vec![0.0, -1.0, 1.0]);
        assert_eq!(aug.sys.c1.iter().copied().collect::<Vec<_>>(), vec![0.0, 0.0, -1.0]);
    }

    #[test]
    fn pid_rejects_bad_inputs() {
        assert!(augment_pid(&nominal(), &PidGains::new(-7.0, -50.0, 0.2)).is_err());
        let damped = Mode::new(64.06, 2.089, 8.096e4).unwrap();
        assert!(matches!(
            augment_pid(&damped, &PidGains::new(-7.0, -50.0, -0.2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn open_loop_pure_derivative() {
        let l = pid_open_loop(&nominal(), &PidGains::new(0.0, 0.0, -0.2)).unwrap();
        assert_eq!(l.den().coeffs(), &[1.0, 0.0, 8.096e4]);
        assert_eq!(l.num().degree(), 1);
        assert!((l.num().coeff(1) + 0.2 * 64.06).abs() < 1e-12);
    }

    #[test]
    fn epsilon_from_pid_zeros() {
        let r = achievable_epsilon(&PidGains::new(-7.0, -50.0, -0.2), 64.06).unwrap();
        assert!((r.margin - 10.0).abs() < 1e-9);
        assert!(r.obstructing.is_empty());
        let r = achievable_epsilon(&PidGains::new(0.0, 0.0, -1.0), 1.0).unwrap();
        assert_eq!(r.margin, 0.0);
        assert_eq!(r.obstructing.len(), 2);
    }
}
