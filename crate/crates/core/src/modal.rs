//! Flexible-structure models as finite sums of second-order modes
//! `Γ / (s² + γ s + δ)`, with the additive and multiplicative uncertainty
//! splits and a TOML loader for modal parameter files.
//!
//! File format:
//!
//! ```toml
//! name = "cantilever"        # optional
//!
//! [[mode]]
//! gamma_gain = 64.06         # Γ > 0
//! gamma_damp = 2.089         # γ = 2ζω >= 0
//! delta = 8.096e4            # δ = ω² > 0
//! name = "first bending"     # optional label
//! ```
//!
//! Unknown keys are rejected. Mode indices in diagnostics are 1-based in file
//! order.

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector, RowDVector};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::statespace::{Polynomial, RationalFunction, SisoRealization};

/// One mode `Γ / (s² + γ s + δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub gain: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Mode {
    /// Validates `Γ > 0`, `δ > 0`, `γ >= 0` and `ζ < 1`.
    pub fn new(gain: f64, gamma: f64, delta: f64) -> Result<Mode> {
        let m = Mode { gain, gamma, delta };
        m.validate().map_err(|reason| Error::InvalidMode { index: 1, reason })?;
        Ok(m)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !(self.gain.is_finite() && self.gamma.is_finite() && self.delta.is_finite()) {
            return Err("parameters must be finite".into());
        }
        if self.gain <= 0.0 {
            return Err(format!("gain must be positive, got {}", self.gain));
        }
        if self.delta <= 0.0 {
            return Err(format!("delta must be positive, got {}", self.delta));
        }
        if self.gamma < 0.0 {
            return Err(format!("damping term must be nonnegative, got {}", self.gamma));
        }
        if self.zeta() >= 1.0 {
            return Err(format!("mode is not underdamped (zeta = {})", self.zeta()));
        }
        Ok(())
    }

    /// Natural frequency `ω = √δ`.
    pub fn omega(&self) -> f64 {
        self.delta.sqrt()
    }

    /// Damping ratio `ζ = γ / (2ω)`.
    pub fn zeta(&self) -> f64 {
        self.gamma / (2.0 * self.omega())
    }

    pub fn undamped(&self) -> Mode {
        Mode { gamma: 0.0, ..*self }
    }

    pub fn denominator(&self) -> Polynomial {
        Polynomial::new(vec![1.0, self.gamma, self.delta])
    }

    pub fn transfer_function(&self) -> RationalFunction {
        RationalFunction::new(Polynomial::constant(self.gain), self.denominator())
            .expect("mode denominator is nonzero")
    }

    /// `Ã = [[-γ, -δ], [1, 0]]`, `B̃ = [1; 0]`, `C̃ = [0, Γ]`.
    pub fn realization(&self) -> SisoRealization {
        SisoRealization {
            a: DMatrix::from_row_slice(2, 2, &[-self.gamma, -self.delta, 1.0, 0.0]),
            b: DVector::from_column_slice(&[1.0, 0.0]),
            c: RowDVector::from_row_slice(&[0.0, self.gain]),
        }
    }
}

/// Nonempty ordered collection of modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalModel {
    modes: Vec<Mode>,
    labels: Vec<Option<String>>,
    pub name: Option<String>,
}

impl ModalModel {
    /// Sorts by ascending natural frequency, keeping input order among ties.
    pub fn new(modes: Vec<Mode>) -> Result<ModalModel> {
        let n = modes.len();
        ModalModel::with_labels(modes, vec![None; n])
    }

    pub fn with_labels(modes: Vec<Mode>, labels: Vec<Option<String>>) -> Result<ModalModel> {
        let mut m = ModalModel::in_given_order(modes, labels)?;
        let mut idx: Vec<usize> = (0..m.modes.len()).collect();
        idx.sort_by(|&a, &b| m.modes[a].delta.partial_cmp(&m.modes[b].delta).unwrap());
        m.modes = idx.iter().map(|&i| m.modes[i]).collect();
        m.labels = idx.iter().map(|&i| m.labels[i].clone()).collect();
        Ok(m)
    }

    /// Keeps the supplied order.
    pub fn in_given_order(modes: Vec<Mode>, labels: Vec<Option<String>>) -> Result<ModalModel> {
        if modes.is_empty() {
            return Err(Error::InvalidArgument("modal model needs at least one mode".into()));
        }
        if labels.len() != modes.len() {
            return Err(Error::Dimension(format!(
                "{} labels for {} modes",
                labels.len(),
                modes.len()
            )));
        }
        for (i, m) in modes.iter().enumerate() {
            m.validate()
                .map_err(|reason| Error::InvalidMode { index: i + 1, reason })?;
        }
        Ok(ModalModel {
            modes,
            labels,
            name: None,
        })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn is_undamped(&self) -> bool {
        self.modes.iter().all(|m| m.gamma == 0.0)
    }

    /// The same model with every `γ_i` set to zero.
    pub fn undamp(&self) -> ModalModel {
        ModalModel {
            modes: self.modes.iter().map(Mode::undamped).collect(),
            labels: self.labels.clone(),
            name: self.name.clone(),
        }
    }

    fn slice(&self, range: std::ops::Range<usize>) -> ModalModel {
        ModalModel {
            modes: self.modes[range.clone()].to_vec(),
            labels: self.labels[range].to_vec(),
            name: self.name.clone(),
        }
    }
}

/// `Σ Γ_i / d_i` over a common denominator. Not reduced.
fn sum_unreduced(modes: &[Mode]) -> RationalFunction {
    let dens: Vec<Polynomial> = modes.iter().map(Mode::denominator).collect();
    let mut den = Polynomial::constant(1.0);
    for d in &dens {
        den = &den * d;
    }
    let mut num = Polynomial::zero();
    for (i, m) in modes.iter().enumerate() {
        let mut term = Polynomial::constant(m.gain);
        for (j, d) in dens.iter().enumerate() {
            if j != i {
                term = &term * d;
            }
        }
        num = &num + &term;
    }
    RationalFunction::new(num, den).expect("product of mode denominators is nonzero")
}

/// `G(s) = Σ Γ_i / (s² + γ_i s + δ_i)`, reduced.
pub fn modal_tf(model: &ModalModel) -> Result<RationalFunction> {
    sum_unreduced(model.modes()).reduce()
}

/// First `m` modes as the nominal model, the rest as additive uncertainty.
pub fn split_additive(model: &ModalModel, m: usize) -> Result<(ModalModel, ModalModel)> {
    if m == 0 || m >= model.len() {
        return Err(Error::InvalidArgument(format!(
            "nominal mode count must satisfy 1 <= m < {}, got {m}",
            model.len()
        )));
    }
    Ok((model.slice(0..m), model.slice(m..model.len())))
}

/// `Δ = G_T / G_n - 1`, the ratio of the tail sum (modes `m+1..`) to the
/// nominal sum (modes `1..m`). All modes must be undamped. `m` equal to the
/// number of modes gives `Δ ≡ 0`.
pub fn multiplicative_delta(model: &ModalModel, m: usize) -> Result<RationalFunction> {
    if m == 0 || m > model.len() {
        return Err(Error::InvalidArgument(format!(
            "nominal mode count must satisfy 1 <= m <= {}, got {m}",
            model.len()
        )));
    }
    if let Some(i) = model.modes().iter().position(|x| x.gamma != 0.0) {
        return Err(Error::Precondition(format!(
            "multiplicative split requires undamped modes; mode {} has damping {}",
            i + 1,
            model.modes()[i].gamma
        )));
    }
    if m == model.len() {
        return Ok(RationalFunction::zero());
    }
    let nominal = sum_unreduced(&model.modes()[..m]);
    let tail = sum_unreduced(&model.modes()[m..]);
    tail.div(&nominal)?.reduce()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModalFile {
    name: Option<String>,
    #[serde(default)]
    mode: Vec<ModeRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeRecord {
    gamma_gain: f64,
    gamma_damp: f64,
    delta: f64,
    name: Option<String>,
}

/// Parse a modal parameter document; `origin` names it in diagnostics.
pub fn parse_modal(text: &str, origin: &Path) -> Result<ModalModel> {
    let parse_err = |message: String| Error::Parse {
        path: origin.to_path_buf(),
        message,
    };
    let file: ModalFile = toml::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    if file.mode.is_empty() {
        return Err(parse_err("no [[mode]] records".into()));
    }
    let labels = file.mode.iter().map(|r| r.name.clone()).collect();
    let modes = file
        .mode
        .iter()
        .map(|r| Mode {
            gain: r.gamma_gain,
            gamma: r.gamma_damp,
            delta: r.delta,
        })
        .collect();
    let mut model = ModalModel::with_labels(modes, labels)?;
    model.name = file.name;
    Ok(model)
}

pub fn load_modal(path: impl AsRef<Path>) -> Result<ModalModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: PathBuf::from(path),
        source,
    })?;
    parse_modal(&text, path)
}
