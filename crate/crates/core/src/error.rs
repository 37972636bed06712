use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

/// Assumption or hypothesis checked before synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precondition {
    /// `C1 B2` is nonzero.
    A1,
    /// `C1 B1 + B1ᵀ C1ᵀ > 0`.
    A2,
    /// `A_q` has no eigenvalue in the open right half-plane.
    AqStable,
    /// `A_r` has no eigenvalue in the open right half-plane.
    ArStable,
    /// The requested degree of stability is strictly positive.
    PositiveEpsilon,
}

impl std::fmt::Display for Precondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Precondition::A1 => "A1 (C1*B2 nonsingular)",
            Precondition::A2 => "A2 (C1*B1 + B1'*C1' > 0)",
            Precondition::AqStable => "A_q has no unstable eigenvalues",
            Precondition::ArStable => "A_r has no unstable eigenvalues",
            Precondition::PositiveEpsilon => "epsilon > 0",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("denominator is the zero polynomial")]
    ZeroDenominator,

    #[error("function is identically zero")]
    IdenticallyZero,

    #[error("transfer function is improper (numerator degree {num} > denominator degree {den})")]
    Improper { num: usize, den: usize },

    #[error("evaluation at s = {point} lies within the exclusion radius of pole {pole}")]
    NearPole { point: Complex64, pole: Complex64 },

    #[error("real Schur iteration did not converge")]
    SchurFailed,

    #[error("ill-posed feedback loop: 1 - M(inf) N(inf) = {0:e}")]
    IllPosed(f64),

    #[error("M has a pole at the origin")]
    PoleAtOrigin,

    #[error("invalid mode {index}: {reason}")]
    InvalidMode { index: usize, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("synthesis preconditions failed: {}", list(.0))]
    SynthesisPreconditions(Vec<Precondition>),

    #[error("epsilon = {epsilon} is outside the admissible range (0, {gamma})")]
    EpsilonOutOfRange { epsilon: f64, gamma: f64 },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn list(items: &[Precondition]) -> String {
    items
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
