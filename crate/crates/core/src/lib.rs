//! Negative-imaginary (NI) analysis and SNI state-feedback synthesis for
//! flexible structures whose control channel has relative degree two.
//!
//! - [`statespace`]: polynomials, transfer functions, realizations, grids.
//! - [`ni`]: NI / SNI / LNI checks and the interconnection stability test.
//! - [`modal`]: modal models, truncation and uncertainty forms.
//! - [`augmentation`]: integrator and PID augmentation of one mode.
//! - [`synthesis`]: the projection, gain formula, admissible range and
//!   certificates.
//! - [`cli`]: the commands behind the `ni-synth` binary.

// `!(x > y)` is used on purpose so that NaN fails a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod augmentation;
pub mod cli;
pub mod error;
pub mod modal;
pub mod ni;
pub mod statespace;
pub mod synthesis;

pub use error::{Error, Result};
