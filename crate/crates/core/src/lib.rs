//! Offset linear canonical transform (OLCT) numerics and weighted
//! uncertainty-bound evaluation.
//!
//! The crate is organised bottom-up:
//!
//! - [`signal`]: grids, sampled signals, quadrature, differentiation.
//! - [`olct`]: transform parameters, kernel, forward/inverse transforms.
//! - [`moments`]: weighted time moments, spectral moments, the chirp-demodulated
//!   signal and the moment-derivative identity check.
//! - [`bounds`]: lower-bound evaluators and their coefficient machinery.
//! - [`verify`]: end-to-end inequality reports and parameter sweeps.

pub mod bounds;
pub mod error;
pub mod moments;
pub mod olct;
pub mod signal;
pub mod verify;

pub use error::{Error, Result};
