//! Core analytics for coefficient-of-variation risk screening.
//!
//! The crate turns monthly price histories into return statistics,
//! maps the coefficient of variation (σ/μ of returns) to the
//! probability of a negative return, and sweeps two-asset frontiers
//! annotated with that probability. It is `no_std` (with `alloc`);
//! file I/O, CSV/JSON emission and the command-line surface live in the
//! companion `cvrisk` crate.
//!
//! Module map:
//!
//! - [`risk`] — downside probability from CV or (μ, σ), closed form and
//!   quadrature, risk-vs-volatility curves, the zero-risk region.
//! - [`returns`] — monthly-annual and end-of-year return series,
//!   summary statistics, CV-band classification, density grids.
//! - [`frontier`] — portfolio variance/CV and two-asset frontier
//!   sweeps with per-row risk.
//! - [`erf`] — the error-function approximation backing the closed
//!   form.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod erf;
mod error;
pub mod frontier;
mod quad;
pub mod returns;
pub mod risk;

pub use error::{Error, Result};

/// Rounds to `decimals` places, ties away from zero.
///
/// This is the display convention for every emitted table; pipelines
/// keep full precision and round only at the edge.
pub fn round_half_up(value: f64, decimals: u32) -> f64 {
    let factor = libm::pow(10.0, decimals as f64);
    let scaled = value * factor;
    let rounded =
        if scaled >= 0.0 { libm::floor(scaled + 0.5) } else { libm::ceil(scaled - 0.5) };
    rounded / factor
}
