//! Numeric substrate: uniform grids, sampled signals, analytic signal and
//! weight constructors, quadrature and differentiation.

mod analytic;
mod diff;
mod grid;
mod quadrature;

pub use analytic::{exp_weight, gaussian_chirp, AnalyticSignal, WeightFunction};
pub use diff::{derivative, fornberg_weights, DiffMethod};
pub use grid::{Grid, SampledSignal, Spectrum, MIN_SAMPLES};
pub use quadrature::{
    inner_product, integrate, integrate_real, integrate_with, norm_l2, simpson_weights,
    trapezoid_weights, Rule,
};
pub(crate) use quadrature::try_integrate_real;

/// Largest edge/peak ratio tolerated before a sampled integrand is treated
/// as truncated by the grid.
pub const COVERAGE_RATIO: f64 = 1e-9;

/// Ratio of the larger endpoint magnitude to the peak magnitude of `values`.
/// Returns 0 for an identically zero sequence.
pub fn edge_ratio(values: &[f64]) -> f64 {
    let peak = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let edge = values
        .first()
        .map(|v| v.abs())
        .unwrap_or(0.0)
        .max(values.last().map(|v| v.abs()).unwrap_or(0.0));
    edge / peak
}

/// Fails with [`crate::Error::GridCoverage`] when the endpoints of a sampled
/// integrand are not negligible against its peak.
pub fn check_coverage(what: &'static str, values: &[f64]) -> crate::Result<()> {
    let ratio = edge_ratio(values);
    if ratio > COVERAGE_RATIO {
        return Err(crate::Error::GridCoverage { what, ratio });
    }
    Ok(())
}
