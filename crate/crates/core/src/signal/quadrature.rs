use num_complex::Complex64;

use super::{Grid, SampledSignal};
use crate::{Error, Result};

/// Composite quadrature rule over a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rule {
    /// Composite Simpson; an odd interval count closes with the 3/8 rule on
    /// the last three panels so cubics stay exact.
    #[default]
    Simpson,
    /// Composite trapezoid. Spectrally accurate for smooth integrands that
    /// decay at both ends, including oscillatory ones.
    Trapezoid,
}

impl Rule {
    pub fn weights(self, grid: &Grid) -> Vec<f64> {
        match self {
            Rule::Simpson => simpson_weights(grid),
            Rule::Trapezoid => trapezoid_weights(grid),
        }
    }
}

pub fn trapezoid_weights(grid: &Grid) -> Vec<f64> {
    let h = grid.dt();
    let mut w = vec![h; grid.len()];
    w[0] = 0.5 * h;
    *w.last_mut().expect("grid is non-empty") = 0.5 * h;
    w
}

pub fn simpson_weights(grid: &Grid) -> Vec<f64> {
    let n = grid.len();
    let h = grid.dt();
    let intervals = n - 1;
    // Points covered by the plain Simpson part.
    let simpson_end = if intervals.is_multiple_of(2) { n - 1 } else { n - 4 };
    let mut w = vec![0.0; n];
    for (i, wi) in w.iter_mut().enumerate().take(simpson_end + 1) {
        *wi = if i == 0 || i == simpson_end {
            h / 3.0
        } else if i % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        };
    }
    if simpson_end != n - 1 {
        let k = 3.0 * h / 8.0;
        w[simpson_end] += k;
        w[simpson_end + 1] += 3.0 * k;
        w[simpson_end + 2] += 3.0 * k;
        w[simpson_end + 3] += k;
    }
    w
}

/// `int s(t) dt` over the grid by composite Simpson.
pub fn integrate(s: &SampledSignal) -> Complex64 {
    integrate_with(s, Rule::Simpson)
}

pub fn integrate_with(s: &SampledSignal, rule: Rule) -> Complex64 {
    rule.weights(s.grid())
        .iter()
        .zip(s.values())
        .map(|(w, v)| v * w)
        .sum()
}

/// Simpson integral of real samples. Non-finite samples are rejected.
pub fn integrate_real(grid: &Grid, values: &[f64]) -> f64 {
    debug_assert_eq!(grid.len(), values.len());
    simpson_weights(grid)
        .iter()
        .zip(values)
        .map(|(w, v)| w * v)
        .sum()
}

/// Checked variant of [`integrate_real`].
pub(crate) fn try_integrate_real(grid: &Grid, values: &[f64]) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::GridMismatch);
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(integrate_real(grid, values))
}

/// `int s1 conj(s2) dt`.
pub fn inner_product(s1: &SampledSignal, s2: &SampledSignal) -> Result<Complex64> {
    if s1.grid() != s2.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(simpson_weights(s1.grid())
        .iter()
        .zip(s1.values().iter().zip(s2.values()))
        .map(|(w, (a, b))| a * b.conj() * w)
        .sum())
}

pub fn norm_l2(s: &SampledSignal) -> f64 {
    s.energy().max(0.0).sqrt()
}
