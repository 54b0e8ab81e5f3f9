use num_complex::Complex64;

use crate::{Error, Result};

/// Smallest sample count accepted by [`Grid::new`].
pub const MIN_SAMPLES: usize = 16;

/// Uniform sampling of the closed interval `[t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    t_min: f64,
    t_max: f64,
    n: usize,
    dt: f64,
}

impl Grid {
    pub fn new(t_min: f64, t_max: f64, n: usize) -> Result<Self> {
        if !t_min.is_finite() || !t_max.is_finite() {
            return Err(Error::invalid("grid", "endpoints must be finite"));
        }
        if t_min >= t_max {
            return Err(Error::invalid(
                "grid",
                format!("t_min ({t_min}) must be below t_max ({t_max})"),
            ));
        }
        if n < MIN_SAMPLES {
            return Err(Error::GridTooSmall { n, min: MIN_SAMPLES });
        }
        Ok(Grid {
            t_min,
            t_max,
            n,
            dt: (t_max - t_min) / (n - 1) as f64,
        })
    }

    /// Grid of `n` samples centred on `center` with the given half-width.
    pub fn centered(center: f64, half_width: f64, n: usize) -> Result<Self> {
        Grid::new(center - half_width, center + half_width, n)
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn span(&self) -> f64 {
        self.t_max - self.t_min
    }

    /// The `i`-th sample position. The last sample is exactly `t_max`.
    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.t_max
        } else {
            self.t_min + i as f64 * self.dt
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }
}

/// Complex samples on a [`Grid`]. All samples are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: Grid,
    values: Vec<Complex64>,
}

/// OLCT output: samples over a spectral (xi) grid. Same invariants as a
/// time-domain signal.
pub type Spectrum = SampledSignal;

impl SampledSignal {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(
                "values",
                format!("length {} does not match grid size {}", values.len(), grid.len()),
            ));
        }
        if let Some(index) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(SampledSignal { grid, values })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        SampledSignal::new(grid, grid.points().map(f).collect())
    }

    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self> {
        SampledSignal::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(grid: Grid) -> Self {
        SampledSignal {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise transform preserving the grid. Rejects non-finite results.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Result<Self> {
        let values = self
            .grid
            .points()
            .zip(&self.values)
            .map(|(t, &v)| f(t, v))
            .collect();
        SampledSignal::new(self.grid, values)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        SampledSignal {
            grid: self.grid,
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        SampledSignal {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: Complex64, other: &SampledSignal, beta: Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        SampledSignal::new(self.grid, values)
    }

    /// `|s(t)|^2` at every sample.
    pub fn abs_sq(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.norm()))
    }

    /// Largest pointwise modulus of the difference to `other`.
    pub fn max_abs_diff(&self, other: &SampledSignal) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm())))
    }

    /// `int |s|^2` by composite Simpson.
    pub fn energy(&self) -> f64 {
        super::integrate_real(&self.grid, &self.abs_sq())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_spacing() {
        let g = Grid::new(-8.0, 8.0, 4097).unwrap();
        assert_eq!(g.dt(), 0.00390625);
        assert_eq!(g.point(0), -8.0);
        assert_eq!(g.point(4096), 8.0);
        assert_eq!(g.point(2048), 0.0);
    }

    #[test]
    fn rejects_small_and_degenerate_grids() {
        assert_eq!(
            Grid::new(0.0, 1.0, 15),
            Err(Error::GridTooSmall { n: 15, min: 16 })
        );
        assert!(Grid::new(-8.0, 8.0, 2).is_err());
        assert!(Grid::new(1.0, 1.0, 64).is_err());
        assert!(Grid::new(f64::NEG_INFINITY, 1.0, 64).is_err());
        assert!(Grid::new(0.0, f64::NAN, 64).is_err());
    }

    #[test]
    fn spacing_reconstructs_from_endpoints() {
        for &(a, b, n) in &[(-8.0, 8.0, 4097), (-3.3, 7.1, 1000), (0.0, 1e-3, 17)] {
            let g = Grid::new(a, b, n).unwrap();
            let rebuilt = (g.point(n - 1) - g.point(0)) / (n - 1) as f64;
            assert!((rebuilt - g.dt()).abs() <= 4.0 * f64::EPSILON * g.dt());
            let steps: Vec<f64> = g.points().collect::<Vec<_>>().windows(2).map(|w| w[1] - w[0]).collect();
            for s in steps {
                assert!((s - g.dt()).abs() <= 1e-12 * g.span());
            }
        }
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = Grid::new(0.0, 1.0, 16).unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); 16];
        v[3] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(SampledSignal::new(g, v), Err(Error::NonFinite { index: 3 }));
        assert!(SampledSignal::new(g, vec![Complex64::new(0.0, 0.0); 15]).is_err());
    }
}
