use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{chirp_z, OlctParams};
use crate::signal::{Grid, Rule, SampledSignal, Spectrum};
use crate::{Error, Result};

/// Evaluation strategy for the `b != 0` transform integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransformPath {
    /// Quadrature against the full kernel at every output point; O(n m).
    /// The correctness reference.
    Direct,
    /// Chirp-multiply, chirp-z Fourier sum, outer phase. O((n + m) log).
    #[default]
    ChirpFft,
}

/// Peak-relative input magnitude tolerated at the grid edges by the fast
/// path.
const EDGE_DECAY_LIMIT: f64 = 1e-8;

/// Transform sums use trapezoid weights: the Simpson pattern would alias
/// the spectrum at half the sampling Nyquist.
const KERNEL_RULE: Rule = Rule::Trapezoid;

/// `1 / sqrt(j 2 pi b)` on the principal branch.
pub fn kernel_prefactor(b: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * b).sqrt().inv()
}

/// Phase of the kernel that does not depend on `t`.
fn outer_phase(xi: f64, p: &OlctParams) -> f64 {
    let (b, d, tau, eta) = (p.b(), p.d(), p.tau(), p.eta());
    -xi * (d * tau - b * eta) / b + d / (2.0 * b) * (xi * xi + tau * tau)
}

/// OLCT kernel `K_J(t, xi)`; `b = 0` has no kernel.
pub fn kernel(t: f64, xi: f64, p: &OlctParams) -> Result<Complex64> {
    p.require_integral("kernel")?;
    let b = p.b();
    let phase = p.a() / (2.0 * b) * t * t - t * (xi - p.tau()) / b + outer_phase(xi, p);
    Ok(kernel_prefactor(b) * Complex64::from_polar(1.0, phase))
}

fn check_decay(f: &SampledSignal) -> Result<()> {
    let peak = f.max_abs();
    if peak == 0.0 {
        return Ok(());
    }
    let v = f.values();
    let edge = v[0].norm().max(v[v.len() - 1].norm()) / peak;
    if edge > EDGE_DECAY_LIMIT {
        return Err(Error::GridCoverage {
            what: "transform input",
            ratio: edge,
        });
    }
    Ok(())
}

/// Forward OLCT of `f` sampled on `xi_grid`. Parameters with `b = 0` are
/// routed to [`olct_forward_b0`].
pub fn olct_forward(
    f: &SampledSignal,
    p: &OlctParams,
    xi_grid: &Grid,
    path: TransformPath,
) -> Result<Spectrum> {
    if p.is_degenerate() {
        return olct_forward_b0(f, p, xi_grid);
    }
    match path {
        TransformPath::Direct => forward_direct(f, p, xi_grid),
        TransformPath::ChirpFft => {
            check_decay(f)?;
            forward_chirp(f, p, xi_grid)
        }
    }
}

fn forward_direct(f: &SampledSignal, p: &OlctParams, xi_grid: &Grid) -> Result<Spectrum> {
    let grid = f.grid();
    let weighted: Vec<(f64, Complex64)> = KERNEL_RULE
        .weights(grid)
        .iter()
        .zip(grid.points().zip(f.values()))
        .map(|(w, (t, v))| (t, v * w))
        .collect();
    let values: Vec<Complex64> = (0..xi_grid.len())
        .into_par_iter()
        .map(|m| {
            let xi = xi_grid.point(m);
            weighted
                .iter()
                .map(|&(t, v)| v * kernel(t, xi, p).expect("b != 0"))
                .sum()
        })
        .collect();
    SampledSignal::new(*xi_grid, values)
}

fn forward_chirp(f: &SampledSignal, p: &OlctParams, xi_grid: &Grid) -> Result<Spectrum> {
    let grid = f.grid();
    let b = p.b();
    let rate = p.a() / (2.0 * b);
    let g: Vec<Complex64> = KERNEL_RULE
        .weights(grid)
        .iter()
        .zip(grid.points().zip(f.values()))
        .map(|(w, (t, v))| v * w * Complex64::from_polar(1.0, rate * t * t))
        .collect();
    // Frequencies w = (xi - tau) / b, uniform in the xi index.
    let w0 = (xi_grid.t_min() - p.tau()) / b;
    let dw = xi_grid.dt() / b;
    let sums = chirp_z(&g, grid.t_min(), grid.dt(), w0, dw, xi_grid.len());
    let pre = kernel_prefactor(b);
    let values = sums
        .into_iter()
        .enumerate()
        .map(|(m, s)| {
            let xi = xi_grid.point(m);
            s * pre * Complex64::from_polar(1.0, outer_phase(xi, p))
        })
        .collect();
    SampledSignal::new(*xi_grid, values)
}

/// Four-point Lagrange interpolation of samples at an arbitrary position.
/// Outside the grid the signal is taken to vanish.
pub fn interpolate_cubic(s: &SampledSignal, x: f64) -> Complex64 {
    let grid = s.grid();
    if x < grid.t_min() || x > grid.t_max() {
        return Complex64::new(0.0, 0.0);
    }
    let n = grid.len();
    let u = (x - grid.t_min()) / grid.dt();
    let i = (u.floor() as usize).min(n - 2);
    let start = i.saturating_sub(1).min(n - 4);
    let v = s.values();
    let nodes: [f64; 4] = std::array::from_fn(|j| (start + j) as f64);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..4 {
        let mut l = 1.0;
        for k in 0..4 {
            if k != j {
                l *= (u - nodes[k]) / (nodes[j] - nodes[k]);
            }
        }
        acc += v[start + j] * l;
    }
    acc
}

/// `b = 0` branch: `sqrt(d) exp(j[c d (xi - tau)^2 / 2 + xi eta]) f(d (xi - tau))`,
/// with cubic interpolation for off-grid arguments. Requires `d > 0`.
pub fn olct_forward_b0(f: &SampledSignal, p: &OlctParams, xi_grid: &Grid) -> Result<Spectrum> {
    if !p.is_degenerate() {
        return Err(Error::invalid("b", "the b = 0 branch needs b = 0"));
    }
    let (c, d, tau, eta) = (p.c(), p.d(), p.tau(), p.eta());
    if d <= 0.0 {
        return Err(Error::invalid(
            "d",
            format!("b = 0 branch is only defined here for d > 0 (sqrt(d) has no chosen branch), got d = {d}"),
        ));
    }
    let scale = d.sqrt();
    SampledSignal::from_fn(*xi_grid, |xi| {
        let shifted = xi - tau;
        let phase = c * d * shifted * shifted / 2.0 + xi * eta;
        interpolate_cubic(f, d * shifted) * Complex64::from_polar(scale, phase)
    })
}

/// Adjoint transform `f(t) = int O(xi) conj(K(t, xi)) dxi`; the inverse for
/// `b != 0` because the kernel is unitary.
pub fn olct_inverse(
    spectrum: &Spectrum,
    p: &OlctParams,
    t_grid: &Grid,
    path: TransformPath,
) -> Result<SampledSignal> {
    p.require_integral("inverse transform")?;
    let xi_grid = spectrum.grid();
    let weights = KERNEL_RULE.weights(xi_grid);
    match path {
        TransformPath::Direct => {
            let weighted: Vec<(f64, Complex64)> = weights
                .iter()
                .zip(xi_grid.points().zip(spectrum.values()))
                .map(|(w, (xi, v))| (xi, v * w))
                .collect();
            let values: Vec<Complex64> = (0..t_grid.len())
                .into_par_iter()
                .map(|k| {
                    let t = t_grid.point(k);
                    weighted
                        .iter()
                        .map(|&(xi, v)| v * kernel(t, xi, p).expect("b != 0").conj())
                        .sum()
                })
                .collect();
            SampledSignal::new(*t_grid, values)
        }
        TransformPath::ChirpFft => {
            let b = p.b();
            let y: Vec<Complex64> = weights
                .iter()
                .zip(xi_grid.points().zip(spectrum.values()))
                .map(|(w, (xi, v))| v * w * Complex64::from_polar(1.0, -outer_phase(xi, p)))
                .collect();
            // exp(+j t xi / b) = exp(-j (-t/b) xi)
            let sums = chirp_z(
                &y,
                xi_grid.t_min(),
                xi_grid.dt(),
                -t_grid.t_min() / b,
                -t_grid.dt() / b,
                t_grid.len(),
            );
            let pre = kernel_prefactor(b).conj();
            let rate = p.a() / (2.0 * b);
            let values = sums
                .into_iter()
                .enumerate()
                .map(|(k, s)| {
                    let t = t_grid.point(k);
                    s * pre * Complex64::from_polar(1.0, -rate * t * t - t * p.tau() / b)
                })
                .collect();
            SampledSignal::new(*t_grid, values)
        }
    }
}

/// `|E_f - E_O| / E_f` with both energies by Simpson quadrature.
pub fn parseval_gap(f: &SampledSignal, spectrum: &Spectrum) -> Result<f64> {
    let ef = f.energy();
    if !(ef > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let eo = spectrum.energy();
    if !eo.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    Ok((ef - eo).abs() / ef)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::olct::{ft_params, lct_params};
    use crate::signal::gaussian_chirp;

    fn default_grid() -> Grid {
        Grid::new(-8.0, 8.0, 4097).unwrap()
    }

    #[test]
    fn kernel_modulus_and_origin_value() {
        let ft = ft_params();
        let k = kernel(0.0, 0.0, &ft).unwrap();
        let expected = Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), -PI / 4.0);
        assert!((k - expected).norm() < 1e-15);
        let p = OlctParams::new(0.3, 1.0, -0.7, 1.0, 0.5, -1.2).unwrap();
        for &(t, xi) in &[(0.0, 0.0), (1.5, -2.0), (-7.0, 3.3)] {
            assert!((kernel(t, xi, &p).unwrap().norm() - 0.3989422804014327).abs() < 1e-14);
        }
        let p = lct_params(2.0, 0.25, 0.0, 0.5).unwrap();
        let k = kernel(0.0, 0.0, &p).unwrap();
        assert!((k - kernel_prefactor(0.25)).norm() < 1e-15);
        assert!(kernel(0.0, 0.0, &lct_params(1.0, 0.0, 0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn negative_b_prefactor_branch() {
        let k = kernel_prefactor(-1.0);
        let expected = Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), PI / 4.0);
        assert!((k - expected).norm() < 1e-15);
    }

    #[test]
    fn ft_of_gaussian_is_gaussian() {
        let grid = default_grid();
        let f = SampledSignal::from_fn(grid, |t| Complex64::new((-0.5 * t * t).exp(), 0.0)).unwrap();
        let xi = Grid::new(-10.0, 10.0, 1025).unwrap();
        for path in [TransformPath::Direct, TransformPath::ChirpFft] {
            let o = olct_forward(&f, &ft_params(), &xi, path).unwrap();
            for (x, v) in xi.points().zip(o.values()) {
                let exact = Complex64::from_polar((-0.5 * x * x).exp(), -PI / 4.0);
                assert!((v - exact).norm() < 1e-8, "{path:?} at {x}");
            }
        }
    }

    #[test]
    fn zero_input_zero_output() {
        let grid = default_grid();
        let xi = Grid::new(-5.0, 5.0, 257).unwrap();
        let p = OlctParams::example2();
        let o = olct_forward(&SampledSignal::zeros(grid), &p, &xi, TransformPath::ChirpFft).unwrap();
        assert_eq!(o.max_abs(), 0.0);
        let back = olct_inverse(&SampledSignal::zeros(xi), &p, &grid, TransformPath::Direct).unwrap();
        assert_eq!(back.max_abs(), 0.0);
    }

    #[test]
    fn b0_identity_and_scaling() {
        let grid = default_grid();
        let f = gaussian_chirp(2.0, 0.7).unwrap().sample(&grid).unwrap();
        let id = lct_params(1.0, 0.0, 0.0, 1.0).unwrap();
        let o = olct_forward(&f, &id, &grid, TransformPath::ChirpFft).unwrap();
        assert!(o.max_abs_diff(&f).unwrap() < 1e-12);

        let shear = lct_params(1.0, 0.0, 0.8, 1.0).unwrap();
        let o = olct_forward_b0(&f, &shear, &grid).unwrap();
        for (a, b) in o.values().iter().zip(f.values()) {
            assert!((a.norm() - b.norm()).abs() < 1e-12);
        }

        let squeeze = lct_params(2.0, 0.0, 0.0, 0.5).unwrap();
        let xi = Grid::new(-16.0, 16.0, 4097).unwrap();
        let o = olct_forward_b0(&f, &squeeze, &xi).unwrap();
        let g = gaussian_chirp(2.0, 0.7).unwrap();
        for (x, v) in xi.points().zip(o.values()).step_by(37) {
            let exact = g.eval(0.5 * x) * 0.5f64.sqrt();
            assert!((v - exact).norm() < 1e-8);
        }
        assert!(parseval_gap(&f, &o).unwrap() < 1e-4);
    }

    #[test]
    fn b0_rejects_nonpositive_d() {
        let grid = default_grid();
        let f = gaussian_chirp(2.0, 0.0).unwrap().sample(&grid).unwrap();
        let flip = lct_params(-1.0, 0.0, 0.0, -1.0).unwrap();
        assert!(matches!(olct_forward(&f, &flip, &grid, TransformPath::Direct), Err(Error::InvalidParameter { name: "d", .. })));
    }

    #[test]
    fn inverse_rejects_degenerate() {
        let grid = Grid::new(-1.0, 1.0, 32).unwrap();
        let id = lct_params(1.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(
            olct_inverse(&SampledSignal::zeros(grid), &id, &grid, TransformPath::Direct),
            Err(Error::DegenerateBranch("inverse transform"))
        );
    }

    #[test]
    fn parseval_gap_scaling_arithmetic() {
        let grid = default_grid();
        let f = gaussian_chirp(2.0, 6.0).unwrap().sample(&grid).unwrap();
        let xi = Grid::new(-70.0, 70.0, 4097).unwrap();
        let o = olct_forward(&f, &ft_params(), &xi, TransformPath::ChirpFft).unwrap();
        assert!(parseval_gap(&f, &o).unwrap() < 1e-8);
        let doubled = o.scale(Complex64::new(2.0, 0.0));
        assert!((parseval_gap(&f, &doubled).unwrap() - 3.0).abs() < 1e-7);
        assert_eq!(parseval_gap(&SampledSignal::zeros(grid), &o), Err(Error::ZeroEnergy));
    }

    #[test]
    fn fast_path_refuses_truncated_input() {
        let grid = Grid::new(-1.0, 1.0, 257).unwrap();
        let f = gaussian_chirp(1.0, 0.0).unwrap().sample(&grid).unwrap();
        let xi = Grid::new(-1.0, 1.0, 64).unwrap();
        assert!(matches!(
            olct_forward(&f, &ft_params(), &xi, TransformPath::ChirpFft),
            Err(Error::GridCoverage { .. })
        ));
    }

    #[test]
    fn interpolation_is_exact_for_cubics() {
        let grid = Grid::new(-1.0, 1.0, 33).unwrap();
        let p = |t: f64| Complex64::new(t * t * t - 0.5 * t, 2.0 * t * t);
        let s = SampledSignal::from_fn(grid, p).unwrap();
        for &x in &[-1.0, -0.99, -0.3337, 0.0, 0.51, 0.999, 1.0] {
            assert!((interpolate_cubic(&s, x) - p(x)).norm() < 1e-13, "x={x}");
        }
        assert_eq!(interpolate_cubic(&s, 1.01), Complex64::new(0.0, 0.0));
    }
}
