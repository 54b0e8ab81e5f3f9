//! Weighted time moments, spectral moments, the chirp-demodulated signal
//! `g_beta`, and the check that the `2p`-th spectral moment equals
//! `b^{2p} ||g_beta^{(p)}||^2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::olct::{chirp_z, olct_forward, OlctParams, TransformPath};
use crate::signal::{
    check_coverage, derivative, integrate_real, trapezoid_weights, try_integrate_real, DiffMethod, Grid, SampledSignal,
    Spectrum, WeightFunction,
};
use crate::{Error, Result};

/// Highest moment half-order supported; derivative noise grows with order.
pub const MAX_ORDER: usize = 4;

/// Half-width of the default spectral window in units of the RMS
/// bandwidth of `g`.
pub const SPECTRAL_WINDOW_SIGMAS: f64 = 40.0;

/// Moment order, centres and time weight.
#[derive(Debug, Clone)]
pub struct MomentSpec {
    pub p: usize,
    pub t_m: f64,
    pub xi_m: f64,
    pub omega: WeightFunction,
}

impl MomentSpec {
    pub fn new(p: usize, t_m: f64, xi_m: f64, omega: WeightFunction) -> Result<Self> {
        if p > MAX_ORDER {
            return Err(Error::invalid("p", format!("orders above {MAX_ORDER} are not supported, got {p}")));
        }
        if !t_m.is_finite() || !xi_m.is_finite() {
            return Err(Error::invalid("center", "t_m and xi_m must be finite"));
        }
        Ok(MomentSpec { p, t_m, xi_m, omega })
    }

    pub fn unweighted(p: usize, t_m: f64, xi_m: f64) -> Result<Self> {
        MomentSpec::new(p, t_m, xi_m, WeightFunction::unit())
    }
}

/// `int w(t)^2 (t - t_m)^{2p} |f(t)|^2 dt`.
pub fn time_moment_2p(f: &SampledSignal, spec: &MomentSpec) -> Result<f64> {
    let integrand: Vec<f64> = f
        .grid()
        .points()
        .zip(f.values())
        .map(|(t, v)| {
            let w = spec.omega.eval(t);
            w * w * (t - spec.t_m).powi(2 * spec.p as i32) * v.norm_sqr()
        })
        .collect();
    moment_integral("weighted time moment", f.grid(), &integrand)
}

/// `int (xi - xi_m)^{2p} |O(xi)|^2 dxi`.
pub fn spectral_moment_2p(spectrum: &Spectrum, p: usize, xi_m: f64) -> Result<f64> {
    if p > MAX_ORDER {
        return Err(Error::invalid("p", format!("orders above {MAX_ORDER} are not supported, got {p}")));
    }
    let integrand: Vec<f64> = spectrum
        .grid()
        .points()
        .zip(spectrum.values())
        .map(|(x, v)| (x - xi_m).powi(2 * p as i32) * v.norm_sqr())
        .collect();
    moment_integral("spectral moment", spectrum.grid(), &integrand)
}

fn moment_integral(what: &'static str, grid: &Grid, integrand: &[f64]) -> Result<f64> {
    let value = try_integrate_real(grid, integrand)?;
    check_coverage(what, integrand)?;
    Ok(value.max(0.0))
}

/// Absolute moment `int |x - center|^p |s(x)|^2 dx` together with a flag
/// marking orders below the range where the Holder-type bound applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsMoment {
    pub value: f64,
    pub below_bound_range: bool,
}

/// Absolute moment of any order, for diagnostics.
pub fn abs_moment(s: &SampledSignal, p: u32, center: f64) -> Result<AbsMoment> {
    let integrand: Vec<f64> = s
        .grid()
        .points()
        .zip(s.values())
        .map(|(x, v)| (x - center).abs().powi(p as i32) * v.norm_sqr())
        .collect();
    Ok(AbsMoment {
        value: moment_integral("absolute moment", s.grid(), &integrand)?,
        below_bound_range: p < 2,
    })
}

/// Absolute moment of order `p >= 2` (the bound's admissible range).
pub fn abs_moment_p(s: &SampledSignal, p: u32, center: f64) -> Result<f64> {
    if p < 2 {
        return Err(Error::invalid("p", format!("absolute moments for the bound need p >= 2, got {p}")));
    }
    Ok(abs_moment(s, p, center)?.value)
}

/// Demodulation frequency `beta = (xi_m - tau) / b`.
pub fn beta(p: &OlctParams, xi_m: f64) -> Result<f64> {
    p.require_integral("beta")?;
    Ok((xi_m - p.tau()) / p.b())
}

/// `g(t) = exp(j (a/2b) t^2) f(t)`: the input with the kernel chirp removed.
pub fn chirped(f: &SampledSignal, p: &OlctParams) -> Result<SampledSignal> {
    let rate = p.chirp_rate()?;
    f.map(|t, v| v * Complex64::from_polar(1.0, rate * t * t))
}

/// `g_beta(t) = exp(-j beta t) exp(j (a/2b) t^2) f(t)`.
pub fn g_beta(f: &SampledSignal, p: &OlctParams, xi_m: f64) -> Result<SampledSignal> {
    let rate = p.chirp_rate()?;
    let beta = beta(p, xi_m)?;
    f.map(|t, v| v * Complex64::from_polar(1.0, rate * t * t - beta * t))
}

/// Mean angular frequency and RMS bandwidth (about the mean) of a sampled
/// signal, from `int conj(s)(-j s')` and `||s'||^2`.
pub fn bandwidth(s: &SampledSignal) -> Result<(f64, f64)> {
    let energy = s.energy();
    if !(energy > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let ds = derivative(s, 1, DiffMethod::Spectral)?;
    let mean_density: Vec<f64> = s
        .values()
        .iter()
        .zip(ds.values())
        .map(|(v, dv)| (v.conj() * dv).im)
        .collect();
    let w0 = integrate_real(s.grid(), &mean_density) / energy;
    let second = ds.energy() / energy;
    Ok((w0, (second - w0 * w0).max(0.0).sqrt()))
}

/// Spectral grid wide enough for the moments of `O_f^J`: centred at
/// `tau + b w0`, half-width `40 |b| sigma_g`, clipped so the window in
/// `w = (xi - tau)/b` stays inside one period `2 pi / dt` of the sampled
/// transform.
pub fn default_xi_grid(f: &SampledSignal, p: &OlctParams, n: usize) -> Result<Grid> {
    let g = chirped(f, p)?;
    let (w0, sigma) = bandwidth(&g)?;
    let nyquist = PI / f.grid().dt();
    let half_w = (SPECTRAL_WINDOW_SIGMAS * sigma).min(nyquist - w0.abs());
    if !(half_w > 0.0) {
        return Err(Error::GridCoverage {
            what: "spectral window",
            ratio: f64::INFINITY,
        });
    }
    Grid::centered(p.tau() + p.b() * w0, p.b().abs() * half_w, n)
}

/// Forward transform on [`default_xi_grid`] with as many samples as the
/// time grid.
pub fn default_spectrum(f: &SampledSignal, p: &OlctParams) -> Result<Spectrum> {
    let xi = default_xi_grid(f, p, f.len())?;
    olct_forward(f, p, &xi, TransformPath::ChirpFft)
}

/// Outcome of comparing the two sides of the moment-derivative identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PprCheck {
    /// `int (xi - xi_m)^{2p} |O(xi)|^2 dxi` by quadrature of the spectrum.
    pub lhs: f64,
    /// `b^{2p} int |g_beta^{(p)}(t)|^2 dt` by spectral differentiation.
    pub rhs: f64,
    pub rel_gap: f64,
}

/// Relative gap normalised by the larger side; 0 when both vanish.
pub fn rel_gap(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

/// `b^{2p} ||g_beta^{(p)}||^2`.
pub fn derivative_energy(f: &SampledSignal, p: &OlctParams, order: usize, xi_m: f64) -> Result<f64> {
    let g = g_beta(f, p, xi_m)?;
    let energy = if order == 0 {
        g.energy()
    } else {
        derivative(&g, order, DiffMethod::Spectral)?.energy()
    };
    Ok(p.b().powi(2 * order as i32) * energy)
}

/// Checks the moment-derivative identity on the default spectral grid.
pub fn ppr_check(f: &SampledSignal, p: &OlctParams, order: usize, xi_m: f64) -> Result<PprCheck> {
    p.require_integral("ppr_check")?;
    let spectrum = default_spectrum(f, p)?;
    ppr_check_with(f, p, order, xi_m, &spectrum)
}

/// As [`ppr_check`], reusing a precomputed spectrum of `f`.
pub fn ppr_check_with(
    f: &SampledSignal,
    p: &OlctParams,
    order: usize,
    xi_m: f64,
    spectrum: &Spectrum,
) -> Result<PprCheck> {
    if order > MAX_ORDER {
        return Err(Error::invalid("p", format!("orders above {MAX_ORDER} are not supported, got {order}")));
    }
    let lhs = spectral_moment_2p(spectrum, order, xi_m)?;
    let rhs = derivative_energy(f, p, order, xi_m)?;
    Ok(PprCheck {
        lhs,
        rhs,
        rel_gap: rel_gap(lhs, rhs),
    })
}

/// Fourier transform in the `exp(-2 pi j sigma t)` convention, no
/// prefactor, sampled on `sigma_grid` (trapezoid sums via chirp-z).
pub fn fourier_sigma(f: &SampledSignal, sigma_grid: &Grid) -> Result<Spectrum> {
    let grid = f.grid();
    let weighted: Vec<Complex64> = trapezoid_weights(grid)
        .iter()
        .zip(f.values())
        .map(|(w, v)| v * w)
        .collect();
    let values = chirp_z(
        &weighted,
        grid.t_min(),
        grid.dt(),
        2.0 * PI * sigma_grid.t_min(),
        2.0 * PI * sigma_grid.dt(),
        sigma_grid.len(),
    );
    SampledSignal::new(*sigma_grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::olct::ft_params;
    use crate::signal::{exp_weight, gaussian_chirp};

    fn grid() -> Grid {
        Grid::new(-8.0, 8.0, 4097).unwrap()
    }

    fn real(grid: Grid, f: impl Fn(f64) -> f64) -> SampledSignal {
        SampledSignal::from_fn(grid, |t| Complex64::new(f(t), 0.0)).unwrap()
    }

    #[test]
    fn zeroth_time_moment_is_energy() {
        let f = gaussian_chirp(2.0, 6.0).unwrap().sample(&grid()).unwrap();
        let m = time_moment_2p(&f, &MomentSpec::unweighted(0, 0.3, 0.0).unwrap()).unwrap();
        assert!((m - f.energy()).abs() < 1e-15);
    }

    #[test]
    fn gaussian_second_moment() {
        let f = real(grid(), |t| (-t * t).exp());
        let m = time_moment_2p(&f, &MomentSpec::unweighted(1, 0.0, 0.0).unwrap()).unwrap();
        assert!((m - 0.3133285343288751).abs() < 1e-10);
    }

    #[test]
    fn weighted_example_moment() {
        // e^2 (5/4) sqrt(pi/2), frozen from an mpmath quadrature.
        let f = gaussian_chirp(2.0, 6.0).unwrap().sample(&grid()).unwrap();
        let spec = MomentSpec::new(1, 0.0, 0.0, exp_weight(2.0).unwrap()).unwrap();
        let m = time_moment_2p(&f, &spec).unwrap();
        assert!((m - 11.57601058775888).abs() / 11.57601058775888 < 1e-10);
    }

    #[test]
    fn abs_moments() {
        let f = real(grid(), |t| (-t * t).exp());
        let m2 = abs_moment_p(&f, 2, 0.0).unwrap();
        let t2 = time_moment_2p(&f, &MomentSpec::unweighted(1, 0.0, 0.0).unwrap()).unwrap();
        assert!((m2 - t2).abs() < 1e-15);
        assert!((abs_moment_p(&f, 3, 0.0).unwrap() - 0.25).abs() < 1e-9);
        assert_eq!(abs_moment_p(&SampledSignal::zeros(grid()), 3, 0.0).unwrap(), 0.0);
        assert!(abs_moment_p(&f, 1, 0.0).is_err());
        assert!(abs_moment(&f, 1, 0.0).unwrap().below_bound_range);
    }

    #[test]
    fn moment_order_limit() {
        assert!(MomentSpec::unweighted(5, 0.0, 0.0).is_err());
    }

    #[test]
    fn edge_heavy_integrand_reported() {
        let g = Grid::new(-2.0, 2.0, 513).unwrap();
        let f = real(g, |t| (-t * t).exp());
        let spec = MomentSpec::unweighted(1, 0.0, 0.0).unwrap();
        assert!(matches!(time_moment_2p(&f, &spec), Err(Error::GridCoverage { .. })));
    }

    #[test]
    fn spectral_moment_scaling_and_energy() {
        let f = gaussian_chirp(2.0, 6.0).unwrap().sample(&grid()).unwrap();
        let o = default_spectrum(&f, &OlctParams::example2()).unwrap();
        let e = spectral_moment_2p(&o, 0, 0.0).unwrap();
        assert!((e - o.energy()).abs() < 1e-15);
        let m = spectral_moment_2p(&o, 1, 0.0).unwrap();
        let m2 = spectral_moment_2p(&o.scale(Complex64::new(2.0, 0.0)), 1, 0.0).unwrap();
        assert!((m2 - 4.0 * m).abs() < 1e-14 * m2);
        // b^2 ||g'||^2 for g = e^{-t^2}: 0.0025 sqrt(pi/2).
        assert!((m - 0.00313328534328875).abs() / 0.00313328534328875 < 1e-8);
    }

    #[test]
    fn example_chirp_cancels() {
        let f = gaussian_chirp(2.0, 6.0).unwrap().sample(&grid()).unwrap();
        let g = g_beta(&f, &OlctParams::example2(), 0.0).unwrap();
        for (t, v) in grid().points().zip(g.values()) {
            assert!(v.im.abs() <= 1e-12);
            assert!((v.re - (-t * t).exp()).abs() <= 1e-12);
        }
    }

    #[test]
    fn g_beta_preserves_modulus() {
        let f = gaussian_chirp(1.3, -2.0).unwrap().sample(&grid()).unwrap();
        let p = OlctParams::new(0.3, -0.8, 1.1375, 0.3, 0.4, -0.2).unwrap();
        let g = g_beta(&f, &p, 1.7).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
        let at_tau = g_beta(&f, &p, p.tau()).unwrap();
        let rate = p.chirp_rate().unwrap();
        for ((t, a), b) in grid().points().zip(f.values()).zip(at_tau.values()) {
            assert!((a * Complex64::from_polar(1.0, rate * t * t) - b).norm() < 1e-15);
        }
        assert!(g_beta(&f, &OlctParams::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap(), 0.0).is_err());
    }

    #[test]
    fn ppr_zeroth_order_is_parseval() {
        let f = gaussian_chirp(2.0, 6.0).unwrap().sample(&grid()).unwrap();
        let r = ppr_check(&f, &OlctParams::example2(), 0, 0.0).unwrap();
        assert!(r.rel_gap <= 1e-6, "{r:?}");
    }

    #[test]
    fn ppr_on_minimizer_matches_closed_form() {
        // g_beta = e^{-t^2}: b^2 ||g'||^2 = b^2 sqrt(pi/2).
        let p = OlctParams::example2();
        let rate = p.chirp_rate().unwrap();
        let f = SampledSignal::from_fn(grid(), |t| Complex64::from_polar((-t * t).exp(), -rate * t * t)).unwrap();
        let r = ppr_check(&f, &p, 1, 0.0).unwrap();
        let closed = 0.05f64.powi(2) * (PI / 2.0).sqrt();
        assert!((r.rhs - closed).abs() / closed < 1e-10);
        assert!(r.rel_gap < 1e-8);
    }

    #[test]
    fn time_moment_is_chirp_invariant() {
        let f = gaussian_chirp(1.0, 6.0).unwrap().sample(&grid()).unwrap();
        let spec = MomentSpec::new(2, 0.2, 0.0, exp_weight(0.5).unwrap()).unwrap();
        let p = OlctParams::example3();
        let g = g_beta(&f, &p, 0.7).unwrap();
        let a = time_moment_2p(&f, &spec).unwrap();
        let b = time_moment_2p(&g, &spec).unwrap();
        assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn abs_moment_minimised_at_centroid() {
        let f = gaussian_chirp(2.0, 1.0).unwrap();
        let shifted = SampledSignal::from_fn(grid(), |t| f.eval(t - 0.375)).unwrap();
        let g = grid();
        let (best, _) = (1900..2300)
            .map(|i| (g.point(i), abs_moment_p(&shifted, 2, g.point(i)).unwrap()))
            .fold((0.0, f64::INFINITY), |acc, (t, m)| if m < acc.1 { (t, m) } else { acc });
        assert!((best - 0.375).abs() <= 2.0 * g.dt());
    }

    #[test]
    fn fourier_sigma_gaussian_self_dual() {
        // e^{-pi t^2} is its own transform in this convention.
        let f = real(grid(), |t| (-PI * t * t).exp());
        let s = Grid::new(-4.0, 4.0, 801).unwrap();
        let hat = fourier_sigma(&f, &s).unwrap();
        for (x, v) in s.points().zip(hat.values()) {
            assert!((v - Complex64::new((-PI * x * x).exp(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn default_window_tracks_signal_bandwidth() {
        let f = gaussian_chirp(2.0, 6.0).unwrap().sample(&grid()).unwrap();
        let xi = default_xi_grid(&f, &OlctParams::example2(), 4097).unwrap();
        // g = e^{-t^2} has unit RMS bandwidth: half-width 40 * 0.05.
        assert!((xi.t_max() - 2.0).abs() < 1e-6 && (xi.t_min() + 2.0).abs() < 1e-6);
        let ft = default_xi_grid(&f, &ft_params(), 4097).unwrap();
        assert!(ft.t_max() > 200.0);
    }
}
