//! End-to-end inequality checks: moment products against the HPW, SHW and
//! Holder-type bounds, the equality-attaining signal, and the parameter
//! sweeps of the Gaussian-chirp family.

mod repro;
mod report;

pub use repro::{
    energy_densities, example1_grid, example1_signal, ft_reduction, sweep_r, sweep_to_csv, EnergyDensities,
    FtReduction, SweepRow, SweepScenario,
};
pub use report::{
    format_f64, grid_json, json_f64, params_json, reports_to_csv, HolderStep, HolderSteps, PerBound,
    UncertaintyReport, CSV_COLUMNS,
};

use std::fmt;

use num_complex::Complex64;

use crate::bounds::{abs_inner, default_h, e_pf, hw_rhs, saturating_a, shw_a, shw_vectors, HpwConfig};
use crate::moments::{
    abs_moment_p, beta, default_spectrum, ppr_check_with, rel_gap, spectral_moment_2p, time_moment_2p,
};
use crate::olct::{parseval_gap, OlctParams};
use crate::signal::{AnalyticSignal, SampledSignal};
use crate::{Error, Result};

/// Allowed undercut of an inequality, relative to its LHS.
pub const INEQUALITY_TOL: f64 = 1e-6;

/// Relative tolerance for equality (saturation) checks.
pub const EQUALITY_TOL: f64 = 1e-3;

/// Source of the A-term in the sharpened bound.
#[derive(Debug, Clone, PartialEq)]
pub enum AMode {
    Zero,
    Fixed(f64),
    /// `A = ||u|| x0 - ||v|| y0` for a unit-norm `h`; `None` selects
    /// [`default_h`] centred at `t_m`.
    Gram(Option<SampledSignal>),
    /// `A*` with `A*^2 = ||u||^2 ||v||^2 - (|u|, |v|)^2`.
    Saturating,
}

impl fmt::Display for AMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AMode::Zero => write!(f, "zero"),
            AMode::Fixed(a) => write!(f, "fixed({a})"),
            AMode::Gram(_) => write!(f, "gram"),
            AMode::Saturating => write!(f, "saturating"),
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(Error::invalid("tol", format!("must be a finite nonnegative number, got {tol}")));
    }
    Ok(())
}

/// Moment product `(mu_time mu_spec)^{1/2p}` with its PPR and Parseval gaps.
fn moment_product(scenario: &str, f: &SampledSignal, p: &OlctParams, cfg: &HpwConfig, tol: f64) -> Result<UncertaintyReport> {
    check_tol(tol)?;
    p.require_integral("the bounds")?;
    let spectrum = default_spectrum(f, p)?;
    let mu_time = time_moment_2p(f, &cfg.moment_spec())?;
    let mu_spec = spectral_moment_2p(&spectrum, cfg.p, cfg.xi_m)?;
    let mut report = UncertaintyReport::blank(scenario, cfg.p, *f.grid(), *p, tol);
    report.mu_time = mu_time;
    report.mu_spec = mu_spec;
    report.lhs = (mu_time * mu_spec).powf(0.5 / cfg.p as f64);
    report.ppr_gap = ppr_check_with(f, p, cfg.p, cfg.xi_m, &spectrum)?.rel_gap;
    report.parseval_gap = parseval_gap(f, &spectrum)?;
    Ok(report)
}

/// Checks `(mu_time mu_spec)^{1/2p} >= (|b|/2^{1/p}) |E_{p,f}|^{1/p}`.
pub fn verify_hpw(f: &SampledSignal, p: &OlctParams, cfg: &HpwConfig, tol: f64) -> Result<UncertaintyReport> {
    let mut report = moment_product("hpw", f, p, cfg, tol)?;
    let b = e_pf(f, p, cfg)?;
    report.e_pf = Some(b.e_pf);
    report.set_hpw(b.hpw_rhs);
    Ok(report)
}

/// Checks the sharpened bound `(|b|/2^{1/p}) (E*)^{1/p}` with `E* = sqrt(E^2 + 4A^2)`
/// and the A-term chosen by `mode`. The HPW comparison is reported alongside.
pub fn verify_shw(
    f: &SampledSignal,
    p: &OlctParams,
    cfg: &HpwConfig,
    mode: &AMode,
    tol: f64,
) -> Result<UncertaintyReport> {
    let mut report = moment_product("shw", f, p, cfg, tol)?;
    let breakdown = e_pf(f, p, cfg)?;
    let (u, v) = shw_vectors(f, p, cfg)?;
    let a_star = saturating_a(&u, &v)?;
    let a = match mode {
        AMode::Zero => 0.0,
        AMode::Fixed(a) => *a,
        AMode::Gram(h) => match h {
            Some(h) => shw_a(&u, &v, h)?,
            None => shw_a(&u, &v, &default_h(f.grid(), cfg.t_m)?)?,
        },
        AMode::Saturating => a_star,
    };
    let breakdown = breakdown.with_a(a)?;
    report.e_pf = Some(breakdown.e_pf);
    report.a_mode = Some(mode.to_string());
    report.a = Some(a);
    report.a_star = Some(a_star);
    report.e_star = Some(breakdown.e_star);
    report.a_admissible = Some(a.abs() <= a_star * (1.0 + 1e-9));
    report.set_hpw(breakdown.hpw_rhs);
    report.set_shw(breakdown.shw_rhs);
    if *mode == AMode::Saturating {
        let c = abs_inner(&u, &v)?;
        let gram = p.b().powi(2 * cfg.p as i32) * (c * c + a_star * a_star);
        report.gram_gap = Some(rel_gap(report.lhs.powi(2 * cfg.p as i32), gram));
    }
    Ok(report)
}

fn holder_step(mu_p: f64, energy: f64, mu_2: f64, p: usize, tol: f64) -> HolderStep {
    let e = 2.0 / p as f64;
    let lhs = mu_p.powf(e) * energy.powf(1.0 - e);
    HolderStep {
        lhs,
        mu_2,
        passed: lhs - mu_2 >= -tol * lhs.abs().max(mu_2.abs()),
    }
}

/// Checks `(mu_p,time mu_p,spec)^{1/p} >= (|b|/2) (E^2)^{1/p}` for `p >= 2`,
/// logging the Holder step `mu_p^{2/p} E^{1-2/p} >= mu_2` on both domains.
pub fn verify_hw(f: &SampledSignal, p: &OlctParams, order: usize, t_m: f64, xi_m: f64, tol: f64) -> Result<UncertaintyReport> {
    if order < 2 {
        return Err(Error::invalid("p", format!("the Holder-type bound needs p >= 2, got {order}")));
    }
    check_tol(tol)?;
    p.require_integral("the bounds")?;
    let spectrum = default_spectrum(f, p)?;
    let mu_t = abs_moment_p(f, order as u32, t_m)?;
    let mu_s = abs_moment_p(&spectrum, order as u32, xi_m)?;
    let mut report = UncertaintyReport::blank("hw", order, *f.grid(), *p, tol);
    report.mu_time = mu_t;
    report.mu_spec = mu_s;
    report.lhs = (mu_t * mu_s).powf(1.0 / order as f64);
    let energy = f.energy();
    report.set_hw(hw_rhs(energy, p.b(), order)?);
    report.holder = Some(HolderSteps {
        time: holder_step(mu_t, energy, abs_moment_p(f, 2, t_m)?, order, tol),
        spectral: holder_step(mu_s, spectrum.energy(), abs_moment_p(&spectrum, 2, xi_m)?, order, tol),
    });
    report.ppr_gap = ppr_check_with(f, p, 1, xi_m, &spectrum)?.rel_gap;
    report.parseval_gap = parseval_gap(f, &spectrum)?;
    Ok(report)
}

/// `f(t) = c0 exp(-c_p (t - t_m)^2) exp(j (beta t - (a/2b) t^2))`, the signal
/// whose `g_beta` is a real Gaussian and which attains the `p = 1` bound
/// with unit weight.
pub fn minimizer_signal(c0: f64, c_p: f64, t_m: f64, xi_m: f64, p: &OlctParams) -> Result<AnalyticSignal> {
    if !(c_p > 0.0) || !c_p.is_finite() {
        return Err(Error::invalid("c_p", format!("must be positive, got {c_p}")));
    }
    if c0 == 0.0 || !c0.is_finite() {
        return Err(Error::invalid("c0", format!("must be finite and nonzero, got {c0}")));
    }
    let rate = p.chirp_rate()?;
    let beta = beta(p, xi_m)?;
    let phase0 = if c0 < 0.0 { std::f64::consts::PI } else { 0.0 };
    Ok(AnalyticSignal::quadratic_exp(
        format!("minimizer(c0={c0}, c_p={c_p}, t_m={t_m})"),
        Complex64::new(-c_p, -rate),
        Complex64::new(2.0 * c_p * t_m, beta),
        Complex64::new(c0.abs().ln() - c_p * t_m * t_m, phase0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::g_beta;
    use crate::olct::ft_params;
    use crate::signal::{exp_weight, gaussian_chirp, Grid};

    fn grid() -> Grid {
        Grid::new(-8.0, 8.0, 4097).unwrap()
    }

    fn example2_signal() -> SampledSignal {
        gaussian_chirp(2.0, 6.0).unwrap().sample(&grid()).unwrap()
    }

    fn example2_cfg() -> HpwConfig {
        HpwConfig::new(1, 0.0, 0.0, exp_weight(2.0).unwrap()).unwrap()
    }

    #[test]
    fn example2_hpw_passes() {
        let r = verify_hpw(&example2_signal(), &OlctParams::example2(), &example2_cfg(), INEQUALITY_TOL).unwrap();
        assert_eq!(r.passed.hpw, Some(true));
        // e b sqrt(5 pi / 8), frozen from mpmath.
        assert!((r.lhs - 0.19044932215258813).abs() < 1e-9 * r.lhs, "{}", r.lhs);
        assert!(r.ppr_gap < 1e-8 && r.parseval_gap < 1e-8);
    }

    #[test]
    fn example2_saturating_equality() {
        let r = verify_shw(&example2_signal(), &OlctParams::example2(), &example2_cfg(), &AMode::Saturating, INEQUALITY_TOL).unwrap();
        let shw = r.rhs_shw.unwrap();
        assert!((r.lhs - shw).abs() <= 1e-6 * r.lhs, "{} vs {shw}", r.lhs);
        assert!(r.gram_gap.unwrap() <= 1e-6);
        assert_eq!(r.a_admissible, Some(true));
        assert!(shw > r.rhs_hpw.unwrap());
    }

    #[test]
    fn zero_a_matches_hpw_exactly() {
        let r = verify_shw(&example2_signal(), &OlctParams::example2(), &example2_cfg(), &AMode::Zero, INEQUALITY_TOL).unwrap();
        assert_eq!(r.rhs_shw, r.rhs_hpw);
    }

    #[test]
    fn oversized_a_is_flagged_not_violated() {
        let r = verify_shw(&example2_signal(), &OlctParams::example2(), &example2_cfg(), &AMode::Fixed(1e3), INEQUALITY_TOL).unwrap();
        assert_eq!(r.passed.shw, Some(false));
        assert_eq!(r.a_admissible, Some(false));
        assert!(!r.theorem_violated());
    }

    #[test]
    fn gram_mode_is_sound() {
        let r = verify_shw(&example2_signal(), &OlctParams::example2(), &example2_cfg(), &AMode::Gram(None), INEQUALITY_TOL).unwrap();
        assert_eq!(r.passed.shw, Some(true));
        assert!(r.rhs_shw.unwrap() >= r.rhs_hpw.unwrap());
        let bad = SampledSignal::from_fn(grid(), |t| Complex64::new((-t * t).exp(), 0.0)).unwrap();
        assert!(matches!(
            verify_shw(&example2_signal(), &OlctParams::example2(), &example2_cfg(), &AMode::Gram(Some(bad)), 1e-6),
            Err(Error::Unnormalized(_))
        ));
    }

    #[test]
    fn minimizer_saturates_hpw() {
        for (t_m, xi_m, p) in [
            (0.0, 0.0, OlctParams::example2()),
            (0.4, 0.3, OlctParams::new(0.6, 0.5, -0.16, 1.5333333333333332, 0.0, 0.2).unwrap()),
            (-0.2, 1.0, ft_params()),
        ] {
            let f = minimizer_signal(1.0, 1.0, t_m, xi_m, &p).unwrap().sample(&grid()).unwrap();
            let r = verify_hpw(&f, &p, &HpwConfig::unweighted(1, t_m, xi_m).unwrap(), INEQUALITY_TOL).unwrap();
            assert!(r.rel_slack.hpw.unwrap().abs() <= EQUALITY_TOL, "{:?}", r.rel_slack);
            assert!(r.rel_slack.hpw.unwrap().abs() <= 1e-8);
        }
    }

    #[test]
    fn minimizer_shape() {
        let p = OlctParams::example2();
        let m = minimizer_signal(1.0, 1.0, 0.0, 0.0, &p).unwrap();
        let f = gaussian_chirp(2.0, 6.0).unwrap();
        for t in [-1.0, 0.0, 0.3, 2.0] {
            assert!((m.eval(t) - f.eval(t)).norm() < 1e-15);
        }
        let shifted = minimizer_signal(-2.0, 0.5, 0.7, 0.4, &ft_params()).unwrap().sample(&grid()).unwrap();
        let g = g_beta(&shifted, &ft_params(), 0.4).unwrap();
        for (t, v) in grid().points().zip(g.values()) {
            assert!((v - Complex64::new(-2.0 * (-0.5 * (t - 0.7f64).powi(2)).exp(), 0.0)).norm() < 1e-12);
        }
        assert!(minimizer_signal(1.0, 0.0, 0.0, 0.0, &p).is_err());
    }

    #[test]
    fn hw_and_holder_steps() {
        let f = example2_signal();
        for order in 2..=4 {
            let r = verify_hw(&f, &OlctParams::example3(), order, 0.0, 0.0, INEQUALITY_TOL).unwrap();
            assert_eq!(r.passed.hw, Some(true));
            let h = r.holder.unwrap();
            assert!(h.time.passed && h.spectral.passed);
            if order == 2 {
                assert!((h.time.lhs - h.time.mu_2).abs() < 1e-12 * h.time.mu_2);
            }
        }
        assert!(verify_hw(&f, &OlctParams::example3(), 1, 0.0, 0.0, INEQUALITY_TOL).is_err());
    }

    #[test]
    fn scale_covariance() {
        let cfg = HpwConfig::unweighted(1, 0.0, 0.0).unwrap();
        let f = gaussian_chirp(1.5, 2.0).unwrap().sample(&grid()).unwrap();
        let p = OlctParams::example3();
        let a = verify_hpw(&f, &p, &cfg, INEQUALITY_TOL).unwrap();
        let b = verify_hpw(&f.scale(Complex64::new(3.0, 0.0)), &p, &cfg, INEQUALITY_TOL).unwrap();
        assert!((b.lhs - 9.0 * a.lhs).abs() < 1e-12 * b.lhs);
        assert!((b.rhs_hpw.unwrap() - 9.0 * a.rhs_hpw.unwrap()).abs() < 1e-12 * b.lhs);
        assert!((a.rel_slack.hpw.unwrap() - b.rel_slack.hpw.unwrap()).abs() < 1e-10);
    }
}
