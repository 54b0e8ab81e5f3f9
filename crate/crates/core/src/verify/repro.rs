//! Reproduction helpers: the Gaussian-chirp family with exponential weight,
//! `r`-sweeps of the moment product against the sharpened bound, energy
//! densities, and the Fourier special case in the `exp(-2 pi j sigma t)`
//! convention.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::report::format_f64;
use super::{verify_hpw, verify_shw, AMode, INEQUALITY_TOL};
use crate::bounds::{e_pf, EpfReading, HpwConfig};
use crate::moments::{bandwidth, default_spectrum, fourier_sigma, spectral_moment_2p, time_moment_2p, MomentSpec};
use crate::olct::{ft_params, OlctParams};
use crate::signal::{exp_weight, gaussian_chirp, AnalyticSignal, Grid, SampledSignal, WeightFunction};
use crate::{Error, Result};

/// Default half-width and spacing of the time grid.
const BASE_HALF_WIDTH: f64 = 8.0;
const BASE_SAMPLES_PER_UNIT: f64 = 256.0;

/// Time grid for the family `exp(-(r/2) t^2)` with weight `exp(-r t)`:
/// `[-8, 8] x 4097` when that covers the weighted tails, otherwise wider at
/// the same spacing.
pub fn example1_grid(r: f64) -> Result<Grid> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("must be positive, got {r}")));
    }
    // The weighted density peaks at t = -1; its tail and the spectral-edge
    // test on g both need r (L - 1)^2 well above 40.
    let half = BASE_HALF_WIDTH.max(1.5 + (40.0 / r).sqrt());
    let n = (2.0 * half * BASE_SAMPLES_PER_UNIT).ceil() as usize + 1;
    Grid::new(-half, half, n)
}

/// `f(t) = exp(-(r/2) t^2) exp(-j (a/2b) t^2)` and `w(t) = exp(-r t)`.
pub fn example1_signal(r: f64, p: &OlctParams) -> Result<(AnalyticSignal, WeightFunction)> {
    Ok((gaussian_chirp(r, p.chirp_rate()?)?, exp_weight(r)?))
}

/// Which A-term a sweep compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScenario {
    /// Gram A-term for the default `h`.
    Fig1a,
    /// `A = 0`.
    Fig1b,
    /// `A = 1`.
    Fig1c,
    /// `A = 1` with `|b| = 1` enforced.
    Fig2,
}

impl SweepScenario {
    pub const ALL: [SweepScenario; 4] = [SweepScenario::Fig1a, SweepScenario::Fig1b, SweepScenario::Fig1c, SweepScenario::Fig2];

    pub fn a_mode(self) -> AMode {
        match self {
            SweepScenario::Fig1a => AMode::Gram(None),
            SweepScenario::Fig1b => AMode::Zero,
            SweepScenario::Fig1c | SweepScenario::Fig2 => AMode::Fixed(1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepScenario::Fig1a => "fig1a",
            SweepScenario::Fig1b => "fig1b",
            SweepScenario::Fig1c => "fig1c",
            SweepScenario::Fig2 => "fig2",
        }
    }
}

impl fmt::Display for SweepScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepScenario::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid("scenario", format!("unknown sweep `{s}` (expected fig1a, fig1b, fig1c or fig2)")))
    }
}

/// One `r` of a sweep: `Q1` is the moment product, `Q2` the sharpened bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    pub q1: f64,
    pub q2: f64,
    pub hpw_rhs: f64,
    pub e_pf: f64,
    pub a: f64,
    pub a_star: f64,
}

/// Evaluates `Q1`, `Q2` at `p = 1`, `t_m = xi_m = 0` for every `r`, in input order.
pub fn sweep_r(r_values: &[f64], scenario: SweepScenario, p: &OlctParams) -> Result<Vec<SweepRow>> {
    if scenario == SweepScenario::Fig2 && p.b().abs() != 1.0 {
        return Err(Error::invalid("b", format!("the fig2 sweep is defined for |b| = 1, got {}", p.b())));
    }
    if let Some(bad) = r_values.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
        return Err(Error::invalid("r", format!("sweep values must be positive, got {bad}")));
    }
    let mode = scenario.a_mode();
    r_values
        .par_iter()
        .map(|&r| {
            let (f, w) = example1_signal(r, p)?;
            let f = f.sample(&example1_grid(r)?)?;
            let cfg = HpwConfig::new(1, 0.0, 0.0, w)?;
            let rep = verify_shw(&f, p, &cfg, &mode, INEQUALITY_TOL)?;
            Ok(SweepRow {
                r,
                q1: rep.lhs,
                q2: rep.rhs_shw.expect("shw report"),
                hpw_rhs: rep.rhs_hpw.expect("shw report"),
                e_pf: rep.e_pf.expect("shw report"),
                a: rep.a.expect("shw report"),
                a_star: rep.a_star.expect("shw report"),
            })
        })
        .collect()
}

/// CSV with header `r,q1,q2,q1_minus_q2,hpw_rhs,e_pf,a,a_star`.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("r,q1,q2,q1_minus_q2,hpw_rhs,e_pf,a,a_star\n");
    for row in rows {
        let cells = [row.r, row.q1, row.q2, row.q1 - row.q2, row.hpw_rhs, row.e_pf, row.a, row.a_star];
        out.push_str(&cells.map(format_f64).join(","));
        out.push('\n');
    }
    out
}

/// Sampled densities `|f|^2`, `|w f|^2`, `|f_hat|^2` (in `sigma`, the
/// `exp(-2 pi j sigma t)` convention) and `|O|^2`, with the second central
/// moment of each as its concentration measure.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyDensities {
    pub time: Grid,
    pub signal: Vec<f64>,
    pub weighted: Vec<f64>,
    pub sigma: Grid,
    pub fourier: Vec<f64>,
    pub xi: Grid,
    pub olct: Vec<f64>,
    /// Second central moments of the four densities, in the order above.
    pub spread: [f64; 4],
}

fn central_spread(grid: &Grid, density: &[f64]) -> Result<f64> {
    let s = SampledSignal::from_real(*grid, &density.iter().map(|d| d.sqrt()).collect::<Vec<_>>())?;
    let e = s.energy();
    if !(e > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let mean = crate::signal::integrate_real(grid, &grid.points().zip(density).map(|(x, d)| x * d).collect::<Vec<_>>()) / e;
    let m2 = time_moment_2p(&s, &MomentSpec::unweighted(1, mean, 0.0)?)?;
    Ok(m2 / e)
}

/// Spectral grid for [`fourier_sigma`]: the bandwidth window of `f` mapped to `sigma = w / (2 pi)`.
fn sigma_grid(f: &SampledSignal, n: usize) -> Result<Grid> {
    let (w0, sigma) = bandwidth(f)?;
    let half = (crate::moments::SPECTRAL_WINDOW_SIGMAS * sigma).min(PI / f.grid().dt() - w0.abs());
    Grid::centered(w0 / (2.0 * PI), half / (2.0 * PI), n)
}

pub fn energy_densities(f: &SampledSignal, omega: &WeightFunction, p: &OlctParams) -> Result<EnergyDensities> {
    let time = *f.grid();
    let signal = f.abs_sq();
    let weighted: Vec<f64> = time.points().zip(&signal).map(|(t, d)| omega.eval(t).powi(2) * d).collect();
    let sigma = sigma_grid(f, f.len())?;
    let fourier = fourier_sigma(f, &sigma)?.abs_sq();
    let o = default_spectrum(f, p)?;
    let xi = *o.grid();
    let olct = o.abs_sq();
    let spread = [
        central_spread(&time, &signal)?,
        central_spread(&time, &weighted)?,
        central_spread(&sigma, &fourier)?,
        central_spread(&xi, &olct)?,
    ];
    Ok(EnergyDensities {
        time,
        signal,
        weighted,
        sigma,
        fourier,
        xi,
        olct,
        spread,
    })
}

/// The HPW product and bound under `J = (0, 1, -1, 0 | 0, 0)`, computed
/// once through the transform and once in the `sigma` convention
/// (`xi = 2 pi sigma`); the latter is mapped back by the factor `2 pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtReduction {
    pub olct_lhs: f64,
    pub olct_rhs: f64,
    pub fourier_lhs: f64,
    pub fourier_rhs: f64,
}

impl FtReduction {
    pub fn max_rel_gap(&self) -> f64 {
        crate::moments::rel_gap(self.olct_lhs, self.fourier_lhs).max(crate::moments::rel_gap(self.olct_rhs, self.fourier_rhs))
    }
}

pub fn ft_reduction(f: &SampledSignal, cfg: &HpwConfig) -> Result<FtReduction> {
    let j = ft_params();
    let olct = verify_hpw(f, &j, cfg, INEQUALITY_TOL)?;
    let sigma = sigma_grid(f, f.len())?;
    let hat = fourier_sigma(f, &sigma)?;
    let sigma_m = cfg.xi_m / (2.0 * PI);
    let mu_t = time_moment_2p(f, &cfg.moment_spec())?;
    let mu_s = spectral_moment_2p(&hat, cfg.p, sigma_m)?;
    let inv = 1.0 / cfg.p as f64;
    let lhs = (mu_t * mu_s).powf(0.5 * inv);
    let mut fourier_cfg = cfg.clone();
    fourier_cfg.reading = EpfReading::Fourier;
    let e = e_pf(f, &j, &fourier_cfg)?.e_pf;
    let rhs = e.abs().powf(inv) / (2.0 * PI * 2f64.powf(inv));
    Ok(FtReduction {
        olct_lhs: olct.lhs,
        olct_rhs: olct.rhs_hpw.expect("hpw report"),
        fourier_lhs: 2.0 * PI * lhs,
        fourier_rhs: 2.0 * PI * rhs,
    })
}
