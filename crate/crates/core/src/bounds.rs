//! Lower bounds for the uncertainty products: the `2p`-order HPW constant
//! `E_{p,f}` assembled from integration-by-parts terms, the sharpened
//! `E* = sqrt(E^2 + 4A^2)` with its Gram-determinant `A`, the Holder-type
//! bound on absolute moments, closed forms for the Gaussian-chirp family,
//! and pointwise validators for the two differential identities the
//! construction rests on.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::moments::{beta, chirped, g_beta, MomentSpec, MAX_ORDER};
use crate::olct::OlctParams;
use crate::signal::{
    check_coverage, derivative, integrate_real, AnalyticSignal, DiffMethod, Grid, SampledSignal,
    WeightFunction,
};
use crate::{Error, Result};

/// Tolerance on `||h||^2 - 1` for the auxiliary function of the A-term.
pub const H_NORM_TOLERANCE: f64 = 1e-8;

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64)
}

fn parity(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `D_q = (-1)^q p/(p-q) C(p-q, q)` for `0 <= q <= floor(p/2)`.
pub fn coeff_dq(p: usize, q: usize) -> Result<f64> {
    if p == 0 || q > p / 2 {
        return Err(Error::invalid("q", format!("need p >= 1 and q <= p/2, got p = {p}, q = {q}")));
    }
    Ok(parity(q) * p as f64 / (p - q) as f64 * binomial(p - q, q))
}

/// `B_{qn} = C(q, n)^2 alpha^{2(q-n)}`.
pub fn coeff_bqn(q: usize, n: usize, alpha: f64) -> Result<f64> {
    if n > q {
        return Err(Error::invalid("n", format!("need n <= q, got q = {q}, n = {n}")));
    }
    Ok(binomial(q, n).powi(2) * alpha.powi(2 * (q - n) as i32))
}

/// `C_{qiz} = s C(q, i) C(q, z) alpha^{2q-i-z}` for `i < z <= q`.
pub fn coeff_cqiz(q: usize, i: usize, z: usize, alpha: f64, s: f64) -> Result<f64> {
    if !(i < z && z <= q) {
        return Err(Error::invalid("i, z", format!("need i < z <= q, got q = {q}, i = {i}, z = {z}")));
    }
    if s.abs() != 1.0 {
        return Err(Error::invalid("s", format!("sign must be +1 or -1, got {s}")));
    }
    Ok(s * binomial(q, i) * binomial(q, z) * alpha.powi((2 * q - i - z) as i32))
}

/// `e^{j pi x}` for the half-integer `x = q - (i + z)/2`.
fn half_power(q: usize, i: usize, z: usize) -> Complex64 {
    // 2x = 2q - i - z is an integer, so the factor is a power of j.
    match (2 * q + 4 - (i + z) % 4) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Signs `s_{qi}` of the cross terms in the Lagrange-type expansion.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum SignConvention {
    /// `s_{qi} = (-1)^{q-i}`, the assignment under which the expansion is exact.
    #[default]
    Alternating,
    AllPositive,
    /// Explicit `(q, i) -> s`; missing entries are `+1`.
    Custom(BTreeMap<(usize, usize), i8>),
}

impl SignConvention {
    pub fn sign(&self, q: usize, i: usize) -> f64 {
        match self {
            SignConvention::Alternating => parity(q - i),
            SignConvention::AllPositive => 1.0,
            SignConvention::Custom(map) => map.get(&(q, i)).map_or(1.0, |&s| if s < 0 { -1.0 } else { 1.0 }),
        }
    }
}

/// Sign carried by the integrated-by-parts terms `I_{qn}`, `I_{qiz}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ImSign {
    /// `(-1)^{p-2q}`, from moving `p - 2q` derivatives onto `w_p`.
    #[default]
    ParityP,
    /// `(-1)^{q-2p}`.
    ParityQ,
}

/// Which signal and demodulation frequency enter `E_{p,f}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EpfReading {
    /// `g = exp(j (a/2b) t^2) f` with `alpha = beta = (xi_m - tau)/b`.
    #[default]
    Chirped,
    /// `f` itself with `alpha = 2 pi sigma_m`, `sigma_m = (xi_m - tau)/(2 pi b)`.
    Fourier,
}

/// Moment order, centres, weight and sign conventions for `E_{p,f}`.
#[derive(Debug, Clone)]
pub struct HpwConfig {
    pub p: usize,
    pub t_m: f64,
    pub xi_m: f64,
    pub omega: WeightFunction,
    pub signs: SignConvention,
    pub im_sign: ImSign,
    pub reading: EpfReading,
}

impl HpwConfig {
    pub fn new(p: usize, t_m: f64, xi_m: f64, omega: WeightFunction) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("p", "the bounds need p >= 1"));
        }
        let spec = MomentSpec::new(p, t_m, xi_m, omega)?;
        Ok(HpwConfig {
            p: spec.p,
            t_m: spec.t_m,
            xi_m: spec.xi_m,
            omega: spec.omega,
            signs: SignConvention::default(),
            im_sign: ImSign::default(),
            reading: EpfReading::default(),
        })
    }

    pub fn unweighted(p: usize, t_m: f64, xi_m: f64) -> Result<Self> {
        HpwConfig::new(p, t_m, xi_m, WeightFunction::unit())
    }

    pub fn moment_spec(&self) -> MomentSpec {
        MomentSpec {
            p: self.p,
            t_m: self.t_m,
            xi_m: self.xi_m,
            omega: self.omega.clone(),
        }
    }

    fn term_sign(&self, q: usize) -> f64 {
        match self.im_sign {
            ImSign::ParityP => parity(self.p),
            ImSign::ParityQ => parity(q),
        }
    }

    fn check_q(&self, q: usize) -> Result<()> {
        if q > self.p / 2 {
            return Err(Error::invalid("q", format!("need q <= p/2 = {}, got {q}", self.p / 2)));
        }
        Ok(())
    }
}

/// `m`-th derivative of `w_p(t) = (t - t_m)^p w(t)` by the Leibniz rule.
pub fn omega_p_deriv(cfg: &HpwConfig, m: usize, t: f64) -> Result<f64> {
    cfg.omega.check_order(m)?;
    Ok(omega_p_raw(cfg, m, t))
}

fn omega_p_raw(cfg: &HpwConfig, m: usize, t: f64) -> f64 {
    let x = t - cfg.t_m;
    (0..=m.min(cfg.p))
        .map(|k| binomial(m, k) * falling(cfg.p, k) * x.powi((cfg.p - k) as i32) * cfg.omega.deriv_raw(m - k, t))
        .sum()
}

fn omega_p_samples(cfg: &HpwConfig, m: usize, grid: &Grid) -> Result<Vec<f64>> {
    cfg.omega.check_order(m)?;
    Ok(grid.points().map(|t| omega_p_raw(cfg, m, t)).collect())
}

/// Derivatives `s, s', ..., s^{(k)}` of a sampled signal.
fn derivative_table(s: &SampledSignal, k: usize) -> Result<Vec<SampledSignal>> {
    let mut table = vec![s.clone()];
    for order in 1..=k {
        table.push(derivative(s, order, DiffMethod::Spectral)?);
    }
    Ok(table)
}

/// Signed integral `sign * int w * density`, with coverage judged on the
/// envelope `|w| * envelope`.
fn boundary_checked(grid: &Grid, w: &[f64], density: &[f64], envelope: &[f64], sign: f64) -> Result<f64> {
    let env: Vec<f64> = w.iter().zip(envelope).map(|(a, b)| a.abs() * b).collect();
    check_coverage("integration-by-parts", &env)?;
    let integrand: Vec<f64> = w.iter().zip(density).map(|(a, b)| a * b).collect();
    Ok(sign * integrate_real(grid, &integrand))
}

fn i_qn_table(cfg: &HpwConfig, table: &[SampledSignal], w: &[f64], q: usize, n: usize) -> Result<f64> {
    let density: Vec<f64> = table[n].abs_sq();
    boundary_checked(table[0].grid(), w, &density, &density, cfg.term_sign(q))
}

fn i_qiz_table(cfg: &HpwConfig, table: &[SampledSignal], w: &[f64], q: usize, i: usize, z: usize) -> Result<f64> {
    let phase = half_power(q, i, z);
    let (gi, gz) = (table[i].values(), table[z].values());
    let density: Vec<f64> = gi.iter().zip(gz).map(|(a, b)| (phase * a * b.conj()).re).collect();
    let envelope: Vec<f64> = gi.iter().zip(gz).map(|(a, b)| a.norm() * b.norm()).collect();
    boundary_checked(table[0].grid(), w, &density, &envelope, cfg.term_sign(q))
}

/// `I_{qn} = sign * int w_p^{(p-2q)} |g^{(n)}|^2`.
pub fn i_qn(g: &SampledSignal, cfg: &HpwConfig, q: usize, n: usize) -> Result<f64> {
    cfg.check_q(q)?;
    if n > q {
        return Err(Error::invalid("n", format!("need n <= q, got q = {q}, n = {n}")));
    }
    let w = omega_p_samples(cfg, cfg.p - 2 * q, g.grid())?;
    i_qn_table(cfg, &derivative_table(g, n)?, &w, q, n)
}

/// `I_{qiz} = sign * int w_p^{(p-2q)} Re(e^{j pi (q - (i+z)/2)} g^{(i)} conj(g^{(z)}))`
/// for `i < z <= q`.
pub fn i_qiz(g: &SampledSignal, cfg: &HpwConfig, q: usize, i: usize, z: usize) -> Result<f64> {
    cfg.check_q(q)?;
    if !(i < z && z <= q) {
        return Err(Error::invalid("i, z", format!("need i < z <= q, got q = {q}, i = {i}, z = {z}")));
    }
    let w = omega_p_samples(cfg, cfg.p - 2 * q, g.grid())?;
    i_qiz_table(cfg, &derivative_table(g, z)?, &w, q, i, z)
}

/// One summand `D_q F_q` of `E_{p,f}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QTerm {
    pub q: usize,
    pub d_q: f64,
    pub f_q: f64,
}

/// `E_{p,f}`, the A-term, and the two bounds built from them.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundBreakdown {
    pub p: usize,
    pub b: f64,
    pub e_pf: f64,
    pub a: f64,
    pub e_star: f64,
    pub hpw_rhs: f64,
    pub shw_rhs: f64,
    pub per_q_terms: Vec<QTerm>,
}

impl BoundBreakdown {
    fn new(p: usize, b: f64, e_pf: f64, per_q_terms: Vec<QTerm>) -> Result<Self> {
        let hpw = hpw_rhs(e_pf, b, p)?;
        Ok(BoundBreakdown {
            p,
            b,
            e_pf,
            a: 0.0,
            e_star: e_pf.abs(),
            hpw_rhs: hpw,
            shw_rhs: hpw,
            per_q_terms,
        })
    }

    /// Replaces the A-term; `e_star` and `shw_rhs` follow.
    pub fn with_a(mut self, a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::invalid("A", "must be finite"));
        }
        self.a = a;
        self.e_star = e_star(self.e_pf, a);
        self.shw_rhs = shw_rhs(self.e_star, self.b, self.p)?;
        Ok(self)
    }
}

/// `sqrt(E^2 + 4 A^2)`.
pub fn e_star(e_pf: f64, a: f64) -> f64 {
    e_pf.hypot(2.0 * a)
}

/// The signal and demodulation frequency selected by `cfg.reading`.
fn epf_signal(f: &SampledSignal, p: &OlctParams, cfg: &HpwConfig) -> Result<(SampledSignal, f64)> {
    let alpha = beta(p, cfg.xi_m)?;
    match cfg.reading {
        EpfReading::Chirped => Ok((chirped(f, p)?, alpha)),
        EpfReading::Fourier => Ok((f.clone(), alpha)),
    }
}

/// `E_{p,f} = sum_q D_q F_q`, `F_q = sum_n B_{qn} I_{qn} + 2 sum_{i<z} C_{qiz} I_{qiz}`.
pub fn e_pf(f: &SampledSignal, p: &OlctParams, cfg: &HpwConfig) -> Result<BoundBreakdown> {
    let (g, alpha) = epf_signal(f, p, cfg)?;
    cfg.omega.check_order(cfg.p)?;
    let table = derivative_table(&g, cfg.p / 2)?;
    let mut terms = Vec::with_capacity(cfg.p / 2 + 1);
    for q in 0..=cfg.p / 2 {
        let w = omega_p_samples(cfg, cfg.p - 2 * q, g.grid())?;
        let mut f_q = 0.0;
        for n in 0..=q {
            f_q += coeff_bqn(q, n, alpha)? * i_qn_table(cfg, &table, &w, q, n)?;
        }
        for i in 0..q {
            for z in i + 1..=q {
                let c = coeff_cqiz(q, i, z, alpha, cfg.signs.sign(q, i))?;
                f_q += 2.0 * c * i_qiz_table(cfg, &table, &w, q, i, z)?;
            }
        }
        terms.push(QTerm {
            q,
            d_q: coeff_dq(cfg.p, q)?,
            f_q,
        });
    }
    let e = terms.iter().map(|t| t.d_q * t.f_q).sum();
    BoundBreakdown::new(cfg.p, p.b(), e, terms)
}

/// `2 Re int w_p conj(g_beta) g_beta^{(p)}`, the quantity `E_{p,f}` equals
/// under the default conventions, by direct differentiation.
pub fn e_pf_direct(f: &SampledSignal, p: &OlctParams, cfg: &HpwConfig) -> Result<f64> {
    let g = g_beta(f, p, cfg.xi_m)?;
    let dg = derivative(&g, cfg.p, DiffMethod::Spectral)?;
    let w = omega_p_samples(cfg, 0, g.grid())?;
    let density: Vec<f64> = g
        .values()
        .iter()
        .zip(dg.values())
        .map(|(a, b)| 2.0 * (a.conj() * b).re)
        .collect();
    let envelope: Vec<f64> = g.values().iter().zip(dg.values()).map(|(a, b)| a.norm() * b.norm()).collect();
    boundary_checked(g.grid(), &w, &density, &envelope, 1.0)
}

/// `int [(t - t_m) w(t)]' |f|^2 dt`, the closed form of `E_{1,f}` up to sign.
pub fn e1_closed_form(f: &SampledSignal, t_m: f64, omega: &WeightFunction) -> Result<f64> {
    omega.check_order(1)?;
    let integrand: Vec<f64> = f
        .grid()
        .points()
        .zip(f.values())
        .map(|(t, v)| (omega.deriv_raw(0, t) + (t - t_m) * omega.deriv_raw(1, t)) * v.norm_sqr())
        .collect();
    check_coverage("first-order integrand", &integrand)?;
    Ok(integrate_real(f.grid(), &integrand))
}

/// `u = w (t - t_m)^p g_beta` and `v = g_beta^{(p)}`, the pair whose
/// Cauchy-Schwarz product bounds the moment product.
pub fn shw_vectors(f: &SampledSignal, p: &OlctParams, cfg: &HpwConfig) -> Result<(SampledSignal, SampledSignal)> {
    let g = g_beta(f, p, cfg.xi_m)?;
    let v = derivative(&g, cfg.p, DiffMethod::Spectral)?;
    let u = g.map(|t, x| x * (cfg.omega.eval(t) * (t - cfg.t_m).powi(cfg.p as i32)))?;
    Ok((u, v))
}

fn abs_product(x: &SampledSignal, y: &SampledSignal) -> Result<f64> {
    if x.grid() != y.grid() {
        return Err(Error::GridMismatch);
    }
    let integrand: Vec<f64> = x.values().iter().zip(y.values()).map(|(a, b)| a.norm() * b.norm()).collect();
    Ok(integrate_real(x.grid(), &integrand))
}

/// `(|u|, |v|) = int |u| |v|`.
pub fn abs_inner(u: &SampledSignal, v: &SampledSignal) -> Result<f64> {
    abs_product(u, v)
}

/// `A = ||u|| x0 - ||v|| y0` with `x0 = int |v||h|`, `y0 = int |u||h|`.
pub fn shw_a(u: &SampledSignal, v: &SampledSignal, h: &SampledSignal) -> Result<f64> {
    let hh = h.energy();
    if (hh - 1.0).abs() > H_NORM_TOLERANCE {
        return Err(Error::Unnormalized(hh));
    }
    let x0 = abs_product(v, h)?;
    let y0 = abs_product(u, h)?;
    Ok(u.energy().sqrt() * x0 - v.energy().sqrt() * y0)
}

/// Unit-norm Gaussian `exp(-(t - t_m)^2 / 2) / pi^{1/4}`, renormalised on
/// the grid.
pub fn default_h(grid: &Grid, t_m: f64) -> Result<SampledSignal> {
    let h = SampledSignal::from_fn(*grid, |t| Complex64::new((-(t - t_m).powi(2) / 2.0).exp() / PI.powf(0.25), 0.0))?;
    let e = h.energy();
    if !(e > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    Ok(h.scale(Complex64::new(e.sqrt().recip(), 0.0)))
}

/// Largest admissible A: `A*^2 = ||u||^2 ||v||^2 - (|u|, |v|)^2`.
pub fn saturating_a(u: &SampledSignal, v: &SampledSignal) -> Result<f64> {
    let c = abs_product(u, v)?;
    Ok((u.energy() * v.energy() - c * c).max(0.0).sqrt())
}

fn check_b(b: f64) -> Result<()> {
    if b == 0.0 || !b.is_finite() {
        return Err(Error::DegenerateBranch("the bounds need b != 0"));
    }
    Ok(())
}

/// `(|b| / 2^{1/p}) |E|^{1/p}`.
pub fn hpw_rhs(e_pf: f64, b: f64, p: usize) -> Result<f64> {
    check_b(b)?;
    if p == 0 {
        return Err(Error::invalid("p", "need p >= 1"));
    }
    let inv = 1.0 / p as f64;
    Ok(b.abs() / 2f64.powf(inv) * e_pf.abs().powf(inv))
}

/// `(|b| / 2^{1/p}) (E*)^{1/p}`.
pub fn shw_rhs(e_star: f64, b: f64, p: usize) -> Result<f64> {
    if e_star < 0.0 {
        return Err(Error::invalid("e_star", "must be nonnegative"));
    }
    hpw_rhs(e_star, b, p)
}

/// `(|b| / 2) (E^2)^{1/p}` for `p >= 2`.
pub fn hw_rhs(energy: f64, b: f64, p: usize) -> Result<f64> {
    check_b(b)?;
    if p < 2 {
        return Err(Error::invalid("p", format!("the Holder-type bound needs p >= 2, got {p}")));
    }
    if energy < 0.0 {
        return Err(Error::invalid("energy", "must be nonnegative"));
    }
    Ok(b.abs() / 2.0 * (energy * energy).powf(1.0 / p as f64))
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("must be positive, got {r}")));
    }
    Ok(())
}

/// `(b^2/2) pi e^r (1/(2r) + 1)`: the squared moment product of the
/// Gaussian-chirp family at `p = 1`.
pub fn table1_bound_sharpened(r: f64, b: f64) -> Result<f64> {
    check_r(r)?;
    Ok(b * b / 2.0 * PI * r.exp() * (0.5 / r + 1.0))
}

/// `(b^2/4)(pi/r) e^{r/2} (1 + r/2)^2`: the squared HPW bound of the same family.
pub fn table1_bound_reference(r: f64, b: f64) -> Result<f64> {
    check_r(r)?;
    Ok(b * b / 4.0 * PI / r * (r / 2.0).exp() * (1.0 + r / 2.0).powi(2))
}

/// `G(r) = e^{r/2}(1/(2r) + 1) - (1/(2r))(1 + r/2)^2`.
pub fn g_curve(r: f64) -> Result<f64> {
    check_r(r)?;
    Ok((r / 2.0).exp() * (0.5 / r + 1.0) - 0.5 / r * (1.0 + r / 2.0).powi(2))
}

fn analytic_table(f: &AnalyticSignal, k: usize, grid: &Grid) -> Result<Vec<Vec<Complex64>>> {
    if k > f.max_deriv() {
        return Err(Error::invalid(
            "k",
            format!("signal `{}` has analytic derivatives up to {}, need {k}", f.label(), f.max_deriv()),
        ));
    }
    (0..=k).map(|n| f.sample_deriv(n, grid).map(SampledSignal::into_values)).collect()
}

/// Max-norm residual of
/// `2 Re(f conj(f^{(k)})) = sum_l D_l (d/dt)^{k-2l} |f^{(l)}|^2`
/// with every derivative taken analytically.
pub fn check_identity1(f: &AnalyticSignal, k: usize, grid: &Grid) -> Result<f64> {
    if k == 0 || k > MAX_ORDER {
        return Err(Error::invalid("k", format!("need 1 <= k <= {MAX_ORDER}, got {k}")));
    }
    let d = analytic_table(f, k, grid)?;
    let mut residual = 0.0_f64;
    for idx in 0..grid.len() {
        let lhs = 2.0 * (d[0][idx] * d[k][idx].conj()).re;
        let mut rhs = 0.0;
        for l in 0..=k / 2 {
            let m = k - 2 * l;
            // (|f^{(l)}|^2)^{(m)} = sum_j C(m, j) f^{(l+j)} conj(f^{(l+m-j)}).
            let dens: f64 = (0..=m)
                .map(|j| binomial(m, j) * (d[l + j][idx] * d[l + m - j][idx].conj()).re)
                .sum();
            rhs += coeff_dq(k, l)? * dens;
        }
        residual = residual.max((lhs - rhs).abs());
    }
    Ok(residual)
}

/// Outcome of the Lagrange-type identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct Identity2Check {
    /// Residual under the supplied sign convention.
    pub residual: f64,
    /// Sign assignment `(q, i) -> s_{qi}` with the smallest residual.
    pub best_signs: BTreeMap<(usize, usize), i8>,
    pub best_residual: f64,
}

fn identity2_residual(d: &[Vec<Complex64>], alpha: f64, q: usize, grid: &Grid, signs: &SignConvention) -> Result<f64> {
    let mut residual = 0.0_f64;
    for (idx, t) in grid.points().enumerate() {
        // f_alpha^{(q)} = e^{-j alpha t} sum_n C(q, n) (-j alpha)^{q-n} f^{(n)}.
        let lhs: Complex64 = (0..=q)
            .map(|n| d[n][idx] * Complex64::new(0.0, -alpha).powu((q - n) as u32) * binomial(q, n))
            .sum::<Complex64>()
            * Complex64::from_polar(1.0, -alpha * t);
        let mut rhs = 0.0;
        for n in 0..=q {
            rhs += coeff_bqn(q, n, alpha)? * d[n][idx].norm_sqr();
        }
        for i in 0..q {
            for z in i + 1..=q {
                let c = coeff_cqiz(q, i, z, alpha, signs.sign(q, i))?;
                rhs += 2.0 * c * (half_power(q, i, z) * d[i][idx] * d[z][idx].conj()).re;
            }
        }
        residual = residual.max((lhs.norm_sqr() - rhs).abs());
    }
    Ok(residual)
}

type SignMap = BTreeMap<(usize, usize), i8>;

/// Largest `q` for which every sign assignment is tried.
pub const SIGN_SEARCH_MAX_Q: usize = 2;

/// Max-norm residual of
/// `|f_alpha^{(q)}|^2 = sum_n B_{qn}|f^{(n)}|^2 + 2 sum_{i<z} C_{qiz} Re(e^{j pi (q-(i+z)/2)} f^{(i)} conj(f^{(z)}))`
/// under `signs`, plus an exhaustive search over `s_{qi}` for `q <= 2`.
pub fn check_identity2(f: &AnalyticSignal, alpha: f64, q: usize, signs: &SignConvention, grid: &Grid) -> Result<Identity2Check> {
    if q > SIGN_SEARCH_MAX_Q {
        return Err(Error::invalid("q", format!("sign search supports q <= {SIGN_SEARCH_MAX_Q}, got {q}")));
    }
    let d = analytic_table(f, q, grid)?;
    let residual = identity2_residual(&d, alpha, q, grid, signs)?;
    let candidates: Vec<SignMap> = (0..1u32 << q)
        .map(|mask| (0..q).map(|i| ((q, i), if mask >> i & 1 == 1 { -1 } else { 1 })).collect())
        .collect();
    let scored: Vec<(f64, SignMap)> = candidates
        .into_par_iter()
        .map(|m| {
            let r = identity2_residual(&d, alpha, q, grid, &SignConvention::Custom(m.clone()));
            r.map(|r| (r, m))
        })
        .collect::<Result<_>>()?;
    let (best_residual, best_signs) = scored
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one assignment");
    Ok(Identity2Check {
        residual,
        best_signs,
        best_residual,
    })
}
