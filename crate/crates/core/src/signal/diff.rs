use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::SampledSignal;
use crate::{Error, Result};

/// How [`derivative`] differentiates sampled data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiffMethod {
    /// Frequency-domain multiplier `(jw)^k`; the signal must vanish at both
    /// grid edges.
    #[default]
    Spectral,
    /// Fourth-order (or better) stencils: centred in the interior, one-sided
    /// near the edges.
    FiniteDifference,
}

/// Edge magnitude relative to the peak above which spectral
/// differentiation is refused.
pub const SPECTRAL_EDGE_LIMIT: f64 = 1e-8;

/// Spectral coefficients below this fraction of the largest one are
/// treated as roundoff and dropped before applying the multiplier.
const NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;

/// `k`-th derivative of a sampled signal.
pub fn derivative(s: &SampledSignal, k: usize, method: DiffMethod) -> Result<SampledSignal> {
    if k == 0 {
        return Err(Error::invalid("k", "derivative order must be at least 1"));
    }
    match method {
        DiffMethod::Spectral => spectral(s, k),
        DiffMethod::FiniteDifference => finite_difference(s, k),
    }
}

fn spectral(s: &SampledSignal, k: usize) -> Result<SampledSignal> {
    let peak = s.max_abs();
    if peak == 0.0 {
        return Ok(SampledSignal::zeros(*s.grid()));
    }
    let v = s.values();
    let edge = v[0].norm().max(v[v.len() - 1].norm());
    if edge > SPECTRAL_EDGE_LIMIT * peak {
        return Err(Error::WraparoundRisk {
            edge: edge / peak,
            limit: SPECTRAL_EDGE_LIMIT,
        });
    }

    let n = v.len();
    let mut buf = v.to_vec();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);

    // Bins at roundoff level carry no signal but get amplified by w^k.
    let floor = NOISE_FLOOR * buf.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    let period = n as f64 * s.grid().dt();
    let jk = Complex64::new(0.0, 1.0).powu(k as u32);
    for (i, c) in buf.iter_mut().enumerate() {
        // Signed frequency index; the unpaired Nyquist bin of an even-length
        // transform carries no derivative information for odd k.
        let m = if i <= n / 2 { i as i64 } else { i as i64 - n as i64 };
        if c.norm() < floor || (n.is_multiple_of(2) && i == n / 2 && k % 2 == 1) {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        let w = 2.0 * PI * m as f64 / period;
        *c *= jk * w.powi(k as i32);
    }

    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    SampledSignal::new(*s.grid(), buf)
}

fn finite_difference(s: &SampledSignal, k: usize) -> Result<SampledSignal> {
    let n = s.len();
    // Centred stencils of odd width give order >= 4; the one-sided edge
    // stencils use k + 4 nodes for the same order.
    let centred = 2 * k.div_ceil(2) + 3;
    let one_sided = k + 4;
    if one_sided > n {
        return Err(Error::invalid("k", format!("order {k} needs at least {one_sided} samples")));
    }
    let half = centred / 2;
    let h = s.grid().dt();
    let scale = h.powi(-(k as i32));
    let v = s.values();

    let offsets: Vec<f64> = (0..centred).map(|j| j as f64 - half as f64).collect();
    let interior = fornberg_weights(0.0, &offsets, k);

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, o) in out.iter_mut().enumerate() {
        if i >= half && i + half < n {
            *o = interior
                .iter()
                .zip(&v[i - half..=i + half])
                .map(|(w, x)| x * w)
                .sum::<Complex64>()
                * scale;
        } else {
            let start = if i < half { 0 } else { n - one_sided };
            let nodes: Vec<f64> = (start..start + one_sided).map(|j| j as f64 - i as f64).collect();
            let w = fornberg_weights(0.0, &nodes, k);
            *o = w
                .iter()
                .zip(&v[start..start + one_sided])
                .map(|(w, x)| x * w)
                .sum::<Complex64>()
                * scale;
        }
    }
    SampledSignal::new(*s.grid(), out)
}

/// Finite-difference weights for the `order`-th derivative at `x0` from
/// values at `nodes` (Fornberg's recursion).
pub fn fornberg_weights(x0: f64, nodes: &[f64], order: usize) -> Vec<f64> {
    let m = nodes.len();
    // c[j][d]: weight of node j for derivative d.
    let mut c = vec![vec![0.0; order + 1]; m];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..m {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for d in (1..=mn).rev() {
                    c[i][d] = c1 * (d as f64 * c[i - 1][d - 1] - c5 * c[i - 1][d]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for d in (1..=mn).rev() {
                c[j][d] = (c4 * c[j][d] - d as f64 * c[j][d - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}
