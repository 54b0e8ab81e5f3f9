use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{Grid, SampledSignal};
use crate::{Error, Result};

type RealDeriv = dyn Fn(usize, f64) -> f64 + Send + Sync;
type ComplexEval = dyn Fn(f64) -> Complex64 + Send + Sync;
type ComplexDeriv = dyn Fn(usize, f64) -> Complex64 + Send + Sync;

/// Real weight `w(t)` with analytically supplied derivatives.
#[derive(Clone)]
pub struct WeightFunction {
    label: String,
    max_order: usize,
    derivs: Arc<RealDeriv>,
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightFunction")
            .field("label", &self.label)
            .field("max_order", &self.max_order)
            .finish()
    }
}

impl WeightFunction {
    /// `derivs(k, t)` must return the `k`-th derivative for `k <= max_order`.
    pub fn new(
        label: impl Into<String>,
        max_order: usize,
        derivs: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        WeightFunction {
            label: label.into(),
            max_order,
            derivs: Arc::new(derivs),
        }
    }

    /// The constant weight 1.
    pub fn unit() -> Self {
        WeightFunction::new("1", usize::MAX, |k, _| if k == 0 { 1.0 } else { 0.0 })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.derivs)(0, t)
    }

    pub fn deriv(&self, k: usize, t: f64) -> Result<f64> {
        self.check_order(k)?;
        Ok((self.derivs)(k, t))
    }

    pub fn check_order(&self, k: usize) -> Result<()> {
        if k > self.max_order {
            return Err(Error::DerivativeOrder {
                requested: k,
                max: self.max_order,
            });
        }
        Ok(())
    }

    /// Unchecked derivative for hot loops; callers validate the order first.
    pub(crate) fn deriv_raw(&self, k: usize, t: f64) -> f64 {
        (self.derivs)(k, t)
    }
}

/// `w(t) = exp(-r t)`, with `w^(k)(t) = (-r)^k exp(-r t)`.
pub fn exp_weight(r: f64) -> Result<WeightFunction> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("weight rate must be positive, got {r}")));
    }
    Ok(WeightFunction::new(format!("exp(-{r} t)"), usize::MAX, move |k, t| {
        (-r).powi(k as i32) * (-r * t).exp()
    }))
}

/// Highest derivative order precomputed for the quadratic-exponential family.
const QUADRATIC_MAX_ORDER: usize = 8;

/// Complex signal given in closed form, optionally with analytic derivatives.
#[derive(Clone)]
pub struct AnalyticSignal {
    label: String,
    eval: Arc<ComplexEval>,
    deriv: Option<(usize, Arc<ComplexDeriv>)>,
}

impl fmt::Debug for AnalyticSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticSignal")
            .field("label", &self.label)
            .field("max_deriv", &self.max_deriv())
            .finish()
    }
}

impl AnalyticSignal {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        AnalyticSignal {
            label: label.into(),
            eval: Arc::new(eval),
            deriv: None,
        }
    }

    /// Attaches analytic derivatives `deriv(k, t)` for `1 <= k <= max_order`.
    pub fn with_derivatives(
        mut self,
        max_order: usize,
        deriv: impl Fn(usize, f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        self.deriv = Some((max_order, Arc::new(deriv)));
        self
    }

    /// `exp(c2 t^2 + c1 t + c0)` with derivatives `P_k(t) exp(...)`, where
    /// `P_0 = 1` and `P_{k+1} = P_k' + (2 c2 t + c1) P_k`.
    pub fn quadratic_exp(label: impl Into<String>, c2: Complex64, c1: Complex64, c0: Complex64) -> Self {
        let mut polys: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
        for k in 0..QUADRATIC_MAX_ORDER {
            let p = &polys[k];
            let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
            for (i, &a) in p.iter().enumerate() {
                if i > 0 {
                    next[i - 1] += a * i as f64;
                }
                next[i] += a * c1;
                next[i + 1] += a * 2.0 * c2;
            }
            polys.push(next);
        }
        let exponent = move |t: f64| (c2 * t * t + c1 * t + c0).exp();
        AnalyticSignal::new(label, exponent).with_derivatives(QUADRATIC_MAX_ORDER, move |k, t| {
            let p = &polys[k];
            let poly = p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * t + a);
            poly * exponent(t)
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        (self.eval)(t)
    }

    /// Highest analytic derivative available (0 when none are supplied).
    pub fn max_deriv(&self) -> usize {
        self.deriv.as_ref().map_or(0, |(m, _)| *m)
    }

    /// Analytic `k`-th derivative; `k = 0` is the signal itself.
    pub fn deriv(&self, k: usize, t: f64) -> Option<Complex64> {
        if k == 0 {
            return Some(self.eval(t));
        }
        match &self.deriv {
            Some((max, d)) if k <= *max => Some(d(k, t)),
            _ => None,
        }
    }

    pub fn sample(&self, grid: &Grid) -> Result<SampledSignal> {
        SampledSignal::from_fn(*grid, |t| self.eval(t))
    }

    /// Samples the analytic `k`-th derivative.
    pub fn sample_deriv(&self, k: usize, grid: &Grid) -> Result<SampledSignal> {
        if k > self.max_deriv() && k > 0 {
            return Err(Error::invalid(
                "k",
                format!("signal `{}` has no analytic derivative of order {k}", self.label),
            ));
        }
        SampledSignal::from_fn(*grid, |t| self.deriv(k, t).expect("order checked"))
    }
}

/// `f(t) = exp(-(r/2) t^2) exp(-j chirp t^2)`.
pub fn gaussian_chirp(r: f64, chirp: f64) -> Result<AnalyticSignal> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("envelope rate must be positive, got {r}")));
    }
    if !chirp.is_finite() {
        return Err(Error::invalid("chirp", "must be finite"));
    }
    Ok(AnalyticSignal::quadratic_exp(
        format!("gaussian_chirp(r={r}, chirp={chirp})"),
        Complex64::new(-0.5 * r, -chirp),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    ))
}
