use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Allowed deviation of `ad - bc` from 1.
pub const DETERMINANT_TOLERANCE: f64 = 1e-12;

/// Six-parameter OLCT matrix `(a, b, c, d | tau, eta)` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct OlctParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    tau: f64,
    eta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    tau: f64,
    eta: f64,
}

impl TryFrom<RawParams> for OlctParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        OlctParams::new(r.a, r.b, r.c, r.d, r.tau, r.eta)
    }
}

impl From<OlctParams> for RawParams {
    fn from(p: OlctParams) -> Self {
        RawParams {
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
            tau: p.tau,
            eta: p.eta,
        }
    }
}

impl OlctParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, tau: f64, eta: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d), ("tau", tau), ("eta", eta)] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() > DETERMINANT_TOLERANCE {
            return Err(Error::Determinant { det });
        }
        Ok(OlctParams { a, b, c, d, tau, eta })
    }

    /// Builds the matrix from `(a, b, d)` and offsets, solving `c = (ad - 1)/b`.
    pub fn solve_c(a: f64, b: f64, d: f64, tau: f64, eta: f64) -> Result<Self> {
        if b == 0.0 {
            return Err(Error::invalid("b", "cannot solve for c when b = 0"));
        }
        let c = (a * d - 1.0) / b;
        // Rounding in c can leave ad - bc a few ulps away from 1.
        OlctParams::new(a, b, c, d, tau, eta)
    }

    /// Example parameters `a = 0.6, b = 0.05, d = 0.4, tau = 0, eta = 1`,
    /// with `c` solved from the determinant constraint.
    pub fn example2() -> Self {
        OlctParams::solve_c(0.6, 0.05, 0.4, 0.0, 1.0).expect("valid constants")
    }

    /// Example parameters `a = 6, b = 0.5, d = 0.4, tau = 0, eta = 1`,
    /// with `c` solved from the determinant constraint.
    pub fn example3() -> Self {
        OlctParams::solve_c(6.0, 0.5, 0.4, 0.0, 1.0).expect("valid constants")
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `b = 0` selects the second (non-integral) branch.
    pub fn is_degenerate(&self) -> bool {
        self.b == 0.0
    }

    /// Chirp rate `a / 2b` cancelled by the demodulated signal.
    pub fn chirp_rate(&self) -> Result<f64> {
        self.require_integral("chirp_rate")?;
        Ok(self.a / (2.0 * self.b))
    }

    /// Same matrix with different offsets.
    pub fn with_offsets(&self, tau: f64, eta: f64) -> Result<Self> {
        OlctParams::new(self.a, self.b, self.c, self.d, tau, eta)
    }

    pub(crate) fn require_integral(&self, what: &'static str) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::DegenerateBranch(what));
        }
        Ok(())
    }
}

impl fmt::Display for OlctParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {} | {}, {})",
            self.a, self.b, self.c, self.d, self.tau, self.eta
        )
    }
}

/// Fourier transform: `(0, 1, -1, 0 | 0, 0)`.
pub fn ft_params() -> OlctParams {
    OlctParams::new(0.0, 1.0, -1.0, 0.0, 0.0, 0.0).expect("valid constants")
}

/// Fractional Fourier transform of angle `alpha`:
/// `(cos a, sin a, -sin a, cos a | 0, 0)`. Trigonometric values within
/// 1e-15 of zero are snapped to zero so multiples of pi/2 land exactly on
/// the FT / identity / degenerate cases.
pub fn frft_params(alpha: f64) -> Result<OlctParams> {
    if !alpha.is_finite() {
        return Err(Error::invalid("alpha", "must be finite"));
    }
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    let (s, c) = alpha.sin_cos();
    let (s, c) = (snap(s), snap(c));
    OlctParams::new(c, s, -s, c, 0.0, 0.0)
}

/// Linear canonical transform: `(a, b, c, d | 0, 0)`.
pub fn lct_params(a: f64, b: f64, c: f64, d: f64) -> Result<OlctParams> {
    OlctParams::new(a, b, c, d, 0.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn special_cases() {
        let ft = ft_params();
        assert_eq!((ft.a(), ft.b(), ft.c(), ft.d(), ft.tau(), ft.eta()), (0.0, 1.0, -1.0, 0.0, 0.0, 0.0));
        assert_eq!(frft_params(PI / 2.0).unwrap(), ft);
        assert!(lct_params(1.0, 1.0, 0.0, 1.0).is_ok());
        assert!(matches!(lct_params(1.0, 1.0, 1.0, 1.0), Err(Error::Determinant { .. })));
    }

    #[test]
    fn frft_angle_zero_is_degenerate() {
        let p = frft_params(0.0).unwrap();
        assert!(p.is_degenerate());
        assert!(frft_params(PI).unwrap().is_degenerate());
        assert!(!frft_params(0.3).unwrap().is_degenerate());
    }

    #[test]
    fn printed_example_parameters_need_solved_c() {
        // 0.6 * 0.4 - 0.05 * 0.5 = 0.215
        assert!(OlctParams::new(0.6, 0.05, 0.5, 0.4, 0.0, 1.0).is_err());
        let p = OlctParams::example2();
        assert!((p.c() + 15.2).abs() < 1e-12);
        assert!((p.chirp_rate().unwrap() - 6.0).abs() < 1e-14);
        assert!((OlctParams::example3().c() - 2.8).abs() < 1e-12);
    }

    #[test]
    fn serde_rejects_invalid_determinant() {
        let bad = r#"{"a":1.0,"b":1.0,"c":1.0,"d":1.0,"tau":0.0,"eta":0.0}"#;
        assert!(serde_json::from_str::<OlctParams>(bad).is_err());
        let p = OlctParams::example2();
        let back: OlctParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
