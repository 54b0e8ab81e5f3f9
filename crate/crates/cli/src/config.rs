//! Scenario configuration: one TOML document, every field optional.

use serde::{Deserialize, Serialize};

use olct_core::bounds::{EpfReading, HpwConfig, ImSign, SignConvention};
use olct_core::olct::OlctParams;
use olct_core::signal::{exp_weight, gaussian_chirp, AnalyticSignal, Grid, WeightFunction};
use olct_core::verify::{minimizer_signal, AMode, SweepScenario, EQUALITY_TOL, INEQUALITY_TOL};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub signal: SignalSpec,
    pub weight: WeightSpec,
    pub params: ParamsSpec,
    pub moments: MomentsSpec,
    pub bound: BoundSpec,
    pub grid: GridSpec,
    pub output: OutputSpec,
    pub tolerance: ToleranceSpec,
    pub sweep: SweepSpec,
    pub table1: Table1Spec,
    pub gcurve: GcurveSpec,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: "scenario".into(),
            signal: SignalSpec::default(),
            weight: WeightSpec::default(),
            params: ParamsSpec::default(),
            moments: MomentsSpec::default(),
            bound: BoundSpec::default(),
            grid: GridSpec::default(),
            output: OutputSpec::default(),
            tolerance: ToleranceSpec::default(),
            sweep: SweepSpec::default(),
            table1: Table1Spec::default(),
            gcurve: GcurveSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalFamily {
    GaussianChirp,
    Minimizer,
}

/// `gaussian_chirp`: `exp(-(r/2) t^2) exp(-j chirp t^2)`, where an omitted
/// `chirp` means `a / 2b`. `minimizer`: the equality-attaining signal with
/// amplitude `c0` and rate `c_p`, centred at the moment centres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignalSpec {
    pub family: SignalFamily,
    pub r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chirp: Option<f64>,
    pub c0: f64,
    pub c_p: f64,
}

impl Default for SignalSpec {
    fn default() -> Self {
        SignalSpec {
            family: SignalFamily::GaussianChirp,
            r: 2.0,
            chirp: None,
            c0: 1.0,
            c_p: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Unit,
    Exp,
}

/// `unit`: `w = 1`; `exp`: `w = exp(-r t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightSpec {
    pub kind: WeightKind,
    pub r: f64,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec {
            kind: WeightKind::Unit,
            r: 1.0,
        }
    }
}

/// An omitted `c` is solved from `ad - bc = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsSpec {
    pub a: f64,
    pub b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub d: f64,
    pub tau: f64,
    pub eta: f64,
}

impl Default for ParamsSpec {
    fn default() -> Self {
        ParamsSpec {
            a: 0.6,
            b: 0.05,
            c: None,
            d: 0.4,
            tau: 0.0,
            eta: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MomentsSpec {
    pub p: usize,
    pub t_m: f64,
    pub xi_m: f64,
}

impl Default for MomentsSpec {
    fn default() -> Self {
        MomentsSpec {
            p: 1,
            t_m: 0.0,
            xi_m: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Hpw,
    Shw,
    Hw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AModeKind {
    Zero,
    Fixed,
    Gram,
    Saturating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignsKind {
    Alternating,
    AllPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImSignKind {
    ParityP,
    ParityQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadingKind {
    Chirped,
    Fourier,
}

/// `reference` is an externally quoted value the verdict is printed next to.
/// `expect_equality` additionally requires the checked bound to be attained,
/// `|lhs - rhs| <= tolerance.equality * lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundSpec {
    pub kind: BoundKind,
    pub a_mode: AModeKind,
    pub a_value: f64,
    pub signs: SignsKind,
    pub im_sign: ImSignKind,
    pub reading: ReadingKind,
    pub expect_equality: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
}

impl Default for BoundSpec {
    fn default() -> Self {
        BoundSpec {
            kind: BoundKind::Shw,
            a_mode: AModeKind::Saturating,
            a_value: 1.0,
            signs: SignsKind::Alternating,
            im_sign: ImSignKind::ParityP,
            reading: ReadingKind::Chirped,
            expect_equality: false,
            reference: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t_min: -8.0,
            t_max: 8.0,
            n: 4097,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: "out".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSpec {
    pub inequality: f64,
    pub equality: f64,
    pub ppr: f64,
    pub parseval: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec {
            inequality: INEQUALITY_TOL,
            equality: EQUALITY_TOL,
            ppr: 1e-4,
            parseval: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig2,
}

impl From<SweepKind> for SweepScenario {
    fn from(k: SweepKind) -> Self {
        match k {
            SweepKind::Fig1a => SweepScenario::Fig1a,
            SweepKind::Fig1b => SweepScenario::Fig1b,
            SweepKind::Fig1c => SweepScenario::Fig1c,
            SweepKind::Fig2 => SweepScenario::Fig2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub scenario: SweepKind,
    pub r_values: Vec<f64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            scenario: SweepKind::Fig2,
            r_values: (1..=10).map(|k| 0.5 * k as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Table1Spec {
    pub r_values: Vec<f64>,
    pub b: f64,
}

impl Default for Table1Spec {
    fn default() -> Self {
        Table1Spec {
            r_values: vec![0.5, 1.0, 2.0, 5.0],
            b: 1.0,
        }
    }
}

/// `r = r_min + k step` for every `k` with `r <= r_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GcurveSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub step: f64,
}

impl Default for GcurveSpec {
    fn default() -> Self {
        GcurveSpec {
            r_min: 0.05,
            r_max: 10.0,
            step: 0.05,
        }
    }
}

impl GcurveSpec {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if !(self.step > 0.0) || !(self.r_min > 0.0) || !(self.r_max >= self.r_min) {
            return Err(CliError::config("gcurve", "need 0 < r_min <= r_max and step > 0"));
        }
        let count = ((self.r_max - self.r_min) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|k| self.r_min + k as f64 * self.step).collect())
    }
}

fn field<T>(path: &'static str, r: olct_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::core_at(path, e))
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config("config", e.to_string().trim_end()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn olct_params(&self) -> Result<OlctParams, CliError> {
        let p = &self.params;
        match p.c {
            Some(c) => field("params", OlctParams::new(p.a, p.b, c, p.d, p.tau, p.eta)),
            None => field("params", OlctParams::solve_c(p.a, p.b, p.d, p.tau, p.eta)),
        }
    }

    pub fn time_grid(&self) -> Result<Grid, CliError> {
        field("grid", Grid::new(self.grid.t_min, self.grid.t_max, self.grid.n))
    }

    pub fn weight(&self) -> Result<WeightFunction, CliError> {
        match self.weight.kind {
            WeightKind::Unit => Ok(WeightFunction::unit()),
            WeightKind::Exp => field("weight.r", exp_weight(self.weight.r)),
        }
    }

    pub fn signal(&self, p: &OlctParams) -> Result<AnalyticSignal, CliError> {
        let s = &self.signal;
        match s.family {
            SignalFamily::GaussianChirp => {
                let chirp = match s.chirp {
                    Some(c) => c,
                    None => field("signal.chirp", p.chirp_rate())?,
                };
                field("signal", gaussian_chirp(s.r, chirp))
            }
            SignalFamily::Minimizer => field(
                "signal",
                minimizer_signal(s.c0, s.c_p, self.moments.t_m, self.moments.xi_m, p),
            ),
        }
    }

    pub fn hpw_config(&self) -> Result<HpwConfig, CliError> {
        let m = &self.moments;
        let mut cfg = field("moments", HpwConfig::new(m.p, m.t_m, m.xi_m, self.weight()?))?;
        cfg.signs = match self.bound.signs {
            SignsKind::Alternating => SignConvention::Alternating,
            SignsKind::AllPositive => SignConvention::AllPositive,
        };
        cfg.im_sign = match self.bound.im_sign {
            ImSignKind::ParityP => ImSign::ParityP,
            ImSignKind::ParityQ => ImSign::ParityQ,
        };
        cfg.reading = match self.bound.reading {
            ReadingKind::Chirped => EpfReading::Chirped,
            ReadingKind::Fourier => EpfReading::Fourier,
        };
        Ok(cfg)
    }

    pub fn a_mode(&self) -> AMode {
        match self.bound.a_mode {
            AModeKind::Zero => AMode::Zero,
            AModeKind::Fixed => AMode::Fixed(self.bound.a_value),
            AModeKind::Gram => AMode::Gram(None),
            AModeKind::Saturating => AMode::Saturating,
        }
    }
}

/// Parses `T_MIN:T_MAX:N`.
pub fn parse_grid_flag(s: &str) -> Result<GridSpec, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::config("--grid", format!("expected T_MIN:T_MAX:N, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(GridSpec {
        t_min: parts[0].trim().parse().map_err(|_| bad())?,
        t_max: parts[1].trim().parse().map_err(|_| bad())?,
        n: parts[2].trim().parse().map_err(|_| bad())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let c = ScenarioConfig::parse("").unwrap();
        assert_eq!(c, ScenarioConfig::default());
        assert_eq!((c.grid.t_min, c.grid.t_max, c.grid.n), (-8.0, 8.0, 4097));
        assert_eq!((c.moments.p, c.moments.t_m, c.moments.xi_m), (1, 0.0, 0.0));
    }

    #[test]
    fn round_trip_is_lossless() {
        let mut c = ScenarioConfig {
            name: "x".into(),
            ..ScenarioConfig::default()
        };
        c.params.c = Some(-15.2);
        c.signal.chirp = Some(6.0);
        c.bound.reference = Some(1.904493221525881);
        c.sweep.r_values = vec![0.1, 0.30000000000000004];
        let back = ScenarioConfig::parse(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(ScenarioConfig::parse(&ScenarioConfig::default().to_toml()).unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_path() {
        let e = ScenarioConfig::parse("[params]\nbb = 1.0\n").unwrap_err();
        assert!(e.to_string().contains("bb"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let c = ScenarioConfig::parse("[params]\na = 1.0\nb = 1.0\nc = 1.0\nd = 1.0\n").unwrap();
        let e = c.olct_params().unwrap_err();
        assert!(e.to_string().starts_with("params:"), "{e}");
        let c = ScenarioConfig::parse("[weight]\nkind = \"exp\"\nr = -1.0\n").unwrap();
        assert!(c.weight().unwrap_err().to_string().starts_with("weight.r:"));
    }

    #[test]
    fn grid_flag() {
        let g = parse_grid_flag("-10:10:8193").unwrap();
        assert_eq!((g.t_min, g.t_max, g.n), (-10.0, 10.0, 8193));
        assert!(parse_grid_flag("-10:10").is_err());
        assert!(parse_grid_flag("a:b:c").is_err());
    }

    #[test]
    fn gcurve_points() {
        let p = GcurveSpec::default().points().unwrap();
        assert_eq!(p.len(), 200);
        assert!((p[199] - 10.0).abs() < 1e-12);
    }
}
