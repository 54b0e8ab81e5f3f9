//! Report value objects and their JSON/CSV encodings.
//!
//! Floats are written with 17 significant digits in scientific notation;
//! non-finite values become `null` (JSON) or an empty field (CSV). Key and
//! column order is fixed, so equal reports encode to equal bytes.

use serde_json::{Map, Number, Value};

use crate::olct::OlctParams;
use crate::signal::Grid;

/// 17 significant digits, `.` decimal point.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON number with 17 significant digits, or `null` when not finite.
pub fn json_f64(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(format_f64(x).parse::<Number>().expect("formatted float is a JSON number"))
}

fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_f64)
}

/// One value per bound family.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PerBound<T> {
    pub hpw: Option<T>,
    pub shw: Option<T>,
    pub hw: Option<T>,
}

impl<T: Copy> PerBound<T> {
    fn to_json(self, f: impl Fn(T) -> Value) -> Value {
        let mut m = Map::new();
        m.insert("hpw".into(), self.hpw.map_or(Value::Null, &f));
        m.insert("shw".into(), self.shw.map_or(Value::Null, &f));
        m.insert("hw".into(), self.hw.map_or(Value::Null, &f));
        Value::Object(m)
    }
}

/// One step of the Holder chain: `mu_p^{2/p} E^{1-2/p} >= mu_2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderStep {
    pub lhs: f64,
    pub mu_2: f64,
    pub passed: bool,
}

/// The Holder step on both domains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderSteps {
    pub time: HolderStep,
    pub spectral: HolderStep,
}

/// LHS product, lower bounds, slacks and diagnostics for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub scenario: String,
    pub p: usize,
    pub lhs: f64,
    pub rhs_hpw: Option<f64>,
    pub rhs_shw: Option<f64>,
    pub rhs_hw: Option<f64>,
    pub slack: PerBound<f64>,
    pub rel_slack: PerBound<f64>,
    pub passed: PerBound<bool>,
    pub ppr_gap: f64,
    pub parseval_gap: f64,
    pub grid: Grid,
    pub params: OlctParams,
    pub tol: f64,
    pub mu_time: f64,
    pub mu_spec: f64,
    pub e_pf: Option<f64>,
    pub a_mode: Option<String>,
    pub a: Option<f64>,
    pub a_star: Option<f64>,
    pub e_star: Option<f64>,
    /// False when the A-term exceeds the Gram-determinant maximum, in which
    /// case the SHW comparison is no longer a statement of the theorem.
    pub a_admissible: Option<bool>,
    /// Relative gap of `lhs^{2p}` against `b^{2p}((|u|,|v|)^2 + A*^2)`.
    pub gram_gap: Option<f64>,
    pub holder: Option<HolderSteps>,
}

impl UncertaintyReport {
    pub(crate) fn blank(scenario: &str, p: usize, grid: Grid, params: OlctParams, tol: f64) -> Self {
        UncertaintyReport {
            scenario: scenario.to_string(),
            p,
            lhs: 0.0,
            rhs_hpw: None,
            rhs_shw: None,
            rhs_hw: None,
            slack: PerBound::default(),
            rel_slack: PerBound::default(),
            passed: PerBound::default(),
            ppr_gap: 0.0,
            parseval_gap: 0.0,
            grid,
            params,
            tol,
            mu_time: 0.0,
            mu_spec: 0.0,
            e_pf: None,
            a_mode: None,
            a: None,
            a_star: None,
            e_star: None,
            a_admissible: None,
            gram_gap: None,
            holder: None,
        }
    }

    pub fn with_scenario(mut self, scenario: impl Into<String>) -> Self {
        self.scenario = scenario.into();
        self
    }

    /// `slack = lhs - rhs`, `rel_slack = slack / lhs`, pass iff
    /// `slack >= -tol * lhs`.
    pub(crate) fn score(&self, rhs: f64) -> (f64, f64, bool) {
        let slack = self.lhs - rhs;
        let rel = if self.lhs > 0.0 { slack / self.lhs } else { slack };
        (slack, rel, slack >= -self.tol * self.lhs.abs())
    }

    pub(crate) fn set_hpw(&mut self, rhs: f64) {
        let (s, r, ok) = self.score(rhs);
        self.rhs_hpw = Some(rhs);
        self.slack.hpw = Some(s);
        self.rel_slack.hpw = Some(r);
        self.passed.hpw = Some(ok);
    }

    pub(crate) fn set_shw(&mut self, rhs: f64) {
        let (s, r, ok) = self.score(rhs);
        self.rhs_shw = Some(rhs);
        self.slack.shw = Some(s);
        self.rel_slack.shw = Some(r);
        self.passed.shw = Some(ok);
    }

    pub(crate) fn set_hw(&mut self, rhs: f64) {
        let (s, r, ok) = self.score(rhs);
        self.rhs_hw = Some(rhs);
        self.slack.hw = Some(s);
        self.rel_slack.hw = Some(r);
        self.passed.hw = Some(ok);
    }

    /// True when a bound the theorems guarantee is undercut beyond `tol`.
    /// An SHW comparison with an inadmissible A is not counted.
    pub fn theorem_violated(&self) -> bool {
        let shw_counts = self.a_admissible != Some(false);
        let holder_failed = self
            .holder
            .is_some_and(|h| !h.time.passed || !h.spectral.passed);
        self.passed.hpw == Some(false)
            || (shw_counts && self.passed.shw == Some(false))
            || self.passed.hw == Some(false)
            || holder_failed
    }

    pub fn to_json_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("scenario".into(), Value::String(self.scenario.clone()));
        m.insert("p".into(), Value::from(self.p));
        m.insert("lhs".into(), json_f64(self.lhs));
        m.insert("rhs_hpw".into(), json_opt(self.rhs_hpw));
        m.insert("rhs_shw".into(), json_opt(self.rhs_shw));
        m.insert("rhs_hw".into(), json_opt(self.rhs_hw));
        m.insert("slack".into(), self.slack.to_json(json_f64));
        m.insert("rel_slack".into(), self.rel_slack.to_json(json_f64));
        m.insert("passed".into(), self.passed.to_json(Value::Bool));
        m.insert("ppr_gap".into(), json_f64(self.ppr_gap));
        m.insert("parseval_gap".into(), json_f64(self.parseval_gap));
        m.insert("grid".into(), grid_json(&self.grid));
        m.insert("params".into(), params_json(&self.params));
        m.insert("tol".into(), json_f64(self.tol));
        m.insert("mu_time".into(), json_f64(self.mu_time));
        m.insert("mu_spec".into(), json_f64(self.mu_spec));
        m.insert("e_pf".into(), json_opt(self.e_pf));
        m.insert("a_mode".into(), self.a_mode.clone().map_or(Value::Null, Value::String));
        m.insert("a".into(), json_opt(self.a));
        m.insert("a_star".into(), json_opt(self.a_star));
        m.insert("e_star".into(), json_opt(self.e_star));
        m.insert("a_admissible".into(), self.a_admissible.map_or(Value::Null, Value::Bool));
        m.insert("gram_gap".into(), json_opt(self.gram_gap));
        m.insert(
            "holder".into(),
            self.holder.map_or(Value::Null, |h| {
                let mut o = Map::new();
                o.insert("time".into(), holder_json(h.time));
                o.insert("spectral".into(), holder_json(h.spectral));
                Value::Object(o)
            }),
        );
        Value::Object(m)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map_or(String::new(), format_f64);
        let flag = |x: Option<bool>| x.map_or(String::new(), |b| b.to_string());
        let p = &self.params;
        [
            csv_text(&self.scenario),
            self.p.to_string(),
            format_f64(self.lhs),
            opt(self.rhs_hpw),
            opt(self.rhs_shw),
            opt(self.rhs_hw),
            opt(self.slack.hpw),
            opt(self.slack.shw),
            opt(self.slack.hw),
            opt(self.rel_slack.hpw),
            opt(self.rel_slack.shw),
            opt(self.rel_slack.hw),
            flag(self.passed.hpw),
            flag(self.passed.shw),
            flag(self.passed.hw),
            format_f64(self.ppr_gap),
            format_f64(self.parseval_gap),
            format_f64(self.grid.t_min()),
            format_f64(self.grid.t_max()),
            self.grid.len().to_string(),
            format_f64(p.a()),
            format_f64(p.b()),
            format_f64(p.c()),
            format_f64(p.d()),
            format_f64(p.tau()),
            format_f64(p.eta()),
        ]
        .join(",")
    }
}

/// Column order of [`UncertaintyReport::csv_row`].
pub const CSV_COLUMNS: [&str; 26] = [
    "scenario",
    "p",
    "lhs",
    "rhs_hpw",
    "rhs_shw",
    "rhs_hw",
    "slack_hpw",
    "slack_shw",
    "slack_hw",
    "rel_slack_hpw",
    "rel_slack_shw",
    "rel_slack_hw",
    "passed_hpw",
    "passed_shw",
    "passed_hw",
    "ppr_gap",
    "parseval_gap",
    "t_min",
    "t_max",
    "n",
    "a",
    "b",
    "c",
    "d",
    "tau",
    "eta",
];

/// Header line plus one row per report, `\n`-terminated.
pub fn reports_to_csv(reports: &[UncertaintyReport]) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn holder_json(h: HolderStep) -> Value {
    let mut m = Map::new();
    m.insert("lhs".into(), json_f64(h.lhs));
    m.insert("mu_2".into(), json_f64(h.mu_2));
    m.insert("passed".into(), Value::Bool(h.passed));
    Value::Object(m)
}

pub fn grid_json(g: &Grid) -> Value {
    let mut m = Map::new();
    m.insert("t_min".into(), json_f64(g.t_min()));
    m.insert("t_max".into(), json_f64(g.t_max()));
    m.insert("n".into(), Value::from(g.len()));
    Value::Object(m)
}

pub fn params_json(p: &OlctParams) -> Value {
    let mut m = Map::new();
    for (k, v) in [("a", p.a()), ("b", p.b()), ("c", p.c()), ("d", p.d()), ("tau", p.tau()), ("eta", p.eta())] {
        m.insert(k.into(), json_f64(v));
    }
    Value::Object(m)
}
