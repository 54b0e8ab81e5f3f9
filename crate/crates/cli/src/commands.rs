//! Subcommand bodies. Each returns an [`Outcome`]; files go to the output
//! directory and the verdict is decided here, not in `main`.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde_json::{Map, Value};

use olct_core::bounds::{g_curve, table1_bound_reference, table1_bound_sharpened};
use olct_core::moments::{default_xi_grid, ppr_check, MAX_ORDER};
use olct_core::olct::{olct_forward, parseval_gap, OlctParams, TransformPath};
use olct_core::signal::{Grid, SampledSignal};
use olct_core::verify::{
    energy_densities, format_f64, grid_json, json_f64, params_json, reports_to_csv, sweep_r, sweep_to_csv, verify_hpw,
    verify_hw, verify_shw, AMode, SweepScenario, UncertaintyReport,
};

use crate::config::{BoundKind, ScenarioConfig};
use crate::error::CliError;

/// Strict-positivity margin for the closed-form comparisons.
pub const POSITIVITY_MARGIN: f64 = 1e-12;

/// Allowed relative residual of `this - reference = (b^2 pi / 2) e^{r/2} G(r)`.
pub const DIFFERENCE_IDENTITY_TOL: f64 = 1e-10;

pub struct Outcome {
    pub passed: bool,
    /// Human-readable summary, one line per entry.
    pub lines: Vec<String>,
    pub json: Value,
}

pub struct Context {
    pub config: ScenarioConfig,
    pub out: PathBuf,
}

fn core<T>(path: &'static str, r: olct_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::core_at(path, e))
}

fn csv<const N: usize>(header: &str, rows: impl Iterator<Item = [f64; N]>) -> String {
    let mut out = format!("{header}\n");
    for row in rows {
        out.push_str(&row.map(format_f64).join(","));
        out.push('\n');
    }
    out
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl Context {
    fn write(&self, name: &str, contents: &str) -> Result<String, CliError> {
        std::fs::create_dir_all(&self.out)?;
        std::fs::write(self.out.join(name), contents)?;
        Ok(name.to_string())
    }

    fn head(&self, command: &str) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("scenario".into(), Value::String(self.config.name.clone()));
        m.insert("command".into(), Value::String(command.into()));
        m
    }

    fn sampled(&self, j: &OlctParams) -> Result<SampledSignal, CliError> {
        let grid = self.config.time_grid()?;
        core("signal", self.config.signal(j)?.sample(&grid))
    }

    pub fn transform(&self) -> Result<Outcome, CliError> {
        let j = self.config.olct_params()?;
        let f = self.sampled(&j)?;
        let n = f.len();
        let xi_grid = if j.is_degenerate() {
            // O(xi) samples f at d (xi - tau): map the time grid back.
            let g = f.grid();
            let (x0, x1) = (j.tau() + g.t_min() / j.d(), j.tau() + g.t_max() / j.d());
            core("grid", Grid::new(x0.min(x1), x0.max(x1), n))?
        } else {
            core("grid", default_xi_grid(&f, &j, n))?
        };
        let spectrum = core("transform", olct_forward(&f, &j, &xi_grid, TransformPath::ChirpFft))?;
        let gap = core("transform", parseval_gap(&f, &spectrum))?;
        let tol = self.config.tolerance.parseval;
        let passed = gap <= tol;
        let rows = xi_grid
            .points()
            .zip(spectrum.values())
            .map(|(xi, v)| [xi, v.re, v.im, v.norm_sqr()]);
        let file = self.write("spectrum.csv", &csv("xi,re,im,abs2", rows))?;
        let mut m = self.head("transform");
        m.insert("branch".into(), Value::String(if j.is_degenerate() { "b0" } else { "integral" }.into()));
        m.insert("parseval_gap".into(), json_f64(gap));
        m.insert("tol".into(), json_f64(tol));
        m.insert("passed".into(), Value::Bool(passed));
        m.insert("grid".into(), grid_json(f.grid()));
        m.insert("xi_grid".into(), grid_json(&xi_grid));
        m.insert("params".into(), params_json(&j));
        m.insert("files".into(), Value::from(vec![file.clone()]));
        Ok(Outcome {
            passed,
            lines: vec![
                format!("wrote {file} ({n} samples on xi in [{}, {}])", format_f64(xi_grid.t_min()), format_f64(xi_grid.t_max())),
                format!("{} parseval_gap = {} (tol {})", verdict(passed), format_f64(gap), format_f64(tol)),
            ],
            json: Value::Object(m),
        })
    }

    pub fn ppr(&self) -> Result<Outcome, CliError> {
        let j = self.config.olct_params()?;
        let f = self.sampled(&j)?;
        let m_cfg = &self.config.moments;
        if m_cfg.p > MAX_ORDER {
            return Err(CliError::config("moments.p", format!("must be at most {MAX_ORDER}, got {}", m_cfg.p)));
        }
        let check = core("ppr", ppr_check(&f, &j, m_cfg.p, m_cfg.xi_m))?;
        let tol = self.config.tolerance.ppr;
        let passed = check.rel_gap <= tol;
        let mut m = self.head("ppr");
        m.insert("p".into(), Value::from(m_cfg.p));
        m.insert("xi_m".into(), json_f64(m_cfg.xi_m));
        m.insert("lhs".into(), json_f64(check.lhs));
        m.insert("rhs".into(), json_f64(check.rhs));
        m.insert("rel_gap".into(), json_f64(check.rel_gap));
        m.insert("tol".into(), json_f64(tol));
        m.insert("passed".into(), Value::Bool(passed));
        m.insert("grid".into(), grid_json(f.grid()));
        m.insert("params".into(), params_json(&j));
        let json = Value::Object(m);
        let mut text = serde_json::to_string_pretty(&json).expect("serialises");
        text.push('\n');
        self.write("ppr.json", &text)?;
        Ok(Outcome {
            passed,
            lines: vec![
                format!("spectral moment   = {}", format_f64(check.lhs)),
                format!("derivative energy = {}", format_f64(check.rhs)),
                format!("{} rel_gap = {} (tol {})", verdict(passed), format_f64(check.rel_gap), format_f64(tol)),
            ],
            json,
        })
    }

    pub fn verify(&self, bound: Option<BoundKind>) -> Result<Outcome, CliError> {
        let c = &self.config;
        let kind = bound.unwrap_or(c.bound.kind);
        let j = c.olct_params()?;
        let f = self.sampled(&j)?;
        let tol = c.tolerance.inequality;
        let mode = c.a_mode();
        let report = match kind {
            BoundKind::Hpw => core("verify", verify_hpw(&f, &j, &c.hpw_config()?, tol))?,
            BoundKind::Shw => core("verify", verify_shw(&f, &j, &c.hpw_config()?, &mode, tol))?,
            BoundKind::Hw => {
                let m = &c.moments;
                core("verify", verify_hw(&f, &j, m.p, m.t_m, m.xi_m, tol))?
            }
        }
        .with_scenario(c.name.clone());
        let mut lines = Vec::new();
        let mut passed = !report.theorem_violated();
        for (name, rhs, ok) in [
            ("hpw", report.rhs_hpw, report.passed.hpw),
            ("shw", report.rhs_shw, report.passed.shw),
            ("hw", report.rhs_hw, report.passed.hw),
        ] {
            if let (Some(rhs), Some(ok)) = (rhs, ok) {
                lines.push(format!("{} {name}: lhs = {} >= rhs = {}", verdict(ok), format_f64(report.lhs), format_f64(rhs)));
            }
        }
        if report.a_admissible == Some(false) {
            lines.push(format!("note: A = {} exceeds A* = {}; the shw comparison is outside the theorem", fmt_opt(report.a), fmt_opt(report.a_star)));
        }
        if let Some(gap) = report.gram_gap {
            let ok = gap <= c.tolerance.equality;
            passed &= ok;
            lines.push(format!("{} gram identity under A*: gap = {} (tol {})", verdict(ok), format_f64(gap), format_f64(c.tolerance.equality)));
        }
        if c.bound.expect_equality {
            let (gap, ok) = equality_check(&report, kind, c.tolerance.equality);
            passed &= ok;
            lines.push(format!("{} attained: |lhs - rhs| / lhs = {} (tol {})", verdict(ok), format_f64(gap), format_f64(c.tolerance.equality)));
        }
        let ppr_ok = report.ppr_gap <= c.tolerance.ppr;
        let parseval_ok = report.parseval_gap <= c.tolerance.parseval;
        passed &= ppr_ok && parseval_ok;
        lines.push(format!("{} ppr_gap = {}", verdict(ppr_ok), format_f64(report.ppr_gap)));
        lines.push(format!("{} parseval_gap = {}", verdict(parseval_ok), format_f64(report.parseval_gap)));

        let mut json = report.to_json_value();
        if let Some(reference) = c.bound.reference {
            let rhs = report.rhs_shw.or(report.rhs_hpw).or(report.rhs_hw).unwrap_or(f64::NAN);
            let mut r = Map::new();
            r.insert("value".into(), json_f64(reference));
            r.insert("lhs_over_reference".into(), json_f64(report.lhs / reference));
            r.insert("rhs_over_reference".into(), json_f64(rhs / reference));
            json.as_object_mut().expect("object").insert("reference".into(), Value::Object(r));
            lines.push(format!(
                "reference {}: lhs/reference = {}, rhs/reference = {}",
                format_f64(reference),
                format_f64(report.lhs / reference),
                format_f64(rhs / reference)
            ));
        }
        let mut text = serde_json::to_string_pretty(&json).expect("serialises");
        text.push('\n');
        self.write("report.json", &text)?;
        self.write("report.csv", &reports_to_csv(std::slice::from_ref(&report)))?;
        lines.push(format!("{} {}", verdict(passed), c.name));
        Ok(Outcome { passed, lines, json })
    }

    pub fn sweep(&self) -> Result<Outcome, CliError> {
        let c = &self.config;
        let scenario: SweepScenario = c.sweep.scenario.into();
        let j = c.olct_params()?;
        let rows = core("sweep", sweep_r(&c.sweep.r_values, scenario, &j))?;
        if rows.is_empty() {
            return Err(CliError::config("sweep.r_values", "must not be empty"));
        }
        let tol = c.tolerance.inequality;
        // A = 0 and A = 1 are claimed strictly; the Gram A only soundly.
        let strict = !matches!(scenario.a_mode(), AMode::Gram(_));
        let row_ok = |q1: f64, q2: f64| if strict { q1 > q2 } else { q1 - q2 >= -tol * q1 };
        let failing: Vec<f64> = rows.iter().filter(|r| !row_ok(r.q1, r.q2)).map(|r| r.r).collect();
        let min_gap = rows.iter().map(|r| r.q1 - r.q2).fold(f64::INFINITY, f64::min);
        let passed = failing.is_empty();
        let file = self.write(&format!("sweep_{}.csv", scenario.name()), &sweep_to_csv(&rows))?;
        let relation = if strict { "Q1 > Q2" } else { "Q1 >= Q2" };
        let mut m = self.head("sweep");
        m.insert("sweep".into(), Value::String(scenario.name().into()));
        m.insert("a_mode".into(), Value::String(scenario.a_mode().to_string()));
        m.insert("relation".into(), Value::String(relation.into()));
        m.insert("rows".into(), Value::from(rows.len()));
        m.insert("min_q1_minus_q2".into(), json_f64(min_gap));
        m.insert("failing_r".into(), Value::Array(failing.iter().map(|&r| json_f64(r)).collect()));
        m.insert("passed".into(), Value::Bool(passed));
        m.insert("params".into(), params_json(&j));
        m.insert("files".into(), Value::from(vec![file.clone()]));
        Ok(Outcome {
            passed,
            lines: vec![
                format!("wrote {file} ({} rows, A {})", rows.len(), scenario.a_mode()),
                format!("{} {relation} at every r: min Q1 - Q2 = {}", verdict(passed), format_f64(min_gap)),
            ],
            json: Value::Object(m),
        })
    }

    pub fn table1(&self) -> Result<Outcome, CliError> {
        let t = &self.config.table1;
        if t.r_values.is_empty() {
            return Err(CliError::config("table1.r_values", "must not be empty"));
        }
        let mut rows = Vec::with_capacity(t.r_values.len());
        let mut passed = true;
        let mut lines = Vec::new();
        for &r in &t.r_values {
            let this = core("table1.r_values", table1_bound_sharpened(r, t.b))?;
            let reference = core("table1.r_values", table1_bound_reference(r, t.b))?;
            let diff = this - reference;
            let predicted = t.b * t.b * PI / 2.0 * (r / 2.0).exp() * core("table1.r_values", g_curve(r))?;
            let residual = (diff - predicted).abs() / this;
            let ok = diff > POSITIVITY_MARGIN && residual <= DIFFERENCE_IDENTITY_TOL;
            passed &= ok;
            lines.push(format!(
                "{} r = {}: this = {} > reference = {}",
                verdict(ok),
                format_f64(r),
                format_f64(this),
                format_f64(reference)
            ));
            rows.push([r, this, reference, diff, residual]);
        }
        let file = self.write("table1.csv", &csv("r,sharpened,reference,difference,identity_residual", rows.iter().copied()))?;
        let mut m = self.head("table1");
        m.insert("b".into(), json_f64(t.b));
        m.insert(
            "rows".into(),
            Value::Array(
                rows.iter()
                    .map(|row| {
                        let mut o = Map::new();
                        for (k, v) in ["r", "sharpened", "reference", "difference", "identity_residual"].iter().zip(row) {
                            o.insert((*k).into(), json_f64(*v));
                        }
                        Value::Object(o)
                    })
                    .collect(),
            ),
        );
        m.insert("passed".into(), Value::Bool(passed));
        m.insert("files".into(), Value::from(vec![file.clone()]));
        lines.insert(0, format!("wrote {file}"));
        Ok(Outcome {
            passed,
            lines,
            json: Value::Object(m),
        })
    }

    pub fn gcurve(&self) -> Result<Outcome, CliError> {
        let points = self.config.gcurve.points()?;
        let values = points
            .iter()
            .map(|&r| core("gcurve", g_curve(r)).map(|g| [r, g]))
            .collect::<Result<Vec<_>, _>>()?;
        let (r_min, g_min) = values.iter().fold((f64::NAN, f64::INFINITY), |acc, &[r, g]| if g < acc.1 { (r, g) } else { acc });
        let passed = g_min > POSITIVITY_MARGIN;
        let file = self.write("gcurve.csv", &csv("r,g", values.iter().copied()))?;
        let mut m = self.head("gcurve");
        m.insert("points".into(), Value::from(values.len()));
        m.insert("min_g".into(), json_f64(g_min));
        m.insert("argmin_r".into(), json_f64(r_min));
        m.insert("passed".into(), Value::Bool(passed));
        m.insert("files".into(), Value::from(vec![file.clone()]));
        Ok(Outcome {
            passed,
            lines: vec![
                format!("wrote {file} ({} points)", values.len()),
                format!("{} G(r) > 0: min G = {} at r = {}", verdict(passed), format_f64(g_min), format_f64(r_min)),
            ],
            json: Value::Object(m),
        })
    }

    pub fn energy(&self) -> Result<Outcome, CliError> {
        let j = self.config.olct_params()?;
        let f = self.sampled(&j)?;
        let e = core("energy", energy_densities(&f, &self.config.weight()?, &j))?;
        let pairs = |g: &Grid, d: &[f64]| g.points().zip(d).map(|(x, &y)| [x, y]).collect::<Vec<_>>();
        let files = [
            self.write("density_signal.csv", &csv("t,density", pairs(&e.time, &e.signal).into_iter()))?,
            self.write("density_weighted.csv", &csv("t,density", pairs(&e.time, &e.weighted).into_iter()))?,
            self.write("density_fourier.csv", &csv("sigma,density", pairs(&e.sigma, &e.fourier).into_iter()))?,
            self.write("density_olct.csv", &csv("xi,density", pairs(&e.xi, &e.olct).into_iter()))?,
        ];
        let names = ["signal", "weighted", "fourier", "olct"];
        let mut spread_csv = String::from("density,spread\n");
        let mut spread = Map::new();
        let mut lines = vec![format!("wrote {}", files.join(", "))];
        for (name, s) in names.iter().zip(e.spread) {
            spread_csv.push_str(&format!("{name},{}\n", format_f64(s)));
            spread.insert((*name).into(), json_f64(s));
            lines.push(format!("spread {name:<8} = {}", format_f64(s)));
        }
        let spread_file = self.write("spread.csv", &spread_csv)?;
        let mut m = self.head("energy");
        m.insert("spread".into(), Value::Object(spread));
        m.insert("passed".into(), Value::Bool(true));
        m.insert("params".into(), params_json(&j));
        m.insert("files".into(), Value::from(files.iter().cloned().chain([spread_file]).collect::<Vec<_>>()));
        Ok(Outcome {
            passed: true,
            lines,
            json: Value::Object(m),
        })
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".into(), format_f64)
}

/// `|lhs - rhs| / lhs` for the checked bound.
fn equality_check(report: &UncertaintyReport, kind: BoundKind, tol: f64) -> (f64, bool) {
    let rhs = match kind {
        BoundKind::Hpw => report.rhs_hpw,
        BoundKind::Shw => report.rhs_shw,
        BoundKind::Hw => report.rhs_hw,
    };
    let gap = rhs.map_or(f64::INFINITY, |rhs| (report.lhs - rhs).abs() / report.lhs);
    (gap, gap <= tol)
}
