use std::time::Duration;

use serde::Serialize;
use serde_json::Value as Json;
use tsankov::algebra::{Mode, Value};
use tsankov::model::{Witness, WitnessExpr};

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<String>,
    pub mode: Mode,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub summary: String,
    #[serde(skip_serializing_if = "Json::is_null")]
    pub detail: Json,
}

impl Check {
    pub fn new(name: impl Into<String>, holds: bool, summary: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            holds,
            summary: summary.into(),
            detail: Json::Null,
        }
    }

    pub fn with_detail(mut self, detail: impl Serialize) -> Self {
        self.detail = serde_json::to_value(detail).expect("report detail serializes");
        self
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub holds: bool,
    pub checks: Vec<Check>,
    /// Only with `--timing`, so that default reports are reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_s: Option<f64>,
}

impl Report {
    pub fn new(config: RunConfig, checks: Vec<Check>) -> Self {
        Report {
            command: config.command.clone(),
            holds: checks.iter().all(|c| c.holds),
            config,
            checks,
            duration_s: None,
        }
    }

    pub fn summary(&self, elapsed: Duration) -> String {
        let ok = self.checks.iter().filter(|c| c.holds).count();
        let mut s = format!(
            "{} ({}): {ok}/{} checks hold in {:.2} s\n",
            self.command,
            match self.config.mode {
                Mode::Rational => "rational",
                Mode::Float => "float",
            },
            self.checks.len(),
            elapsed.as_secs_f64()
        );
        for c in &self.checks {
            let mark = if c.holds { "ok  " } else { "FAIL" };
            s.push_str(&format!("  {mark} {}: {}\n", c.name, c.summary));
        }
        s
    }
}

/// Rationals as `p/q`; floats in shortest form, with an exponent when tiny
/// or huge.
pub fn fmt_value(v: &Value) -> String {
    match v {
        Value::Float(x) if *x != 0.0 && !(1e-4..1e15).contains(&x.abs()) => format!("{x:e}"),
        v => v.to_string(),
    }
}

/// `c1 l1 + c2 l2 + ...` over the nonzero entries, or `0`.
pub fn combination(v: &[Value], labels: &[String]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(labels)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, l)| match fmt_value(c).as_str() {
            "1" => l.clone(),
            "-1" => format!("-{l}"),
            s => format!("{s} {l}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

pub fn render_witness(w: &Witness, labels: &[String]) -> String {
    let v = w
        .vector
        .map(|i| labels.get(i).cloned().unwrap_or_else(|| format!("e{i}")))
        .unwrap_or_default();
    let r = combination(&w.residual, labels);
    let l = |i: usize| labels.get(i).cloned().unwrap_or_else(|| format!("e{i}"));
    match &w.expr {
        WitnessExpr::Product { left, right } => {
            format!(
                "{}{} {v} = {r}",
                left.describe(labels),
                right.describe(labels)
            )
        }
        WitnessExpr::Commutator { left, right } => {
            format!(
                "[{}, {}] {v} = {r}",
                left.describe(labels),
                right.describe(labels)
            )
        }
        WitnessExpr::QuarticCoefficient { indices } => format!(
            "coefficient of x_{} x_{} x_{} x_{} in J(x)^2 {v} = {r}",
            l(indices[0]),
            l(indices[1]),
            l(indices[2]),
            l(indices[3])
        ),
        WitnessExpr::Bianchi { idx } => format!(
            "Bianchi sum at ({},{},{},{}) = {}",
            l(idx[0]),
            l(idx[1]),
            l(idx[2]),
            l(idx[3]),
            w.residual.first().map(fmt_value).unwrap_or_default()
        ),
        WitnessExpr::PairSymmetry { idx } => format!(
            "pair symmetry broken at ({},{},{},{})",
            l(idx[0]),
            l(idx[1]),
            l(idx[2]),
            l(idx[3])
        ),
    }
}
