//! Builtin fixtures, input files, points and seeded sampling.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value as Json;
use tsankov::algebra::{parse_rational, Mode, Rational, Scalar};
use tsankov::geometry::PlaneWaveMetric;
use tsankov::model::Model0;
use tsankov::realizations::{AFamily, PhiFamily, Realization};
use tsankov::{Error, Result};

pub const M14_JSON: &str = include_str!("../fixtures/m14.json");
/// Default `M_Phi` parameters: the family with non-constant `Xi`.
pub const M_PHI_JSON: &str = include_str!("../fixtures/m-phi.json");
/// Default `M_A` parameters: every `a_{i,j} = 1`.
pub const M_A_JSON: &str = include_str!("../fixtures/ones.json");

pub fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path))
        .map_err(|e| Error::Invalid(format!("cannot read {path}: {e}")))
}

/// Whether a JSON document holds a plain number anywhere. Exact values are
/// `{"num", "den"}` objects, so a bare number means float input.
pub fn has_float(v: &Json) -> bool {
    match v {
        Json::Number(_) => true,
        Json::Array(xs) => xs.iter().any(has_float),
        Json::Object(m) => m.iter().any(|(k, v)| match (k.as_str(), v) {
            ("idx", _) => false,
            ("dim" | "a" | "b" | "var" | "n", Json::Number(_)) => false,
            _ => has_float(v),
        }),
        _ => false,
    }
}

pub fn resolve(requested: Option<Mode>, wants_float: bool) -> Mode {
    requested.unwrap_or(if wants_float {
        Mode::Float
    } else {
        Mode::Rational
    })
}

/// The text of a model: the builtin `m14` or a file.
pub fn model_text(name: &str) -> Result<String> {
    match name {
        "m14" => Ok(M14_JSON.to_string()),
        path => read(path),
    }
}

pub fn parse_model<S: Scalar>(text: &str) -> Result<Model0<S>> {
    Model0::from_json(text)
}

pub enum GeometryInput {
    Metric(PlaneWaveMetric),
    Realization(Realization),
}

impl GeometryInput {
    pub fn load(name: &str, params: Option<&str>) -> Result<Self> {
        let text = |default: &str| match params {
            Some(p) => read(p),
            None => Ok(default.to_string()),
        };
        match name {
            "m-phi" => Ok(GeometryInput::Realization(Realization::m_phi(
                PhiFamily::from_json(&text(M_PHI_JSON)?)?,
            )?)),
            "m-a" => Ok(GeometryInput::Realization(Realization::m_a(
                AFamily::from_json(&text(M_A_JSON)?)?,
            )?)),
            path => {
                if params.is_some() {
                    return Err(Error::Invalid(
                        "--params only applies to m-phi and m-a".into(),
                    ));
                }
                Ok(GeometryInput::Metric(PlaneWaveMetric::from_json(&read(
                    path,
                )?)?))
            }
        }
    }

    pub fn metric(&self) -> &PlaneWaveMetric {
        match self {
            GeometryInput::Metric(m) => m,
            GeometryInput::Realization(r) => r.metric(),
        }
    }

    pub fn realization(&self, what: &str) -> Result<&Realization> {
        match self {
            GeometryInput::Realization(r) => Ok(r),
            GeometryInput::Metric(_) => Err(Error::Invalid(format!(
                "{what} needs m-phi or m-a, not a bare metric"
            ))),
        }
    }

    /// Float unless the metric is polynomial with exact coefficients.
    pub fn wants_float(&self) -> bool {
        let m = self.metric();
        m.has_float() || !m.is_polynomial()
    }
}

pub fn parse_scalar<S: Scalar>(s: &str) -> Result<S> {
    match S::MODE {
        Mode::Rational => Ok(S::from_rational(&parse_rational(s)?)),
        Mode::Float => {
            let x = match s.trim().parse::<f64>() {
                Ok(x) => x,
                Err(_) => parse_rational(s)?.to_f64(),
            };
            S::from_f64(x).ok_or_else(|| Error::Parse(format!("not a finite number: {s:?}")))
        }
    }
}

/// A comma-separated vector of `n` numbers.
pub fn parse_vector<S: Scalar>(s: &str, n: usize) -> Result<Vec<S>> {
    let v = s
        .split(',')
        .map(parse_scalar::<S>)
        .collect::<Result<Vec<S>>>()?;
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    Ok(v)
}

/// Seeded sampler of small rationals `k/d`, `|k| <= 4`, `1 <= d <= 4`.
/// Float mode converts the same rationals, so both modes see the same points.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn scalar<S: Scalar>(&mut self) -> S {
        let k: i64 = self.rng.gen_range(-4..=4);
        let d: i64 = self.rng.gen_range(1..=4);
        S::from_rational(&Rational::new(k.into(), d.into()))
    }

    pub fn vector<S: Scalar>(&mut self, n: usize) -> Vec<S> {
        (0..n).map(|_| self.scalar()).collect()
    }
}

/// `var=start:end:step` over one coordinate.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub var: String,
    pub start: String,
    pub end: String,
    pub step: String,
}

impl std::str::FromStr for Sweep {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("sweep must look like x1=0:1:0.1, got {s:?}"));
        let (var, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, end, step] = parts[..] else {
            return Err(bad());
        };
        for p in [start, end, step] {
            if parse_rational(p).is_err() && p.trim().parse::<f64>().is_err() {
                return Err(bad());
            }
        }
        Ok(Sweep {
            var: var.trim().to_string(),
            start: start.into(),
            end: end.into(),
            step: step.into(),
        })
    }
}

/// `start + k step` for `k = 0, 1, ...` up to `end`.
fn steps<S: Scalar>(start: &S, end: &S, step: &S) -> Result<Vec<S>> {
    let span = (end.clone() - start.clone()).to_f64() / step.to_f64();
    if !(step.to_f64() > 0.0) || !(span >= 0.0) {
        return Err(Error::Invalid(
            "sweep needs start <= end and step > 0".into(),
        ));
    }
    let n = (span + 1e-9).floor() as i64 + 1;
    Ok((0..n)
        .map(|k| start.clone() + S::from_i64(k) * step.clone())
        .collect())
}

impl Sweep {
    /// Coordinate index and the sample values `start + k step <= end`.
    pub fn samples<S: Scalar>(&self, names: &[String]) -> Result<(usize, Vec<S>)> {
        let idx = names
            .iter()
            .position(|n| *n == self.var)
            .ok_or_else(|| Error::Invalid(format!("no coordinate named {:?}", self.var)))?;
        // exact arithmetic when all three are rationals, so 0.1 steps do not drift
        let exact: Result<Vec<Rational>> = [&self.start, &self.end, &self.step]
            .iter()
            .map(|s| parse_rational(s))
            .collect();
        let values: Vec<S> = match exact {
            Ok(v) => steps(&v[0], &v[1], &v[2])?
                .iter()
                .map(S::from_rational)
                .collect(),
            Err(_) => {
                let (start, end, step) = (
                    parse_scalar::<S>(&self.start)?,
                    parse_scalar::<S>(&self.end)?,
                    parse_scalar::<S>(&self.step)?,
                );
                steps(&start, &end, &step)?
            }
        };
        Ok((idx, values))
    }
}
