//! The metric family `g = 2 sum_mu y_mu psi_{ij mu} dx_i dx_j + 2 dx_i dx_i^* + C_{mu nu} dy_mu dy_nu`.
//!
//! Coordinates are ordered `x_1..x_a, x_1^*..x_a^*, y_1..y_b` and indexed
//! from zero. `psi_{ij mu}` is a function of `x` only; its expression
//! variables `0..a` are `x_1..x_a`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{BilinearForm, FnExpr, Matrix, Scalar, Value};
use crate::error::{Error, Result};

/// A point of `R^{2a+b}` in the coordinate order above.
pub type Point<S> = Vec<S>;

/// Which block a coordinate index belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    X(usize),
    XStar(usize),
    Y(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneWaveMetric {
    a: usize,
    b: usize,
    c: Vec<Vec<Value>>,
    /// `psi[(i, j)]` for `i <= j`, one expression per `y` direction.
    psi: BTreeMap<(usize, usize), Vec<FnExpr>>,
}

impl PlaneWaveMetric {
    /// Validates symmetry and nondegeneracy of `C`, the shape of every `psi`
    /// entry, and that `psi` depends on `x` only.
    pub fn new(
        a: usize,
        b: usize,
        c: Vec<Vec<Value>>,
        psi: BTreeMap<(usize, usize), Vec<FnExpr>>,
    ) -> Result<Self> {
        if c.len() != b || c.iter().any(|r| r.len() != b) {
            return Err(Error::DimensionMismatch {
                expected: b,
                found: c.len(),
            });
        }
        let mut clean = BTreeMap::new();
        for ((i, j), v) in psi {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            if j >= a {
                return Err(Error::Invalid(format!("psi index ({i},{j}) out of range")));
            }
            if v.len() != b {
                return Err(Error::DimensionMismatch {
                    expected: b,
                    found: v.len(),
                });
            }
            if let Some(k) = v.iter().filter_map(FnExpr::max_var).max() {
                if k >= a {
                    return Err(Error::Invalid(format!(
                        "psi depends on variable {k}, only x_0..x_{} allowed",
                        a - 1
                    )));
                }
            }
            if clean.insert((i, j), v).is_some() {
                return Err(Error::Invalid(format!("psi ({i},{j}) given twice")));
            }
        }
        let m = PlaneWaveMetric {
            a,
            b,
            c,
            psi: clean,
        };
        let float = m.has_float();
        let ok = if float {
            m.c_form::<f64>().and_then(|f| f.inverse()).is_ok()
        } else {
            m.c_form::<crate::algebra::Rational>()
                .and_then(|f| f.inverse())
                .is_ok()
        };
        if !ok {
            return Err(Error::DegenerateForm);
        }
        Ok(m)
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn dim(&self) -> usize {
        2 * self.a + self.b
    }

    pub fn x(&self, i: usize) -> usize {
        i
    }

    pub fn x_star(&self, i: usize) -> usize {
        self.a + i
    }

    pub fn y(&self, mu: usize) -> usize {
        2 * self.a + mu
    }

    pub fn coord(&self, idx: usize) -> Coord {
        if idx < self.a {
            Coord::X(idx)
        } else if idx < 2 * self.a {
            Coord::XStar(idx - self.a)
        } else {
            Coord::Y(idx - 2 * self.a)
        }
    }

    /// Coordinate names `x1.., x1*.., y1..` used in CSV headers.
    pub fn coord_names(&self) -> Vec<String> {
        let mut out: Vec<String> = (1..=self.a).map(|i| format!("x{i}")).collect();
        out.extend((1..=self.a).map(|i| format!("x{i}*")));
        out.extend((1..=self.b).map(|m| format!("y{m}")));
        out
    }

    pub fn c_values(&self) -> &[Vec<Value>] {
        &self.c
    }

    pub fn c_form<S: Scalar>(&self) -> Result<BilinearForm<S>> {
        BilinearForm::from_values(&self.c)
    }

    /// `psi_{ij mu}`, `None` when identically zero by construction.
    pub fn psi(&self, i: usize, j: usize, mu: usize) -> Option<&FnExpr> {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.psi.get(&key).map(|v| &v[mu]).filter(|e| !e.is_zero())
    }

    pub fn psi_entries(&self) -> &BTreeMap<(usize, usize), Vec<FnExpr>> {
        &self.psi
    }

    pub fn has_float(&self) -> bool {
        self.c
            .iter()
            .flatten()
            .any(|v| matches!(v, Value::Float(_)))
            || self.psi.values().flatten().any(FnExpr::has_float)
    }

    pub fn is_polynomial(&self) -> bool {
        self.psi.values().flatten().all(FnExpr::is_polynomial)
    }

    pub fn to_doc(&self) -> MetricDoc {
        MetricDoc {
            a: self.a,
            b: self.b,
            c: self.c.clone(),
            psi: self
                .psi
                .iter()
                .map(|((i, j), v)| (format!("{i},{j}"), v.clone()))
                .collect(),
        }
    }

    pub fn from_doc(doc: &MetricDoc) -> Result<Self> {
        let mut psi = BTreeMap::new();
        for (k, v) in &doc.psi {
            let (i, j) = k
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("psi key {k:?} is not \"i,j\"")))?;
            psi.insert((i, j), v.clone());
        }
        Self::new(doc.a, doc.b, doc.c.clone(), psi)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("metric serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(s)?)
    }
}

/// JSON layout `{"a", "b", "C", "psi": {"i,j": [expr; b]}}` with zero-based
/// `i <= j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricDoc {
    pub a: usize,
    pub b: usize,
    #[serde(rename = "C")]
    pub c: Vec<Vec<Value>>,
    #[serde(default)]
    pub psi: BTreeMap<String, Vec<FnExpr>>,
}

pub(crate) fn check_point<S>(m: &PlaneWaveMetric, p: &[S]) -> Result<()> {
    if p.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: p.len(),
        });
    }
    Ok(())
}

/// The metric tensor at `p`.
pub fn metric_at<S: Scalar>(m: &PlaneWaveMetric, p: &[S]) -> Result<BilinearForm<S>> {
    check_point(m, p)?;
    let (a, b) = (m.a, m.b);
    let x = &p[..a];
    let y = &p[2 * a..];
    let c = m.c_form::<S>()?;
    let mut g = Matrix::zeros(m.dim(), m.dim());
    for i in 0..a {
        g[(i, a + i)] = S::one();
        g[(a + i, i)] = S::one();
        for j in i..a {
            let mut s = S::zero();
            for mu in 0..b {
                if y[mu].is_zero() {
                    continue;
                }
                if let Some(f) = m.psi(i, j, mu) {
                    s = s + y[mu].clone() * f.eval(x)?;
                }
            }
            let v = S::from_i64(2) * s;
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        }
    }
    for mu in 0..b {
        for nu in 0..b {
            g[(2 * a + mu, 2 * a + nu)] = c.entry(mu, nu).clone();
        }
    }
    BilinearForm::new(g)
}
