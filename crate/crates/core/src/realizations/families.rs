//! The two metric families on `R^14` with model `M14`.
//!
//! Coordinates follow the `M14` basis order: `x1 x2 x3 x1* x2* x3* y11 y12
//! y21 y22 y31 y32 y41 y42`, so `d/dy_{ij}` sits where `beta_{ij}` sits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{FnExpr, Rational, Scalar, Value};
use crate::error::{Error, Result};
use crate::geometry::PlaneWaveMetric;

/// Zero-based `y` slot of `y_{i,j}` (`i = 0..3` for `y_{1..4,*}`).
pub fn y_slot(i: usize, j: usize) -> usize {
    2 * i + j
}

/// Sample abscissae for the reciprocal-derivative check.
const SAMPLES: [(i64, i64); 7] = [(-3, 2), (-1, 1), (-1, 3), (0, 1), (1, 2), (1, 1), (2, 1)];
const PAIR_TOL: f64 = 1e-9;

/// `Phi = {phi_{i,j}}`: six functions of one variable (expression variable 0).
#[derive(Clone, Debug, PartialEq)]
pub struct PhiFamily {
    phi: [[FnExpr; 2]; 3],
}

impl PhiFamily {
    /// Checks `phi_{i,1}' phi_{i,2}' = 1` at a fixed set of sample points,
    /// exactly when both functions are polynomial.
    pub fn new(phi: [[FnExpr; 2]; 3]) -> Result<Self> {
        let f = Self::new_unchecked(phi)?;
        for i in 0..3 {
            f.check_pair(i)?;
        }
        Ok(f)
    }

    /// Skips the reciprocal-derivative check (for building broken examples).
    pub fn new_unchecked(phi: [[FnExpr; 2]; 3]) -> Result<Self> {
        for (i, row) in phi.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.max_var().is_some_and(|v| v > 0) {
                    return Err(Error::Invalid(format!(
                        "phi_{{{},{}}} must be a function of one variable",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(PhiFamily { phi })
    }

    fn check_pair(&self, i: usize) -> Result<()> {
        let exact = self.phi[i].iter().all(FnExpr::is_polynomial)
            && !self.phi[i].iter().any(FnExpr::has_float);
        for &(n, d) in &SAMPLES {
            let ok = if exact {
                let t = Rational::from_frac(n, d);
                self.derivative_product::<Rational>(i, &t)? == Rational::one()
            } else {
                let t = n as f64 / d as f64;
                self.derivative_product::<f64>(i, &t)?
                    .approx_eq(&1.0, PAIR_TOL)
            };
            if !ok {
                return Err(Error::Hypothesis(format!(
                    "phi_{{{0},1}}' phi_{{{0},2}}' != 1 at t = {n}/{d}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// `phi_{i,1}'(t) phi_{i,2}'(t)`, `i` zero-based.
    pub fn derivative_product<S: Scalar>(&self, i: usize, t: &S) -> Result<S> {
        let d1 = self.phi[i][0].derivative(0).eval(std::slice::from_ref(t))?;
        let d2 = self.phi[i][1].derivative(0).eval(std::slice::from_ref(t))?;
        Ok(d1 * d2)
    }

    /// All six functions equal to the identity.
    pub fn identity() -> Self {
        let x = FnExpr::var(0);
        PhiFamily {
            phi: std::array::from_fn(|_| [x.clone(), x.clone()]),
        }
    }

    /// The specialization `phi_{2,j}(t) = phi_{3,j}(t) = t` with the given
    /// pair for `i = 1`.
    pub fn specialized(phi11: FnExpr, phi12: FnExpr) -> Result<Self> {
        let x = FnExpr::var(0);
        Self::new([[phi11, phi12], [x.clone(), x.clone()], [x.clone(), x]])
    }

    /// `phi_{1,1}' = b e^{ct}`, `phi_{1,2}' = e^{-ct} / b`.
    pub fn exponential(b: Rational, c: Rational) -> Result<Self> {
        if b.is_zero() || c.is_zero() {
            return Err(Error::Invalid("b and c must be nonzero".into()));
        }
        let t = FnExpr::var(0);
        let e = |k: Rational| (FnExpr::rational(k) * t.clone()).exp();
        let phi11 = FnExpr::rational(b.clone() / c.clone()) * e(c.clone());
        let phi12 = FnExpr::rational(-(Rational::one() / (b * c.clone()))) * e(-c);
        Self::specialized(phi11, phi12)
    }

    /// `phi_{1,1}' = e^t + e^{2t}`, whose `Xi` is not locally constant.
    /// The partner is `phi_{1,2} = -e^{-t} - t + ln(1 + e^t)`.
    pub fn non_homogeneous() -> Result<Self> {
        let t = FnExpr::var(0);
        let phi11 = t.clone().exp() + FnExpr::rat(1, 2) * (FnExpr::int(2) * t.clone()).exp();
        let phi12 = -(-t.clone()).exp() - t.clone() + (FnExpr::int(1) + t.exp()).ln();
        Self::specialized(phi11, phi12)
    }

    /// `phi_{i,j}`, zero-based.
    pub fn phi(&self, i: usize, j: usize) -> &FnExpr {
        &self.phi[i][j]
    }

    /// `true` for `phi_{2,j}(t) = phi_{3,j}(t) = t` identically.
    pub fn is_specialized(&self) -> bool {
        let line = |e: &FnExpr| {
            e.is_polynomial()
                && !e.has_float()
                && e.along_line::<Rational>(&[Rational::zero()], &[Rational::one()])
                    .is_ok_and(|p| {
                        p == crate::algebra::UPoly::linear(Rational::zero(), Rational::one())
                    })
        };
        self.phi[1..].iter().flatten().all(line)
    }

    pub fn to_doc(&self) -> PhiDoc {
        let mut phi = BTreeMap::new();
        for i in 0..3 {
            for j in 0..2 {
                phi.insert(format!("{},{}", i + 1, j + 1), self.phi[i][j].clone());
            }
        }
        PhiDoc { phi }
    }

    pub fn from_doc(doc: &PhiDoc) -> Result<Self> {
        Self::new(table_from_keys(&doc.phi, "phi")?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("phi family serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(s)?)
    }
}

/// JSON layout `{"phi": {"1,1": expr, ..., "3,2": expr}}` with one-based keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiDoc {
    pub phi: BTreeMap<String, FnExpr>,
}

/// `A = {a_{i,j}}`: six real constants, all exact or all float.
#[derive(Clone, Debug, PartialEq)]
pub struct AFamily {
    a: [[Value; 2]; 3],
}

impl AFamily {
    pub fn new(a: [[Value; 2]; 3]) -> Result<Self> {
        let mode = a[0][0].mode();
        if a.iter().flatten().any(|v| v.mode() != mode) {
            return Err(Error::MixedMode);
        }
        if a.iter().flatten().any(|v| !v.to_f64().is_finite()) {
            return Err(Error::Invalid("a_{i,j} must be finite".into()));
        }
        Ok(AFamily { a })
    }

    pub fn from_rationals(a: [[Rational; 2]; 3]) -> Self {
        AFamily {
            a: a.map(|row| row.map(Value::Exact)),
        }
    }

    /// Every `a_{i,j} = 1`.
    pub fn ones() -> Self {
        Self::from_rationals(std::array::from_fn(|_| [Rational::one(), Rational::one()]))
    }

    /// `a11 = a22 = 1`, `a21 = a12 = 2/3`, `a31 = a32 = 0`.
    pub fn symmetric_example() -> Self {
        let r = Rational::from_frac;
        Self::from_rationals([[r(1, 1), r(2, 3)], [r(2, 3), r(1, 1)], [r(0, 1), r(0, 1)]])
    }

    /// `a_{i,j}`, zero-based.
    pub fn get(&self, i: usize, j: usize) -> &Value {
        &self.a[i][j]
    }

    pub fn value<S: Scalar>(&self, i: usize, j: usize) -> Result<S> {
        self.a[i][j].to_scalar()
    }

    pub fn to_doc(&self) -> ADoc {
        let mut a = BTreeMap::new();
        for i in 0..3 {
            for j in 0..2 {
                a.insert(format!("{},{}", i + 1, j + 1), self.a[i][j].clone());
            }
        }
        ADoc { a }
    }

    pub fn from_doc(doc: &ADoc) -> Result<Self> {
        Self::new(table_from_keys(&doc.a, "a")?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("a family serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(s)?)
    }
}

/// JSON layout `{"a": {"1,1": value, ..., "3,2": value}}` with one-based keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ADoc {
    pub a: BTreeMap<String, Value>,
}

fn table_from_keys<T: Clone>(m: &BTreeMap<String, T>, name: &str) -> Result<[[T; 2]; 3]> {
    let mut slots: [[Option<T>; 2]; 3] = Default::default();
    for (k, v) in m {
        let parsed = k.split_once(',').and_then(|(i, j)| {
            Some((
                i.trim().parse::<usize>().ok()?,
                j.trim().parse::<usize>().ok()?,
            ))
        });
        match parsed {
            Some((i @ 1..=3, j @ 1..=2)) => slots[i - 1][j - 1] = Some(v.clone()),
            _ => {
                return Err(Error::Parse(format!(
                    "{name} key {k:?} is not \"i,j\" with i<=3, j<=2"
                )))
            }
        }
    }
    let mut missing = Vec::new();
    for (i, row) in slots.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            if s.is_none() {
                missing.push(format!("{},{}", i + 1, j + 1));
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::Parse(format!(
            "{name} is missing {}",
            missing.join(" ")
        )));
    }
    Ok(slots.map(|row| row.map(|s| s.expect("checked above"))))
}

/// `C`: `<y_{i,1}, y_{i,2}> = 1` for `i <= 3` and the `y_4` block
/// `[[-1/2, 1/4], [1/4, -1/2]]`.
fn c_matrix() -> Vec<Vec<Value>> {
    let r = |n, d| Value::Exact(Rational::from_frac(n, d));
    let mut c = vec![vec![r(0, 1); 8]; 8];
    for i in 0..3 {
        c[2 * i][2 * i + 1] = r(1, 1);
        c[2 * i + 1][2 * i] = r(1, 1);
    }
    c[6][6] = r(-1, 2);
    c[7][7] = r(-1, 2);
    c[6][7] = r(1, 4);
    c[7][6] = r(1, 4);
    c
}

struct PsiTable(BTreeMap<(usize, usize), Vec<FnExpr>>);

impl PsiTable {
    fn new() -> Self {
        PsiTable(BTreeMap::new())
    }

    /// Adds `e` to `psi_{ij, y_{k,l}}` (all indices zero-based).
    fn add(&mut self, i: usize, j: usize, (k, l): (usize, usize), e: FnExpr) {
        if e.is_zero() {
            return;
        }
        let key = (i.min(j), i.max(j));
        let slot = &mut self.0.entry(key).or_insert_with(|| vec![FnExpr::zero(); 8])[y_slot(k, l)];
        *slot = if slot.is_zero() { e } else { slot.clone() + e };
    }
}

/// `g(d/dx_i, d/dx_j) = 2 sum_mu y_mu psi_{ij mu}`, so a diagonal entry
/// `-2 f y` gives `psi = -f` and an off-diagonal `f y` gives `psi = f/2`.
pub fn build_m_phi(f: &PhiFamily) -> Result<PlaneWaveMetric> {
    let at = |i: usize, j: usize, var: usize| -f.phi[i][j].clone().compose(vec![FnExpr::var(var)]);
    let mut psi = PsiTable::new();
    psi.add(0, 0, (1, 0), at(1, 0, 1));
    psi.add(0, 0, (2, 0), at(2, 0, 2));
    psi.add(1, 1, (2, 1), at(2, 1, 2));
    psi.add(1, 1, (0, 1), at(0, 1, 0));
    psi.add(2, 2, (0, 0), at(0, 0, 0));
    psi.add(2, 2, (1, 1), at(1, 1, 1));
    psi.add(1, 2, (3, 0), FnExpr::rat(1, 2) * FnExpr::var(0));
    psi.add(0, 2, (3, 1), FnExpr::rat(1, 2) * FnExpr::var(1));
    PlaneWaveMetric::new(3, 8, c_matrix(), psi.0)
}

pub fn build_m_a(f: &AFamily) -> Result<PlaneWaveMetric> {
    // the constant n in the mode of v
    let unit = |v: &Value, n: i64| match v {
        Value::Exact(_) => Value::Exact(Rational::from_i64(n)),
        Value::Float(_) => Value::Float(n as f64),
    };
    // c x_var as an expression, dropped when c = 0
    let term = |c: Value, var: usize| {
        if c.is_zero() {
            FnExpr::zero()
        } else {
            FnExpr::Const(c) * FnExpr::var(var)
        }
    };
    let neg_a = |i: usize, j: usize, var: usize| -> Result<FnExpr> {
        let a = &f.a[i][j];
        Ok(term(unit(a, 0).try_sub(a)?, var))
    };
    let one_minus = |i: usize, j: usize, var: usize| -> Result<FnExpr> {
        let a = &f.a[i][j];
        Ok(term(unit(a, 1).try_sub(a)?, var))
    };
    let mut psi = PsiTable::new();
    psi.add(0, 0, (1, 0), neg_a(1, 0, 1)?);
    psi.add(0, 0, (2, 0), neg_a(2, 0, 2)?);
    psi.add(1, 1, (2, 1), neg_a(2, 1, 2)?);
    psi.add(1, 1, (0, 1), neg_a(0, 1, 0)?);
    psi.add(2, 2, (0, 0), neg_a(0, 0, 0)?);
    psi.add(2, 2, (1, 1), neg_a(1, 1, 1)?);
    psi.add(0, 1, (1, 0), one_minus(1, 0, 0)?);
    psi.add(0, 1, (0, 1), one_minus(0, 1, 1)?);
    psi.add(1, 2, (3, 0), FnExpr::rat(1, 2) * FnExpr::var(0));
    psi.add(1, 2, (2, 1), one_minus(2, 1, 1)?);
    psi.add(1, 2, (1, 1), one_minus(1, 1, 2)?);
    psi.add(0, 2, (3, 1), FnExpr::rat(1, 2) * FnExpr::var(1));
    psi.add(0, 2, (2, 0), one_minus(2, 0, 0)?);
    psi.add(0, 2, (0, 0), one_minus(0, 0, 2)?);
    PlaneWaveMetric::new(3, 8, c_matrix(), psi.0)
}

/// A metric on `R^14` together with the scales of its normalized frame
/// `beta_{ij} = s_{ij}^{-1} d/dy_{ij}`.
#[derive(Clone, Debug)]
pub struct Realization {
    metric: PlaneWaveMetric,
    /// `s_{ij}` as functions of `x`, indexed by `y_slot(i, j)`.
    scales: Vec<FnExpr>,
    family: Option<Family>,
}

#[derive(Clone, Debug)]
pub enum Family {
    Phi(PhiFamily),
    A(AFamily),
}

impl Realization {
    /// `M_Phi` with `s_{ij} = phi_{i,j}'(x_i)`.
    pub fn m_phi(f: PhiFamily) -> Result<Self> {
        let metric = build_m_phi(&f)?;
        let mut scales = Vec::new();
        for i in 0..3 {
            for j in 0..2 {
                scales.push(f.phi[i][j].derivative(0).compose(vec![FnExpr::var(i)]));
            }
        }
        Ok(Realization {
            metric,
            scales,
            family: Some(Family::Phi(f)),
        })
    }

    /// `M_A`, where every `R(x_i, x_j, x_j, y_{..})` is already `1` and the
    /// scales are `1`.
    pub fn m_a(f: AFamily) -> Result<Self> {
        Ok(Realization {
            metric: build_m_a(&f)?,
            scales: vec![FnExpr::int(1); 6],
            family: Some(Family::A(f)),
        })
    }

    /// Any metric on `R^14` with the `(3, 8)` block layout.
    pub fn custom(metric: PlaneWaveMetric, scales: [[FnExpr; 2]; 3]) -> Result<Self> {
        if metric.a() != 3 || metric.b() != 8 {
            return Err(Error::Invalid("expected a metric with a = 3, b = 8".into()));
        }
        Ok(Realization {
            metric,
            scales: scales.into_iter().flatten().collect(),
            family: None,
        })
    }

    pub fn metric(&self) -> &PlaneWaveMetric {
        &self.metric
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn phi_family(&self) -> Option<&PhiFamily> {
        match &self.family {
            Some(Family::Phi(f)) => Some(f),
            _ => None,
        }
    }

    /// `s_{ij}` at `p`; zero is an error.
    pub fn beta_scale<S: Scalar>(&self, i: usize, j: usize, p: &[S]) -> Result<S> {
        let s: S = self.scales[y_slot(i, j)].eval(&p[..3])?;
        if s.is_zero() {
            return Err(Error::Hypothesis(format!(
                "phi_{{{},{}}}' vanishes at the point",
                i + 1,
                j + 1
            )));
        }
        Ok(s)
    }
}
