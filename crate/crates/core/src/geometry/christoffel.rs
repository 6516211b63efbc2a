//! Christoffel symbols: the closed form for the plane-wave family, and a
//! generic Koszul assembly from the metric components used as an oracle.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::metric::{check_point, Coord, PlaneWaveMetric};
use super::tensor::CoordTensor;
use crate::algebra::{Jet, JetSpace, Matrix, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChristoffelKind {
    /// `g(nabla_i d_j, d_l)`, stored at `[i, j, l]`.
    First,
    /// `Gamma^k_{ij}`, stored at `[k, i, j]`.
    Second,
}

/// The metric data near `P`: jets of `psi` in `x` to a fixed order, `C`,
/// `C^{-1}` and the `y` coordinates of `P`.
pub(crate) struct Local<S> {
    pub a: usize,
    pub b: usize,
    pub space: Arc<JetSpace>,
    psi: BTreeMap<(usize, usize, usize), Jet<S>>,
    pub c: Matrix<S>,
    pub c_inv: Matrix<S>,
    pub y: Vec<S>,
}

impl<S: Scalar> Local<S> {
    pub fn new(m: &PlaneWaveMetric, p: &[S], order: usize) -> Result<Self> {
        check_point(m, p)?;
        let (a, b) = (m.a(), m.b());
        let space = JetSpace::new(a, order);
        let x = &p[..a];
        let mut psi = BTreeMap::new();
        for (&(i, j), v) in m.psi_entries() {
            for (mu, e) in v.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let jet = e.jet(&space, x)?;
                if jet.is_zero() {
                    continue;
                }
                psi.insert((i, j, mu), jet.clone());
                psi.insert((j, i, mu), jet);
            }
        }
        let c = m.c_form::<S>()?;
        let c_inv = c.inverse()?.gram().clone();
        Ok(Local {
            a,
            b,
            space,
            psi,
            c: c.gram().clone(),
            c_inv,
            y: p[2 * a..].to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        2 * self.a + self.b
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

    pub fn psi(&self, i: usize, j: usize, mu: usize) -> Option<&Jet<S>> {
        self.psi.get(&(i, j, mu))
    }

    /// `psi_{ij mu}` as a field.
    pub fn psi_field(&self, i: usize, j: usize, mu: usize) -> Field<S> {
        match self.psi(i, j, mu) {
            Some(jet) => Field::from_jet(self.b, jet.clone()),
            None => Field::zero(),
        }
    }

    /// `sum_mu y_mu f(mu)` for jets `f`.
    pub fn y_sum(&self, f: impl Fn(usize) -> Option<Jet<S>>) -> Field<S> {
        let mut out = Field::zero();
        for mu in 0..self.b {
            if let Some(j) = f(mu) {
                out.add_assign(&Field::y_times(mu, self.b, j));
            }
        }
        out
    }

    fn dpsi(&self, q: usize, i: usize, j: usize, mu: usize) -> Option<Jet<S>> {
        self.psi(i, j, mu).map(|p| p.partial(q))
    }

    /// `d f / d(coordinate idx)`.
    pub fn partial(&self, f: &Field<S>, idx: usize) -> Field<S> {
        match self.coord(idx) {
            Coord::X(i) => f.partial_x(i),
            Coord::XStar(_) => Field::zero(),
            Coord::Y(mu) => f.partial_y(mu),
        }
    }

    /// Metric components as fields, dense `n x n`.
    pub fn metric_fields(&self) -> Vec<Vec<Field<S>>> {
        let (a, n) = (self.a, self.n());
        let mut g = vec![vec![Field::zero(); n]; n];
        let one = Field::constant(&self.space, self.b, S::one());
        for i in 0..a {
            g[i][a + i] = one.clone();
            g[a + i][i] = one.clone();
            for j in 0..a {
                g[i][j] = self.y_sum(|mu| self.psi(i, j, mu).map(|p| p.scale(&S::from_i64(2))));
            }
        }
        for mu in 0..self.b {
            for nu in 0..self.b {
                g[2 * a + mu][2 * a + nu] =
                    Field::constant(&self.space, self.b, self.c[(mu, nu)].clone());
            }
        }
        g
    }
}

/// Second-kind symbols as fields, keyed by the lower pair (both orders).
pub(crate) struct Connection<S> {
    pub lower: BTreeMap<(usize, usize), Vec<(usize, Field<S>)>>,
}

impl<S: Scalar> Connection<S> {
    fn push(&mut self, k: usize, i: usize, j: usize, f: Field<S>) {
        if f.is_zero() {
            return;
        }
        self.lower.entry((i, j)).or_default().push((k, f.clone()));
        if i != j {
            self.lower.entry((j, i)).or_default().push((k, f));
        }
    }

    /// `(i, j, Gamma^k_{ij})` grouped by the upper index `k`.
    pub fn by_upper(&self) -> BTreeMap<usize, Vec<(usize, usize, &Field<S>)>> {
        let mut out: BTreeMap<usize, Vec<_>> = BTreeMap::new();
        for (&(i, j), list) in &self.lower {
            for (k, f) in list {
                out.entry(*k).or_default().push((i, j, f));
            }
        }
        out
    }

    pub fn to_tensor(&self, l: &Local<S>) -> CoordTensor<S> {
        let mut t = CoordTensor::new(l.n(), 1, 2, 0);
        for (&(i, j), list) in &self.lower {
            for (k, f) in list {
                let v = t.get(&[*k, i, j]) + f.eval(&l.y);
                t.set(vec![*k, i, j], v);
            }
        }
        t
    }
}

/// The closed form:
///
/// - `Gamma^{x*_k}_{x_i x_j} = sum_mu y_mu (d_i psi_{jk mu} + d_j psi_{ik mu} - d_k psi_{ij mu})`
/// - `Gamma^{y_mu}_{x_i x_j} = -sum_nu C^{mu nu} psi_{ij nu}`
/// - `Gamma^{x*_k}_{x_i y_nu} = psi_{ik nu}`
pub(crate) fn connection<S: Scalar>(l: &Local<S>) -> Connection<S> {
    let (a, b) = (l.a, l.b);
    let mut con = Connection {
        lower: BTreeMap::new(),
    };
    for i in 0..a {
        for j in i..a {
            for k in 0..a {
                let f = l.y_sum(|mu| {
                    let mut acc: Option<Jet<S>> = None;
                    let mut add = |t: Option<Jet<S>>, neg: bool| {
                        if let Some(t) = t {
                            let t = if neg { t.neg() } else { t };
                            acc = Some(match acc.take() {
                                Some(s) => s.add(&t),
                                None => t,
                            });
                        }
                    };
                    add(l.dpsi(i, j, k, mu), false);
                    add(l.dpsi(j, i, k, mu), false);
                    add(l.dpsi(k, i, j, mu), true);
                    acc
                });
                con.push(a + k, i, j, f);
            }
            for mu in 0..b {
                let mut f = Field::zero();
                for nu in 0..b {
                    let ci = &l.c_inv[(mu, nu)];
                    if ci.is_zero() {
                        continue;
                    }
                    f.add_assign(&l.psi_field(i, j, nu).scale(&-ci.clone()));
                }
                con.push(2 * a + mu, i, j, f);
            }
        }
        for nu in 0..b {
            for k in 0..a {
                con.push(a + k, i, 2 * a + nu, l.psi_field(i, k, nu));
            }
        }
    }
    con
}

/// Generic assembly: first-kind symbols by the Koszul formula on the metric
/// components, raised with the inverse metric. The inverse is taken in
/// block form and checked against `g` before use.
pub(crate) fn connection_generic<S: Scalar>(
    l: &Local<S>,
) -> Result<(Connection<S>, Vec<Vec<Field<S>>>)> {
    let (a, n) = (l.a, l.n());
    let g = l.metric_fields();
    let one = Field::constant(&l.space, l.b, S::one());
    let mut ginv = vec![vec![Field::zero(); n]; n];
    for i in 0..a {
        ginv[i][a + i] = one.clone();
        ginv[a + i][i] = one.clone();
        for j in 0..a {
            ginv[a + i][a + j] = g[i][j].neg();
        }
    }
    for mu in 0..l.b {
        for nu in 0..l.b {
            ginv[2 * a + mu][2 * a + nu] =
                Field::constant(&l.space, l.b, l.c_inv[(mu, nu)].clone());
        }
    }
    for i in 0..n {
        for j in 0..n {
            let mut s = Field::zero();
            for k in 0..n {
                s.add_assign(&g[i][k].mul(&ginv[k][j]));
            }
            let want = if i == j { one.clone() } else { Field::zero() };
            if !s.sub(&want).is_zero() {
                return Err(Error::Invalid("inverse metric check failed".into()));
            }
        }
    }
    let dg: Vec<Vec<Vec<Field<S>>>> = (0..n)
        .map(|q| {
            (0..n)
                .map(|i| (0..n).map(|j| l.partial(&g[i][j], q)).collect())
                .collect()
        })
        .collect();
    let half = S::from_frac(1, 2);
    let mut con = Connection {
        lower: BTreeMap::new(),
    };
    for i in 0..n {
        for j in i..n {
            let first: Vec<Field<S>> = (0..n)
                .map(|m| dg[i][j][m].add(&dg[j][i][m]).sub(&dg[m][i][j]).scale(&half))
                .collect();
            for k in 0..n {
                let mut f = Field::zero();
                for (m, fm) in first.iter().enumerate() {
                    if fm.is_zero() || ginv[k][m].is_zero() {
                        continue;
                    }
                    f.add_assign(&ginv[k][m].mul(fm));
                }
                con.push(k, i, j, f);
            }
        }
    }
    Ok((con, g))
}

/// Christoffel symbols at `P` from the closed form.
///
/// Symbols with an `x*` lower index vanish, and the second kind only has
/// `x*` and `y` upper indices.
pub fn christoffel<S: Scalar>(
    m: &PlaneWaveMetric,
    p: &[S],
    kind: ChristoffelKind,
) -> Result<CoordTensor<S>> {
    let l = Local::new(m, p, 1)?;
    let a = l.a;
    match kind {
        ChristoffelKind::Second => Ok(connection(&l).to_tensor(&l)),
        ChristoffelKind::First => {
            let mut t = CoordTensor::new(l.n(), 0, 3, 0);
            for i in 0..a {
                for j in 0..a {
                    for k in 0..a {
                        // y_mu (d_i psi_jk + d_j psi_ik - d_k psi_ij)
                        let mut s = S::zero();
                        for mu in 0..l.b {
                            if l.y[mu].is_zero() {
                                continue;
                            }
                            let d = |q, r, s| {
                                l.dpsi(q, r, s, mu)
                                    .map(|j| j.value().clone())
                                    .unwrap_or_else(S::zero)
                            };
                            s = s + l.y[mu].clone() * (d(i, j, k) + d(j, i, k) - d(k, i, j));
                        }
                        t.set(vec![i, j, k], s);
                    }
                    for nu in 0..l.b {
                        if let Some(ps) = l.psi(i, j, nu) {
                            let v = ps.value().clone();
                            t.set(vec![i, j, 2 * a + nu], -v.clone());
                            // g(nabla_x_i d_y, d_x_j) and g(nabla_y d_x_i, d_x_j)
                            t.set(vec![i, 2 * a + nu, j], v.clone());
                            t.set(vec![2 * a + nu, i, j], v);
                        }
                    }
                }
            }
            Ok(t)
        }
    }
}

/// Christoffel symbols at `P` by the generic Koszul assembly.
pub fn christoffel_generic<S: Scalar>(m: &PlaneWaveMetric, p: &[S]) -> Result<CoordTensor<S>> {
    let l = Local::new(m, p, 1)?;
    Ok(connection_generic(&l)?.0.to_tensor(&l))
}
