//! Geodesics by the cascade `x -> y -> x*`.
//!
//! No Christoffel symbol has an `x` upper index, so `x(t) = x(0) + t v_x`.
//! The `y` equation then has a source depending on `x(t)` only,
//!
//! `y_mu'' = sum_ij v_i v_j sum_nu C^{mu nu} psi_{ij nu}(x(t))`,
//!
//! and the `x*` equation a source depending on `x(t)`, `y(t)` and `y'(t)`,
//!
//! `x*_k'' = -sum_ij v_i v_j sum_mu y_mu (d_i psi_{jk mu} + d_j psi_{ik mu} - d_k psi_{ij mu})
//!          - 2 sum_i sum_nu v_i psi_{ik nu} y_nu'`.
//!
//! Each is solved by two quadratures: exactly on polynomial pullbacks, or
//! with adaptive Gauss-Kronrod.

use serde::{Deserialize, Serialize};

use super::christoffel::{christoffel, ChristoffelKind};
use super::metric::{check_point, PlaneWaveMetric, Point};
use crate::algebra::{FnExpr, Matrix, Mode, Scalar, UPoly};
use crate::error::{Error, Result};

/// Absolute tolerance of the adaptive quadrature.
pub const QUAD_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrature {
    /// Exact antiderivatives of the polynomial pullbacks; needs polynomial `psi`.
    ExactPoly,
    /// Nested adaptive Gauss-Kronrod, float only.
    Adaptive,
}

impl std::str::FromStr for Quadrature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-poly" => Ok(Quadrature::ExactPoly),
            "adaptive" => Ok(Quadrature::Adaptive),
            _ => Err(Error::Parse(format!("unknown quadrature {s:?}"))),
        }
    }
}

/// Nonzero `psi_{ij mu}` over all ordered pairs, with first derivatives.
struct PsiTable {
    /// `(i, j, mu, psi, [d_0 psi, ..., d_{a-1} psi])`
    entries: Vec<(usize, usize, usize, FnExpr, Vec<FnExpr>)>,
}

impl PsiTable {
    fn new(m: &PlaneWaveMetric) -> Self {
        let a = m.a();
        let mut entries = Vec::new();
        for i in 0..a {
            for j in 0..a {
                for mu in 0..m.b() {
                    if let Some(e) = m.psi(i, j, mu) {
                        let d = (0..a).map(|q| e.derivative(q)).collect();
                        entries.push((i, j, mu, e.clone(), d));
                    }
                }
            }
        }
        PsiTable { entries }
    }
}

/// A geodesic through `P` with initial velocity `v`, evaluable at any `t`.
pub struct Geodesic<S> {
    a: usize,
    b: usize,
    p: Vec<S>,
    v: Vec<S>,
    kind: Path<S>,
}

enum Path<S> {
    /// Every coordinate as a polynomial in `t`.
    Poly(Vec<UPoly<S>>),
    Adaptive(Box<AdaptivePath>),
}

impl<S: Scalar> Geodesic<S> {
    pub fn new(m: &PlaneWaveMetric, p: &[S], v: &[S], quad: Quadrature) -> Result<Self> {
        check_point(m, p)?;
        check_point(m, v)?;
        let kind = match quad {
            Quadrature::ExactPoly => {
                if !m.is_polynomial() {
                    return Err(Error::Invalid(
                        "exact-poly quadrature needs polynomial psi".into(),
                    ));
                }
                Path::Poly(poly_path(m, p, v)?)
            }
            Quadrature::Adaptive => {
                if S::zero().to_value().mode() != Mode::Float {
                    return Err(Error::Invalid(
                        "adaptive quadrature runs in float mode only".into(),
                    ));
                }
                let pf: Vec<f64> = p.iter().map(Scalar::to_f64).collect();
                let vf: Vec<f64> = v.iter().map(Scalar::to_f64).collect();
                Path::Adaptive(Box::new(AdaptivePath::new(m, pf, vf)?))
            }
        };
        Ok(Geodesic {
            a: m.a(),
            b: m.b(),
            p: p.to_vec(),
            v: v.to_vec(),
            kind,
        })
    }

    pub fn quadrature(&self) -> Quadrature {
        match self.kind {
            Path::Poly(_) => Quadrature::ExactPoly,
            Path::Adaptive(_) => Quadrature::Adaptive,
        }
    }

    /// Position, velocity and acceleration at `t`.
    pub fn state(&self, t: &S) -> Result<[Point<S>; 3]> {
        match &self.kind {
            Path::Poly(polys) => {
                let pos = polys.iter().map(|q| q.eval(t)).collect();
                let vel = polys.iter().map(|q| q.derivative().eval(t)).collect();
                let acc = polys
                    .iter()
                    .map(|q| q.derivative().derivative().eval(t))
                    .collect();
                Ok([pos, vel, acc])
            }
            Path::Adaptive(path) => {
                let [p, v, acc] = path.state(t.to_f64())?;
                let conv = |w: Vec<f64>| -> Result<Vec<S>> {
                    w.into_iter()
                        .map(|x| {
                            S::from_f64(x)
                                .ok_or_else(|| Error::Quadrature("non-finite value".into()))
                        })
                        .collect()
                };
                // the affine part is reproduced exactly
                let mut p = conv(p)?;
                let mut v = conv(v)?;
                for i in 0..self.a {
                    p[i] = self.p[i].clone() + t.clone() * self.v[i].clone();
                    v[i] = self.v[i].clone();
                }
                Ok([p, v, conv(acc)?])
            }
        }
    }

    pub fn at(&self, t: &S) -> Result<Point<S>> {
        let [pos, _, _] = self.state(t)?;
        Ok(pos)
    }

    pub fn dim(&self) -> usize {
        2 * self.a + self.b
    }
}

fn poly_path<S: Scalar>(m: &PlaneWaveMetric, p: &[S], v: &[S]) -> Result<Vec<UPoly<S>>> {
    let (a, b) = (m.a(), m.b());
    let px = &p[..a];
    let vx = &v[..a];
    let cinv = m.c_form::<S>()?.inverse()?.gram().clone();
    let tab = PsiTable::new(m);
    let line = |e: &FnExpr| e.along_line(px, vx);
    let mut pulled = Vec::with_capacity(tab.entries.len());
    for (i, j, mu, e, d) in &tab.entries {
        let dp = d.iter().map(line).collect::<Result<Vec<_>>>()?;
        pulled.push((*i, *j, *mu, line(e)?, dp));
    }
    // y sources
    let mut f = vec![UPoly::zero(); b];
    for (i, j, nu, ps, _) in &pulled {
        let w = vx[*i].clone() * vx[*j].clone();
        if w.is_zero() {
            continue;
        }
        for (mu, fm) in f.iter_mut().enumerate() {
            let c = &cinv[(mu, *nu)];
            if !c.is_zero() {
                *fm = fm.add(&ps.scale(&(w.clone() * c.clone())));
            }
        }
    }
    let y: Vec<UPoly<S>> = (0..b)
        .map(|mu| {
            UPoly::linear(p[2 * a + mu].clone(), v[2 * a + mu].clone())
                .add(&f[mu].double_integral())
        })
        .collect();
    let yd: Vec<UPoly<S>> = y.iter().map(UPoly::derivative).collect();
    // x* sources
    let mut g = vec![UPoly::zero(); a];
    // Each entry psi_{ij mu} (both orders) feeds x*_j through
    // -2 v_q v_i y_mu d_q psi_{ij mu} - 2 v_i psi_{ij mu} y_mu', and every x*_k
    // through v_i v_j y_mu d_k psi_{ij mu}.
    let two = S::from_i64(2);
    for (i, j, mu, ps, dp) in &pulled {
        let vi = &vx[*i];
        if vi.is_zero() {
            continue;
        }
        for q in 0..a {
            let w = two.clone() * vx[q].clone() * vi.clone();
            if !w.is_zero() {
                g[*j] = g[*j].sub(&dp[q].mul(&y[*mu]).scale(&w));
            }
        }
        g[*j] = g[*j].sub(&ps.mul(&yd[*mu]).scale(&(two.clone() * vi.clone())));
        let w = vi.clone() * vx[*j].clone();
        if !w.is_zero() {
            for (k, gk) in g.iter_mut().enumerate() {
                *gk = gk.add(&dp[k].mul(&y[*mu]).scale(&w));
            }
        }
    }
    let mut out: Vec<UPoly<S>> = (0..a)
        .map(|i| UPoly::linear(p[i].clone(), v[i].clone()))
        .collect();
    out.extend(
        (0..a).map(|k| {
            UPoly::linear(p[a + k].clone(), v[a + k].clone()).add(&g[k].double_integral())
        }),
    );
    out.extend(y);
    Ok(out)
}

/// Float cascade with nested adaptive quadrature.
struct AdaptivePath {
    a: usize,
    b: usize,
    p: Vec<f64>,
    v: Vec<f64>,
    cinv: Matrix<f64>,
    tab: PsiTable,
}

impl AdaptivePath {
    fn new(m: &PlaneWaveMetric, p: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        Ok(AdaptivePath {
            a: m.a(),
            b: m.b(),
            cinv: m.c_form::<f64>()?.inverse()?.gram().clone(),
            tab: PsiTable::new(m),
            p,
            v,
        })
    }

    fn x(&self, s: f64) -> Vec<f64> {
        (0..self.a).map(|i| self.p[i] + s * self.v[i]).collect()
    }

    /// `y'' (s)`.
    fn y_source(&self, s: f64) -> Result<Vec<f64>> {
        let x = self.x(s);
        let mut f = vec![0.0; self.b];
        for (i, j, nu, e, _) in &self.tab.entries {
            let w = self.v[*i] * self.v[*j];
            if w == 0.0 {
                continue;
            }
            let ps = e.eval(&x)?;
            for (mu, fm) in f.iter_mut().enumerate() {
                *fm += w * self.cinv[(mu, *nu)] * ps;
            }
        }
        Ok(f)
    }

    /// `y(s)` and `y'(s)`.
    fn y_state(&self, s: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let b = self.b;
        let off = 2 * self.a;
        let ints = integrate(
            |u| {
                let f = self.y_source(u)?;
                let mut out = f.clone();
                out.extend(f.iter().map(|x| (s - u) * x));
                Ok(out)
            },
            0.0,
            s,
            2 * b,
        )?;
        let y = (0..b)
            .map(|mu| self.p[off + mu] + s * self.v[off + mu] + ints[b + mu])
            .collect();
        let yd = (0..b).map(|mu| self.v[off + mu] + ints[mu]).collect();
        Ok((y, yd))
    }

    /// `x*''(s)` given `y(s)`, `y'(s)`.
    fn xs_source(&self, s: f64, y: &[f64], yd: &[f64]) -> Result<Vec<f64>> {
        let a = self.a;
        let x = self.x(s);
        let vx = &self.v[..a];
        let mut g = vec![0.0; a];
        for (i, j, mu, e, d) in &self.tab.entries {
            let (i, j, mu) = (*i, *j, *mu);
            // d_q psi_{ij mu} at x
            let dq: Vec<f64> = d.iter().map(|f| f.eval(&x)).collect::<Result<_>>()?;
            let s1: f64 = (0..a).map(|q| vx[q] * dq[q]).sum();
            g[j] -= 2.0 * vx[i] * (y[mu] * s1 + e.eval(&x)? * yd[mu]);
            for (k, gk) in g.iter_mut().enumerate() {
                *gk += vx[i] * vx[j] * y[mu] * dq[k];
            }
        }
        Ok(g)
    }

    fn state(&self, t: f64) -> Result<[Vec<f64>; 3]> {
        let a = self.a;
        let ints = integrate(
            |s| {
                let (y, yd) = self.y_state(s)?;
                let g = self.xs_source(s, &y, &yd)?;
                let mut out = g.clone();
                out.extend(g.iter().map(|x| (t - s) * x));
                Ok(out)
            },
            0.0,
            t,
            2 * a,
        )?;
        let (y, yd) = self.y_state(t)?;
        let f = self.y_source(t)?;
        let g = self.xs_source(t, &y, &yd)?;
        let mut pos = self.x(t);
        pos.extend((0..a).map(|k| self.p[a + k] + t * self.v[a + k] + ints[a + k]));
        pos.extend(y.iter().copied());
        let mut vel = self.v[..a].to_vec();
        vel.extend((0..a).map(|k| self.v[a + k] + ints[k]));
        vel.extend(yd);
        let mut acc = vec![0.0; a];
        acc.extend(g);
        acc.extend(f);
        Ok([pos, vel, acc])
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights at `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 40;

fn gk15<F>(f: &F, lo: f64, hi: f64, dim: usize) -> Result<(Vec<f64>, f64)>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    for (n, (&x, &w)) in XGK.iter().zip(&WGK).enumerate() {
        let pts: &[f64] = if x == 0.0 { &[0.0] } else { &[-x, x] };
        for &s in pts {
            let val = f(c + h * s)?;
            for d in 0..dim {
                k[d] += w * val[d];
                if n % 2 == 1 {
                    g[d] += WG[n / 2] * val[d];
                }
            }
        }
    }
    let mut err: f64 = 0.0;
    for d in 0..dim {
        k[d] *= h;
        g[d] *= h;
        err = err.max((k[d] - g[d]).abs());
    }
    Ok((k, err))
}

/// Vector-valued adaptive Gauss-Kronrod on `[lo, hi]` to absolute error
/// [`QUAD_TOL`] in the max norm.
pub fn integrate<F>(f: F, lo: f64, hi: f64, dim: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    if lo == hi {
        return Ok(vec![0.0; dim]);
    }
    fn rec<F: Fn(f64) -> Result<Vec<f64>>>(
        f: &F,
        lo: f64,
        hi: f64,
        dim: usize,
        tol: f64,
        depth: usize,
    ) -> Result<Vec<f64>> {
        let (k, err) = gk15(f, lo, hi, dim)?;
        let scale = k.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if err <= tol || err <= 64.0 * f64::EPSILON * scale {
            return Ok(k);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Quadrature(format!(
                "error estimate {err:e} on [{lo}, {hi}]"
            )));
        }
        let mid = 0.5 * (lo + hi);
        let mut left = rec(f, lo, mid, dim, tol / 2.0, depth + 1)?;
        let right = rec(f, mid, hi, dim, tol / 2.0, depth + 1)?;
        for (l, r) in left.iter_mut().zip(right) {
            *l += r;
        }
        Ok(left)
    }
    let out = rec(&f, lo, hi, dim, QUAD_TOL, 0)?;
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::Quadrature("non-finite integral".into()));
    }
    Ok(out)
}

/// `exp_P(t v)`.
pub fn geodesic<S: Scalar>(
    m: &PlaneWaveMetric,
    p: &[S],
    v: &[S],
    t: &S,
    quad: Quadrature,
) -> Result<Point<S>> {
    Geodesic::new(m, p, v, quad)?.at(t)
}

/// Points `(t, exp_P(t v))` for the given times.
pub fn geodesic_trace<S: Scalar>(
    m: &PlaneWaveMetric,
    p: &[S],
    v: &[S],
    ts: &[S],
    quad: Quadrature,
) -> Result<Vec<(S, Point<S>)>> {
    let g = Geodesic::new(m, p, v, quad)?;
    ts.iter().map(|t| Ok((t.clone(), g.at(t)?))).collect()
}

/// The `v` with `exp_P(v) = Q`, by back-substitution through the cascade.
pub fn exp_inverse<S: Scalar>(
    m: &PlaneWaveMetric,
    p: &[S],
    q: &[S],
    quad: Quadrature,
) -> Result<Vec<S>> {
    check_point(m, p)?;
    check_point(m, q)?;
    let (a, n) = (m.a(), m.dim());
    let one = S::one();
    let mut v: Vec<S> = (0..n)
        .map(|i| {
            if i < a {
                q[i].clone() - p[i].clone()
            } else {
                S::zero()
            }
        })
        .collect();
    // y(1) with v_y = 0 gives the quadrature term of the y equation
    let r = geodesic(m, p, &v, &one, quad)?;
    for mu in 2 * a..n {
        v[mu] = q[mu].clone() - r[mu].clone();
    }
    let r = geodesic(m, p, &v, &one, quad)?;
    for k in a..2 * a {
        v[k] = q[k].clone() - r[k].clone();
    }
    Ok(v)
}

/// `gamma'' + Gamma(gamma', gamma')` at each sampled time, with the
/// symbols taken from [`christoffel`] at `gamma(t)`.
pub fn geodesic_residual<S: Scalar>(
    m: &PlaneWaveMetric,
    p: &[S],
    v: &[S],
    ts: &[S],
    quad: Quadrature,
) -> Result<Vec<Vec<S>>> {
    let g = Geodesic::new(m, p, v, quad)?;
    ts.iter()
        .map(|t| {
            let [pos, vel, acc] = g.state(t)?;
            let gamma = christoffel(m, &pos, ChristoffelKind::Second)?;
            let mut res = acc;
            for (idx, c) in &gamma.entries {
                let (k, i, j) = (idx[0], idx[1], idx[2]);
                res[k] = res[k].clone() + c.clone() * vel[i].clone() * vel[j].clone();
            }
            Ok(res)
        })
        .collect()
}
