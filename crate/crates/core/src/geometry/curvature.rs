//! Curvature and its iterated covariant derivatives.
//!
//! Conventions: `R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]` and
//! `R(i,j,k,l) = g(R(d_i,d_j) d_k, d_l)`.

use rayon::prelude::*;

use super::christoffel::{connection, connection_generic, Connection, Local};
use super::field::{Field, TensorField};
use super::metric::PlaneWaveMetric;
use super::tensor::CoordTensor;
use crate::algebra::{Jet, Scalar};
use crate::error::Result;

/// The closed form as a field:
///
/// - `R(x_i,x_j,x_k,y_nu) = -d_i psi_{jk nu} + d_j psi_{ik nu}`
/// - `R(x_i,x_j,x_k,x_l) = sum C^{mu nu} (psi_{ik mu} psi_{jl nu} - psi_{il mu} psi_{jk nu})
///   + sum y_nu (d_i d_k psi_{jl nu} + d_j d_l psi_{ik nu} - d_i d_l psi_{jk nu} - d_j d_k psi_{il nu})`
///
/// together with their images under the curvature symmetries.
pub(crate) fn curvature_field<S: Scalar>(l: &Local<S>) -> TensorField<S> {
    let (a, b) = (l.a, l.b);
    let mut r = TensorField::new(4);
    let dp = |q: usize, i: usize, j: usize, mu: usize| l.psi(i, j, mu).map(|p| p.partial(q));
    for i in 0..a {
        for j in 0..a {
            if i == j {
                continue;
            }
            for k in 0..a {
                for nu in 0..b {
                    let f = match (dp(i, j, k, nu), dp(j, i, k, nu)) {
                        (None, None) => continue,
                        (Some(u), None) => u.neg(),
                        (None, Some(v)) => v,
                        (Some(u), Some(v)) => v.sub(&u),
                    };
                    let f = Field::from_jet(b, f);
                    if f.is_zero() {
                        continue;
                    }
                    let y = 2 * a + nu;
                    r.add_to(vec![i, j, k, y], f.clone());
                    r.add_to(vec![i, j, y, k], f.neg());
                    r.add_to(vec![k, y, i, j], f.clone());
                    r.add_to(vec![y, k, i, j], f.neg());
                }
            }
        }
    }
    let second = |p: usize, q: usize, i: usize, j: usize, mu: usize| -> Option<Jet<S>> {
        l.psi(i, j, mu).map(|s| s.partial(p).partial(q))
    };
    for i in 0..a {
        for j in 0..a {
            if i == j {
                continue;
            }
            for k in 0..a {
                for m in 0..a {
                    if k == m {
                        continue;
                    }
                    let mut f = Field::zero();
                    for mu in 0..b {
                        for nu in 0..b {
                            let ci = &l.c_inv[(mu, nu)];
                            if ci.is_zero() {
                                continue;
                            }
                            let mut term: Option<Jet<S>> = None;
                            if let (Some(p1), Some(p2)) = (l.psi(i, k, mu), l.psi(j, m, nu)) {
                                term = Some(p1.mul(p2));
                            }
                            if let (Some(p1), Some(p2)) = (l.psi(i, m, mu), l.psi(j, k, nu)) {
                                let t = p1.mul(p2).neg();
                                term = Some(match term {
                                    Some(s) => s.add(&t),
                                    None => t,
                                });
                            }
                            if let Some(t) = term {
                                f.add_assign(&Field::from_jet(b, t.scale(ci)));
                            }
                        }
                    }
                    f.add_assign(&l.y_sum(|nu| {
                        let parts = [
                            (second(i, k, j, m, nu), false),
                            (second(j, m, i, k, nu), false),
                            (second(i, m, j, k, nu), true),
                            (second(j, k, i, m, nu), true),
                        ];
                        let mut acc: Option<Jet<S>> = None;
                        for (t, neg) in parts {
                            if let Some(t) = t {
                                let t = if neg { t.neg() } else { t };
                                acc = Some(match acc {
                                    Some(s) => s.add(&t),
                                    None => t,
                                });
                            }
                        }
                        acc
                    }));
                    r.add_to(vec![i, j, k, m], f);
                }
            }
        }
    }
    r
}

/// `R(i,j,k,l) = sum_m g_ml (d_i Gamma^m_jk - d_j Gamma^m_ik
///   + sum_p (Gamma^p_jk Gamma^m_ip - Gamma^p_ik Gamma^m_jp))`, over all index tuples.
pub(crate) fn curvature_field_generic<S: Scalar>(l: &Local<S>) -> Result<TensorField<S>> {
    let (con, g) = connection_generic(l)?;
    let n = l.n();
    let gamma = |k: usize, i: usize, j: usize| -> Option<&Field<S>> {
        con.lower
            .get(&(i, j))
            .and_then(|v| v.iter().find(|(m, _)| *m == k).map(|(_, f)| f))
    };
    let zero = Field::zero();
    let tuples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        .filter(|(i, j, _)| i != j)
        .collect();
    let parts: Vec<(Vec<usize>, Field<S>)> = tuples
        .par_iter()
        .flat_map_iter(|&(i, j, k)| {
            // (R(d_i,d_j) d_k)^m
            let mut up = vec![Field::zero(); n];
            for (m, slot) in up.iter_mut().enumerate() {
                let mut f = l
                    .partial(gamma(m, j, k).unwrap_or(&zero), i)
                    .sub(&l.partial(gamma(m, i, k).unwrap_or(&zero), j));
                for p in 0..n {
                    if let (Some(u), Some(v)) = (gamma(p, j, k), gamma(m, i, p)) {
                        f.add_assign(&u.mul(v));
                    }
                    if let (Some(u), Some(v)) = (gamma(p, i, k), gamma(m, j, p)) {
                        f.add_assign(&u.mul(v).neg());
                    }
                }
                *slot = f;
            }
            let mut out = Vec::new();
            for (ll, row) in g.iter().enumerate() {
                let mut f = Field::zero();
                for (m, um) in up.iter().enumerate() {
                    if um.is_zero() || row[m].is_zero() {
                        continue;
                    }
                    f.add_assign(&row[m].mul(um));
                }
                if !f.is_zero() {
                    out.push((vec![i, j, k, ll], f));
                }
            }
            out
        })
        .collect();
    let mut r = TensorField::new(4);
    for (idx, f) in parts {
        r.add_to(idx, f);
    }
    Ok(r)
}

/// `nabla T` with the derivative slot appended:
/// `(nabla T)(i_1..i_r; j) = d_j T(i_1..i_r) - sum_s sum_m Gamma^m_{j i_s} T(.. m ..)`.
pub(crate) fn covariant_derivative_field<S: Scalar>(
    l: &Local<S>,
    con: &Connection<S>,
    t: &TensorField<S>,
) -> TensorField<S> {
    let n = l.n();
    let by_upper = con.by_upper();
    let entries: Vec<(&Vec<usize>, &Field<S>)> = t.comps.iter().collect();
    let parts: Vec<(Vec<usize>, Field<S>)> = entries
        .par_iter()
        .flat_map_iter(|&(idx, f)| {
            let mut out = Vec::new();
            for j in 0..n {
                let d = l.partial(f, j);
                if !d.is_zero() {
                    let mut k = idx.clone();
                    k.push(j);
                    out.push((k, d));
                }
            }
            for (s, &m) in idx.iter().enumerate() {
                if let Some(list) = by_upper.get(&m) {
                    for &(j, i, g) in list {
                        let mut k = idx.clone();
                        k[s] = i;
                        k.push(j);
                        out.push((k, g.mul(f).neg()));
                    }
                }
            }
            out
        })
        .collect();
    let mut out = TensorField::new(t.rank + 1);
    for (idx, f) in parts {
        out.add_to(idx, f);
    }
    out
}

fn evaluate<S: Scalar>(l: &Local<S>, t: &TensorField<S>, derivative: usize) -> CoordTensor<S> {
    let mut out = CoordTensor::new(l.n(), 0, 4, derivative);
    for (idx, f) in &t.comps {
        out.set(idx.clone(), f.eval(&l.y));
    }
    out
}

/// `R` at `P` from the closed form.
pub fn curvature_at<S: Scalar>(m: &PlaneWaveMetric, p: &[S]) -> Result<CoordTensor<S>> {
    let l = Local::new(m, p, 2)?;
    Ok(evaluate(&l, &curvature_field(&l), 0))
}

/// `R` at `P` assembled from the generically computed Christoffel symbols.
pub fn curvature_generic<S: Scalar>(m: &PlaneWaveMetric, p: &[S]) -> Result<CoordTensor<S>> {
    let l = Local::new(m, p, 2)?;
    Ok(evaluate(&l, &curvature_field_generic(&l)?, 0))
}

/// `nabla^k R` at `P` by the covariant recursion; `k = 0` gives `R`.
pub fn covariant_derivative_r<S: Scalar>(
    m: &PlaneWaveMetric,
    p: &[S],
    k: usize,
) -> Result<CoordTensor<S>> {
    let l = Local::new(m, p, 2 + k)?;
    let con = connection(&l);
    let mut t = curvature_field(&l);
    for _ in 0..k {
        t = covariant_derivative_field(&l, &con, &t);
    }
    Ok(evaluate(&l, &t, k))
}

/// `R, nabla R, ..., nabla^k R` at `P`, sharing one local expansion.
pub fn curvature_derivatives<S: Scalar>(
    m: &PlaneWaveMetric,
    p: &[S],
    k: usize,
) -> Result<Vec<CoordTensor<S>>> {
    let l = Local::new(m, p, 2 + k)?;
    let con = connection(&l);
    let mut t = curvature_field(&l);
    let mut out = vec![evaluate(&l, &t, 0)];
    for d in 1..=k {
        t = covariant_derivative_field(&l, &con, &t);
        out.push(evaluate(&l, &t, d));
    }
    Ok(out)
}
