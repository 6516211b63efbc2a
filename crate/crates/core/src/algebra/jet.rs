//! Multivariate truncated Taylor jets.
//!
//! A [`Jet`] stores the Taylor coefficients `c_alpha = (d^alpha f)(p) / alpha!`
//! of a function at a base point for every multi-index `|alpha| <= order`.
//! The monomial layout and the multiplication and differentiation tables live
//! in a shared [`JetSpace`].

use std::collections::HashMap;
use std::sync::Arc;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Monomial layout for jets in `nvars` variables truncated at total degree
/// `order`.
#[derive(Debug)]
pub struct JetSpace {
    nvars: usize,
    order: usize,
    monos: Vec<Vec<u8>>,
    degree: Vec<usize>,
    index: HashMap<Vec<u8>, usize>,
    /// `(i, j, k)`: monomial `i` times monomial `j` is monomial `k`.
    products: Vec<(usize, usize, usize)>,
    /// `shift[v][i]`: index of `monos[i] + e_v`, if within the order.
    shift: Vec<Vec<Option<usize>>>,
}

impl JetSpace {
    pub fn new(nvars: usize, order: usize) -> Arc<Self> {
        let mut monos = Vec::new();
        for d in 0..=order {
            push_monomials(nvars, d, &mut vec![0u8; nvars], 0, &mut monos);
        }
        let degree: Vec<usize> = monos
            .iter()
            .map(|m| m.iter().map(|&e| e as usize).sum())
            .collect();
        let index: HashMap<Vec<u8>, usize> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut products = Vec::new();
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                if degree[i] + degree[j] > order {
                    continue;
                }
                let sum: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                products.push((i, j, index[&sum]));
            }
        }
        let shift = (0..nvars)
            .map(|v| {
                monos
                    .iter()
                    .map(|m| {
                        let mut up = m.clone();
                        up[v] += 1;
                        index.get(&up).copied()
                    })
                    .collect()
            })
            .collect();
        Arc::new(JetSpace {
            nvars,
            order,
            monos,
            degree,
            index,
            products,
            shift,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &[u8] {
        &self.monos[i]
    }

    pub fn index_of(&self, alpha: &[u8]) -> Option<usize> {
        self.index.get(alpha).copied()
    }
}

// Monomials of exact total degree `d`, graded lexicographically.
fn push_monomials(n: usize, d: usize, cur: &mut Vec<u8>, var: usize, out: &mut Vec<Vec<u8>>) {
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if var == n - 1 {
        cur[var] = d as u8;
        out.push(cur.clone());
        cur[var] = 0;
        return;
    }
    for e in (0..=d).rev() {
        cur[var] = e as u8;
        push_monomials(n, d - e, cur, var + 1, out);
    }
    cur[var] = 0;
}

/// Truncated Taylor expansion of a function of `space.nvars()` variables.
///
/// `order` is the highest total degree whose coefficients are known; it can
/// be below the space order after differentiation.
#[derive(Clone, Debug)]
pub struct Jet<S> {
    space: Arc<JetSpace>,
    order: usize,
    c: Vec<S>,
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

impl<S: Scalar> Jet<S> {
    pub fn constant(space: &Arc<JetSpace>, value: S) -> Self {
        let mut c = vec![S::zero(); space.len()];
        c[0] = value;
        Jet {
            space: space.clone(),
            order: space.order,
            c,
        }
    }

    pub fn zero(space: &Arc<JetSpace>) -> Self {
        Self::constant(space, S::zero())
    }

    /// The coordinate function `x_v` expanded at `x_v = value`.
    pub fn variable(space: &Arc<JetSpace>, v: usize, value: S) -> Self {
        let mut j = Self::constant(space, value);
        if space.order >= 1 {
            j.c[space.shift[v][0].expect("order >= 1")] = S::one();
        }
        j
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> &S {
        &self.c[0]
    }

    /// Taylor coefficient of the monomial `alpha`.
    pub fn coeff(&self, alpha: &[u8]) -> S {
        self.space
            .index_of(alpha)
            .map_or_else(S::zero, |i| self.c[i].clone())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.c
    }

    /// The partial derivative `d^alpha f` at the base point.
    pub fn derivative(&self, alpha: &[u8]) -> Result<S> {
        let deg: usize = alpha.iter().map(|&e| e as usize).sum();
        if deg > self.order {
            return Err(Error::Invalid(format!(
                "derivative of order {deg} requested from a jet of order {}",
                self.order
            )));
        }
        let scale: i64 = alpha.iter().map(|&e| factorial(e as usize)).product();
        Ok(self.coeff(alpha) * S::from_i64(scale))
    }

    /// `f, f', f'', ...` for a jet in one variable.
    pub fn univariate_derivatives(&self) -> Vec<S> {
        assert_eq!(self.space.nvars, 1, "univariate jet expected");
        (0..=self.order)
            .map(|k| self.c[k].clone() * S::from_i64(factorial(k)))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.live().all(|(_, x)| x.is_zero())
    }

    fn live(&self) -> impl Iterator<Item = (usize, &S)> {
        let order = self.order;
        let deg = &self.space.degree;
        self.c
            .iter()
            .enumerate()
            .filter(move |(i, _)| deg[*i] <= order)
    }

    fn same_space(&self, o: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.space, &o.space),
            "jets from different spaces"
        );
    }

    fn truncated(mut self, order: usize) -> Self {
        for (i, x) in self.c.iter_mut().enumerate() {
            if self.space.degree[i] > order {
                *x = S::zero();
            }
        }
        self.order = order;
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_space(o);
        Jet {
            space: self.space.clone(),
            order: self.order,
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
        .truncated(self.order.min(o.order))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_space(o);
        Jet {
            space: self.space.clone(),
            order: self.order,
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
        .truncated(self.order.min(o.order))
    }

    pub fn neg(&self) -> Self {
        Jet {
            space: self.space.clone(),
            order: self.order,
            c: self.c.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        Jet {
            space: self.space.clone(),
            order: self.order,
            c: self.c.iter().map(|a| a.clone() * k.clone()).collect(),
        }
    }

    pub fn add_scalar(&self, k: &S) -> Self {
        let mut out = self.clone();
        out.c[0] = out.c[0].clone() + k.clone();
        out
    }

    /// Truncated product; satisfies the Leibniz rule coefficient-wise.
    pub fn mul(&self, o: &Self) -> Self {
        self.same_space(o);
        let order = self.order.min(o.order);
        let deg = &self.space.degree;
        let mut c = vec![S::zero(); self.c.len()];
        for &(i, j, k) in &self.space.products {
            if deg[k] > order {
                continue;
            }
            let (a, b) = (&self.c[i], &o.c[j]);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            c[k] = c[k].clone() + a.clone() * b.clone();
        }
        Jet {
            space: self.space.clone(),
            order,
            c,
        }
    }

    /// `d f / d x_v`, one order lower.
    pub fn partial(&self, v: usize) -> Self {
        let order = self.order.saturating_sub(1);
        let mut c = vec![S::zero(); self.c.len()];
        if self.order > 0 {
            for (i, slot) in c.iter_mut().enumerate() {
                if self.space.degree[i] > order {
                    continue;
                }
                if let Some(up) = self.space.shift[v][i] {
                    let factor = self.space.monos[up][v] as i64;
                    *slot = self.c[up].clone() * S::from_i64(factor);
                }
            }
        }
        Jet {
            space: self.space.clone(),
            order,
            c,
        }
    }

    /// `sum_n d[n] / n! * h^n` with `h = self - value`, where `d[n]` is the
    /// n-th derivative of a unary function at the base value.
    fn compose_series(&self, d: &[S]) -> Self {
        let mut h = self.clone();
        h.c[0] = S::zero();
        let mut out = Self::constant(&self.space, d[0].clone()).truncated(self.order);
        let mut pow = Self::constant(&self.space, S::one()).truncated(self.order);
        for (n, dn) in d.iter().enumerate().take(self.order + 1).skip(1) {
            pow = pow.mul(&h);
            if dn.is_zero() {
                continue;
            }
            let k = dn.clone() / S::from_i64(factorial(n));
            out = out.add(&pow.scale(&k));
        }
        out
    }

    pub fn recip(&self) -> Result<Self> {
        let x = self.value().clone();
        let inv = x.recip()?;
        // d^n/dx^n (1/x) = (-1)^n n! / x^{n+1}
        let mut d = Vec::with_capacity(self.order + 1);
        let mut p = inv.clone();
        for n in 0..=self.order {
            let sign = if n % 2 == 0 { S::one() } else { -S::one() };
            d.push(sign * S::from_i64(factorial(n)) * p.clone());
            p = p * inv.clone();
        }
        Ok(self.compose_series(&d))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::constant(&self.space, S::one()).truncated(self.order);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn exp(&self) -> Result<Self> {
        let e = self.value().exp()?;
        Ok(self.compose_series(&vec![e; self.order + 1]))
    }

    pub fn sin(&self) -> Result<Self> {
        let (s, c) = (self.value().sin()?, self.value().cos()?);
        let cycle = [s.clone(), c.clone(), -s, -c];
        let d: Vec<S> = (0..=self.order).map(|n| cycle[n % 4].clone()).collect();
        Ok(self.compose_series(&d))
    }

    pub fn cos(&self) -> Result<Self> {
        let (s, c) = (self.value().sin()?, self.value().cos()?);
        let cycle = [c.clone(), -s.clone(), -c, s];
        let d: Vec<S> = (0..=self.order).map(|n| cycle[n % 4].clone()).collect();
        Ok(self.compose_series(&d))
    }

    pub fn ln(&self) -> Result<Self> {
        let x = self.value().clone();
        let l = x.ln()?;
        // d^n/dx^n ln x = (-1)^{n-1} (n-1)! / x^n
        let inv = x.recip()?;
        let mut d = vec![l];
        let mut p = inv.clone();
        for n in 1..=self.order {
            let sign = if n % 2 == 1 { S::one() } else { -S::one() };
            d.push(sign * S::from_i64(factorial(n - 1)) * p.clone());
            p = p * inv.clone();
        }
        Ok(self.compose_series(&d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat, Rational};

    #[test]
    fn monomial_count() {
        // C(3 + 4, 4) monomials in 3 variables of degree <= 4
        assert_eq!(JetSpace::new(3, 4).len(), 35);
        assert_eq!(JetSpace::new(1, 3).len(), 4);
        assert_eq!(JetSpace::new(0, 3).len(), 1);
    }

    #[test]
    fn square_derivatives() {
        let sp = JetSpace::new(1, 2);
        let t = Jet::variable(&sp, 0, int(3));
        assert_eq!(
            t.mul(&t).univariate_derivatives(),
            vec![int(9), int(6), int(2)]
        );
    }

    #[test]
    fn mixed_partial() {
        let sp = JetSpace::new(2, 3);
        let x = Jet::variable(&sp, 0, int(2));
        let y = Jet::variable(&sp, 1, int(5));
        // f = x^2 y, f_xy = 2x = 4, f_xxy = 2
        let f = x.mul(&x).mul(&y);
        assert_eq!(f.derivative(&[1, 1]).unwrap(), int(4));
        assert_eq!(f.derivative(&[2, 1]).unwrap(), int(2));
        assert_eq!(f.partial(1).derivative(&[1, 0]).unwrap(), int(4));
        assert!(f.partial(0).derivative(&[2, 1]).is_err());
    }

    #[test]
    fn recip_exact() {
        let sp = JetSpace::new(1, 3);
        let t = Jet::variable(&sp, 0, int(2));
        // 1/t at 2: 1/2, -1/4, 2/8, -6/16
        assert_eq!(
            t.recip().unwrap().univariate_derivatives(),
            vec![rat(1, 2), rat(-1, 4), rat(1, 4), rat(-3, 8)]
        );
    }

    #[test]
    fn exp_sin_float() {
        let sp = JetSpace::new(1, 3);
        let t = Jet::variable(&sp, 0, 0.3f64);
        let d = t.sin().unwrap().univariate_derivatives();
        let want = [0.3f64.sin(), 0.3f64.cos(), -0.3f64.sin(), -0.3f64.cos()];
        for (a, b) in d.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let e = t.exp().unwrap().univariate_derivatives();
        assert!(e.iter().all(|x| (x - 0.3f64.exp()).abs() < 1e-14));
    }

    #[test]
    fn ln_derivatives() {
        let sp = JetSpace::new(1, 3);
        let t = Jet::variable(&sp, 0, int(1));
        let d = t.ln().unwrap().univariate_derivatives();
        assert_eq!(d, vec![int(0), int(1), int(-1), int(2)]);
    }

    #[test]
    fn exact_transcendental_away_from_zero_errors() {
        let sp = JetSpace::new(1, 2);
        let t = Jet::variable(&sp, 0, Rational::from_i64(1));
        assert!(t.exp().is_err());
    }
}
