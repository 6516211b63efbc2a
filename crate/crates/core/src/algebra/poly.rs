//! Dense univariate polynomials, used for exact quadrature along affine lines.

use std::fmt;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `c[0] + c[1] t + c[2] t^2 + ...`, trailing zeros trimmed.
#[derive(Clone, PartialEq)]
pub struct UPoly<S> {
    c: Vec<S>,
}

impl<S: Scalar> UPoly<S> {
    pub fn new(mut c: Vec<S>) -> Self {
        while c.last().is_some_and(S::is_zero) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(a: S) -> Self {
        Self::new(vec![a])
    }

    /// `a + b t`.
    pub fn linear(a: S, b: S) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> S {
        self.c.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn as_constant(&self) -> Option<S> {
        match self.c.len() {
            0 => Some(S::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, t: &S) -> S {
        self.c
            .iter()
            .rev()
            .fold(S::zero(), |acc, a| acc * t.clone() + a.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        UPoly {
            c: self.c.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(self.c.iter().map(|a| a.clone() * k.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::constant(S::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.clone() * S::from_i64(i as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at `t = 0`.
    pub fn integral(&self) -> Self {
        let mut out = vec![S::zero()];
        out.extend(
            self.c
                .iter()
                .enumerate()
                .map(|(i, a)| a.clone() / S::from_i64(i as i64 + 1)),
        );
        Self::new(out)
    }

    /// `u -> \int_0^u (u - s) p(s) ds`, the solution of `f'' = p` with
    /// `f(0) = f'(0) = 0`.
    pub fn double_integral(&self) -> Self {
        self.integral().integral()
    }

    /// Exact division by a constant polynomial.
    pub fn div(&self, o: &Self) -> Result<Self> {
        match o.as_constant() {
            Some(k) if !k.is_zero() => Ok(self.scale(&(S::one() / k))),
            Some(_) => Err(Error::DivisionByZero),
            None => Err(Error::Invalid(
                "division by a non-constant polynomial".into(),
            )),
        }
    }
}

impl<S: Scalar> fmt::Debug for UPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| match i {
                0 => format!("{a}"),
                1 => format!("({a})t"),
                _ => format!("({a})t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
