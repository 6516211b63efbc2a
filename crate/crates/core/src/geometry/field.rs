//! Local functions on a plane-wave chart near a point.
//!
//! Every quantity built from the metric is polynomial in `y`, independent of
//! `x^*`, and a general smooth function of `x`. A [`Field`] stores it as a
//! polynomial in `y` whose coefficients are Taylor jets in `x` at the base
//! point, which is exact for differentiation up to the jet order.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Jet, JetSpace, Scalar};

#[derive(Clone, Debug)]
pub struct Field<S> {
    /// Exponent vector in `y` (length `b`) to its `x`-jet coefficient.
    terms: BTreeMap<Vec<u8>, Jet<S>>,
}

impl<S: Scalar> Default for Field<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Field<S> {
    pub fn zero() -> Self {
        Field {
            terms: BTreeMap::new(),
        }
    }

    /// A function of `x` only.
    pub fn from_jet(b: usize, jet: Jet<S>) -> Self {
        let mut f = Self::zero();
        if !jet.is_zero() {
            f.terms.insert(vec![0; b], jet);
        }
        f
    }

    pub fn constant(space: &Arc<JetSpace>, b: usize, c: S) -> Self {
        Self::from_jet(b, Jet::constant(space, c))
    }

    /// `y_mu * jet`.
    pub fn y_times(mu: usize, b: usize, jet: Jet<S>) -> Self {
        let mut f = Self::zero();
        if !jet.is_zero() {
            let mut e = vec![0; b];
            e[mu] = 1;
            f.terms.insert(e, jet);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Jet::is_zero)
    }

    fn insert_add(&mut self, e: Vec<u8>, j: Jet<S>) {
        match self.terms.get_mut(&e) {
            Some(cur) => {
                *cur = cur.add(&j);
                if cur.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                if !j.is_zero() {
                    self.terms.insert(e, j);
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, j) in &o.terms {
            out.insert_add(e.clone(), j.clone());
        }
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (e, j) in &o.terms {
            self.insert_add(e.clone(), j.clone());
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Field {
            terms: self
                .terms
                .iter()
                .map(|(e, j)| (e.clone(), j.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Field {
            terms: self
                .terms
                .iter()
                .map(|(e, j)| (e.clone(), j.scale(k)))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, j1) in &self.terms {
            for (e2, j2) in &o.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_add(e, j1.mul(j2));
            }
        }
        out
    }

    /// `d/dx_i`, one jet order lower.
    pub fn partial_x(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, j) in &self.terms {
            out.insert_add(e.clone(), j.partial(i));
        }
        out
    }

    /// `d/dy_mu`.
    pub fn partial_y(&self, mu: usize) -> Self {
        let mut out = Self::zero();
        for (e, j) in &self.terms {
            if e[mu] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[mu] -= 1;
            out.insert_add(e2, j.scale(&S::from_i64(e[mu] as i64)));
        }
        out
    }

    /// Value at the base point, with `y` given.
    pub fn eval(&self, y: &[S]) -> S {
        let mut acc = S::zero();
        for (e, j) in &self.terms {
            let mut t = j.value().clone();
            if t.is_zero() {
                continue;
            }
            for (mu, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t * y[mu].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }
}

/// A covariant tensor field stored sparsely by index tuple.
#[derive(Clone, Debug)]
pub struct TensorField<S> {
    pub rank: usize,
    pub comps: BTreeMap<Vec<usize>, Field<S>>,
}

impl<S: Scalar> TensorField<S> {
    pub fn new(rank: usize) -> Self {
        TensorField {
            rank,
            comps: BTreeMap::new(),
        }
    }

    pub fn add_to(&mut self, idx: Vec<usize>, f: Field<S>) {
        if f.is_zero() {
            return;
        }
        match self.comps.get_mut(&idx) {
            Some(cur) => {
                cur.add_assign(&f);
                if cur.is_zero() {
                    self.comps.remove(&idx);
                }
            }
            None => {
                self.comps.insert(idx, f);
            }
        }
    }
}
