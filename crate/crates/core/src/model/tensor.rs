//! Sparse algebraic curvature tensors.
//!
//! Only the pair antisymmetries and the pair exchange are built into the
//! storage: each orbit under `(i,j)`-swap, `(k,l)`-swap and `(ij) <-> (kl)` is
//! stored once under its lexicographically least representative. The first
//! Bianchi identity is a property to check, not an invariant of the type.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::check::{CheckReport, Witness, WitnessExpr};
use crate::algebra::{Scalar, Value};
use crate::error::{Error, Result};

pub type Index4 = [usize; 4];

/// Canonical representative of `idx` and the sign relating the two, or
/// `None` when antisymmetry forces the component to vanish.
pub fn canonical(idx: Index4) -> Option<(Index4, bool)> {
    let [mut i, mut j, mut k, mut l] = idx;
    if i == j || k == l {
        return None;
    }
    let mut negate = false;
    if i > j {
        std::mem::swap(&mut i, &mut j);
        negate = !negate;
    }
    if k > l {
        std::mem::swap(&mut k, &mut l);
        negate = !negate;
    }
    if (k, l) < (i, j) {
        Some(([k, l, i, j], negate))
    } else {
        Some(([i, j, k, l], negate))
    }
}

#[derive(Clone, PartialEq)]
pub struct CurvatureTensor<S> {
    dim: usize,
    entries: BTreeMap<Index4, S>,
}

impl<S: Scalar> std::fmt::Debug for CurvatureTensor<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, v)| (k, v.to_string())))
            .finish()
    }
}

impl<S: Scalar> CurvatureTensor<S> {
    pub fn zero(dim: usize) -> Self {
        CurvatureTensor {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets the whole orbit of `idx` so that `A(idx) = val`.
    ///
    /// Panics if `val` is nonzero on a forced-zero index such as `(i,i,k,l)`.
    pub fn set(&mut self, idx: Index4, val: S) {
        assert!(idx.iter().all(|&i| i < self.dim), "index out of range");
        match canonical(idx) {
            None => assert!(val.is_zero(), "nonzero value on a forced-zero component"),
            Some((c, neg)) => {
                let v = if neg { -val } else { val };
                if v.is_zero() {
                    self.entries.remove(&c);
                } else {
                    self.entries.insert(c, v);
                }
            }
        }
    }

    /// Adds `val` to `A(idx)` (and its whole orbit).
    pub fn add_to(&mut self, idx: Index4, val: S) {
        let cur = self.get(idx);
        self.set(idx, cur + val);
    }

    pub fn get(&self, idx: Index4) -> S {
        match canonical(idx) {
            None => S::zero(),
            Some((c, neg)) => match self.entries.get(&c) {
                None => S::zero(),
                Some(v) if neg => -v.clone(),
                Some(v) => v.clone(),
            },
        }
    }

    /// Stored orbit representatives and their values.
    pub fn canonical_entries(&self) -> impl Iterator<Item = (&Index4, &S)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every nonzero component `(i,j,k,l)` with its value, all orbit members
    /// included.
    pub fn expanded(&self) -> Vec<(Index4, S)> {
        let mut out = Vec::with_capacity(8 * self.entries.len());
        for (&[i, j, k, l], v) in &self.entries {
            let mut push = |idx: Index4, neg: bool| {
                out.push((idx, if neg { -v.clone() } else { v.clone() }));
            };
            let mut orbit = vec![
                ([i, j, k, l], false),
                ([j, i, k, l], true),
                ([i, j, l, k], true),
                ([j, i, l, k], false),
            ];
            if (i, j) != (k, l) {
                let swapped: Vec<_> = orbit
                    .iter()
                    .map(|&([a, b, c, d], s)| ([c, d, a, b], s))
                    .collect();
                orbit.extend(swapped);
            }
            for (idx, neg) in orbit {
                push(idx, neg);
            }
        }
        out
    }

    /// `A(x, y, z, w)` for arbitrary vectors.
    pub fn eval(&self, x: &[S], y: &[S], z: &[S], w: &[S]) -> S {
        let mut acc = S::zero();
        for ([i, j, k, l], v) in self.expanded() {
            if x[i].is_zero() || y[j].is_zero() || z[k].is_zero() || w[l].is_zero() {
                continue;
            }
            acc = acc + v * x[i].clone() * y[j].clone() * z[k].clone() * w[l].clone();
        }
        acc
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CurvatureTensor<T> {
        let mut out = CurvatureTensor::zero(self.dim);
        for (idx, v) in &self.entries {
            out.set(*idx, f(v));
        }
        out
    }

    pub fn to_entries(&self) -> Vec<TensorEntry> {
        self.entries
            .iter()
            .map(|(idx, v)| TensorEntry {
                idx: *idx,
                val: v.to_value(),
            })
            .collect()
    }

    /// Builds a tensor from listed components. Components of one orbit must
    /// agree up to their symmetry signs.
    pub fn from_entries(dim: usize, entries: &[TensorEntry]) -> Result<Self> {
        let mut t = Self::zero(dim);
        for e in entries {
            if let Some(&bad) = e.idx.iter().find(|&&i| i >= dim) {
                return Err(Error::Invalid(format!(
                    "tensor index {bad} out of range for dimension {dim}"
                )));
            }
            let v: S = e.val.to_scalar()?;
            if canonical(e.idx).is_none() {
                if !v.is_zero() {
                    return Err(Error::Invalid(format!(
                        "component {:?} must vanish by antisymmetry",
                        e.idx
                    )));
                }
                continue;
            }
            let cur = t.get(e.idx);
            if !cur.is_zero() && !cur.approx_eq(&v, 1e-12) {
                return Err(Error::Invalid(format!(
                    "component {:?} conflicts with another listed member of its orbit",
                    e.idx
                )));
            }
            t.set(e.idx, v);
        }
        Ok(t)
    }
}

/// One listed tensor component in the JSON model format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorEntry {
    pub idx: Index4,
    pub val: Value,
}

/// Checks pair antisymmetry, pair exchange and the first Bianchi identity
/// over every index 4-tuple. A failure reports the lexicographically first
/// offending tuple with the value of the cyclic sum.
pub fn validate_curvature_symmetries<S: Scalar>(a: &CurvatureTensor<S>) -> CheckReport {
    let n = a.dim();
    let mut checked = 0;
    // Stored orbits cannot break the pair symmetries, but a tuple-by-tuple
    // check keeps this function honest for any future storage change.
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    checked += 1;
                    let v = a.get([i, j, k, l]);
                    let pair = [
                        a.get([j, i, k, l]),
                        a.get([i, j, l, k]),
                        a.get([k, l, i, j]),
                    ];
                    let expect = [-v.clone(), -v.clone(), v.clone()];
                    if pair
                        .iter()
                        .zip(&expect)
                        .any(|(p, e)| !p.approx_eq(e, 1e-12))
                    {
                        return CheckReport::fail(
                            "curvature-symmetries",
                            checked,
                            Witness {
                                expr: WitnessExpr::PairSymmetry { idx: [i, j, k, l] },
                                vector: None,
                                residual: vec![v.to_value()],
                            },
                        );
                    }
                    let cyc = v + a.get([j, k, i, l]) + a.get([k, i, j, l]);
                    if !cyc.is_negligible(1.0) {
                        return CheckReport::fail(
                            "curvature-symmetries",
                            checked,
                            Witness {
                                expr: WitnessExpr::Bianchi { idx: [i, j, k, l] },
                                vector: None,
                                residual: vec![cyc.to_value()],
                            },
                        );
                    }
                }
            }
        }
    }
    CheckReport::pass("curvature-symmetries", checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, Rational};

    #[test]
    fn canonical_signs() {
        assert_eq!(canonical([1, 0, 3, 2]), Some(([0, 1, 2, 3], false)));
        assert_eq!(canonical([3, 2, 0, 1]), Some(([0, 1, 2, 3], true)));
        assert_eq!(canonical([0, 0, 1, 2]), None);
    }

    #[test]
    fn orbit_lookup() {
        let mut t = CurvatureTensor::<Rational>::zero(4);
        t.set([1, 0, 0, 1], int(1));
        assert_eq!(t.get([0, 1, 1, 0]), int(1));
        assert_eq!(t.get([0, 1, 0, 1]), int(-1));
        assert_eq!(t.nnz(), 1);
        assert_eq!(t.expanded().len(), 4);
    }

    #[test]
    fn sole_orbit_breaks_bianchi_at_first_tuple() {
        let mut t = CurvatureTensor::<Rational>::zero(4);
        t.set([0, 1, 2, 3], int(1));
        let r = validate_curvature_symmetries(&t);
        assert!(!r.holds());
        match r.witness.unwrap().expr {
            WitnessExpr::Bianchi { idx } => assert_eq!(idx, [0, 1, 2, 3]),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn zero_tensor_is_curvature() {
        assert!(validate_curvature_symmetries(&CurvatureTensor::<Rational>::zero(5)).holds());
    }
}
