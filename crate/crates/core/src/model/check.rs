//! Verdicts, witnesses and mismatch lists shared by every checker.

use serde::{Deserialize, Serialize};

use crate::algebra::{Scalar, Value};
use crate::error::{Error, Result};

use super::model0::Model0;
use super::operators::{jacobi_polarized, skew};
use super::tensor::Index4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

/// A basis operator: `J(e_x, e_y)` (so `J(e_x)` when `x == y`) or
/// `A(e_x, e_y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum OpSpec {
    Jacobi { x: usize, y: usize },
    Skew { x: usize, y: usize },
}

impl OpSpec {
    pub fn matrix<S: Scalar>(&self, m: &Model0<S>) -> crate::algebra::Matrix<S> {
        let n = m.dim();
        let e = |i: usize| basis::<S>(n, i);
        match *self {
            OpSpec::Jacobi { x, y } => jacobi_polarized(m, &e(x), &e(y)),
            OpSpec::Skew { x, y } => skew(m, &e(x), &e(y)),
        }
    }

    pub fn describe(&self, labels: &[String]) -> String {
        let l = |i: usize| labels.get(i).cloned().unwrap_or_else(|| format!("e{i}"));
        match *self {
            OpSpec::Jacobi { x, y } if x == y => format!("J({})", l(x)),
            OpSpec::Jacobi { x, y } => format!("J({},{})", l(x), l(y)),
            OpSpec::Skew { x, y } => format!("A({},{})", l(x), l(y)),
        }
    }
}

/// What a witness residual is the value of.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WitnessExpr {
    /// `[left, right] e_vector`.
    Commutator { left: OpSpec, right: OpSpec },
    /// `left right e_vector`.
    Product { left: OpSpec, right: OpSpec },
    /// Coefficient of `x_a x_b x_c x_d` in `J(x)^2`, applied to `e_vector`.
    QuarticCoefficient { indices: Index4 },
    /// Cyclic sum `A(i,j,k,l) + A(j,k,i,l) + A(k,i,j,l)`.
    Bianchi { idx: Index4 },
    /// A pair symmetry violated at `idx`.
    PairSymmetry { idx: Index4 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub expr: WitnessExpr,
    /// Basis vector the operators act on, when applicable.
    pub vector: Option<usize>,
    pub residual: Vec<Value>,
}

impl Witness {
    /// Recomputes the residual through the public operator API.
    pub fn reevaluate<S: Scalar>(&self, m: &Model0<S>) -> Result<Vec<S>> {
        let n = m.dim();
        let v = || {
            self.vector
                .map(|i| basis::<S>(n, i))
                .ok_or_else(|| Error::Invalid("witness has no vector".into()))
        };
        match &self.expr {
            WitnessExpr::Commutator { left, right } => {
                let (p, q) = (left.matrix(m), right.matrix(m));
                Ok(p.commutator(&q).mul_vec(&v()?))
            }
            WitnessExpr::Product { left, right } => {
                let (p, q) = (left.matrix(m), right.matrix(m));
                Ok(p.mul_vec(&q.mul_vec(&v()?)))
            }
            WitnessExpr::QuarticCoefficient { indices } => {
                let v = v()?;
                let mut acc = vec![S::zero(); n];
                for [a, b, c, d] in distinct_permutations(*indices) {
                    let p = jacobi_polarized(m, &basis(n, a), &basis(n, b));
                    let q = jacobi_polarized(m, &basis(n, c), &basis(n, d));
                    let w = p.mul_vec(&q.mul_vec(&v));
                    for (s, x) in acc.iter_mut().zip(w) {
                        *s = s.clone() + x;
                    }
                }
                Ok(acc)
            }
            WitnessExpr::Bianchi { idx: [i, j, k, l] } => {
                let a = m.tensor();
                Ok(vec![
                    a.get([*i, *j, *k, *l]) + a.get([*j, *k, *i, *l]) + a.get([*k, *i, *j, *l]),
                ])
            }
            WitnessExpr::PairSymmetry { idx } => Ok(vec![m.tensor().get(*idx)]),
        }
    }
}

/// A component that differs from its expected value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub location: String,
    pub expected: Value,
    pub found: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: String,
    pub verdict: Verdict,
    /// Number of elementary checks (pairs, tuples, components) performed.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub mismatches: Vec<Mismatch>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn pass(property: &str, checked: usize) -> Self {
        CheckReport {
            property: property.to_string(),
            verdict: Verdict::Holds,
            checked,
            witness: None,
            mismatches: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn fail(property: &str, checked: usize, witness: Witness) -> Self {
        CheckReport {
            verdict: Verdict::Fails,
            witness: Some(witness),
            ..Self::pass(property, checked)
        }
    }

    /// Holds iff `mismatches` is empty.
    pub fn from_mismatches(property: &str, checked: usize, mismatches: Vec<Mismatch>) -> Self {
        CheckReport {
            verdict: if mismatches.is_empty() {
                Verdict::Holds
            } else {
                Verdict::Fails
            },
            mismatches,
            ..Self::pass(property, checked)
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

pub(crate) fn basis<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

/// All distinct orderings of a 4-element multiset, lexicographically.
pub fn distinct_permutations(idx: Index4) -> Vec<Index4> {
    let mut sorted = idx;
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut cur = sorted;
    loop {
        out.push(cur);
        // next lexicographic permutation
        let Some(i) = (0..3).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..4)
            .rev()
            .find(|&j| cur[j] > cur[i])
            .expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_counts() {
        assert_eq!(distinct_permutations([0, 1, 2, 3]).len(), 24);
        assert_eq!(distinct_permutations([0, 0, 1, 1]).len(), 6);
        assert_eq!(distinct_permutations([2, 2, 2, 2]), vec![[2, 2, 2, 2]]);
        assert_eq!(distinct_permutations([1, 0, 0, 0]).len(), 4);
    }
}
