//! Coordinate tensors at a point and frames to contract them against.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Scalar, Value};
use crate::error::{Error, Result};
use crate::model::{CurvatureTensor, Mismatch};

/// Components of a tensor at one point, sparse over coordinate index tuples.
///
/// Index tuples list the `upper` contravariant slots first, then the
/// `covariant` slots, then the `derivative` slots of an iterated covariant
/// derivative (outermost last). So `R(i,j,k,l)` has `[i,j,k,l]`,
/// `nabla^2 R(i,j,k,l;p;q)` has `[i,j,k,l,p,q]` and `Gamma^k_{ij}` has `[k,i,j]`.
#[derive(Clone, PartialEq)]
pub struct CoordTensor<S> {
    pub n: usize,
    pub upper: usize,
    pub covariant: usize,
    pub derivative: usize,
    pub entries: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> std::fmt::Debug for CoordTensor<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, v)| (k, v.to_string())))
            .finish()
    }
}

impl<S: Scalar> CoordTensor<S> {
    pub fn new(n: usize, upper: usize, covariant: usize, derivative: usize) -> Self {
        CoordTensor {
            n,
            upper,
            covariant,
            derivative,
            entries: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.upper + self.covariant + self.derivative
    }

    pub fn get(&self, idx: &[usize]) -> S {
        self.entries.get(idx).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, idx: Vec<usize>, v: S) {
        if v.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Scalar::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .values()
            .map(Scalar::magnitude)
            .fold(0.0, f64::max)
    }

    /// Multilinear evaluation on one vector per slot.
    pub fn contract(&self, vectors: &[&[S]]) -> Result<S> {
        if vectors.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != self.n) {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        let mut acc = S::zero();
        'entries: for (idx, t) in &self.entries {
            let mut term = t.clone();
            for (v, &i) in vectors.iter().zip(idx) {
                if v[i].is_zero() {
                    continue 'entries;
                }
                term = term * v[i].clone();
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Contraction against frame vectors picked by label.
    pub fn contract_frame(&self, frame: &Frame<S>, labels: &[&str]) -> Result<S> {
        let vs = labels
            .iter()
            .map(|l| frame.vector(l).map(Vec::as_slice))
            .collect::<Result<Vec<_>>>()?;
        self.contract(&vs)
    }

    /// The `(0,4)` case as a [`CurvatureTensor`]. Fails if some stored
    /// component disagrees with the value its symmetry orbit forces.
    pub fn to_curvature(&self) -> Result<CurvatureTensor<S>> {
        if self.rank() != 4 || self.upper != 0 {
            return Err(Error::Invalid("not a (0,4) tensor".into()));
        }
        let mut out = CurvatureTensor::zero(self.n);
        for (idx, v) in &self.entries {
            out.set([idx[0], idx[1], idx[2], idx[3]], v.clone());
        }
        let bad = self.symmetry_mismatches(&out);
        if let Some(m) = bad.first() {
            return Err(Error::Invalid(format!(
                "component {} breaks the curvature symmetries",
                m.location
            )));
        }
        Ok(out)
    }

    fn symmetry_mismatches(&self, c: &CurvatureTensor<S>) -> Vec<Mismatch> {
        let mut out = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (k, _) in c.expanded() {
            seen.insert(k.to_vec());
        }
        seen.extend(self.entries.keys().cloned());
        for idx in seen {
            let want = c.get([idx[0], idx[1], idx[2], idx[3]]);
            let have = self.get(&idx);
            if !want.approx_eq(&have, crate::algebra::DEFAULT_REL_TOL) {
                out.push(Mismatch {
                    location: format!("{idx:?}"),
                    expected: want.to_value(),
                    found: have.to_value(),
                });
            }
        }
        out
    }

    /// Rows `[indices..., value]` for reports.
    pub fn to_entries(&self) -> Vec<CoordEntry> {
        self.entries
            .iter()
            .map(|(k, v)| CoordEntry {
                index: k.clone(),
                value: v.to_value(),
            })
            .collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CoordTensor<T> {
        let mut out = CoordTensor::new(self.n, self.upper, self.covariant, self.derivative);
        for (k, v) in &self.entries {
            out.set(k.clone(), f(v));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordEntry {
    pub index: Vec<usize>,
    pub value: Value,
}

/// Tangent vectors at a point with role labels (`a1`, `a1*`, `b11`, ...).
#[derive(Clone, PartialEq)]
pub struct Frame<S> {
    vectors: Vec<Vec<S>>,
    labels: Vec<String>,
}

impl<S: Scalar> std::fmt::Debug for Frame<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut d = f.debug_map();
        for (l, v) in self.labels.iter().zip(&self.vectors) {
            d.entry(l, &v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        }
        d.finish()
    }
}

impl<S: Scalar> Frame<S> {
    /// Requires as many independent vectors as the ambient dimension and
    /// distinct labels.
    pub fn new(vectors: Vec<Vec<S>>, labels: Vec<String>) -> Result<Self> {
        let n = vectors.len();
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: labels.len(),
            });
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::Invalid("frame labels must be distinct".into()));
        }
        if Matrix::from_columns(&vectors)?.rank() != n {
            return Err(Error::Invalid(
                "frame vectors are linearly dependent".into(),
            ));
        }
        Ok(Frame { vectors, labels })
    }

    /// The coordinate frame `d/dx1, ..., d/dyb` with the given names.
    pub fn coordinate(names: Vec<String>) -> Self {
        let n = names.len();
        let vectors = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { S::one() } else { S::zero() })
                    .collect()
            })
            .collect();
        Frame {
            vectors,
            labels: names,
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<S>] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vector(&self, label: &str) -> Result<&Vec<S>> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.vectors[i])
            .ok_or_else(|| Error::Invalid(format!("frame has no vector {label:?}")))
    }

    /// The same frame with vectors relabeled or replaced.
    pub fn with_vectors(&self, vectors: Vec<Vec<S>>) -> Result<Self> {
        Self::new(vectors, self.labels.clone())
    }
}
