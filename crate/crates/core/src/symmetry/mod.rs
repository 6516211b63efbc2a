//! The symmetry group of a 0-model, with the explicit generators and the
//! kernel parameterization for `M14`.
//!
//! A [`LinearMap`] stores `T` by columns: column `j` is `T e_j`.

mod generators;
mod kernel;

pub use generators::GeneratorSpec;
pub use kernel::{
    kernel_constraints, kernel_dimension, kernel_element, KernelParams, KernelParamsDoc,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{coordinates_in, BilinearForm, Matrix, Scalar, Value, DEFAULT_REL_TOL};
use crate::error::{Error, Result};
use crate::model::{
    canonical, invariant_spans, CheckReport, CurvatureTensor, Index4, Mismatch, Model0,
};

#[derive(Clone, PartialEq)]
pub struct LinearMap<S> {
    matrix: Matrix<S>,
}

impl<S: Scalar> std::fmt::Debug for LinearMap<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LinearMap {:?}", self.matrix)
    }
}

impl<S: Scalar> LinearMap<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        Ok(LinearMap { matrix })
    }

    pub fn identity(n: usize) -> Self {
        LinearMap {
            matrix: Matrix::identity(n),
        }
    }

    /// The map sending `e_j` to `images[j]`.
    pub fn from_images(images: &[Vec<S>]) -> Result<Self> {
        Self::new(Matrix::from_columns(images)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        LinearMap {
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.inverse().is_ok()
    }

    pub fn inverse(&self) -> Result<Self> {
        self.matrix
            .inverse()
            .map(|matrix| LinearMap { matrix })
            .map_err(|_| Error::SingularMap)
    }

    pub fn to_values(&self) -> Vec<Vec<Value>> {
        self.matrix
            .to_rows()
            .iter()
            .map(|r| r.iter().map(Scalar::to_value).collect())
            .collect()
    }
}

fn check_map<S: Scalar>(t: &LinearMap<S>, m: &Model0<S>) -> Result<()> {
    if t.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: t.dim(),
        });
    }
    if !t.is_invertible() {
        return Err(Error::SingularMap);
    }
    Ok(())
}

/// `T^*A (x,y,z,w) = A(Tx,Ty,Tz,Tw)`.
pub fn pullback_tensor<S: Scalar>(t: &LinearMap<S>, a: &CurvatureTensor<S>) -> CurvatureTensor<S> {
    let n = a.dim();
    let tm = t.matrix();
    // row a of T: the e_a-components of every T e_i
    let rows: Vec<Vec<(usize, S)>> = (0..n)
        .map(|r| {
            (0..n)
                .filter(|&c| !tm[(r, c)].is_zero())
                .map(|c| (c, tm[(r, c)].clone()))
                .collect()
        })
        .collect();
    let mut acc: BTreeMap<Index4, S> = BTreeMap::new();
    for ([p, q, r, s], v) in a.expanded() {
        for (i, ti) in &rows[p] {
            let vi = v.clone() * ti.clone();
            for (j, tj) in &rows[q] {
                if i == j {
                    continue;
                }
                let vj = vi.clone() * tj.clone();
                for (k, tk) in &rows[r] {
                    let vk = vj.clone() * tk.clone();
                    for (l, tl) in &rows[s] {
                        let idx = [*i, *j, *k, *l];
                        // accumulate only at orbit representatives
                        if canonical(idx) != Some((idx, false)) {
                            continue;
                        }
                        let add = vk.clone() * tl.clone();
                        let slot = acc.entry(idx).or_insert_with(S::zero);
                        *slot = slot.clone() + add;
                    }
                }
            }
        }
    }
    let mut out = CurvatureTensor::zero(n);
    for (idx, v) in acc {
        out.set(idx, v);
    }
    out
}

/// The model `(V, T^*<.,.>, T^*A)`.
pub fn pullback<S: Scalar>(t: &LinearMap<S>, m: &Model0<S>) -> Result<Model0<S>> {
    check_map(t, m)?;
    let form: BilinearForm<S> = m.form().pullback(t.matrix());
    let tensor = pullback_tensor(t, m.tensor());
    Ok(Model0::new_unchecked(form, tensor)?.with_labels(m.labels().to_vec()))
}

fn compare<S: Scalar>(location: String, expected: &S, found: &S, out: &mut Vec<Mismatch>) {
    if !expected.approx_eq(found, DEFAULT_REL_TOL) {
        out.push(Mismatch {
            location,
            expected: expected.to_value(),
            found: found.to_value(),
        });
    }
}

/// Outcome of a membership test: entrywise invariance of form and tensor,
/// plus the two invariant-subspace containments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub invariance: CheckReport,
    pub preserves_alpha_star: bool,
    pub preserves_beta_alpha_star: bool,
}

impl SymmetryReport {
    pub fn holds(&self) -> bool {
        self.invariance.holds() && self.preserves_alpha_star && self.preserves_beta_alpha_star
    }
}

fn preserves<S: Scalar>(t: &LinearMap<S>, basis: &[Vec<S>]) -> bool {
    basis
        .iter()
        .all(|w| coordinates_in(basis, &t.apply(w), DEFAULT_REL_TOL).is_some())
}

/// Whether `T^*<.,.> = <.,.>` and `T^*A = A`, with every differing component
/// listed.
pub fn is_symmetry<S: Scalar>(t: &LinearMap<S>, m: &Model0<S>) -> Result<SymmetryReport> {
    let pulled = pullback(t, m)?;
    let n = m.dim();
    let label = |i: usize| m.label(i);
    let mut mismatches = Vec::new();
    for i in 0..n {
        for j in i..n {
            compare(
                format!("form({},{})", label(i), label(j)),
                m.form().entry(i, j),
                pulled.form().entry(i, j),
                &mut mismatches,
            );
        }
    }
    let mut keys: Vec<Index4> = m.tensor().canonical_entries().map(|(k, _)| *k).collect();
    keys.extend(pulled.tensor().canonical_entries().map(|(k, _)| *k));
    keys.sort_unstable();
    keys.dedup();
    for idx in &keys {
        let [i, j, k, l] = *idx;
        compare(
            format!(
                "tensor({},{},{},{})",
                label(i),
                label(j),
                label(k),
                label(l)
            ),
            &m.tensor().get(*idx),
            &pulled.tensor().get(*idx),
            &mut mismatches,
        );
    }
    let checked = n * (n + 1) / 2 + keys.len();
    let spans = invariant_spans(m);
    Ok(SymmetryReport {
        invariance: CheckReport::from_mismatches("symmetry", checked, mismatches),
        preserves_alpha_star: preserves(t, &spans.alpha_star),
        preserves_beta_alpha_star: preserves(t, &spans.beta_alpha_star),
    })
}

/// The matrix of `T` restricted to `V_{alpha*} = span{J(x)J(y)z}`, in the
/// row-reduced basis of that space (the `alpha_i^*` for `M14`).
pub fn tau<S: Scalar>(t: &LinearMap<S>, m: &Model0<S>) -> Result<Matrix<S>> {
    check_map(t, m)?;
    let basis = invariant_spans(m).alpha_star;
    let cols = basis
        .iter()
        .map(|w| {
            coordinates_in(&basis, &t.apply(w), DEFAULT_REL_TOL)
                .ok_or_else(|| Error::Invalid("map does not preserve V_alpha*".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    if cols.is_empty() {
        return Ok(Matrix::zeros(0, 0));
    }
    Matrix::from_columns(&cols)
}
