use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::operators::OperatorTable;
use super::tensor::{validate_curvature_symmetries, CurvatureTensor, TensorEntry};
use crate::algebra::{BilinearForm, Matrix, Scalar, Value};
use crate::error::{Error, Result};

/// A 0-model `(V, <.,.>, A)` on `V = S^n` with its standard basis.
pub struct Model0<S> {
    form: BilinearForm<S>,
    tensor: CurvatureTensor<S>,
    labels: Vec<String>,
    ops: OnceLock<OperatorTable<S>>,
}

impl<S: Scalar> Clone for Model0<S> {
    fn clone(&self) -> Self {
        Model0 {
            form: self.form.clone(),
            tensor: self.tensor.clone(),
            labels: self.labels.clone(),
            ops: OnceLock::new(),
        }
    }
}

impl<S: Scalar> PartialEq for Model0<S> {
    /// Entrywise equality of form and tensor; labels are ignored.
    fn eq(&self, o: &Self) -> bool {
        self.form == o.form && self.tensor == o.tensor
    }
}

impl<S: Scalar> std::fmt::Debug for Model0<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Model0")
            .field("dim", &self.dim())
            .field("form", &self.form)
            .field("tensor", &self.tensor)
            .finish()
    }
}

impl<S: Scalar> Model0<S> {
    /// Validates nondegeneracy and the curvature symmetries.
    pub fn new(form: BilinearForm<S>, tensor: CurvatureTensor<S>) -> Result<Self> {
        let m = Self::new_unchecked(form, tensor)?;
        if m.form.inverse().is_err() {
            return Err(Error::DegenerateForm);
        }
        let report = validate_curvature_symmetries(&m.tensor);
        if !report.holds() {
            return Err(Error::Invalid(format!(
                "tensor is not an algebraic curvature tensor: {:?}",
                report.witness.map(|w| w.expr)
            )));
        }
        Ok(m)
    }

    /// Checks only that the dimensions agree. For callers that produce
    /// models from already-valid ones (pullbacks, coordinate changes).
    pub fn new_unchecked(form: BilinearForm<S>, tensor: CurvatureTensor<S>) -> Result<Self> {
        if form.dim() != tensor.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                found: tensor.dim(),
            });
        }
        Ok(Model0 {
            form,
            tensor,
            labels: Vec::new(),
            ops: OnceLock::new(),
        })
    }

    /// The zero tensor on a form.
    pub fn zero(form: BilinearForm<S>) -> Self {
        let n = form.dim();
        Self::new_unchecked(form, CurvatureTensor::zero(n)).expect("dimensions agree")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn form(&self) -> &BilinearForm<S> {
        &self.form
    }

    pub fn tensor(&self) -> &CurvatureTensor<S> {
        &self.tensor
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> String {
        self.labels
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("e{i}"))
    }

    /// Index of the basis vector with the given label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Skew operators of basis pairs, computed once per model.
    pub fn operators(&self) -> &OperatorTable<S> {
        self.ops.get_or_init(|| OperatorTable::new(self))
    }

    pub fn inverse_gram(&self) -> Matrix<S> {
        self.operators().inverse_gram().clone()
    }

    pub fn to_doc(&self) -> ModelDoc {
        ModelDoc {
            dim: self.dim(),
            form: self.form.to_values(),
            tensor: self.tensor.to_entries(),
            labels: self
                .labels
                .iter()
                .enumerate()
                .map(|(i, l)| (i, l.clone()))
                .collect(),
        }
    }

    pub fn from_doc(doc: &ModelDoc) -> Result<Self> {
        if doc.form.len() != doc.dim {
            return Err(Error::DimensionMismatch {
                expected: doc.dim,
                found: doc.form.len(),
            });
        }
        let form = BilinearForm::from_values(&doc.form)?;
        let tensor = CurvatureTensor::from_entries(doc.dim, &doc.tensor)?;
        let mut labels = Vec::new();
        if !doc.labels.is_empty() {
            for i in 0..doc.dim {
                labels.push(
                    doc.labels
                        .get(&i)
                        .cloned()
                        .unwrap_or_else(|| format!("e{i}")),
                );
            }
        }
        Ok(Self::new(form, tensor)?.with_labels(labels))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(s)?)
    }
}

/// JSON layout of a model: `{"dim", "form", "tensor", "labels"}` with
/// zero-based indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub dim: usize,
    pub form: Vec<Vec<Value>>,
    pub tensor: Vec<TensorEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<usize, String>,
}
