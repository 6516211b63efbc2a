use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::scalar::{Scalar, Value};
use crate::error::{Error, Result};

/// A symmetric bilinear form on `S^n`, stored as its Gram matrix.
#[derive(Clone, PartialEq)]
pub struct BilinearForm<S> {
    gram: Matrix<S>,
}

impl<S: Scalar> std::fmt::Debug for BilinearForm<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BilinearForm {:?}", self.gram)
    }
}

/// Counts of negative (`p`) and positive (`q`) directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl<S: Scalar> BilinearForm<S> {
    pub fn new(gram: Matrix<S>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch {
                expected: gram.rows(),
                found: gram.cols(),
            });
        }
        let n = gram.rows();
        for i in 0..n {
            for j in i + 1..n {
                if !gram[(i, j)].approx_eq(&gram[(j, i)], 1e-12) {
                    return Err(Error::Invalid(format!(
                        "form is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(BilinearForm { gram })
    }

    pub fn identity(n: usize) -> Self {
        BilinearForm {
            gram: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.gram[(i, j)]
    }

    /// `G(x, y)`.
    pub fn eval(&self, x: &[S], y: &[S]) -> S {
        super::matrix::dot(x, &self.gram.mul_vec(y))
    }

    pub fn determinant(&self) -> S {
        self.gram.determinant().expect("square")
    }

    pub fn is_degenerate(&self) -> bool {
        self.determinant()
            .is_negligible(self.gram.max_abs().powi(self.dim() as i32))
    }

    /// Pulls the form back along `t`: `(T*G)(x, y) = G(Tx, Ty)`.
    pub fn pullback(&self, t: &Matrix<S>) -> Self {
        BilinearForm {
            gram: t.transpose().mul(&self.gram).mul(t),
        }
    }

    /// Signature by symmetric congruence diagonalization.
    ///
    /// Pivots on a nonzero diagonal entry when one exists; otherwise a
    /// nonzero off-diagonal `G[i][j]` is moved onto the diagonal by the
    /// congruence `e_i -> e_i + e_j`, which yields `2 G[i][j] != 0`.
    pub fn signature(&self) -> Result<Signature> {
        let n = self.dim();
        let scale = self.gram.max_abs();
        let mut m = self.gram.clone();
        let (mut p, mut q) = (0, 0);
        for k in 0..n {
            let diag = (k..n).find(|&i| !m[(i, i)].is_negligible(scale));
            let piv = match diag {
                Some(i) => i,
                None => {
                    let off = (k..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .find(|&(i, j)| !m[(i, j)].is_negligible(scale));
                    let Some((i, j)) = off else {
                        return Err(Error::DegenerateForm);
                    };
                    add_congruent(&mut m, i, j);
                    i
                }
            };
            swap_congruent(&mut m, k, piv);
            let d = m[(k, k)].clone();
            if d.is_negative() {
                p += 1;
            } else {
                q += 1;
            }
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = m[(i, k)].clone() / d.clone();
                for j in k..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(k, j)].clone();
                    m[(i, j)] = v;
                }
                for j in k..n {
                    let v = m[(j, i)].clone() - f.clone() * m[(j, k)].clone();
                    m[(j, i)] = v;
                }
            }
        }
        Ok(Signature { p, q })
    }

    /// The inverse form, i.e. the Gram matrix of the dual basis.
    pub fn inverse(&self) -> Result<Self> {
        let inv = self.gram.inverse().map_err(|_| Error::DegenerateForm)?;
        Ok(BilinearForm { gram: inv })
    }

    pub fn to_values(&self) -> Vec<Vec<Value>> {
        self.gram
            .to_rows()
            .into_iter()
            .map(|r| r.iter().map(Scalar::to_value).collect())
            .collect()
    }

    pub fn from_values(rows: &[Vec<Value>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(Value::to_scalar).collect::<Result<Vec<S>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(Matrix::from_rows(rows)?)
    }
}

fn swap_congruent<S: Scalar>(m: &mut Matrix<S>, a: usize, b: usize) {
    if a == b {
        return;
    }
    let n = m.rows();
    for j in 0..n {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
    for i in 0..n {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

/// Row and column `i` += row and column `j`.
fn add_congruent<S: Scalar>(m: &mut Matrix<S>, i: usize, j: usize) {
    let n = m.rows();
    for c in 0..n {
        let v = m[(i, c)].clone() + m[(j, c)].clone();
        m[(i, c)] = v;
    }
    for r in 0..n {
        let v = m[(r, i)].clone() + m[(r, j)].clone();
        m[(r, i)] = v;
    }
}

/// Convenience: signature of a form.
pub fn signature<S: Scalar>(g: &BilinearForm<S>) -> Result<Signature> {
    g.signature()
}

/// Convenience: exact inverse of a form.
pub fn invert_form<S: Scalar>(g: &BilinearForm<S>) -> Result<BilinearForm<S>> {
    g.inverse()
}
