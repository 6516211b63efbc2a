//! Symmetries of `M14` acting trivially on `V_{alpha*}`.
//!
//! Such a map is determined by coefficients `b_i^nu` (the beta-components of
//! `T alpha_i`) subject to six linear equations, plus the antisymmetric part
//! of the alpha*-components `c_i^j`. Everything else is forced by the inner
//! products. Column `8 i + nu` of the constraint matrix is `b_i^nu`, with
//! `nu` running over `b11 b12 b21 b22 b31 b32 b41 b42`.

use serde::{Deserialize, Serialize};

use super::LinearMap;
use crate::algebra::{Matrix, Scalar, Value};
use crate::error::{Error, Result};
use crate::model::m14::{self, ALPHA, ALPHA_STAR, DIM};

/// Number of beta directions.
const NB: usize = 8;

/// The alpha-quadruples `A(T a_p, T a_q, T a_r, T a_s) = 0` that give the
/// independent linear equations, in the usual order (zero-based alpha
/// indices).
const QUADRUPLES: [[usize; 4]; 6] = [
    [1, 0, 0, 1],
    [2, 0, 0, 2],
    [2, 1, 1, 2],
    [1, 0, 0, 2],
    [0, 1, 1, 2],
    [0, 2, 2, 1],
];

/// Coefficient matrix (6 × 24) of the linear equations on `b`.
///
/// Each row linearizes `A(T a_p, T a_q, T a_r, T a_s)` in `b`: every slot
/// holding `alpha_i` contributes `b_i^nu A(..., beta_nu, ...)`. No term of
/// higher order survives because every nonzero component has three alpha
/// slots.
pub fn kernel_constraints<S: Scalar>() -> Matrix<S> {
    let a = m14::m14_tensor::<S>();
    let beta = m14::beta_indices();
    let mut out = Matrix::<S>::zeros(QUADRUPLES.len(), 3 * NB);
    for (row, quad) in QUADRUPLES.iter().enumerate() {
        for slot in 0..4 {
            let i = quad[slot];
            for (nu, &b) in beta.iter().enumerate() {
                let mut idx = quad.map(|k| ALPHA[k]);
                idx[slot] = b;
                let v = a.get(idx);
                if !v.is_zero() {
                    let cur = out[(row, NB * i + nu)].clone();
                    out[(row, NB * i + nu)] = cur + v;
                }
            }
        }
    }
    out
}

/// `(24 - rank) + 3`: the free `b` plus the antisymmetric part of `c`.
pub fn kernel_dimension() -> usize {
    let k = kernel_constraints::<crate::algebra::Rational>();
    k.cols() - k.rank() + 3
}

#[derive(Clone, PartialEq)]
pub struct KernelParams<S> {
    /// `b[(i, nu)] = b_i^nu`, 3 × 8.
    pub b: Matrix<S>,
    /// `(c_1^2, c_1^3, c_2^3)` of the antisymmetric part of `c`.
    pub c_antisym: [S; 3],
}

/// JSON layout: `{"b": 3 rows of 8, "c_antisym": [c12, c13, c23]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParamsDoc {
    pub b: Vec<Vec<Value>>,
    pub c_antisym: Vec<Value>,
}

impl<S: Scalar> std::fmt::Debug for KernelParams<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelParams")
            .field("b", &self.b)
            .field("c_antisym", &self.c_antisym)
            .finish()
    }
}

impl<S: Scalar> KernelParams<S> {
    pub fn zero() -> Self {
        KernelParams {
            b: Matrix::zeros(3, NB),
            c_antisym: [S::zero(), S::zero(), S::zero()],
        }
    }

    /// The point with coordinates `free` (length 21): the first entries are
    /// coefficients on a basis of solutions `b`, the last three are
    /// `c_antisym`.
    pub fn from_free(free: &[S]) -> Result<Self> {
        let basis = kernel_constraints::<S>().kernel();
        let nb = basis.len();
        if free.len() != nb + 3 {
            return Err(Error::DimensionMismatch {
                expected: nb + 3,
                found: free.len(),
            });
        }
        let mut flat = vec![S::zero(); 3 * NB];
        for (coef, v) in free.iter().zip(&basis) {
            if coef.is_zero() {
                continue;
            }
            for (f, x) in flat.iter_mut().zip(v) {
                *f = f.clone() + coef.clone() * x.clone();
            }
        }
        Ok(KernelParams {
            b: Matrix::from_fn(3, NB, |i, nu| flat[NB * i + nu].clone()),
            c_antisym: [free[nb].clone(), free[nb + 1].clone(), free[nb + 2].clone()],
        })
    }

    /// Constraint residuals; all zero iff the parameters are admissible.
    pub fn residual(&self) -> Vec<S> {
        let flat: Vec<S> = (0..3 * NB)
            .map(|k| self.b[(k / NB, k % NB)].clone())
            .collect();
        kernel_constraints::<S>().mul_vec(&flat)
    }

    pub fn to_doc(&self) -> KernelParamsDoc {
        KernelParamsDoc {
            b: self
                .b
                .to_rows()
                .iter()
                .map(|r| r.iter().map(Scalar::to_value).collect())
                .collect(),
            c_antisym: self.c_antisym.iter().map(Scalar::to_value).collect(),
        }
    }

    pub fn from_doc(doc: &KernelParamsDoc) -> Result<Self> {
        if doc.b.len() != 3 || doc.b.iter().any(|r| r.len() != NB) || doc.c_antisym.len() != 3 {
            return Err(Error::Invalid(
                "kernel parameters need b: 3x8 and c_antisym: 3".into(),
            ));
        }
        let b = Matrix::from_rows(
            doc.b
                .iter()
                .map(|r| r.iter().map(Value::to_scalar).collect::<Result<Vec<S>>>())
                .collect::<Result<Vec<_>>>()?,
        )?;
        let c: Vec<S> = doc
            .c_antisym
            .iter()
            .map(Value::to_scalar)
            .collect::<Result<_>>()?;
        Ok(KernelParams {
            b,
            c_antisym: [c[0].clone(), c[1].clone(), c[2].clone()],
        })
    }
}

/// The symmetry with parameters `p`:
///
/// - `T alpha_i = alpha_i + sum b_i^nu beta_nu + sum c_i^j alpha_j^*`
/// - `T beta_nu = beta_nu + sum d_nu^i alpha_i^*` with
///   `d_nu^i = -sum_mu <beta_nu, beta_mu> b_i^mu`
/// - `T alpha_i^* = alpha_i^*`
///
/// The symmetric part of `c` is `c_i^j + c_j^i = -<b_i, b_j>`, where
/// `b_i = sum b_i^nu beta_nu`; this is what keeps `<T alpha_i, T alpha_j> = 0`.
pub fn kernel_element<S: Scalar>(p: &KernelParams<S>) -> Result<LinearMap<S>> {
    if p.b.rows() != 3 || p.b.cols() != NB {
        return Err(Error::DimensionMismatch {
            expected: 3 * NB,
            found: p.b.rows() * p.b.cols(),
        });
    }
    if p.residual().iter().any(|r| !r.is_negligible(1.0)) {
        return Err(Error::Invalid(
            "kernel parameters violate the linear constraints".into(),
        ));
    }
    let form = m14::m14_form::<S>();
    let beta = m14::beta_indices();
    let g = |nu: usize, mu: usize| form.entry(beta[nu], beta[mu]).clone();
    // <b_i, b_j>
    let bb = |i: usize, j: usize| {
        let mut s = S::zero();
        for nu in 0..NB {
            for mu in 0..NB {
                let gm = g(nu, mu);
                if !gm.is_zero() {
                    s = s + p.b[(i, nu)].clone() * p.b[(j, mu)].clone() * gm;
                }
            }
        }
        s
    };
    let [c12, c13, c23] = p.c_antisym.clone();
    let anti = [
        [S::zero(), c12.clone(), c13.clone()],
        [-c12, S::zero(), c23.clone()],
        [-c13, -c23, S::zero()],
    ];
    let half = S::from_frac(1, 2);
    let mut t = Matrix::<S>::identity(DIM);
    for i in 0..3 {
        for nu in 0..NB {
            t[(beta[nu], ALPHA[i])] = p.b[(i, nu)].clone();
        }
        for j in 0..3 {
            let sym = -(half.clone() * bb(i, j));
            t[(ALPHA_STAR[j], ALPHA[i])] = sym + anti[i][j].clone();
        }
    }
    for nu in 0..NB {
        for i in 0..3 {
            let mut d = S::zero();
            for mu in 0..NB {
                let gm = g(nu, mu);
                if !gm.is_zero() {
                    d = d - gm * p.b[(i, mu)].clone();
                }
            }
            t[(ALPHA_STAR[i], beta[nu])] = d;
        }
    }
    LinearMap::new(t)
}
