//! Exhaustive checks of the commutation and nilpotency properties.
//!
//! Each identity is polynomial in its test vectors, so it holds for all
//! vectors iff it holds for every basis-polarized operator: `J(e_i, e_j)` for
//! `i <= j` (the coefficients of `J(x)`) and `A(e_i, e_j)` for `i < j`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::check::{distinct_permutations, CheckReport, OpSpec, Witness, WitnessExpr};
use super::model0::Model0;
use crate::algebra::{span_basis, Matrix, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// `J(x)J(y) = J(y)J(x)`.
    JacobiTsankov,
    /// `J(x)J(y) = 0`.
    #[serde(rename = "2-step-jacobi-nilpotent")]
    TwoStepJacobiNilpotent,
    /// `A(x1,x2)A(x3,x4) = A(x3,x4)A(x1,x2)`.
    SkewTsankov,
    /// `A(x1,x2)A(x3,x4) = 0`.
    #[serde(rename = "2-step-skew-nilpotent")]
    TwoStepSkewNilpotent,
    /// `A(x1,x2)J(x3) = J(x3)A(x1,x2)`.
    MixedTsankov,
    /// `A(x1,x2)J(x3) = J(x3)A(x1,x2) = 0`.
    MixedNilpotentTsankov,
    /// `J(x)^2 = 0`.
    JacobiSquareZero,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::JacobiTsankov,
        Property::TwoStepJacobiNilpotent,
        Property::SkewTsankov,
        Property::TwoStepSkewNilpotent,
        Property::MixedTsankov,
        Property::MixedNilpotentTsankov,
        Property::JacobiSquareZero,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::JacobiTsankov => "jacobi-tsankov",
            Property::TwoStepJacobiNilpotent => "2-step-jacobi-nilpotent",
            Property::SkewTsankov => "skew-tsankov",
            Property::TwoStepSkewNilpotent => "2-step-skew-nilpotent",
            Property::MixedTsankov => "mixed-tsankov",
            Property::MixedNilpotentTsankov => "mixed-nilpotent-tsankov",
            Property::JacobiSquareZero => "jacobi-square-zero",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown property {s:?}")))
    }
}

/// Polarized Jacobi operators in check order: `J(e_i)` first, then
/// `J(e_i, e_j)` for `i < j` lexicographically.
pub fn jacobi_ops(n: usize) -> Vec<OpSpec> {
    let mut out: Vec<OpSpec> = (0..n).map(|i| OpSpec::Jacobi { x: i, y: i }).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(OpSpec::Jacobi { x: i, y: j });
        }
    }
    out
}

/// Skew operators `A(e_i, e_j)`, `i < j`, lexicographically.
pub fn skew_ops(n: usize) -> Vec<OpSpec> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(OpSpec::Skew { x: i, y: j });
        }
    }
    out
}

fn op_matrix<'a, S: Scalar>(m: &'a Model0<S>, op: &OpSpec) -> &'a Matrix<S> {
    let ops = m.operators();
    match *op {
        OpSpec::Jacobi { x, y } => ops.jacobi(x, y),
        OpSpec::Skew { x, y } => ops.skew(x, y),
    }
}

fn first_nonzero_column<S: Scalar>(c: &Matrix<S>) -> Option<usize> {
    (0..c.cols()).find(|&j| (0..c.rows()).any(|i| !c[(i, j)].is_negligible(1.0)))
}

fn values<S: Scalar>(v: &[S]) -> Vec<crate::algebra::Value> {
    v.iter().map(Scalar::to_value).collect()
}

/// `[P, Q] = 0` for every listed pair, scanned in order.
fn commutators<S: Scalar>(m: &Model0<S>, name: &str, pairs: &[(OpSpec, OpSpec)]) -> CheckReport {
    let hit = pairs
        .par_iter()
        .enumerate()
        .find_map_first(|(idx, (p, q))| {
            let c = op_matrix(m, p).commutator(op_matrix(m, q));
            first_nonzero_column(&c).map(|v| {
                (
                    idx,
                    Witness {
                        expr: WitnessExpr::Commutator {
                            left: *p,
                            right: *q,
                        },
                        vector: Some(v),
                        residual: values(&c.column(v)),
                    },
                )
            })
        });
    match hit {
        Some((idx, w)) => CheckReport::fail(name, idx + 1, w),
        None => CheckReport::pass(name, pairs.len()),
    }
}

/// `P Q e_v = 0` for all listed operators, scanning `v`, then the inner
/// operator `Q`, then the outer `P`.
fn products<S: Scalar>(
    m: &Model0<S>,
    name: &str,
    outer: &[OpSpec],
    inner: &[OpSpec],
) -> CheckReport {
    let n = m.dim();
    let per_vector = outer.len() * inner.len();
    let hit = (0..n).into_par_iter().find_map_first(|v| {
        for (qi, q) in inner.iter().enumerate() {
            let w = op_matrix(m, q).column(v);
            if w.iter().all(S::is_zero) {
                continue;
            }
            for (pi, p) in outer.iter().enumerate() {
                let r = op_matrix(m, p).mul_vec(&w);
                if r.iter().any(|x| !x.is_negligible(1.0)) {
                    let checked = v * per_vector + qi * outer.len() + pi + 1;
                    return Some((
                        checked,
                        Witness {
                            expr: WitnessExpr::Product {
                                left: *p,
                                right: *q,
                            },
                            vector: Some(v),
                            residual: values(&r),
                        },
                    ));
                }
            }
        }
        None
    });
    match hit {
        Some((checked, w)) => CheckReport::fail(name, checked, w),
        None => CheckReport::pass(name, n * per_vector),
    }
}

fn square_zero<S: Scalar>(m: &Model0<S>, name: &str) -> CheckReport {
    let n = m.dim();
    let mut multisets = Vec::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                for d in c..n {
                    multisets.push([a, b, c, d]);
                }
            }
        }
    }
    let ops = m.operators();
    let hit = multisets
        .par_iter()
        .enumerate()
        .find_map_first(|(idx, &ms)| {
            let mut coeff = Matrix::<S>::zeros(n, n);
            for [a, b, c, d] in distinct_permutations(ms) {
                coeff = coeff.add(&ops.jacobi(a, b).mul(ops.jacobi(c, d)));
            }
            first_nonzero_column(&coeff).map(|v| {
                (
                    idx,
                    Witness {
                        expr: WitnessExpr::QuarticCoefficient { indices: ms },
                        vector: Some(v),
                        residual: values(&coeff.column(v)),
                    },
                )
            })
        });
    match hit {
        Some((idx, w)) => CheckReport::fail(name, idx + 1, w),
        None => CheckReport::pass(name, multisets.len()),
    }
}

/// Exhaustive basis-polarized verification of `kind`. A failing report
/// carries the first offending operator pair in scan order.
pub fn check_property<S: Scalar>(m: &Model0<S>, kind: Property) -> CheckReport {
    let n = m.dim();
    let name = kind.name();
    let jac = jacobi_ops(n);
    let skw = skew_ops(n);
    let all_pairs = |left: &[OpSpec], right: &[OpSpec]| -> Vec<(OpSpec, OpSpec)> {
        left.iter()
            .flat_map(|p| right.iter().map(move |q| (*p, *q)))
            .collect()
    };
    match kind {
        Property::JacobiTsankov => commutators(m, name, &all_pairs(&jac, &jac)),
        Property::SkewTsankov => commutators(m, name, &all_pairs(&skw, &skw)),
        Property::MixedTsankov => commutators(m, name, &all_pairs(&skw, &jac)),
        Property::TwoStepJacobiNilpotent => products(m, name, &jac, &jac),
        Property::TwoStepSkewNilpotent => products(m, name, &skw, &skw),
        Property::MixedNilpotentTsankov => {
            let r = products(m, name, &skw, &jac);
            if !r.holds() {
                return r;
            }
            let r2 = products(m, name, &jac, &skw);
            if !r2.holds() {
                return CheckReport {
                    checked: r.checked + r2.checked,
                    ..r2
                };
            }
            CheckReport::pass(name, r.checked + r2.checked)
        }
        Property::JacobiSquareZero => square_zero(m, name),
    }
}

/// Row-reduced bases of the invariantly defined subspaces
/// `V_{beta,alpha*} = span{J(x)y}` and `V_{alpha*} = span{J(x)J(y)z}`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSpans<S> {
    pub beta_alpha_star: Vec<Vec<S>>,
    pub alpha_star: Vec<Vec<S>>,
}

pub fn invariant_spans<S: Scalar>(m: &Model0<S>) -> InvariantSpans<S> {
    let n = m.dim();
    let jac = jacobi_ops(n);
    let mut images = Vec::new();
    for op in &jac {
        let mat = op_matrix(m, op);
        for k in 0..n {
            let v = mat.column(k);
            if v.iter().any(|x| !x.is_zero()) {
                images.push(v);
            }
        }
    }
    let first = span_basis(&images, n);
    // J(x)J(y)z ranges over the J-images of V_{beta,alpha*}
    let mut second = Vec::new();
    for op in &jac {
        let mat = op_matrix(m, op);
        for w in &first {
            let v = mat.mul_vec(w);
            if v.iter().any(|x| !x.is_zero()) {
                second.push(v);
            }
        }
    }
    InvariantSpans {
        alpha_star: span_basis(&second, n),
        beta_alpha_star: first,
    }
}
