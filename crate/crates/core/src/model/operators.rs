//! Skew-symmetric curvature operators and Jacobi operators.
//!
//! `A(x,y)` is characterized by `<A(x,y)z, w> = A(x,y,z,w)`, so
//! `A(x,y)z = G^{-1} A(x,y,z,.)`. The Jacobi operator is `J(x)y = A(y,x)x`
//! and its polarization `J(x,y) = (A(.,x)y + A(.,y)x) / 2`.

use super::model0::Model0;
use crate::algebra::{Matrix, Scalar};

/// The operators `A(e_i, e_j)` for every ordered basis pair, plus the
/// polarized Jacobi operators `J(e_i, e_j)` for `i <= j`.
pub struct OperatorTable<S> {
    n: usize,
    ginv: Matrix<S>,
    skew: Vec<Matrix<S>>,
    jacobi: Vec<Matrix<S>>,
}

impl<S: Scalar> OperatorTable<S> {
    pub fn new(m: &Model0<S>) -> Self {
        let n = m.dim();
        let ginv = m
            .form()
            .inverse()
            .expect("0-model forms are nondegenerate")
            .gram()
            .clone();
        let mut skew = vec![Matrix::<S>::zeros(n, n); n * n];
        for ([i, j, k, l], v) in m.tensor().expanded() {
            let op = &mut skew[i * n + j];
            for mm in 0..n {
                let g = &ginv[(l, mm)];
                if g.is_zero() {
                    continue;
                }
                let cur = op[(mm, k)].clone();
                op[(mm, k)] = cur + v.clone() * g.clone();
            }
        }
        let mut jacobi = Vec::with_capacity(n * (n + 1) / 2);
        let half = S::from_frac(1, 2);
        for a in 0..n {
            for b in a..n {
                // column k is (A(e_k,e_a)e_b + A(e_k,e_b)e_a) / 2
                let op = Matrix::from_fn(n, n, |r, k| {
                    let s = skew[k * n + a][(r, b)].clone() + skew[k * n + b][(r, a)].clone();
                    if s.is_zero() {
                        s
                    } else {
                        s * half.clone()
                    }
                });
                jacobi.push(op);
            }
        }
        OperatorTable {
            n,
            ginv,
            skew,
            jacobi,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn inverse_gram(&self) -> &Matrix<S> {
        &self.ginv
    }

    /// `A(e_i, e_j)`.
    pub fn skew(&self, i: usize, j: usize) -> &Matrix<S> {
        &self.skew[i * self.n + j]
    }

    /// `J(e_i, e_j)`, symmetric in `(i, j)`.
    pub fn jacobi(&self, i: usize, j: usize) -> &Matrix<S> {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        // rows 0..a of the upper triangle hold n + (n-1) + ... + (n-a+1) entries
        let idx = a * self.n - a * a.saturating_sub(1) / 2 + (b - a);
        &self.jacobi[idx]
    }
}

fn combine<S: Scalar>(terms: impl Iterator<Item = (S, Matrix<S>)>, n: usize) -> Matrix<S> {
    let mut acc = Matrix::zeros(n, n);
    for (c, m) in terms {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&m.scale(&c));
    }
    acc
}

/// `z -> A(x, y) z`.
pub fn skew<S: Scalar>(m: &Model0<S>, x: &[S], y: &[S]) -> Matrix<S> {
    let ops = m.operators();
    let n = m.dim();
    let terms = (0..n)
        .flat_map(move |i| (0..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            if x[i].is_zero() || y[j].is_zero() {
                None
            } else {
                Some((x[i].clone() * y[j].clone(), ops.skew(i, j).clone()))
            }
        });
    combine(terms, n)
}

/// `z -> (A(z, x) y + A(z, y) x) / 2`.
pub fn jacobi_polarized<S: Scalar>(m: &Model0<S>, x: &[S], y: &[S]) -> Matrix<S> {
    let ops = m.operators();
    let n = m.dim();
    // J(x, y) = sum_{i,j} x_i y_j J(e_i, e_j)
    let terms = (0..n)
        .flat_map(move |i| (0..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            if x[i].is_zero() || y[j].is_zero() {
                None
            } else {
                Some((x[i].clone() * y[j].clone(), ops.jacobi(i, j).clone()))
            }
        });
    combine(terms, n)
}

/// `y -> A(y, x) x`.
pub fn jacobi<S: Scalar>(m: &Model0<S>, x: &[S]) -> Matrix<S> {
    jacobi_polarized(m, x, x)
}
