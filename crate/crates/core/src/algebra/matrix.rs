//! Dense matrices with exact (or pivoted float) elimination.
//!
//! Matrices here are small (at most a few dozen rows), so storage is dense
//! and row-major. Products skip zero entries, which keeps the exhaustive
//! operator checks on 14×14 rational matrices cheap.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<S>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if let Some(bad) = cols.iter().find(|v| v.len() != r) {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: bad.len(),
            });
        }
        Ok(Self::from_fn(r, c, |i, j| cols[j][i].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let slot = &mut out[(i, j)];
                    *slot = slot.clone() + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    fn scale_hint(&self) -> f64 {
        self.data.iter().map(S::magnitude).fold(0.0, f64::max)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let scale = self.scale_hint();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = pick_pivot(&m, r, c, scale) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = S::one() / m[(r, c)].clone();
            for j in 0..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        for x in m.data.iter_mut() {
            if x.is_negligible(scale) {
                *x = S::zero();
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space `{x : Ax = 0}`.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut m = self.clone();
        let scale = self.scale_hint();
        let mut det = S::one();
        for c in 0..m.cols {
            let Some(p) = pick_pivot(&m, c, c, scale) else {
                return Ok(S::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() / piv.clone();
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMap);
        }
        Ok(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Solves `Ax = b` for square nonsingular `A`.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        Ok(self.inverse()?.mul_vec(b))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.scale_hint()
    }
}

fn pick_pivot<S: Scalar>(m: &Matrix<S>, from_row: usize, col: usize, scale: f64) -> Option<usize> {
    match S::MODE {
        super::Mode::Rational => (from_row..m.rows).find(|&i| !m[(i, col)].is_zero()),
        super::Mode::Float => (from_row..m.rows)
            .filter(|&i| !m[(i, col)].is_negligible(scale))
            .max_by(|&a, &b| {
                m[(a, col)]
                    .magnitude()
                    .partial_cmp(&m[(b, col)].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            }),
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc + x.clone() * y.clone();
    }
    acc
}

/// Row-reduced basis of the span of `vectors` (nonzero rows of the RREF).
pub fn span_basis<S: Scalar>(vectors: &[Vec<S>], dim: usize) -> Vec<Vec<S>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_fn(vectors.len(), dim, |i, j| vectors[i][j].clone());
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Coordinates of `v` in a row-reduced `basis`, or `None` when `v` is not in
/// the span.
pub fn coordinates_in<S: Scalar>(basis: &[Vec<S>], v: &[S], tol: f64) -> Option<Vec<S>> {
    // An RREF basis has a pivot per row; the coordinate is v at that pivot.
    let coords: Vec<S> = basis
        .iter()
        .map(|row| {
            let p = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("nonzero basis row");
            v[p].clone() / row[p].clone()
        })
        .collect();
    let mut recon = vec![S::zero(); v.len()];
    for (c, row) in coords.iter().zip(basis) {
        for (slot, x) in recon.iter_mut().zip(row) {
            *slot = slot.clone() + c.clone() * x.clone();
        }
    }
    recon
        .iter()
        .zip(v)
        .all(|(a, b)| a.approx_eq(b, tol))
        .then_some(coords)
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Display> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
