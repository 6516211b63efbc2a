//! The 14-dimensional Jacobi-Tsankov model `M14`.
//!
//! Basis order: `a1 a2 a3 a1* a2* a3* b11 b12 b21 b22 b31 b32 b41 b42`.

use super::model0::Model0;
use super::tensor::CurvatureTensor;
use crate::algebra::{BilinearForm, Matrix, Scalar};

pub const DIM: usize = 14;

/// `alpha_i`, `i = 1..3`.
pub const ALPHA: [usize; 3] = [0, 1, 2];
/// `alpha_i^*`.
pub const ALPHA_STAR: [usize; 3] = [3, 4, 5];
/// `beta_{i,j}`, `i = 1..4`, `j = 1..2`.
pub const BETA: [[usize; 2]; 4] = [[6, 7], [8, 9], [10, 11], [12, 13]];

pub const LABELS: [&str; DIM] = [
    "a1", "a2", "a3", "a1*", "a2*", "a3*", "b11", "b12", "b21", "b22", "b31", "b32", "b41", "b42",
];

/// The eight beta indices in the order `b11 b12 b21 b22 b31 b32 b41 b42`.
pub fn beta_indices() -> [usize; 8] {
    [6, 7, 8, 9, 10, 11, 12, 13]
}

pub fn labels() -> Vec<String> {
    LABELS.iter().map(|s| s.to_string()).collect()
}

/// Index of a basis label such as `"a2*"` or `"b41"`.
pub fn index(label: &str) -> Option<usize> {
    LABELS.iter().position(|&l| l == label)
}

/// Nonzero inner products `<e_i, e_j> = v` (listed once per unordered pair).
pub fn form_entries<S: Scalar>() -> Vec<(usize, usize, S)> {
    let mut out = Vec::new();
    for i in 0..3 {
        out.push((ALPHA[i], ALPHA_STAR[i], S::one()));
        out.push((BETA[i][0], BETA[i][1], S::one()));
    }
    let [b41, b42] = BETA[3];
    out.push((b41, b41, S::from_frac(-1, 2)));
    out.push((b42, b42, S::from_frac(-1, 2)));
    out.push((b41, b42, S::from_frac(1, 4)));
    out
}

/// Nonzero tensor components, one per orbit.
pub fn tensor_entries<S: Scalar>() -> Vec<([usize; 4], S)> {
    let [a1, a2, a3] = ALPHA;
    let b = |i: usize, j: usize| BETA[i - 1][j - 1];
    let one = S::one;
    let mhalf = || S::from_frac(-1, 2);
    vec![
        ([a2, a1, a1, b(2, 1)], one()),
        ([a3, a1, a1, b(3, 1)], one()),
        ([a3, a2, a2, b(3, 2)], one()),
        ([a1, a2, a2, b(1, 2)], one()),
        ([a1, a3, a3, b(1, 1)], one()),
        ([a2, a3, a3, b(2, 2)], one()),
        ([a1, a2, a3, b(4, 1)], mhalf()),
        ([a1, a3, a2, b(4, 1)], mhalf()),
        ([a2, a3, a1, b(4, 2)], mhalf()),
        ([a2, a1, a3, b(4, 2)], mhalf()),
    ]
}

pub fn m14_form<S: Scalar>() -> BilinearForm<S> {
    let mut g = Matrix::zeros(DIM, DIM);
    for (i, j, v) in form_entries::<S>() {
        g[(i, j)] = v.clone();
        g[(j, i)] = v;
    }
    BilinearForm::new(g).expect("symmetric by construction")
}

pub fn m14_tensor<S: Scalar>() -> CurvatureTensor<S> {
    let mut t = CurvatureTensor::zero(DIM);
    for (idx, v) in tensor_entries::<S>() {
        t.set(idx, v);
    }
    t
}

/// The model `M14` with its basis labels.
pub fn build_m14<S: Scalar>() -> Model0<S> {
    Model0::new(m14_form(), m14_tensor())
        .expect("M14 is a 0-model")
        .with_labels(labels())
}
