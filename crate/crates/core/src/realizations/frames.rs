//! Normalized frames and the pointwise comparison with `M14`.

use crate::algebra::{Matrix, Scalar};
use crate::error::{Error, Result};
use crate::geometry::{
    covariant_derivative_r, curvature_at, metric_at, CoordTensor, Frame, PlaneWaveMetric,
};
use crate::model::m14::{self, ALPHA, ALPHA_STAR, BETA};
use crate::model::{canonical, CheckReport, CurvatureTensor, Mismatch};
use crate::symmetry::{pullback_tensor, LinearMap};

use super::families::Realization;

/// The frames after each of the three normalization steps, all labeled in
/// `M14` order.
#[derive(Clone, Debug)]
pub struct Stages<S: Scalar> {
    /// Rescaled coordinate vectors.
    pub scaled: Frame<S>,
    /// After the curvature corrections.
    pub curvature_corrected: Frame<S>,
    /// After the metric corrections; the 0-normalized frame.
    pub normalized: Frame<S>,
}

fn unit<S: Scalar>(k: usize) -> Vec<S> {
    let mut v = vec![S::zero(); m14::DIM];
    v[k] = S::one();
    v
}

fn axpy<S: Scalar>(v: &mut [S], c: &S, w: &[S]) {
    if c.is_zero() {
        return;
    }
    for (vi, wi) in v.iter_mut().zip(w) {
        *vi = vi.clone() + c.clone() * wi.clone();
    }
}

pub fn normalization_stages<S: Scalar>(r: &Realization, p: &[S]) -> Result<Stages<S>> {
    let m = r.metric();
    if p.len() != m14::DIM {
        return Err(Error::DimensionMismatch {
            expected: m14::DIM,
            found: p.len(),
        });
    }
    let labels = m14::labels();
    let [a1, a2, a3] = ALPHA;
    let b = |i: usize, j: usize| BETA[i - 1][j - 1];

    let mut bar: Vec<Vec<S>> = (0..m14::DIM).map(unit).collect();
    for i in 0..3 {
        for j in 0..2 {
            let s = r.beta_scale::<S>(i, j, p)?;
            let k = BETA[i][j];
            bar[k][k] = s.recip()?;
        }
    }
    let scaled = Frame::new(bar.clone(), labels.clone())?;

    // R on the x-block: alpha-bar_i = d/dx_i
    let rt = curvature_at(m, p)?;
    let rr = |i: usize, j: usize, k: usize, l: usize| rt.get(&[i - 1, j - 1, k - 1, l - 1]);
    let half = S::from_frac(1, 2);
    let quarter = S::from_frac(1, 4);
    let two = S::from_i64(2);
    let r1231 = rr(1, 2, 3, 1);
    let r1221 = rr(1, 2, 2, 1);
    let r2132 = rr(2, 1, 3, 2);
    let r2332 = rr(2, 3, 3, 2);
    let r3123 = rr(3, 1, 2, 3);
    let r1331 = rr(1, 3, 3, 1);

    let mut tilde = bar.clone();
    let star = |i: usize| bar[ALPHA_STAR[i - 1]].clone();
    axpy(&mut tilde[a1], &r1231, &bar[b(4, 1)]);
    axpy(
        &mut tilde[a1],
        &-(half.clone() * r1221.clone()),
        &bar[b(1, 2)],
    );
    axpy(&mut tilde[a2], &r2132, &bar[b(4, 2)]);
    axpy(
        &mut tilde[a2],
        &-(half.clone() * r2332.clone()),
        &bar[b(2, 2)],
    );
    axpy(&mut tilde[a3], &-(two * r3123.clone()), &bar[b(4, 1)]);
    axpy(
        &mut tilde[a3],
        &-(half.clone() * r1331.clone()),
        &bar[b(3, 1)],
    );
    axpy(&mut tilde[b(1, 1)], &(half.clone() * r1221), &star(1));
    axpy(&mut tilde[b(2, 1)], &(half.clone() * r2332), &star(2));
    axpy(&mut tilde[b(3, 2)], &(half.clone() * r1331), &star(3));
    axpy(
        &mut tilde[b(4, 1)],
        &(half.clone() * r1231.clone()),
        &star(1),
    );
    axpy(
        &mut tilde[b(4, 1)],
        &-(quarter.clone() * r2132.clone()),
        &star(2),
    );
    axpy(&mut tilde[b(4, 1)], &-r3123.clone(), &star(3));
    axpy(&mut tilde[b(4, 2)], &-(quarter * r1231), &star(1));
    axpy(&mut tilde[b(4, 2)], &(half.clone() * r2132), &star(2));
    axpy(&mut tilde[b(4, 2)], &(half.clone() * r3123), &star(3));
    let curvature_corrected = Frame::new(tilde.clone(), labels.clone())?;

    let g = metric_at(m, p)?;
    let mut fin = tilde.clone();
    for &i in &ALPHA {
        for (j, &aj) in ALPHA.iter().enumerate() {
            let c = -(half.clone() * g.eval(&tilde[i], &tilde[aj]));
            axpy(&mut fin[i], &c, &bar[ALPHA_STAR[j]]);
        }
    }
    let normalized = Frame::new(fin, labels)?;
    Ok(Stages {
        scaled,
        curvature_corrected,
        normalized,
    })
}

/// The 0-normalized frame at `p`.
pub fn normalize_basis_0<S: Scalar>(r: &Realization, p: &[S]) -> Result<Frame<S>> {
    Ok(normalization_stages(r, p)?.normalized)
}

/// Compares the metric and curvature pulled back through `frame` with `M14`,
/// exactly for rationals and within `tol` for floats.
pub fn check_0_model<S: Scalar>(
    m: &PlaneWaveMetric,
    p: &[S],
    frame: &Frame<S>,
    tol: f64,
) -> Result<CheckReport> {
    if frame.len() != m14::DIM || m.dim() != m14::DIM {
        return Err(Error::DimensionMismatch {
            expected: m14::DIM,
            found: frame.len(),
        });
    }
    let labels = frame.labels();
    let t = Matrix::from_columns(frame.vectors())?;
    let g = metric_at(m, p)?.pullback(&t);
    let want_g = m14::m14_form::<S>();
    let close = |a: &S, b: &S| a.approx_eq(b, tol);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for i in 0..m14::DIM {
        for j in i..m14::DIM {
            checked += 1;
            let (want, have) = (want_g.entry(i, j), g.entry(i, j));
            if !close(want, have) {
                mismatches.push(Mismatch {
                    location: format!("<{},{}>", labels[i], labels[j]),
                    expected: want.to_value(),
                    found: have.to_value(),
                });
            }
        }
    }
    let rt = curvature_at(m, p)?;
    let mut coord = CurvatureTensor::zero(m14::DIM);
    for (idx, v) in &rt.entries {
        let idx = [idx[0], idx[1], idx[2], idx[3]];
        if canonical(idx) == Some((idx, false)) {
            coord.set(idx, v.clone());
        }
    }
    let a = pullback_tensor(&LinearMap::new(t)?, &coord);
    let want_a = m14::m14_tensor::<S>();
    let mut keys: Vec<_> = a.canonical_entries().map(|(k, _)| *k).collect();
    keys.extend(want_a.canonical_entries().map(|(k, _)| *k));
    keys.sort();
    keys.dedup();
    for idx in keys {
        checked += 1;
        let (want, have) = (want_a.get(idx), a.get(idx));
        if !close(&want, &have) {
            let [i, j, k, l] = idx.map(|n| labels[n].as_str());
            mismatches.push(Mismatch {
                location: format!("A({i},{j},{k},{l})"),
                expected: want.to_value(),
                found: have.to_value(),
            });
        }
    }
    Ok(CheckReport::from_mismatches(
        "0-model M14",
        checked,
        mismatches,
    ))
}

/// Builds the 0-normalized frame at `p` and checks it against `M14`.
pub fn verify_0_model<S: Scalar>(r: &Realization, p: &[S], tol: f64) -> Result<CheckReport> {
    let frame = normalize_basis_0(r, p)?;
    check_0_model(r.metric(), p, &frame, tol)
}

/// `(i, j, k, beta, l)` index patterns of `nabla R(alpha_i, alpha_j, alpha_k,
/// beta; alpha_l)` that are required to be nonzero in a 1-normalized frame.
const NONZERO: [(usize, usize, usize, &str, usize); 4] = [
    (0, 2, 2, "b11", 0),
    (2, 0, 2, "b11", 0),
    (0, 1, 1, "b12", 0),
    (1, 0, 1, "b12", 0),
];

/// Checks the first-derivative pattern of a 1-normalized frame: among all
/// `nabla R(alpha_i, alpha_j, alpha_k, beta_nu; alpha_l)` only the four
/// listed in [`NONZERO`] survive, with `nabla R(a1,a3,a3,b11;a1) =
/// -nabla R(a3,a1,a3,b11;a1)` and likewise for `b12`.
pub fn check_1_normalized<S: Scalar>(
    nabla_r: &CoordTensor<S>,
    frame: &Frame<S>,
    tol: f64,
) -> Result<CheckReport> {
    let alpha = ["a1", "a2", "a3"];
    let beta = ["b11", "b12", "b21", "b22", "b31", "b32", "b41", "b42"];
    let mut mismatches = Vec::new();
    let mut checked = 0;
    let small = |v: &S| v.approx_eq(&S::zero(), tol);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for nu in beta {
                    for l in 0..3 {
                        checked += 1;
                        let v = nabla_r
                            .contract_frame(frame, &[alpha[i], alpha[j], alpha[k], nu, alpha[l]])?;
                        let required = NONZERO.contains(&(i, j, k, nu, l));
                        let loc = format!(
                            "nabla R({},{},{},{};{})",
                            alpha[i], alpha[j], alpha[k], nu, alpha[l]
                        );
                        if required && small(&v) {
                            mismatches.push(Mismatch {
                                location: format!("{loc} must be nonzero"),
                                expected: S::one().to_value(),
                                found: v.to_value(),
                            });
                        } else if !required && !small(&v) {
                            mismatches.push(Mismatch {
                                location: loc,
                                expected: S::zero().to_value(),
                                found: v.to_value(),
                            });
                        }
                    }
                }
            }
        }
    }
    for nu in ["b11", "b12"] {
        let k = if nu == "b11" { "a3" } else { "a2" };
        let u = nabla_r.contract_frame(frame, &["a1", k, k, nu, "a1"])?;
        let w = nabla_r.contract_frame(frame, &[k, "a1", k, nu, "a1"])?;
        checked += 1;
        if !u.approx_eq(&-w.clone(), tol) {
            mismatches.push(Mismatch {
                location: format!("nabla R(a1,{k},{k},{nu};a1) + nabla R({k},a1,{k},{nu};a1)"),
                expected: S::zero().to_value(),
                found: (u + w).to_value(),
            });
        }
    }
    Ok(CheckReport::from_mismatches(
        "1-normalized",
        checked,
        mismatches,
    ))
}

/// Rejects anything but the specialized `M_Phi` with `phi_{1,j}'' != 0` at `p`.
pub(crate) fn require_specialized<S: Scalar>(r: &Realization, p: &[S]) -> Result<()> {
    let f = r.phi_family().ok_or_else(|| {
        Error::Hypothesis("requires M_Phi with phi_{2,j} = x2, phi_{3,j} = x3".into())
    })?;
    if !f.is_specialized() {
        return Err(Error::Hypothesis(
            "requires phi_{2,j}(t) = phi_{3,j}(t) = t".into(),
        ));
    }
    for j in 0..2 {
        let d2: S = f.phi(0, j).derivative(0).derivative(0).eval(&p[..1])?;
        if d2.is_negligible(1.0) {
            return Err(Error::Hypothesis(format!(
                "phi_{{1,{}}}'' vanishes at x1 = {}",
                j + 1,
                p[0]
            )));
        }
    }
    Ok(())
}

/// The 0-normalized frame, validated against the 1-normalized pattern.
pub fn normalize_basis_1<S: Scalar>(r: &Realization, p: &[S], tol: f64) -> Result<Frame<S>> {
    if p.len() != m14::DIM {
        return Err(Error::DimensionMismatch {
            expected: m14::DIM,
            found: p.len(),
        });
    }
    require_specialized(r, p)?;
    let frame = normalize_basis_0(r, p)?;
    let nabla = covariant_derivative_r(r.metric(), p, 1)?;
    let report = check_1_normalized(&nabla, &frame, tol)?;
    if let Some(m) = report.mismatches.first() {
        return Err(Error::Invalid(format!(
            "0-normalized frame is not 1-normalized: {} = {}",
            m.location, m.found
        )));
    }
    Ok(frame)
}
