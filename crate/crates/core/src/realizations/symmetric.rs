//! When `M_A` is locally symmetric.

use serde::{Deserialize, Serialize};

use crate::algebra::{Scalar, Value};
use crate::error::Result;
use crate::geometry::covariant_derivative_r;
use crate::model::{CheckReport, Mismatch};

use super::families::{build_m_a, AFamily};

/// The three polynomial conditions, as residuals:
///
/// 1. `a11 + a22 + a31 a32 - 2`
/// 2. `3 a21 + 3 a31 + 3 a12 a11 - 4`
/// 3. `3 a12 + 3 a32 + 3 a21 a22 - 4`
pub fn symmetric_residuals<S: Scalar>(f: &AFamily) -> Result<[S; 3]> {
    let a = |i: usize, j: usize| f.value::<S>(i - 1, j - 1);
    let n = S::from_i64;
    Ok([
        a(1, 1)? + a(2, 2)? + a(3, 1)? * a(3, 2)? - n(2),
        n(3) * a(2, 1)? + n(3) * a(3, 1)? + n(3) * a(1, 2)? * a(1, 1)? - n(4),
        n(3) * a(1, 2)? + n(3) * a(3, 2)? + n(3) * a(2, 1)? * a(2, 2)? - n(4),
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricReport {
    pub residuals: [Value; 3],
    pub equations_hold: bool,
    /// Largest `|nabla R|` coordinate component over the sampled points.
    pub max_nabla_r: f64,
    pub nabla_r_vanishes: bool,
    pub points: usize,
    pub report: CheckReport,
}

impl SymmetricReport {
    pub fn verdicts_agree(&self) -> bool {
        self.equations_hold == self.nabla_r_vanishes
    }
}

/// Evaluates the three equations and, independently, `nabla R` of `M_A` at
/// `points`. Holds iff both vanish; `tol` is an absolute bound in float mode.
pub fn symmetric_space_check<S: Scalar>(
    f: &AFamily,
    points: &[Vec<S>],
    tol: f64,
) -> Result<SymmetricReport> {
    let zero = |v: &S| v.approx_eq(&S::zero(), tol);
    let residuals = symmetric_residuals::<S>(f)?;
    let mut mismatches = Vec::new();
    for (k, r) in residuals.iter().enumerate() {
        if !zero(r) {
            mismatches.push(Mismatch {
                location: format!("equation {}", k + 1),
                expected: S::zero().to_value(),
                found: r.to_value(),
            });
        }
    }
    let equations_hold = mismatches.is_empty();
    let m = build_m_a(f)?;
    let mut max_nabla_r = 0.0f64;
    let mut nabla_r_vanishes = true;
    for (n, p) in points.iter().enumerate() {
        let t = covariant_derivative_r(&m, p, 1)?;
        let worst = t
            .entries
            .iter()
            .max_by(|a, b| a.1.magnitude().total_cmp(&b.1.magnitude()));
        if let Some((idx, v)) = worst {
            max_nabla_r = max_nabla_r.max(v.magnitude());
            if !zero(v) {
                if nabla_r_vanishes {
                    let names = m.coord_names();
                    let at: Vec<&str> = idx.iter().map(|&i| names[i].as_str()).collect();
                    mismatches.push(Mismatch {
                        location: format!(
                            "nabla R({},{},{},{};{}) at point {n}",
                            at[0], at[1], at[2], at[3], at[4]
                        ),
                        expected: S::zero().to_value(),
                        found: v.to_value(),
                    });
                }
                nabla_r_vanishes = false;
            }
        }
    }
    let mut report = CheckReport::from_mismatches(
        "locally-symmetric",
        residuals.len() + points.len(),
        mismatches,
    );
    if equations_hold != nabla_r_vanishes {
        report = report.with_note("the equations and nabla R disagree");
    }
    Ok(SymmetricReport {
        residuals: residuals.map(|r| r.to_value()),
        equations_hold,
        max_nabla_r,
        nabla_r_vanishes,
        points: points.len(),
        report,
    })
}
