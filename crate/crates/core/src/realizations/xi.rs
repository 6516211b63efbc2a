//! The local isometry invariant `Xi` of the specialized `M_Phi`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{jet_eval, Scalar, Value};
use crate::error::{Error, Result};
use crate::geometry::{curvature_derivatives, CoordTensor, Frame, PlaneWaveMetric};

use super::families::Realization;
use super::frames::{normalize_basis_1, require_specialized};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiMode {
    /// From `nabla R` and `nabla^2 R` in a 1-normalized frame.
    Frame,
    /// From the closed form in `phi_{1,1}`.
    Direct,
}

impl FromStr for XiMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frame" => Ok(XiMode::Frame),
            "direct" => Ok(XiMode::Direct),
            _ => Err(Error::Parse(format!("unknown xi mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiValue {
    pub value: Value,
    pub mode: XiMode,
    /// `[q2, q1]` with `q_k = phi_k phi_k'' / (phi_k')^2` for `phi_1 =
    /// phi_{1,1}'`, `phi_2 = phi_{1,2}'`; `Xi = (q2 - q1)^2 / 4`. In frame
    /// mode these are the quotients `nabla^2 R / (nabla R)^2` along `b12`
    /// and `b11`.
    pub quotients: [Value; 2],
    /// Frame vectors in `M14` label order (frame mode only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub frame: Option<Vec<Vec<Value>>>,
}

fn xi_of<S: Scalar>(q2: S, q1: S) -> S {
    let d = q2.clone() - q1.clone();
    S::from_frac(1, 4) * d.clone() * d
}

/// `Xi(B)` from `R, nabla R, nabla^2 R` (as returned by
/// [`curvature_derivatives`] with `k = 2`) and a frame labeled like `M14`.
pub fn xi_from_derivatives<S: Scalar>(
    derivs: &[CoordTensor<S>],
    frame: &Frame<S>,
) -> Result<XiValue> {
    if derivs.len() < 3 {
        return Err(Error::Invalid("need R, nabla R and nabla^2 R".into()));
    }
    let quotient = |k: &str, nu: &str| -> Result<S> {
        let first = derivs[1].contract_frame(frame, &["a1", k, k, nu, "a1"])?;
        let second = derivs[2].contract_frame(frame, &["a1", k, k, nu, "a1", "a1"])?;
        if first.is_negligible(1.0) {
            return Err(Error::Hypothesis(format!(
                "nabla R(a1,{k},{k},{nu};a1) vanishes"
            )));
        }
        Ok(second / (first.clone() * first))
    };
    let q2 = quotient("a2", "b12")?;
    let q1 = quotient("a3", "b11")?;
    Ok(XiValue {
        value: xi_of(q2.clone(), q1.clone()).to_value(),
        mode: XiMode::Frame,
        quotients: [q2.to_value(), q1.to_value()],
        frame: Some(
            frame
                .vectors()
                .iter()
                .map(|v| v.iter().map(Scalar::to_value).collect())
                .collect(),
        ),
    })
}

/// `Xi(B)` for an arbitrary frame at `p`.
pub fn xi_from_frame<S: Scalar>(m: &PlaneWaveMetric, p: &[S], frame: &Frame<S>) -> Result<XiValue> {
    xi_from_derivatives(&curvature_derivatives(m, p, 2)?, frame)
}

/// `Xi` at `p`, from a 1-normalized frame or from
/// `{1 - phi' phi''' / (phi'')^2}^2` with `phi = phi_{1,1}`.
pub fn xi_invariant<S: Scalar>(
    r: &Realization,
    p: &[S],
    mode: XiMode,
    tol: f64,
) -> Result<XiValue> {
    match mode {
        XiMode::Frame => {
            let frame = normalize_basis_1(r, p, tol)?;
            xi_from_frame(r.metric(), p, &frame)
        }
        XiMode::Direct => {
            require_specialized(r, p)?;
            let f = r.phi_family().expect("checked by require_specialized");
            let d = jet_eval(f.phi(0, 0), &p[..1], &[0], 3)?.univariate_derivatives();
            let (p1, p2, p3) = (d[1].clone(), d[2].clone(), d[3].clone());
            let q1 = p1 * p3 / (p2.clone() * p2);
            let q2 = S::from_i64(2) - q1.clone();
            Ok(XiValue {
                value: xi_of(q2.clone(), q1.clone()).to_value(),
                mode: XiMode::Direct,
                quotients: [q2.to_value(), q1.to_value()],
                frame: None,
            })
        }
    }
}
