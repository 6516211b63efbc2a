use serde_json::json;
use tsankov::algebra::{Matrix, Scalar, Value};
use tsankov::model::Model0;
use tsankov::symmetry::{
    is_symmetry, kernel_constraints, kernel_dimension, kernel_element, tau, GeneratorSpec,
    KernelParams, KernelParamsDoc, LinearMap,
};
use tsankov::{Error, Result};

use crate::check_model::from_report;
use crate::input::{read, Sampler};
use crate::report::{fmt_value, Check};

pub enum Action {
    Generator(String),
    KernelRandom,
    KernelDim,
    KernelParams(String),
}

/// A generator as `swap12`, `rotation:c,s`, ... or a JSON file.
fn parse_generator(s: &str) -> Result<GeneratorSpec> {
    if s.ends_with(".json") {
        Ok(serde_json::from_str(&read(s)?)?)
    } else {
        s.parse()
    }
}

fn values<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<Value>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(Scalar::to_value).collect())
        .collect()
}

fn membership<S: Scalar>(t: &LinearMap<S>, m: &Model0<S>, checks: &mut Vec<Check>) -> Result<()> {
    let labels: Vec<String> = (0..m.dim()).map(|i| m.label(i)).collect();
    let report = is_symmetry(t, m)?;
    let mut inv = from_report(report.invariance.clone(), &labels);
    inv.name = "invariance".into();
    checks.push(inv);
    checks.push(Check::new(
        "preserves-alpha-star",
        report.preserves_alpha_star,
        if report.preserves_alpha_star {
            "T V_alpha* = V_alpha*"
        } else {
            "T moves V_alpha*"
        },
    ));
    checks.push(Check::new(
        "preserves-beta-alpha-star",
        report.preserves_beta_alpha_star,
        if report.preserves_beta_alpha_star {
            "T V_beta,alpha* = V_beta,alpha*"
        } else {
            "T moves V_beta,alpha*"
        },
    ));
    if report.preserves_alpha_star {
        let tm = tau(t, m)?;
        let det = tm.determinant()?;
        let rows: Vec<String> = tm
            .to_rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| fmt_value(&x.to_value()))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        checks.push(
            Check::new(
                "tau",
                true,
                format!("[{}], det {}", rows.join("; "), fmt_value(&det.to_value())),
            )
            .with_detail(json!({ "tau": values(&tm), "det": det.to_value() })),
        );
    }
    Ok(())
}

pub fn run<S: Scalar>(m: &Model0<S>, action: &Action, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    match action {
        Action::Generator(s) => {
            let spec = parse_generator(s)?;
            let valid = spec.validate::<S>();
            checks.push(
                Check::new(
                    "parameters",
                    valid.is_ok(),
                    match &valid {
                        Ok(()) => "admissible".to_string(),
                        Err(e) => e.to_string(),
                    },
                )
                .with_detail(&spec),
            );
            membership(&spec.build_unchecked::<S>()?, m, &mut checks)?;
        }
        Action::KernelRandom | Action::KernelParams(_) => {
            let params = match action {
                Action::KernelParams(path) => {
                    let doc: KernelParamsDoc = serde_json::from_str(&read(path)?)?;
                    KernelParams::<S>::from_doc(&doc)?
                }
                _ => {
                    let free: Vec<S> = Sampler::new(seed).vector(kernel_dimension());
                    KernelParams::from_free(&free)?
                }
            };
            let residual = params.residual();
            let admissible = residual.iter().all(|r| r.approx_eq(&S::zero(), 1e-9));
            checks.push(
                Check::new(
                    "parameters",
                    admissible,
                    if admissible {
                        "b solves the six constraints"
                    } else {
                        "b violates the constraints"
                    },
                )
                .with_detail(params.to_doc()),
            );
            if !admissible {
                return Ok(checks);
            }
            let t = kernel_element(&params)?;
            membership(&t, m, &mut checks)?;
            let id = checks
                .iter()
                .find(|c| c.name == "tau")
                .map(|c| c.detail["tau"] == json!(values(&Matrix::<S>::identity(3))))
                .unwrap_or(false);
            checks.push(Check::new(
                "tau-identity",
                id,
                if id {
                    "tau = identity"
                } else {
                    "tau is not the identity"
                },
            ));
        }
        Action::KernelDim => {
            if m.dim() != 14 {
                return Err(Error::Invalid(
                    "the kernel parameterization is for m14".into(),
                ));
            }
            let k = kernel_constraints::<S>();
            let (rank, dim) = (k.rank(), kernel_dimension());
            checks.push(
                Check::new(
                    "kernel-dimension",
                    true,
                    format!(
                        "constraint rank {rank} on {} unknowns, dimension {dim}",
                        k.cols()
                    ),
                )
                .with_detail(json!({
                    "constraints": values(&k),
                    "rank": rank,
                    "unknowns": k.cols(),
                    "dimension": dim,
                })),
            );
        }
    }
    Ok(checks)
}
