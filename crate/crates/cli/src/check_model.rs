use serde_json::json;
use tsankov::algebra::Scalar;
use tsankov::model::{
    check_property, validate_curvature_symmetries, CheckReport, Model0, Property,
};
use tsankov::Result;

use crate::report::{render_witness, Check};

pub fn from_report(r: CheckReport, labels: &[String]) -> Check {
    let summary = match (&r.witness, r.mismatches.first()) {
        (Some(w), _) => format!("fails: {}", render_witness(w, labels)),
        (None, Some(m)) => format!(
            "fails at {}: expected {}, found {}",
            m.location, m.expected, m.found
        ),
        (None, None) if r.holds() => format!("holds ({} checks)", r.checked),
        (None, None) => "fails".into(),
    };
    Check::new(r.property.clone(), r.holds(), summary).with_detail(r)
}

pub fn run<S: Scalar>(m: &Model0<S>, properties: &[Property]) -> Result<Vec<Check>> {
    let labels: Vec<String> = (0..m.dim()).map(|i| m.label(i)).collect();
    let mut checks = vec![from_report(
        validate_curvature_symmetries(m.tensor()),
        &labels,
    )];
    let sig = m.form().signature()?;
    checks.push(
        Check::new(
            "signature",
            true,
            format!("({}, {}) on dimension {}", sig.p, sig.q, m.dim()),
        )
        .with_detail(json!({ "p": sig.p, "q": sig.q, "dim": m.dim() })),
    );
    for &p in properties {
        checks.push(from_report(check_property(m, p), &labels));
    }
    Ok(checks)
}
