//! 0-models, curvature operators and the commutation checkers.

pub mod check;
pub mod m14;
pub mod model0;
pub mod operators;
pub mod properties;
pub mod tensor;

pub use check::{CheckReport, Mismatch, OpSpec, Verdict, Witness, WitnessExpr};
pub use m14::build_m14;
pub use model0::{Model0, ModelDoc};
pub use operators::{jacobi, jacobi_polarized, skew, OperatorTable};
pub use properties::{check_property, invariant_spans, InvariantSpans, Property};
pub use tensor::{canonical, validate_curvature_symmetries, CurvatureTensor, Index4, TensorEntry};
