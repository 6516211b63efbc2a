//! Exact scalar arithmetic, linear algebra, Taylor jets and expression trees.

pub mod expr;
pub mod form;
pub mod jet;
pub mod matrix;
pub mod poly;
pub mod scalar;

pub use expr::{jet_eval, ExprAlgebra, FnExpr};
pub use form::{invert_form, signature, BilinearForm, Signature};
pub use jet::{Jet, JetSpace};
pub use matrix::{coordinates_in, dot, span_basis, Matrix};
pub use poly::UPoly;
pub use scalar::{int, parse_rational, rat, Mode, Rational, Scalar, Value, DEFAULT_REL_TOL};
