//! Exact verification of Jacobi-Tsankov curvature models.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: exact scalars, matrices, bilinear forms, Taylor jets and
//!   expression trees.
//! - [`model`]: 0-models `(V, <.,.>, A)`, Jacobi and skew curvature operators,
//!   the commutation checkers and the 14-dimensional model `M14`.
//! - [`symmetry`]: the pullback action, membership tests, the explicit
//!   generators and the kernel parameterization of the symmetry group of `M14`.
//! - [`geometry`]: generalized plane-wave metrics, their Christoffel symbols,
//!   curvature, covariant derivatives and geodesics.
//! - [`realizations`]: the manifolds realizing `M14`, normalized frames, the
//!   `Xi` invariant and the locally-symmetric criterion.

pub mod algebra;
pub mod error;
pub mod geometry;
pub mod model;
pub mod realizations;
pub mod symmetry;

pub use error::{Error, Result};
