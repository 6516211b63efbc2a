//! The plane-wave metric family: metric, Christoffel symbols, curvature,
//! iterated covariant derivatives of curvature, geodesics and the inverse of
//! the exponential map.

mod christoffel;
mod curvature;
mod field;
mod geodesic;
mod metric;
mod tensor;

pub use christoffel::{christoffel, christoffel_generic, ChristoffelKind};
pub use curvature::{
    covariant_derivative_r, curvature_at, curvature_derivatives, curvature_generic,
};
pub use geodesic::{
    exp_inverse, geodesic, geodesic_residual, geodesic_trace, integrate, Geodesic, Quadrature,
    QUAD_TOL,
};
pub use metric::{metric_at, Coord, MetricDoc, PlaneWaveMetric, Point};
pub use tensor::{CoordEntry, CoordTensor, Frame};
