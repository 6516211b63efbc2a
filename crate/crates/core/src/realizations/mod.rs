//! Manifolds realizing `M14`: the families `M_Phi` and `M_A`, the frames in
//! which their curvature at a point is exactly `M14`, the invariant `Xi`
//! and the locally-symmetric criterion for `M_A`.

mod families;
mod frames;
mod symmetric;
mod xi;

pub use families::{
    build_m_a, build_m_phi, y_slot, ADoc, AFamily, Family, PhiDoc, PhiFamily, Realization,
};
pub use frames::{
    check_0_model, check_1_normalized, normalization_stages, normalize_basis_0, normalize_basis_1,
    verify_0_model, Stages,
};
pub use symmetric::{symmetric_residuals, symmetric_space_check, SymmetricReport};
pub use xi::{xi_from_derivatives, xi_from_frame, xi_invariant, XiMode, XiValue};
