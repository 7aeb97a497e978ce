//! Lines of P₃ in Plücker coordinates, tangency to quadrics and duality.

mod nu;
mod plucker;
mod rulings;

pub use nu::{
    adjugate, compound2, dual_quadric, duality_identity_residual, grassmann_matrix, is_tangent, nu,
    tangency_residual, Mat6, TangencyQuadric,
};
pub use plucker::{
    plucker_from_points, plucker_orthogonal, plucker_to_pv, pv_to_plucker, wedge, PVLine,
    PluckerLine, PAIRS,
};
pub use rulings::{
    intersection_curve_tangents, ruling_tangency_points, rulings, symmetric_normalizer,
    CurveTangent, RulingTangent, Rulings,
};
