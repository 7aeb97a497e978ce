//! Symmetric 4×4 complex matrices as projective quadrics, and pencils of them.

mod classify;
mod cross_ratio;
mod factor;
mod pencil;
mod quadric;

pub use classify::{classify_singular_pencil, RankTwoFamily, SingularPencilClass};
pub use cross_ratio::{cross_ratio, cross_ratio_value, CrossRatio};
pub use factor::{factor_rank_one, factor_rank_two, PlanePair};
pub use pencil::{
    dense_pencil_det, pencil_det_form, pencil_meets_rank_one, pencil_singular_points,
    refine_affine, refine_to_corank, Pencil, SingularPoint,
};
pub use quadric::{numeric_rank, to_dyn, Mat4, ProjQuadric, RankProfile, Vec4};

pub use crate::poly::{BinaryForm, FormRoot, ProjPoint1};

use crate::error::Result;

/// Projective roots of a binary form with multiplicities.
pub fn binary_form_roots(f: &BinaryForm, tol_cluster: f64) -> Result<Vec<FormRoot>> {
    f.roots(tol_cluster)
}
