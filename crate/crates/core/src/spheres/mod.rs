//! Spheres as quadrics through the imaginary conic at infinity, and their
//! common tangent lines.

mod collinear;
mod conditions;
mod coplanar;
mod generic;
mod geometry;
mod solve;
mod sphere;
mod system;

pub use collinear::{
    basket_meridian, classify_collinear, radical_abscissa, tangency_discriminant, Axis,
    ClassSamples, DegenerateClass, DegenerateReport, Meridian, SampledLine,
};
pub use conditions::{basket_conditions_spheres, is_t_point, BasketConditions, CONDITION_TOL};
pub use coplanar::{common_tangents_coplanar, parallelogram_foot};
pub use generic::common_tangents_generic;
pub use geometry::{center_geometry, coincident_centers, CenterGeometry, GeometryReport};
pub use solve::{perturbation_fallback, solve, transform_spheres, Regime, SolveResult};
pub use sphere::{sphere_to_quadric, Sphere, SphereCoords, T_POINT};
pub use system::{SolveOptions, TangentSet, TangentSolution, ACCEPT, REAL_GATE};
