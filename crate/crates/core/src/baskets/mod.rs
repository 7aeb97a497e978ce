//! Baskets: quadrics tangent to another quadric along a conic, detected as
//! double-planes in pencils, with the pair, triple and quadruple
//! reconstructions and the double-four and double-five configurations.

pub mod conic;
mod pair;
mod quad;
mod reye;
pub mod space;
mod triple;

pub use pair::{
    common_basket_curves, is_basket_pair, sample_basket, BasketCurve, BasketLoci, BasketWitness,
    Witness,
};
pub use quad::{
    check_c3, complement, construct_typical_quadrilateral, pair_index, reconstruct_tetrahedron,
    solve_in_rank_two_plane, solve_on_conic, CompleteQuadrilateral, Contact, QuadVertex,
    QuadrilateralClass, QUAD_PAIRS,
};
pub use reye::{
    chart_conic, conic_pencil_rank_one, double_five, double_five_with, reye_incidence,
    standard_double_four, DoubleFive, IncidenceReport, Mat3, PencilRankOne, PointLabel,
    ReyeConfiguration,
};
pub use triple::{
    check_c1, desargues_basket, inscribed_in_coords, inscribed_triangles, perspective_relation,
    trio_of_double_planes, InscribedTriangle, Trio,
};
