//! Fixed inputs shared by the benchmarks.

use tangentloci::selfcheck::{on_axis, random_coplanar_spheres, random_real_quadric, random_spheres, rng};
use tangentloci::spheres::Sphere;
use tangentloci::symqr::ProjQuadric;

pub const SEED: u64 = 20;

pub fn generic_instances(n: usize) -> Vec<[Sphere; 4]> {
    let mut r = rng(SEED);
    (0..n).map(|_| random_spheres(&mut r)).collect()
}

pub fn coplanar_instances(n: usize) -> Vec<[Sphere; 4]> {
    let mut r = rng(SEED + 1);
    (0..n).map(|k| random_coplanar_spheres(&mut r, k)).collect()
}

/// Spheres inscribed in the hyperboloid y² = 1 + x²/2.
pub fn hyperboloid_instance() -> [Sphere; 4] {
    let x = [-2.0, -0.5, 1.0, 2.5];
    on_axis(x, x.map(|xi: f64| (1.0 + xi * xi / 2.0).sqrt()))
}

pub fn quadric_pair() -> (ProjQuadric, ProjQuadric) {
    let mut r = rng(SEED + 2);
    let a = random_real_quadric(&mut r).expect("smooth quadric");
    let b = random_real_quadric(&mut r).expect("smooth quadric");
    (a, b)
}
