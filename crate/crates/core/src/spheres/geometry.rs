use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::sphere::Sphere;
use crate::error::{Error, Result};

/// Below this singular-value ratio the centers are treated as degenerate.
pub const FLAT_RATIO: f64 = 1e-8;
/// Ratios inside [BAND_LOW, BAND_HIGH] raise a borderline warning.
pub const BAND_LOW: f64 = 1e-9;
pub const BAND_HIGH: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CenterGeometry {
    Generic,
    Coplanar { three_collinear: bool },
    Collinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub kind: CenterGeometry,
    /// σ₁, σ₂, σ₃ of the center differences over the RMS spread.
    pub ratios: [f64; 3],
    pub borderline: bool,
}

pub(crate) fn rms_spread(centers: &[Vector3<f64>]) -> f64 {
    let n = centers.len() as f64;
    let mean = centers.iter().fold(Vector3::zeros(), |a, c| a + c) / n;
    (centers
        .iter()
        .map(|c| (c - mean).norm_squared())
        .sum::<f64>()
        / n)
        .sqrt()
}

fn differences(c: &[Vector3<f64>; 4]) -> Matrix3<f64> {
    Matrix3::from_rows(&[
        (c[1] - c[0]).transpose(),
        (c[2] - c[0]).transpose(),
        (c[3] - c[0]).transpose(),
    ])
}

/// Index pairs of spheres with coinciding centers.
pub fn coincident_centers(spheres: &[Sphere; 4]) -> Vec<(usize, usize)> {
    let c: Vec<Vector3<f64>> = spheres.iter().map(|s| s.c()).collect();
    let scale = rms_spread(&c).max(spheres.iter().map(|s| s.radius).fold(0.0, f64::max));
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            if (c[i] - c[j]).norm() <= FLAT_RATIO * scale {
                out.push((i, j));
            }
        }
    }
    out
}

fn triple_collinear(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>, scale: f64) -> bool {
    (b - a).cross(&(c - a)).norm() <= FLAT_RATIO * scale * scale
}

pub fn center_geometry(spheres: &[Sphere; 4]) -> Result<GeometryReport> {
    for s in spheres {
        s.validate()?;
    }
    if !coincident_centers(spheres).is_empty() {
        return Err(Error::DuplicateCenters);
    }
    let c: [Vector3<f64>; 4] = [
        spheres[0].c(),
        spheres[1].c(),
        spheres[2].c(),
        spheres[3].c(),
    ];
    let scale = rms_spread(&c);
    let sv = differences(&c).singular_values();
    let mut s = [sv[0], sv[1], sv[2]];
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let ratios = [s[0] / scale, s[1] / scale, s[2] / scale];
    let in_band = |r: f64| (BAND_LOW..=BAND_HIGH).contains(&r);
    let kind = if ratios[1] <= FLAT_RATIO {
        CenterGeometry::Collinear
    } else if ratios[2] <= FLAT_RATIO {
        let mut three = false;
        for skip in 0..4 {
            let t: Vec<&Vector3<f64>> = (0..4).filter(|&k| k != skip).map(|k| &c[k]).collect();
            three |= triple_collinear(t[0], t[1], t[2], scale);
        }
        CenterGeometry::Coplanar {
            three_collinear: three,
        }
    } else {
        CenterGeometry::Generic
    };
    Ok(GeometryReport {
        kind,
        ratios,
        borderline: in_band(ratios[1]) || in_band(ratios[2]),
    })
}
