use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};
use serde::{Deserialize, Serialize};

use super::sphere::{sphere_to_quadric, Sphere};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::linegeom::{pv_to_plucker, tangency_residual, PVLine};

pub type CVec3 = Vector3<C64>;

/// Solutions with a larger per-sphere tangency residual are rejected.
pub const ACCEPT: f64 = 1e-7;
/// Imaginary size below which a line is reported as real.
pub const REAL_GATE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub seed: u64,
    pub cluster: f64,
    pub accept: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            cluster: 1e-6,
            accept: ACCEPT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentSolution {
    pub line: PVLine,
    pub multiplicity: usize,
    pub is_real: bool,
    /// Tangency residual |⟨x, ν(qᵢ)x⟩| per sphere.
    pub residuals: [f64; 4],
}

impl TangentSolution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Largest |dist(cᵢ, ℓ) − rᵢ| of the real parts, relative to the
    /// configuration scale.
    pub fn distance_error(&self, spheres: &[Sphere; 4]) -> f64 {
        let (p, v) = self.line.real_parts();
        let (p, v) = (Vector3::from(p), Vector3::from(v));
        let scale = config_scale(spheres);
        spheres
            .iter()
            .map(|s| (s.distance_to_line(&p, &v) - s.radius).abs() / scale)
            .fold(0.0, f64::max)
    }
}

/// Solutions of the finite regimes with their bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentSet {
    pub tangents: Vec<TangentSolution>,
    /// Total multiplicity of the intersection of the two plane curves.
    pub bezout_total: usize,
    /// Part of that total at isotropic directions ⟨v,v⟩ = 0, which carry no
    /// affine line.
    pub null_direction: usize,
}

impl TangentSet {
    pub fn complex_count(&self) -> usize {
        self.tangents.iter().map(|t| t.multiplicity).sum()
    }

    pub fn real_count(&self) -> usize {
        self.tangents
            .iter()
            .filter(|t| t.is_real)
            .map(|t| t.multiplicity)
            .sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.tangents
            .iter()
            .map(|t| t.max_residual())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check(&self, expected: usize) -> Result<()> {
        let found = self.complex_count() + self.null_direction;
        if found != expected || self.bezout_total != expected {
            return Err(Error::DefectiveCount { expected, found });
        }
        Ok(())
    }
}

pub(crate) fn config_scale(spheres: &[Sphere; 4]) -> f64 {
    let c: Vec<Vector3<f64>> = spheres.iter().map(|s| s.c()).collect();
    let r = spheres.iter().map(|s| s.radius).fold(0.0, f64::max);
    super::geometry::rms_spread(&c).max(r)
}

/// World coordinates x = origin + scale·R·x'.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Frame {
    pub origin: Vector3<f64>,
    pub rot: Matrix3<f64>,
    pub scale: f64,
    pub centers: [Vector3<f64>; 4],
    pub radii: [f64; 4],
}

impl Frame {
    pub fn new(spheres: &[Sphere; 4], origin: Vector3<f64>, rot: Matrix3<f64>, scale: f64) -> Self {
        let centers = spheres.map(|s| rot.transpose() * (s.c() - origin) / scale);
        let radii = spheres.map(|s| s.radius / scale);
        Self {
            origin,
            rot,
            scale,
            centers,
            radii,
        }
    }

    pub fn to_world(&self, p: &CVec3, v: &CVec3) -> Result<PVLine> {
        let r = self.rot.map(|x| C64::new(x, 0.0));
        let o = self.origin.map(|x| C64::new(x, 0.0));
        PVLine::new(o + r * p * C64::new(self.scale, 0.0), r * v)
    }
}

fn complex(v: &Vector3<f64>) -> CVec3 {
    v.map(|x| C64::new(x, 0.0))
}

/// ⟨p,v⟩ and ⟨v,v⟩(‖p−cᵢ‖² − rᵢ²) − ⟨p−cᵢ,v⟩² for the four spheres.
pub(crate) fn equations(
    p: &CVec3,
    v: &CVec3,
    centers: &[Vector3<f64>; 4],
    radii: &[f64; 4],
) -> [C64; 5] {
    let n = v.dot(v);
    let mut out = [
        p.dot(v),
        C64::default(),
        C64::default(),
        C64::default(),
        C64::default(),
    ];
    for i in 0..4 {
        let w = p - complex(&centers[i]);
        let t = w.dot(v);
        out[i + 1] = n * (w.dot(&w) - C64::new(radii[i] * radii[i], 0.0)) - t * t;
    }
    out
}

fn system_size(p: &CVec3, v: &CVec3, centers: &[Vector3<f64>; 4], radii: &[f64; 4]) -> f64 {
    equations(p, v, centers, radii)
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max)
}

/// Damped Newton on the full system with the chart ⟨v̄₀, v⟩ = 1.
pub(crate) fn newton(
    p0: &CVec3,
    v0: &CVec3,
    centers: &[Vector3<f64>; 4],
    radii: &[f64; 4],
) -> (CVec3, CVec3) {
    let anchor = v0.map(|z| z.conj()) / C64::new(v0.norm_squared(), 0.0);
    let mut p = *p0;
    let mut v = *v0 / anchor.dot(v0);
    let mut size = system_size(&p, &v, centers, radii);
    for _ in 0..30 {
        if size < 1e-15 {
            break;
        }
        let f = equations(&p, &v, centers, radii);
        let mut jac = Matrix6::<C64>::zeros();
        let mut rhs = Vector6::<C64>::zeros();
        for k in 0..3 {
            jac[(0, k)] = v[k];
            jac[(0, 3 + k)] = p[k];
        }
        rhs[0] = f[0];
        let n = v.dot(&v);
        for i in 0..4 {
            let w = p - complex(&centers[i]);
            let t = w.dot(&v);
            let s = w.dot(&w) - C64::new(radii[i] * radii[i], 0.0);
            let two = C64::new(2.0, 0.0);
            for k in 0..3 {
                jac[(i + 1, k)] = two * (n * w[k] - t * v[k]);
                jac[(i + 1, 3 + k)] = two * (s * v[k] - t * w[k]);
            }
            rhs[i + 1] = f[i + 1];
        }
        for k in 0..3 {
            jac[(5, 3 + k)] = anchor[k];
        }
        rhs[5] = anchor.dot(&v) - C64::new(1.0, 0.0);
        let Some(step) = jac.lu().solve(&rhs) else {
            break;
        };
        let mut accepted = false;
        let mut lambda = 1.0;
        for _ in 0..6 {
            let h = C64::new(lambda, 0.0);
            let np = p - step.fixed_rows::<3>(0) * h;
            let nv = v - step.fixed_rows::<3>(3) * h;
            let ns = system_size(&np, &nv, centers, radii);
            if ns < size {
                p = np;
                v = nv;
                size = ns;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (p, v)
}

/// Refines (p, v) given in the frame, maps it to the world and validates it
/// against the spheres.
pub(crate) fn finish(
    frame: &Frame,
    spheres: &[Sphere; 4],
    p: &CVec3,
    v: &CVec3,
    multiplicity: usize,
) -> Result<TangentSolution> {
    let (p, v) = newton(p, v, &frame.centers, &frame.radii);
    let line = frame.to_world(&p, &v)?;
    validate(spheres, line, multiplicity)
}

pub(crate) fn validate(
    spheres: &[Sphere; 4],
    line: PVLine,
    multiplicity: usize,
) -> Result<TangentSolution> {
    let pl = pv_to_plucker(&line)?;
    let mut residuals = [0.0; 4];
    for (r, s) in residuals.iter_mut().zip(spheres) {
        *r = tangency_residual(&pl, &sphere_to_quadric(s)?.1);
    }
    let is_real = line.imaginary_size() < REAL_GATE;
    Ok(TangentSolution {
        line,
        multiplicity,
        is_real,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_polishes_a_perturbed_tangent() {
        // the line y = 1, z = 0 touches all four
        let centers = [
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(3.0, 0.0, 0.0),
            Vector3::new(1.0, 2.0, 0.0),
            Vector3::new(-1.0, 0.0, 1.0),
        ];
        let radii = [1.0, 1.0, 1.0, 2f64.sqrt()];
        let p = CVec3::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let v = CVec3::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        assert!(system_size(&p, &v, &centers, &radii) < 1e-14);
        let dp = CVec3::new(
            C64::new(1e-4, 0.0),
            C64::new(-2e-4, 0.0),
            C64::new(3e-4, 0.0),
        );
        let (p1, v1) = newton(&(p + dp), &(v + dp), &centers, &radii);
        assert!(system_size(&p1, &v1, &centers, &radii) < 1e-13);
    }
}
