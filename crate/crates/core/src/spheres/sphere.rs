use nalgebra::{Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::symqr::{Mat4, ProjQuadric};

/// A real sphere Σ(xᵢ − cᵢ)² = r².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sphere {
    pub center: [f64; 3],
    pub radius: f64,
}

impl Sphere {
    pub fn new(center: [f64; 3], radius: f64) -> Result<Self> {
        let s = Self { center, radius };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        if self.center.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(
                "center has a non-finite coordinate".into(),
            ));
        }
        Ok(())
    }

    pub fn c(&self) -> Vector3<f64> {
        Vector3::from(self.center)
    }

    /// Euclidean distance from the center to the line through `p` with
    /// direction `v`.
    pub fn distance_to_line(&self, p: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        let w = self.c() - p;
        (w - v * (w.dot(v) / v.norm_squared())).norm()
    }
}

/// Projective coordinates (a₀:…:a₄) of a quadric through the imaginary conic
/// at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereCoords {
    pub a: [f64; 5],
}

/// The rank-one point (0:0:0:0:1), the double plane at infinity.
pub const T_POINT: SphereCoords = SphereCoords {
    a: [0.0, 0.0, 0.0, 0.0, 1.0],
};

impl SphereCoords {
    pub fn real_matrix(&self) -> Matrix4<f64> {
        let [a0, a1, a2, a3, a4] = self.a;
        Matrix4::new(
            a0, 0.0, 0.0, a1, //
            0.0, a0, 0.0, a2, //
            0.0, 0.0, a0, a3, //
            a1, a2, a3, a4,
        )
    }

    pub fn matrix(&self) -> Mat4 {
        self.real_matrix().map(|x| C64::new(x, 0.0))
    }

    pub fn quadric(&self) -> Result<ProjQuadric> {
        ProjQuadric::new(self.matrix())
    }

    /// −a₀²(a₁² + a₂² + a₃² − a₀a₄).
    pub fn det_formula(&self) -> f64 {
        let [a0, a1, a2, a3, a4] = self.a;
        -a0 * a0 * (a1 * a1 + a2 * a2 + a3 * a3 - a0 * a4)
    }

    /// |det Q − formula| relative to ‖a‖⁴.
    pub fn det_identity_residual(&self) -> f64 {
        let scale = self.a.iter().map(|x| x * x).sum::<f64>().powi(2);
        if scale == 0.0 {
            return 0.0;
        }
        (self.real_matrix().determinant() - self.det_formula()).abs() / scale
    }

    pub fn center(&self) -> Option<[f64; 3]> {
        let a0 = self.a[0];
        if a0 == 0.0 {
            return None;
        }
        Some([-self.a[1] / a0, -self.a[2] / a0, -self.a[3] / a0])
    }

    pub fn radius_squared(&self) -> Option<f64> {
        let [a0, a1, a2, a3, a4] = self.a;
        if a0 == 0.0 {
            return None;
        }
        Some((a1 * a1 + a2 * a2 + a3 * a3 - a0 * a4) / (a0 * a0))
    }
}

/// a = (1, −c, ⟨c,c⟩ − r²) and the corresponding quadric.
pub fn sphere_to_quadric(s: &Sphere) -> Result<(SphereCoords, ProjQuadric)> {
    s.validate()?;
    let c = s.c();
    let coords = SphereCoords {
        a: [
            1.0,
            -c[0],
            -c[1],
            -c[2],
            c.norm_squared() - s.radius * s.radius,
        ],
    };
    Ok((coords, coords.quadric()?))
}
