use nalgebra::{DMatrix, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};

pub type Mat4 = Matrix4<C64>;
pub type Vec4 = Vector4<C64>;

/// Singular-value profile of a quadric at a given tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankProfile {
    pub rank: usize,
    pub singular_values: [f64; 4],
    pub tol_used: f64,
}

impl RankProfile {
    /// σ_{k+1}/σ₁, the relative gap that certifies rank ≤ k.
    pub fn residual(&self, k: usize) -> f64 {
        if k >= 4 {
            return 0.0;
        }
        self.singular_values[k] / self.singular_values[0]
    }
}

/// A quadric surface in P₃, stored as a canonical symmetric 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjQuadric {
    m: Mat4,
}

impl ProjQuadric {
    /// Symmetrizes and canonicalizes `m`.
    pub fn new(m: Mat4) -> Result<Self> {
        let sym = (m + m.transpose()) * C64::new(0.5, 0.0);
        let mut entries: Vec<C64> = sym.iter().copied().collect();
        if !linalg::canonicalize(&mut entries) {
            return Err(Error::ZeroMatrix);
        }
        Ok(Self {
            m: Mat4::from_column_slice(&entries),
        })
    }

    pub fn from_real(rows: [[f64; 4]; 4]) -> Result<Self> {
        Self::new(Mat4::from_fn(|i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn diag(d: [f64; 4]) -> Result<Self> {
        Self::new(Mat4::from_fn(|i, j| {
            if i == j {
                C64::new(d[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    /// The double-plane u².
    pub fn rank_one(u: &Vec4) -> Result<Self> {
        Self::new(u * u.transpose())
    }

    /// The two-plane uv, i.e. ½(uvᵗ + vuᵗ).
    pub fn rank_two(u: &Vec4, v: &Vec4) -> Result<Self> {
        Self::new((u * v.transpose() + v * u.transpose()) * C64::new(0.5, 0.0))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        to_dyn(&self.m)
    }

    /// The quadratic form xᵗQx.
    pub fn eval(&self, x: &Vec4) -> C64 {
        (x.transpose() * self.m * x)[(0, 0)]
    }

    /// Pull-back AᵗQA.
    pub fn conjugate(&self, a: &Mat4) -> Result<Self> {
        Self::new(a.transpose() * self.m * a)
    }

    pub fn as_slice(&self) -> Vec<C64> {
        self.m.iter().copied().collect()
    }

    /// Projective distance between canonical forms (closed-form minimum over
    /// a common phase).
    pub fn dist(&self, other: &ProjQuadric) -> f64 {
        linalg::proj_dist(&self.as_slice(), &other.as_slice())
    }

    /// Upper triangle in row-major order (m₁₁, m₁₂, …, m₄₄).
    pub fn upper(&self) -> [C64; 10] {
        let mut out = [ZERO; 10];
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                out[k] = self.m[(i, j)];
                k += 1;
            }
        }
        out
    }

    pub fn from_upper(u: &[C64; 10]) -> Result<Self> {
        let mut m = Mat4::zeros();
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                m[(i, j)] = u[k];
                m[(j, i)] = u[k];
                k += 1;
            }
        }
        Self::new(m)
    }

    pub fn numeric_rank(&self, tol: f64) -> RankProfile {
        numeric_rank(self, tol)
    }
}

pub fn to_dyn(m: &Mat4) -> DMatrix<C64> {
    DMatrix::from_column_slice(4, 4, m.as_slice())
}

pub fn numeric_rank(q: &ProjQuadric, tol: f64) -> RankProfile {
    profile_of(q.matrix(), tol)
}

pub(crate) fn profile_of(m: &Mat4, tol: f64) -> RankProfile {
    let s = linalg::singular_values(&to_dyn(m));
    let mut sv = [0.0; 4];
    sv.copy_from_slice(&s[..4]);
    RankProfile {
        rank: linalg::numeric_rank(&s, tol),
        singular_values: sv,
        tol_used: tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE};

    #[test]
    fn identity_has_rank_four() {
        let q = ProjQuadric::diag([1.0; 4]).unwrap();
        assert_eq!(q.numeric_rank(1e-8).rank, 4);
    }

    #[test]
    fn double_plane_rank_one() {
        let e4 = Vec4::new(ZERO, ZERO, ZERO, ONE);
        assert_eq!(
            ProjQuadric::rank_one(&e4).unwrap().numeric_rank(1e-8).rank,
            1
        );
    }

    #[test]
    fn tiny_entry_is_thresholded() {
        let q = ProjQuadric::diag([1.0, 1.0, 1e-12, 0.0]).unwrap();
        assert_eq!(q.numeric_rank(1e-8).rank, 2);
    }

    #[test]
    fn canonical_form_is_scale_free() {
        let a = ProjQuadric::diag([1.0, -2.0, 3.0, 0.5]).unwrap();
        let b = ProjQuadric::new(a.matrix() * C64::new(-0.3, 4.0)).unwrap();
        assert!((a.matrix() - b.matrix()).norm() < 1e-15);
        assert!((a.matrix().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn upper_round_trip() {
        let q = ProjQuadric::from_real([
            [1.0, 2.0, 0.0, -1.0],
            [2.0, 0.5, 3.0, 0.0],
            [0.0, 3.0, -1.0, 0.25],
            [-1.0, 0.0, 0.25, 2.0],
        ])
        .unwrap();
        let back = ProjQuadric::from_upper(&q.upper()).unwrap();
        assert!(q.dist(&back) < 1e-15);
        assert_eq!(q.upper()[1], q.matrix()[(0, 1)]);
        assert_eq!(q.upper()[4], q.matrix()[(1, 1)]);
        assert!((q.matrix()[(1, 2)] / q.matrix()[(0, 1)] - c(1.5)).norm() < 1e-15);
    }

    #[test]
    fn zero_matrix_rejected() {
        assert!(matches!(
            ProjQuadric::new(Mat4::zeros()),
            Err(Error::ZeroMatrix)
        ));
    }
}
