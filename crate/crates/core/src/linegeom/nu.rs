use nalgebra::{Matrix3, Matrix6};

use super::plucker::{PluckerLine, PAIRS};
use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};
use crate::symqr::{Mat4, ProjQuadric};

pub type Mat6 = Matrix6<C64>;

/// ν(Q), the quadric of P₅ cutting the Grassmannian in the tangent lines
/// of Q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangencyQuadric {
    pub n: Mat6,
}

impl TangencyQuadric {
    pub fn eval(&self, x: &[C64; 6]) -> C64 {
        let mut acc = ZERO;
        for i in 0..6 {
            for j in 0..6 {
                acc += x[i] * self.n[(i, j)] * x[j];
            }
        }
        acc
    }
}

/// Second compound matrix: ν(Q)_{(ij),(kl)} = Q_ik Q_jl − Q_il Q_jk.
pub fn compound2(q: &Mat4) -> Mat6 {
    Mat6::from_fn(|r, s| {
        let (i, j) = PAIRS[r];
        let (k, l) = PAIRS[s];
        q[(i, k)] * q[(j, l)] - q[(i, l)] * q[(j, k)]
    })
}

pub fn nu(q: &ProjQuadric) -> TangencyQuadric {
    TangencyQuadric {
        n: compound2(q.matrix()),
    }
}

/// Tangency residual |⟨x, ν(q)x⟩| with x and ν(q) unit-normalized.
pub fn tangency_residual(line: &PluckerLine, q: &ProjQuadric) -> f64 {
    let t = nu(q);
    let nn = t.n.norm();
    let xn = linalg::norm(&line.x);
    if nn == 0.0 {
        return 0.0;
    }
    t.eval(&line.x).norm() / (nn * xn * xn)
}

pub fn is_tangent(line: &PluckerLine, q: &ProjQuadric, tol: f64) -> (bool, f64) {
    let r = tangency_residual(line, q);
    (r < tol, r)
}

/// The Grassmann–Plücker matrix: g(x) = xᵗGx.
pub fn grassmann_matrix() -> Mat6 {
    let mut g = Mat6::zeros();
    let one = C64::new(1.0, 0.0);
    g[(0, 5)] = one;
    g[(5, 0)] = one;
    g[(2, 3)] = one;
    g[(3, 2)] = one;
    g[(1, 4)] = -one;
    g[(4, 1)] = -one;
    g
}

fn det3(m: &Matrix3<C64>) -> C64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

/// Classical adjugate via 3×3 cofactors.
pub fn adjugate(q: &Mat4) -> Mat4 {
    let mut adj = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let minor = Matrix3::from_fn(|r, s| {
                let rr = if r < i { r } else { r + 1 };
                let ss = if s < j { s } else { s + 1 };
                q[(rr, ss)]
            });
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            adj[(j, i)] = det3(&minor) * sign;
        }
    }
    adj
}

/// The dual quadric, projectively Q⁻¹.
pub fn dual_quadric(q: &ProjQuadric, tol: f64) -> Result<ProjQuadric> {
    if q.numeric_rank(tol).rank < 4 {
        return Err(Error::Singular);
    }
    ProjQuadric::new(adjugate(q.matrix()))
}

/// Projective distance between ν(dual q) and G ν(q) G.
pub fn duality_identity_residual(q: &ProjQuadric, tol: f64) -> Result<f64> {
    let dual = dual_quadric(q, tol)?;
    let lhs = compound2(dual.matrix());
    let g = grassmann_matrix();
    let rhs = g * compound2(q.matrix()) * g;
    Ok(linalg::proj_dist(lhs.as_slice(), rhs.as_slice()))
}
