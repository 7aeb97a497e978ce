//! The plane P(Sym(2)) spanned by u², uv, v² for a pair of linear forms,
//! with the Veronese conic of squares (αu + βv)².

use nalgebra::{DMatrix, DVector, Matrix2, Vector3};

use super::space;
use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::symqr::{ProjPoint1, ProjQuadric, Vec4};

pub type Coords3 = Vector3<C64>;

/// Coordinates (α², 2αβ, β²) of the square (αu + βv)².
pub fn veronese(t: &ProjPoint1) -> Coords3 {
    let (a, b) = (t.lambda, t.mu);
    Coords3::new(a * a, a * b * C64::new(2.0, 0.0), b * b)
}

/// x₁² − 4x₀x₂, vanishing on the conic.
pub fn conic_eval(x: &Coords3) -> C64 {
    x[1] * x[1] - C64::new(4.0, 0.0) * x[0] * x[2]
}

/// The involution of the conic cut by lines through `p`: (α:β) is sent to
/// the second intersection of the chord through p and (αu+βv)².
pub fn chord_involution(p: &Coords3) -> Matrix2<C64> {
    let two = C64::new(2.0, 0.0);
    Matrix2::new(p[1], -two * p[0], two * p[2], -p[1])
}

pub fn apply(m: &Matrix2<C64>, t: &ProjPoint1) -> Option<ProjPoint1> {
    let x = m * nalgebra::Vector2::new(t.lambda, t.mu);
    ProjPoint1::new(x[0], x[1])
}

/// |det[p; a; b]| with every row normalized.
pub fn collinearity(p: &Coords3, a: &Coords3, b: &Coords3) -> f64 {
    let m = nalgebra::Matrix3::from_rows(&[p.transpose(), a.transpose(), b.transpose()]);
    m.determinant().norm() / (p.norm() * a.norm() * b.norm())
}

/// Fixed points of a Möbius map. One point when the map is parabolic
/// within `tol`; an error when it is the identity.
pub fn fixed_points(k: &Matrix2<C64>, tol: f64) -> Result<Vec<ProjPoint1>> {
    let tr = k.trace();
    let det = k.determinant();
    let scale = k.norm();
    let half = tr * C64::new(0.5, 0.0);
    let shifted = k - Matrix2::identity() * half;
    if shifted.norm() < 1e-10 * scale {
        return Err(Error::Indeterminate);
    }
    let disc = (tr * tr - det * C64::new(4.0, 0.0)).sqrt();
    let eigen = if disc.norm() < tol * scale {
        vec![half]
    } else {
        vec![half + disc * 0.5, half - disc * 0.5]
    };
    let mut out = Vec::new();
    for l in eigen {
        let c1 = nalgebra::Vector2::new(k[(0, 1)], l - k[(0, 0)]);
        let c2 = nalgebra::Vector2::new(l - k[(1, 1)], k[(1, 0)]);
        let v = if c1.norm() >= c2.norm() { c1 } else { c2 };
        if let Some(p) = ProjPoint1::new(v[0], v[1]) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Basis u², uv, v² of the plane of two-planes through the line {u = v = 0}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicFrame {
    pub u: Vec4,
    pub v: Vec4,
}

impl ConicFrame {
    pub fn new(u: Vec4, v: Vec4) -> Self {
        Self { u, v }
    }

    /// u², uv, v² as quadrics.
    pub fn members(&self) -> Result<[ProjQuadric; 3]> {
        Ok([
            ProjQuadric::rank_one(&self.u)?,
            ProjQuadric::rank_two(&self.u, &self.v)?,
            ProjQuadric::rank_one(&self.v)?,
        ])
    }

    fn raw_basis(&self) -> DMatrix<C64> {
        let half = C64::new(0.5, 0.0);
        let uu = self.u * self.u.transpose();
        let uv = (self.u * self.v.transpose() + self.v * self.u.transpose()) * half;
        let vv = self.v * self.v.transpose();
        let col = |m: nalgebra::Matrix4<C64>| -> DVector<C64> {
            let mut out = Vec::with_capacity(10);
            for i in 0..4 {
                for j in i..4 {
                    out.push(m[(i, j)]);
                }
            }
            DVector::from_vec(out)
        };
        DMatrix::from_columns(&[col(uu), col(uv), col(vv)])
    }

    /// Coordinates of a quadric of the plane; fails when it is outside.
    pub fn coords(&self, q: &ProjQuadric, tol: f64) -> Result<Coords3> {
        let (x, res) = linalg::lstsq(&self.raw_basis(), &space::vec10(q));
        if res > tol {
            return Err(Error::InvalidInput(format!(
                "quadric is not in the plane of the frame (residual {res:.3e})"
            )));
        }
        Ok(Coords3::new(x[0], x[1], x[2]))
    }

    pub fn quadric(&self, x: &Coords3) -> Result<ProjQuadric> {
        let v = self.raw_basis() * DVector::from_column_slice(x.as_slice());
        space::quadric10(&v)
    }

    /// The square (αu + βv)².
    pub fn square(&self, t: &ProjPoint1) -> Result<ProjQuadric> {
        ProjQuadric::rank_one(&(self.u * t.lambda + self.v * t.mu))
    }
}

/// Parametrization of a line of the plane by two points e, f.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneLine {
    pub e: Coords3,
    pub f: Coords3,
}

impl PlaneLine {
    pub fn point(&self, t: &ProjPoint1) -> Coords3 {
        self.e * t.lambda + self.f * t.mu
    }

    /// Parameter of the intersection with the line through a and b.
    pub fn meet(&self, a: &Coords3, b: &Coords3) -> Result<ProjPoint1> {
        let l = a.cross(b);
        ProjPoint1::new(l.dot(&self.f), -l.dot(&self.e)).ok_or(Error::CoincidentPoints)
    }

    /// Parameter of a point known to lie on the line.
    pub fn locate(&self, x: &Coords3) -> Result<ProjPoint1> {
        let basis = DMatrix::from_columns(&[
            DVector::from_column_slice(self.e.as_slice()),
            DVector::from_column_slice(self.f.as_slice()),
        ]);
        let (c, _) = linalg::lstsq(&basis, &DVector::from_column_slice(x.as_slice()));
        ProjPoint1::new(c[0], c[1]).ok_or(Error::CoincidentPoints)
    }

    /// Intersections with the conic, as a binary quadratic in the line
    /// parameter.
    pub fn conic_points(&self, tol_cluster: f64) -> Result<Vec<crate::symqr::FormRoot>> {
        let e = self.e;
        let f = self.f;
        let four = C64::new(4.0, 0.0);
        let mixed = C64::new(2.0, 0.0) * e[1] * f[1] - four * (e[0] * f[2] + e[2] * f[0]);
        crate::symqr::BinaryForm::new(vec![conic_eval(&e), mixed, conic_eval(&f)])
            .roots(tol_cluster)
    }

    /// The tangent line at the square with parameter t0, parametrized so
    /// that (1:0) is the point of contact.
    pub fn tangent_at(t0: &ProjPoint1) -> Self {
        let two = C64::new(2.0, 0.0);
        let (a, b) = (t0.lambda, t0.mu);
        // derivative of (α², 2αβ, β²) along (−β̄, ᾱ)
        let (da, db) = (-b.conj(), a.conj());
        Self {
            e: veronese(t0),
            f: Coords3::new(two * a * da, two * (da * b + a * db), two * b * db),
        }
    }
}
