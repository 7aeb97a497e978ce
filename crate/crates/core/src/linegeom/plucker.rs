use nalgebra::{DMatrix, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};
use crate::symqr::Vec4;

/// Index pairs of the Plücker basis e₁₂, e₁₃, e₁₄, e₂₃, e₂₄, e₃₄.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// A line of P₃ as a canonical point of the Plücker quadric in P₅.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PluckerLine {
    pub x: [C64; 6],
}

impl PluckerLine {
    /// Canonicalizes raw coordinates. Fails on the zero vector.
    pub fn from_coords(x: [C64; 6]) -> Result<Self> {
        let mut x = x;
        if !linalg::canonicalize(&mut x) {
            return Err(Error::CoincidentPoints);
        }
        Ok(Self { x })
    }

    /// |2(x₁₂x₃₄ − x₁₃x₂₄ + x₁₄x₂₃)| on the unit-normalized vector.
    pub fn relation_residual(&self) -> f64 {
        let n = linalg::norm(&self.x);
        let x = self.x;
        (2.0 * (x[0] * x[5] - x[1] * x[4] + x[2] * x[3])).norm() / (n * n)
    }

    /// Two points spanning the line (orthonormal in the Hermitian sense).
    pub fn spanning_pair(&self) -> (Vec4, Vec4) {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            m[(i, j)] = self.x[k];
            m[(j, i)] = -self.x[k];
        }
        // column space of a bᵗ − b aᵗ is span{a, b}
        let u = linalg::column_space(&m, 2);
        (
            Vec4::from_iterator(u.column(0).iter().copied()),
            Vec4::from_iterator(u.column(1).iter().copied()),
        )
    }

    pub fn dist(&self, other: &PluckerLine) -> f64 {
        linalg::proj_dist(&self.x, &other.x)
    }

    /// Incidence with a point of P₃, relative to the point's norm.
    pub fn contains(&self, p: &Vec4) -> f64 {
        let (a, b) = self.spanning_pair();
        let basis = DMatrix::from_columns(&[
            nalgebra::DVector::from_column_slice(a.as_slice()),
            nalgebra::DVector::from_column_slice(b.as_slice()),
        ]);
        linalg::span_residual(&basis, p.as_slice())
    }
}

/// The raw (unnormalized) wedge a ∧ b.
pub fn wedge(a: &Vec4, b: &Vec4) -> [C64; 6] {
    let mut x = [ZERO; 6];
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        x[k] = a[i] * b[j] - a[j] * b[i];
    }
    x
}

/// The line through two distinct points.
pub fn plucker_from_points(a: &Vec4, b: &Vec4) -> Result<PluckerLine> {
    let x = wedge(a, b);
    if linalg::norm(&x) <= 1e-12 * a.norm() * b.norm() {
        return Err(Error::CoincidentPoints);
    }
    PluckerLine::from_coords(x)
}

/// A line in affine (foot point, direction) form with ⟨p,v⟩ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PVLine {
    pub p: Vector3<C64>,
    pub v: Vector3<C64>,
}

impl PVLine {
    /// Moves p to the point of the line orthogonal to v.
    pub fn new(p: Vector3<C64>, v: Vector3<C64>) -> Result<Self> {
        let vv = v.dot(&v);
        if v.norm() == 0.0 {
            return Err(Error::AtInfinity);
        }
        if vv.norm() <= 1e-12 * v.norm_squared() {
            return Err(Error::NullDirection);
        }
        let p = p - v * (p.dot(&v) / vv);
        Ok(Self { p, v })
    }

    pub fn real(p: [f64; 3], v: [f64; 3]) -> Result<Self> {
        Self::new(
            Vector3::from_iterator(p.iter().map(|&t| C64::new(t, 0.0))),
            Vector3::from_iterator(v.iter().map(|&t| C64::new(t, 0.0))),
        )
    }

    /// ⟨p,v⟩ relative to ‖p‖‖v‖.
    pub fn incidence_residual(&self) -> f64 {
        let s = self.p.norm().max(1.0) * self.v.norm();
        self.p.dot(&self.v).norm() / s
    }

    /// Largest imaginary part relative to the coordinates, after fixing the
    /// direction's phase.
    pub fn imaginary_size(&self) -> f64 {
        let mut v = self.v;
        let mut vs: Vec<C64> = v.iter().copied().collect();
        linalg::canonicalize(&mut vs);
        v = Vector3::from_column_slice(&vs);
        let pi = self.p.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let vi = v.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        pi / self.p.norm().max(1.0) + vi
    }

    /// Real parts, with the direction normalized to unit length.
    pub fn real_parts(&self) -> ([f64; 3], [f64; 3]) {
        let mut vs: Vec<C64> = self.v.iter().copied().collect();
        linalg::canonicalize(&mut vs);
        (
            [self.p[0].re, self.p[1].re, self.p[2].re],
            [vs[0].re, vs[1].re, vs[2].re],
        )
    }
}

/// (p,1) ∧ (v,0).
pub fn pv_to_plucker(l: &PVLine) -> Result<PluckerLine> {
    let a = Vec4::new(l.p[0], l.p[1], l.p[2], C64::new(1.0, 0.0));
    let b = Vec4::new(l.v[0], l.v[1], l.v[2], ZERO);
    plucker_from_points(&a, &b)
}

/// Inverse of [`pv_to_plucker`]: v = −(x₁₄, x₂₄, x₃₄), moment
/// m = (x₂₃, −x₁₃, x₁₂), p = v × m / ⟨v,v⟩.
pub fn plucker_to_pv(l: &PluckerLine) -> Result<PVLine> {
    let x = l.x;
    let v = -Vector3::new(x[2], x[4], x[5]);
    let m = Vector3::new(x[3], -x[1], x[0]);
    if v.norm() <= 1e-12 * linalg::norm(&x) {
        return Err(Error::AtInfinity);
    }
    let vv = v.dot(&v);
    if vv.norm() <= 1e-12 * v.norm_squared() {
        return Err(Error::NullDirection);
    }
    let p = v.cross(&m) / vv;
    let scale = v.norm();
    Ok(PVLine {
        p,
        v: v / C64::new(scale, 0.0),
    })
}

/// The line ℓ^⊥ of hyperplanes containing ℓ, from the bilinear nullspace of
/// a spanning pair.
pub fn plucker_orthogonal(l: &PluckerLine) -> PluckerLine {
    let (a, b) = l.spanning_pair();
    let m = DMatrix::from_row_slice(2, 4, &[a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]]);
    let k = linalg::null_vectors(&m, 2);
    let c = Vec4::from_iterator(k.column(0).iter().copied());
    let d = Vec4::from_iterator(k.column(1).iter().copied());
    PluckerLine::from_coords(wedge(&c, &d)).expect("orthonormal kernel pair")
}
