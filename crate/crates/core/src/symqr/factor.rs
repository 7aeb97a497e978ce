use nalgebra::Matrix2;

use super::quadric::{Mat4, ProjQuadric, Vec4};
use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::poly::BinaryForm;

/// Fix the sign of a vector defined up to ±1: the first entry of largest
/// modulus gets a nonnegative real part (positive imaginary part on ties).
fn fix_sign(u: &mut Vec4) {
    let max = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(lead) = u.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)) {
        let flip = lead.re < 0.0 || (lead.re.abs() <= 1e-15 * max && lead.im < 0.0);
        if flip {
            *u = -*u;
        }
    }
}

/// The linear form u with q = uuᵗ (q in canonical scaling).
pub fn factor_rank_one(q: &ProjQuadric, tol: f64) -> Result<Vec4> {
    let profile = q.numeric_rank(tol);
    if profile.rank != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: profile.rank,
        });
    }
    let m = q.matrix();
    let col = (0..4)
        .max_by(|&a, &b| m.column(a).norm().partial_cmp(&m.column(b).norm()).unwrap())
        .unwrap_or(0);
    let w: Vec4 = m.column(col).into_owned() / C64::new(m.column(col).norm(), 0.0);
    // q = s² w wᵗ with ‖w‖ = 1, so s² = wᴴ q w̄
    let s2 = (w.adjoint() * m * w.conjugate())[(0, 0)];
    let mut u = w * s2.sqrt();
    fix_sign(&mut u);
    Ok(u)
}

/// A two-plane factorization q = ½(uvᵗ + vuᵗ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePair {
    /// Unit-norm, sign-fixed.
    pub u: Vec4,
    /// Carries the scale of q.
    pub v: Vec4,
}

impl PlanePair {
    pub fn matrix(&self) -> Mat4 {
        (self.u * self.v.transpose() + self.v * self.u.transpose()) * C64::new(0.5, 0.0)
    }
}

/// Factor a rank-two quadric by restricting it to its column space and
/// splitting the resulting binary quadratic.
pub fn factor_rank_two(q: &ProjQuadric, tol: f64) -> Result<PlanePair> {
    let profile = q.numeric_rank(tol);
    if profile.rank != 2 {
        return Err(Error::RankMismatch {
            expected: 2,
            found: profile.rank,
        });
    }
    let m = q.matrix();
    let w = linalg::column_space(&q.to_dmatrix(), 2);
    // q = W C Wᵗ with C = Wᴴ q W̄
    let c = w.adjoint() * super::quadric::to_dyn(m) * w.conjugate();
    let c = Matrix2::new(c[(0, 0)], c[(0, 1)], c[(1, 0)], c[(1, 1)]);
    let form = BinaryForm::new(vec![c[(0, 0)], c[(0, 1)] + c[(1, 0)], c[(1, 1)]]);
    let roots = form.roots(1e-9)?;
    let (r1, r2) = match roots.as_slice() {
        [a, b] => (a.point, b.point),
        [a] => (a.point, a.point),
        _ => return Err(Error::NoSolution),
    };
    // f(a,b) = k (μ₁a − λ₁b)(μ₂a − λ₂b)
    let l1 = [r1.mu, -r1.lambda];
    let l2 = [r2.mu, -r2.lambda];
    let lift = |l: [C64; 2]| -> Vec4 { Vec4::from_fn(|i, _| w[(i, 0)] * l[0] + w[(i, 1)] * l[1]) };
    let a = lift(l1);
    let b = lift(l2);
    let mut u = a / C64::new(a.norm(), 0.0);
    fix_sign(&mut u);
    let mut v = b / C64::new(b.norm(), 0.0);
    fix_sign(&mut v);
    // order the pair deterministically
    if key(&v) < key(&u) {
        std::mem::swap(&mut u, &mut v);
    }
    // scale: q = k ½(uvᵗ+vuᵗ), fitted in least squares
    let base = (u * v.transpose() + v * u.transpose()) * C64::new(0.5, 0.0);
    let k = linalg::hdot(base.as_slice(), m.as_slice()) / base.norm_squared();
    Ok(PlanePair { u, v: v * k })
}

fn key(u: &Vec4) -> Vec<i64> {
    u.iter()
        .flat_map(|z| [(z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64])
        .collect()
}
