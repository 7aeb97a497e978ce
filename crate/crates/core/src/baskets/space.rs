use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::symqr::ProjQuadric;

/// A quadric as a vector of P₉.
pub fn vec10(q: &ProjQuadric) -> DVector<C64> {
    DVector::from_column_slice(&q.upper())
}

pub fn quadric10(v: &DVector<C64>) -> Result<ProjQuadric> {
    let mut u = [C64::new(0.0, 0.0); 10];
    u.copy_from_slice(v.as_slice());
    ProjQuadric::from_upper(&u)
}

/// Columns are the P₉ vectors of `qs`.
pub fn stack(qs: &[&ProjQuadric]) -> DMatrix<C64> {
    let cols: Vec<DVector<C64>> = qs.iter().map(|q| vec10(q)).collect();
    DMatrix::from_columns(&cols)
}

/// Intersection point of the lines [a₁,a₂] and [b₁,b₂] of P₉: the null
/// vector (α,β,γ,δ) of [a₁ a₂ b₁ b₂] gives αa₁ + βa₂. `gate` bounds σ₄/σ₁;
/// the lines must also be distinct (σ₃/σ₁ above the gate).
pub fn meet_lines(
    a: (&ProjQuadric, &ProjQuadric),
    b: (&ProjQuadric, &ProjQuadric),
    gate: f64,
) -> Result<(ProjQuadric, f64)> {
    let m = stack(&[a.0, a.1, b.0, b.1]);
    let (s, v) = linalg::right_svd(&m);
    let res = s[3] / s[0];
    if res > gate || s[2] / s[0] <= gate {
        return Err(Error::NoIntersection(res));
    }
    let k = v.column(3);
    let p = vec10(a.0) * k[0] + vec10(a.1) * k[1];
    Ok((quadric10(&p)?, res))
}

/// Relative distance of `q` from the span of `basis`.
pub fn span_residual(basis: &[&ProjQuadric], q: &ProjQuadric) -> f64 {
    linalg::span_residual(&stack(basis), &q.upper())
}

/// Orthonormal basis of the intersection of two spans, from the nullspace
/// of [A | −B]; `dim` is the expected dimension.
pub fn meet_spans(
    a: &[&ProjQuadric],
    b: &[&ProjQuadric],
    dim: usize,
    gate: f64,
) -> Result<Vec<ProjQuadric>> {
    let ma = stack(a);
    let mb = stack(b);
    let n = a.len() + b.len();
    let mut m = DMatrix::<C64>::zeros(10, n);
    m.columns_mut(0, a.len()).copy_from(&ma);
    m.columns_mut(a.len(), b.len()).copy_from(&(-mb));
    let (s, v) = linalg::right_svd(&m);
    if s[n - dim] / s[0] > gate || (n > dim && s[n - dim - 1] / s[0] <= gate) {
        return Err(Error::NoIntersection(s[n - dim] / s[0]));
    }
    (0..dim)
        .map(|c| {
            let k = v.column(n - dim + c);
            let x = &ma * k.rows(0, a.len());
            quadric10(&x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coplanar_lines_meet() {
        let d = |a: [f64; 4]| ProjQuadric::diag(a).unwrap();
        let (p, res) = meet_lines(
            (&d([1.0, 0.0, 0.0, 0.0]), &d([0.0, 1.0, 1.0, 0.0])),
            (&d([0.0, 1.0, 0.0, 0.0]), &d([1.0, 0.0, 1.0, 0.0])),
            1e-8,
        )
        .unwrap();
        assert!(res < 1e-15);
        assert!(p.dist(&d([1.0, 1.0, 1.0, 0.0])) < 1e-14);
    }

    #[test]
    fn skew_lines_rejected() {
        let d = |a: [f64; 4]| ProjQuadric::diag(a).unwrap();
        let r = meet_lines(
            (&d([1.0, 0.0, 0.0, 0.0]), &d([0.0, 1.0, 0.0, 0.0])),
            (&d([0.0, 0.0, 1.0, 0.0]), &d([0.0, 0.0, 0.0, 1.0])),
            1e-8,
        );
        assert!(matches!(r, Err(Error::NoIntersection(_))));
    }
}
