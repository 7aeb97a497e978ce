use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use super::geometry::rms_spread;
use super::sphere::{sphere_to_quadric, Sphere, SphereCoords, T_POINT};
use crate::error::{Error, Result};

/// Residual threshold for the reported verdicts.
pub const CONDITION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasketConditions {
    /// σ of the stacked coordinates with T appended, relative to the largest:
    /// zero when T lies in the span of the spheres.
    pub span_residual: f64,
    /// Relative σ₂ of the center differences: zero for collinear centers.
    pub collinear_residual: f64,
    /// |α₀(1/α₁ + 1/α₂) − β₀(1/β₁ + 1/β₂)| for quadruples, relative.
    pub conic_residual: Option<f64>,
    pub holds: bool,
}

fn coords(s: &Sphere) -> Result<[f64; 5]> {
    Ok(sphere_to_quadric(s)?.0.a)
}

fn relative_tail(m: &DMatrix<f64>, keep: usize) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let mut s: Vec<f64> = sv.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if s[0] == 0.0 {
        return 0.0;
    }
    s.get(keep).copied().unwrap_or(0.0) / s[0]
}

fn collinearity(c: &[Vector3<f64>]) -> f64 {
    let scale = rms_spread(c);
    let rows: Vec<_> = c[1..].iter().map(|x| (x - c[0]).transpose()).collect();
    let m = DMatrix::from_rows(
        &rows
            .iter()
            .map(|r| nalgebra::RowDVector::from_row_slice(r.as_slice()))
            .collect::<Vec<_>>(),
    );
    let sv = m.svd(false, false).singular_values;
    let mut s: Vec<f64> = sv.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s.get(1).copied().unwrap_or(0.0) / scale
}

/// Coordinates of `x` in the frame (T, q₁, q₂), with a₀ = 1 normalization
/// of the spheres.
fn frame_coords(
    t: &[f64; 5],
    q1: &[f64; 5],
    q2: &[f64; 5],
    x: &[f64; 5],
) -> Result<(Vector3<f64>, f64)> {
    let m = DMatrix::from_columns(&[
        DVector::from_row_slice(t),
        DVector::from_row_slice(q1),
        DVector::from_row_slice(q2),
    ]);
    let sv = m.clone().svd(false, false).singular_values;
    if sv.min() <= 1e-10 * sv.max() {
        return Err(Error::FrameDegenerate);
    }
    let svd = m.clone().svd(true, true);
    let y = DVector::from_row_slice(x);
    let sol = svd.solve(&y, 0.0).map_err(|_| Error::FrameDegenerate)?;
    let res = (m * &sol - &y).norm() / y.norm();
    Ok((Vector3::new(sol[0], sol[1], sol[2]), res))
}

fn remark_value(a: &Vector3<f64>) -> f64 {
    a[0] * (1.0 / a[1] + 1.0 / a[2])
}

/// Necessary conditions for a common basket of three or four spheres: the
/// span contains T = (0:0:0:0:1) (equivalently the centers are collinear),
/// and for four spheres the conic condition through T in the frame (T,q₁,q₂).
pub fn basket_conditions_spheres(spheres: &[Sphere]) -> Result<BasketConditions> {
    if !(3..=4).contains(&spheres.len()) {
        return Err(Error::InvalidInput("expected three or four spheres".into()));
    }
    let a: Vec<[f64; 5]> = spheres.iter().map(coords).collect::<Result<_>>()?;
    let mut cols: Vec<DVector<f64>> = a.iter().map(|x| DVector::from_row_slice(x)).collect();
    cols.push(DVector::from_row_slice(&T_POINT.a));
    let stacked = DMatrix::from_columns(&cols);
    let span_residual = relative_tail(&stacked, 3);
    let centers: Vec<Vector3<f64>> = spheres.iter().map(|s| s.c()).collect();
    let collinear_residual = collinearity(&centers);
    let mut conic_residual = None;
    if spheres.len() == 4 {
        let mut last = Error::FrameDegenerate;
        for (i, j) in [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)] {
            let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
            let f = |k: usize| frame_coords(&T_POINT.a, &a[i], &a[j], &a[k]);
            match (f(rest[0]), f(rest[1])) {
                (Ok((x, _)), Ok((y, _))) => {
                    let (l, r) = (remark_value(&x), remark_value(&y));
                    conic_residual = Some((l - r).abs() / l.abs().max(r.abs()).max(1.0));
                    break;
                }
                (Err(e), _) | (_, Err(e)) => last = e,
            }
        }
        if conic_residual.is_none() {
            return Err(last);
        }
    }
    let holds = span_residual < CONDITION_TOL
        && collinear_residual < CONDITION_TOL
        && conic_residual.is_none_or(|r| r < CONDITION_TOL);
    Ok(BasketConditions {
        span_residual,
        collinear_residual,
        conic_residual,
        holds,
    })
}

/// Whether the coordinates are those of the double plane at infinity.
pub fn is_t_point(a: &SphereCoords) -> bool {
    let n = a.a.iter().map(|x| x * x).sum::<f64>().sqrt();
    n > 0.0 && a.a[..4].iter().all(|x| x.abs() <= 1e-14 * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn on_axis(x: &[f64], r: &[f64]) -> Vec<Sphere> {
        x.iter()
            .zip(r)
            .map(|(&x, &r)| Sphere::new([x, 0.0, 0.0], r).unwrap())
            .collect()
    }

    #[test]
    fn cone_triple() {
        let x = [1.0, 2.0, 3.0];
        let rep = basket_conditions_spheres(&on_axis(&x, &x.map(|t| t / 2f64.sqrt()))).unwrap();
        assert!(rep.holds && rep.span_residual < 1e-9 && rep.collinear_residual < 1e-9);
    }

    #[test]
    fn hyperboloid_quadruple() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let rep = basket_conditions_spheres(&on_axis(&x, &x.map(|t| (1.0 + t * t / 2.0).sqrt())))
            .unwrap();
        assert!(rep.conic_residual.unwrap() < 1e-9, "{rep:?}");
        assert!(rep.holds);
    }

    #[test]
    fn collinear_without_basket_fails_conic() {
        let rep = basket_conditions_spheres(&on_axis(&[0.0, 1.0, 2.0, 3.0], &[1.0, 0.5, 2.0, 0.7]))
            .unwrap();
        assert!(rep.span_residual < 1e-9);
        assert!(rep.conic_residual.unwrap() > 1e-3);
        assert!(!rep.holds);
    }

    #[test]
    fn generic_spheres_fail() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s: Vec<Sphere> = (0..4)
            .map(|_| {
                Sphere::new(
                    [
                        rng.random_range(-2.0..2.0),
                        rng.random_range(-2.0..2.0),
                        rng.random_range(-2.0..2.0),
                    ],
                    rng.random_range(0.3..2.0),
                )
                .unwrap()
            })
            .collect();
        let rep = basket_conditions_spheres(&s).unwrap();
        assert!(rep.span_residual > 1e-3 && rep.collinear_residual > 1e-3);
        assert!(!rep.holds);
    }

    #[test]
    fn t_point() {
        assert!(is_t_point(&T_POINT));
        assert!(!is_t_point(&SphereCoords {
            a: [1.0, 0.0, 0.0, 0.0, -1.0]
        }));
    }
}
