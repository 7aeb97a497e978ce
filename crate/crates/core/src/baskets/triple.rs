use nalgebra::{DMatrix, Matrix3};

use super::conic::{self, ConicFrame, Coords3};
use super::pair::{is_basket_pair, BasketWitness};
use super::space;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::symqr::{
    classify_singular_pencil, cross_ratio_value, to_dyn, Pencil, ProjPoint1, ProjQuadric,
    SingularPencilClass, Vec4,
};

/// The double-planes whose span contains a fixed-vertex pencil, with the
/// rank-two members: `p[k]` lies on the edge [d_i, d_j] opposite `d[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trio {
    pub d: [ProjQuadric; 3],
    pub p: [ProjPoint1; 3],
    pub vertex: Vec4,
}

/// Simultaneous diagonalization of the pencil restricted to a complement of
/// its vertex. The kernels n_k of the three rank-two members form the
/// eigenbasis; the double-planes are the squares of the dual basis.
pub fn trio_of_double_planes(p: &Pencil, tol: &Tolerances) -> Result<Trio> {
    let (vertex, points) = match classify_singular_pencil(p, tol, 0) {
        Ok(SingularPencilClass::FixedVertex {
            vertex,
            rank_two_points,
        }) => (vertex, rank_two_points),
        Ok(_) | Err(Error::NotSingularPencil) => return Err(Error::NotFixedVertex),
        Err(e) => return Err(e),
    };
    if points.len() != 3 || points.iter().any(|x| x.1 != 1) {
        return Err(Error::ClusteredRoots);
    }
    let row = DMatrix::from_row_slice(1, 4, vertex.adjoint().as_slice());
    let w = linalg::null_vectors(&row, 3);
    let mut kernels = Matrix3::<C64>::zeros();
    for (k, (pt, _)) in points.iter().enumerate() {
        let r = w.transpose() * to_dyn(&p.member_at(pt)) * &w;
        let n = linalg::null_vectors(&r, 1);
        for i in 0..3 {
            kernels[(i, k)] = n[i];
        }
    }
    let inv = kernels.try_inverse().ok_or(Error::ClusteredRoots)?;
    let mut d = Vec::with_capacity(3);
    for k in 0..3 {
        // the linear form x ↦ r_k · (Wᴴx)
        let form = w.conjugate() * inv.row(k).transpose();
        d.push(ProjQuadric::rank_one(&Vec4::from_column_slice(
            form.as_slice(),
        ))?);
    }
    Ok(Trio {
        d: [d[0], d[1], d[2]],
        p: [points[0].0, points[1].0, points[2].0],
        vertex,
    })
}

/// |(p₁,p₂;p₃,q₁) + (p₂,p₃;p₁,q₂) + (p₃,p₁;p₂,q₃) − 3/2|.
pub fn check_c1(p: &[ProjPoint1; 3], q: &[ProjPoint1; 3]) -> Result<f64> {
    let s = cross_ratio_value(&p[0], &p[1], &p[2], &q[0])?
        + cross_ratio_value(&p[1], &p[2], &p[0], &q[1])?
        + cross_ratio_value(&p[2], &p[0], &p[1], &q[2])?;
    Ok((s - C64::new(1.5, 0.0)).norm())
}

/// |(p₁,q₁;p₂,p₃)·(p₂,q₂;p₃,p₁)·(p₃,q₃;p₁,p₂) + 1|, where qᵢ is the
/// projection of dᵢ from b onto the line and pᵢ its meet with [dⱼ,dₖ].
pub fn perspective_relation(p: &[ProjPoint1; 3], q: &[ProjPoint1; 3]) -> Result<f64> {
    let mut prod = C64::new(1.0, 0.0);
    for i in 0..3 {
        prod *= cross_ratio_value(&p[i], &q[i], &p[(i + 1) % 3], &p[(i + 2) % 3])?;
    }
    Ok((prod + C64::new(1.0, 0.0)).norm())
}

/// The perspective point of the triangles (qᵢ) and (dᵢ): the common point
/// of the three lines [qᵢ, dᵢ].
pub fn desargues_basket(
    q: &[ProjQuadric; 3],
    d: &[ProjQuadric; 3],
    tol: &Tolerances,
) -> Result<BasketWitness> {
    let gate = 1e3 * tol.rank;
    let (b, _) = match space::meet_lines((&q[0], &d[0]), (&q[1], &d[1]), gate) {
        Ok(x) => x,
        Err(Error::NoIntersection(r)) => return Err(Error::NotInPerspective(r)),
        Err(e) => return Err(e),
    };
    let res = space::span_residual(&[&q[2], &d[2]], &b);
    if res > gate {
        return Err(Error::NotInPerspective(res));
    }
    let mut witnesses = Vec::with_capacity(3);
    for qi in q {
        match is_basket_pair(&b, qi, tol)? {
            Some(w) => witnesses.push(w),
            None => return Err(Error::NotInPerspective(res)),
        }
    }
    Ok(BasketWitness {
        basket: b,
        witnesses,
    })
}

/// A triangle of squares on the Veronese conic of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct InscribedTriangle {
    pub params: [ProjPoint1; 3],
    pub d: [ProjQuadric; 3],
    /// Largest collinearity residual of a mark with its edge.
    pub residual: f64,
}

/// Triangles d₁d₂d₃ on the conic {(αu+βv)²} with p₁₂ ∈ [d₁,d₂],
/// p₂₃ ∈ [d₂,d₃], p₃₁ ∈ [d₃,d₁]. Each mark induces the chord involution of
/// the conic; d₁ is a fixed point of their composite.
pub fn inscribed_triangles(
    frame: &ConicFrame,
    marks: &[ProjQuadric; 3],
    tol: &Tolerances,
) -> Result<Vec<InscribedTriangle>> {
    let gate = 1e3 * tol.rank;
    let x: Vec<Coords3> = marks
        .iter()
        .map(|m| frame.coords(m, gate))
        .collect::<Result<_>>()?;
    inscribed_in_coords(&[x[0], x[1], x[2]], tol)?
        .into_iter()
        .map(|(params, residual)| {
            Ok(InscribedTriangle {
                params,
                d: [
                    frame.square(&params[0])?,
                    frame.square(&params[1])?,
                    frame.square(&params[2])?,
                ],
                residual,
            })
        })
        .collect()
}

/// Coordinate version of [`inscribed_triangles`] on the standard conic.
pub fn inscribed_in_coords(
    marks: &[Coords3; 3],
    tol: &Tolerances,
) -> Result<Vec<([ProjPoint1; 3], f64)>> {
    for m in marks {
        if conic::conic_eval(m).norm() < 1e-10 * m.norm_squared() {
            return Err(Error::NoSolution);
        }
    }
    let inv: Vec<_> = marks.iter().map(conic::chord_involution).collect();
    let composite = inv[2] * inv[1] * inv[0];
    let mut out = Vec::new();
    for t1 in conic::fixed_points(&composite, tol.cluster)? {
        let t2 = conic::apply(&inv[0], &t1).ok_or(Error::NoSolution)?;
        let t3 = conic::apply(&inv[1], &t2).ok_or(Error::NoSolution)?;
        let ts = [t1, t2, t3];
        if t1.dist(&t2) < tol.cluster || t2.dist(&t3) < tol.cluster || t3.dist(&t1) < tol.cluster {
            continue;
        }
        let v: Vec<Coords3> = ts.iter().map(conic::veronese).collect();
        let residual = (0..3)
            .map(|k| conic::collinearity(&marks[k], &v[k], &v[(k + 1) % 3]))
            .fold(0.0, f64::max);
        out.push((ts, residual));
    }
    if out.is_empty() {
        return Err(Error::NoSolution);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE, ZERO};
    use crate::symqr::Mat4;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(d: [f64; 4]) -> ProjQuadric {
        ProjQuadric::diag(d).unwrap()
    }

    fn pt(x: f64) -> ProjPoint1 {
        ProjPoint1::affine(c(x))
    }

    #[test]
    fn diagonal_trio() {
        let p = Pencil::new(diag([1.0, 1.0, 0.0, 0.0]), diag([0.0, 1.0, 1.0, 0.0])).unwrap();
        let trio = trio_of_double_planes(&p, &Tolerances::default()).unwrap();
        for i in 0..3 {
            let mut e = [0.0; 4];
            e[i] = 1.0;
            assert!(trio.d.iter().any(|d| d.dist(&diag(e)) < 1e-10));
        }
    }

    #[test]
    fn trio_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Mat4::from_column_slice(&linalg::random_cvec(&mut rng, 16));
        let q1 = diag([1.0, 1.0, 0.0, 0.0]).conjugate(&a).unwrap();
        let q2 = diag([0.0, 1.0, 1.0, 0.0]).conjugate(&a).unwrap();
        let trio =
            trio_of_double_planes(&Pencil::new(q1, q2).unwrap(), &Tolerances::default()).unwrap();
        for i in 0..3 {
            let mut e = [0.0; 4];
            e[i] = 1.0;
            let target = diag(e).conjugate(&a).unwrap();
            assert!(trio.d.iter().any(|d| d.dist(&target) < 1e-8));
        }
    }

    #[test]
    fn trio_rejects_double_root() {
        // restricted determinant λμ², double root at the double-plane x₁²
        let p = Pencil::new(diag([1.0, 0.0, 0.0, 0.0]), diag([0.0, 1.0, 1.0, 0.0])).unwrap();
        assert!(matches!(
            trio_of_double_planes(&p, &Tolerances::default()),
            Err(Error::ClusteredRoots)
        ));
    }

    #[test]
    fn trio_needs_fixed_vertex() {
        let p = Pencil::new(diag([1.0; 4]), diag([1.0, 2.0, 3.0, 4.0])).unwrap();
        assert!(matches!(
            trio_of_double_planes(&p, &Tolerances::default()),
            Err(Error::NotFixedVertex)
        ));
    }

    #[test]
    fn c1_fixture() {
        let p = [pt(0.0), ProjPoint1::infinity(), pt(-1.0)];
        let q = [pt(-2.0), pt(-0.5), pt(1.0)];
        assert!(check_c1(&p, &q).unwrap() < 1e-14);
        let r1 = check_c1(&p, &[pt(-2.0 + 1e-4), pt(-0.5), pt(1.0)]).unwrap();
        let r2 = check_c1(&p, &[pt(-2.0 + 2e-4), pt(-0.5), pt(1.0)]).unwrap();
        assert!(r1 > 1e-6 && (r2 / r1 - 2.0).abs() < 1e-2);
        assert!(check_c1(&[p[1], p[2], p[0]], &q).unwrap() > 1e-3);
        assert!(perspective_relation(&p, &q).unwrap() < 1e-14);
    }

    #[test]
    fn desargues_recovers_basket() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let tol = Tolerances::default();
        for _ in 0..10 {
            let b = ProjQuadric::new(Mat4::from_column_slice(&linalg::random_cvec(&mut rng, 16)))
                .unwrap();
            let mut q = Vec::new();
            let mut d = Vec::new();
            for _ in 0..3 {
                let u = Vec4::from_column_slice(&linalg::random_cvec(&mut rng, 4));
                let di = ProjQuadric::rank_one(&u).unwrap();
                let t = linalg::random_cvec(&mut rng, 1)[0];
                q.push(ProjQuadric::new(b.matrix() + di.matrix() * t).unwrap());
                d.push(di);
            }
            let w = desargues_basket(&[q[0], q[1], q[2]], &[d[0], d[1], d[2]], &tol).unwrap();
            assert!(w.basket.dist(&b) < 1e-9);
            assert_eq!(w.witnesses.len(), 3);
        }
    }

    #[test]
    fn desargues_degenerate_triangle() {
        let q = [
            diag([1.0, 2.0, 3.0, 4.0]),
            diag([1.0, -1.0, 2.0, 1.0]),
            diag([3.0, 1.0, 1.0, -1.0]),
        ];
        assert!(matches!(
            desargues_basket(&q, &q, &Tolerances::default()),
            Err(Error::NotInPerspective(_))
        ));
    }

    fn frame() -> ConicFrame {
        let u = Vec4::new(ONE, ZERO, c(1.0), ZERO);
        let v = Vec4::new(ZERO, ONE, ZERO, c(-1.0));
        ConicFrame::new(u, v)
    }

    #[test]
    fn marks_from_known_triangle() {
        let f = frame();
        let tol = Tolerances::default();
        let ts = [pt(0.4), pt(-1.3), pt(2.2)];
        let v: Vec<Coords3> = ts.iter().map(conic::veronese).collect();
        let marks_c = [
            v[0] * c(0.7) + v[1],
            v[1] * c(-0.4) + v[2],
            v[2] * c(1.9) + v[0],
        ];
        let marks = [
            f.quadric(&marks_c[0]).unwrap(),
            f.quadric(&marks_c[1]).unwrap(),
            f.quadric(&marks_c[2]).unwrap(),
        ];
        let tris = inscribed_triangles(&f, &marks, &tol).unwrap();
        assert_eq!(tris.len(), 2);
        assert!(tris.iter().all(|t| t.residual < 1e-9));
        assert!(tris
            .iter()
            .any(|t| (0..3).all(|k| t.params[k].dist(&ts[k]) < 1e-9)));
    }

    #[test]
    fn tangent_line_has_one_triangle() {
        let tol = Tolerances::default();
        let line = conic::PlaneLine::tangent_at(&pt(0.6));
        let marks = [
            line.point(&pt(0.5)),
            line.point(&pt(-1.5)),
            line.point(&pt(3.0)),
        ];
        let tris = inscribed_in_coords(&marks, &tol).unwrap();
        assert_eq!(tris.len(), 1);
        assert!(tris[0].1 < 1e-9);
    }

    #[test]
    fn mark_on_conic_has_no_triangle() {
        let v = |x: f64| conic::veronese(&pt(x));
        let marks = [v(0.5), v(1.0) + v(2.0), v(-1.0) + v(3.0)];
        assert!(matches!(
            inscribed_in_coords(&marks, &Tolerances::default()),
            Err(Error::NoSolution)
        ));
    }
}
