use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::pencil::{generic_rank, refine_affine, refine_to_corank, Pencil};
use super::quadric::{to_dyn, Vec4};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, C64, ONE, ZERO};
use crate::poly::{inverse_dft, BinaryForm, ProjPoint1};

/// Families of pencils all of whose members have rank at most two, told
/// apart by how many double-planes they contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankTwoFamily {
    /// Secant of the rank-one locus: two double-planes.
    Secant,
    /// Tangent to the rank-one locus: one double-plane.
    Tangent,
    /// Fixed plane times a moving plane: no double-plane.
    Moving,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SingularPencilClass {
    /// All members are cones with the same vertex. The rank-two members are
    /// listed with multiplicities (three in total).
    FixedVertex {
        vertex: Vec4,
        rank_two_points: Vec<(ProjPoint1, usize)>,
    },
    /// Cone vertices move along the line spanned by `axis`.
    MovingVertex { axis: [Vec4; 2] },
    InRankTwo {
        family: RankTwoFamily,
        double_planes: Vec<ProjPoint1>,
    },
}

/// Classify a pencil lying entirely in the determinantal hypersurface.
pub fn classify_singular_pencil(
    p: &Pencil,
    tol: &Tolerances,
    seed: u64,
) -> Result<SingularPencilClass> {
    if !p.inside_determinantal() {
        return Err(Error::NotSingularPencil);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = generic_rank(p, tol.rank, &mut rng);
    if rank >= 3 {
        let za = linalg::random_cvec(&mut rng, 2);
        let zb = linalg::random_cvec(&mut rng, 2);
        let a = to_dyn(&p.member(za[0], za[1]));
        let b = to_dyn(&p.member(zb[0], zb[1]));
        let ka = linalg::null_vectors(&a, 1);
        let kb = linalg::null_vectors(&b, 1);
        let shared = (&a * &kb).norm() / a.norm();
        let ka = Vec4::from_column_slice(ka.as_slice());
        let kb = Vec4::from_column_slice(kb.as_slice());
        if shared < 1e3 * tol.rank {
            let mut vertex = ka;
            linalg::canonicalize(vertex.as_mut_slice());
            let rank_two_points = restricted_rank_two_points(p, &vertex, tol)?;
            return Ok(SingularPencilClass::FixedVertex {
                vertex,
                rank_two_points,
            });
        }
        let mut axis = [ka, kb];
        for v in axis.iter_mut() {
            linalg::canonicalize(v.as_mut_slice());
        }
        return Ok(SingularPencilClass::MovingVertex { axis });
    }
    let double_planes = double_planes_in_rank_two(p, tol)?;
    let family = match double_planes.len() {
        0 => RankTwoFamily::Moving,
        1 => RankTwoFamily::Tangent,
        _ => RankTwoFamily::Secant,
    };
    Ok(SingularPencilClass::InRankTwo {
        family,
        double_planes,
    })
}

/// Rank-two members of a fixed-vertex pencil: the roots of the cubic
/// determinant of the pencil restricted to a complement of the vertex.
fn restricted_rank_two_points(
    p: &Pencil,
    vertex: &Vec4,
    tol: &Tolerances,
) -> Result<Vec<(ProjPoint1, usize)>> {
    let row = DMatrix::from_row_slice(1, 4, vertex.adjoint().as_slice());
    let w = linalg::null_vectors(&row, 3);
    let restrict = |lambda: C64, mu: C64| w.transpose() * to_dyn(&p.member(lambda, mu)) * &w;
    let n = 4;
    let samples: Vec<C64> = (0..n)
        .map(|j| {
            let l = C64::from_polar(1.0, 0.4 + 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            linalg::det(&restrict(l, ONE))
        })
        .collect();
    let b = inverse_dft(&samples);
    let coeffs = (0..=3)
        .map(|k| {
            let pw = 3 - k;
            b[pw] * C64::from_polar(1.0, -(pw as f64) * 0.4)
        })
        .collect();
    let cubic = BinaryForm::new(coeffs);
    if cubic.norm() < 1e-12 {
        return Err(Error::RankTooLow(2));
    }
    let mut out = Vec::new();
    for r in cubic.roots(tol.cluster)? {
        let start = r.point;
        let a = restrict(start.lambda, start.mu);
        let b = restrict(-start.mu.conj(), start.lambda.conj());
        let point = match refine_affine(&a, &b, 1, tol.rank) {
            Some(t) => ProjPoint1::new(
                start.lambda - t * start.mu.conj(),
                start.mu + t * start.lambda.conj(),
            )
            .unwrap_or(start),
            None => start,
        };
        out.push((point, r.multiplicity));
    }
    Ok(out)
}

/// Double-planes on a pencil of rank ≤ 2 quadrics: common zeros of all
/// 2×2 minors, found among the roots of the dominant minor.
fn double_planes_in_rank_two(p: &Pencil, tol: &Tolerances) -> Result<Vec<ProjPoint1>> {
    let minors_at = |lambda: C64, mu: C64| -> Vec<C64> {
        let m = p.member(lambda, mu);
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut out = Vec::with_capacity(36);
        for &(i, j) in &pairs {
            for &(k, l) in &pairs {
                out.push(m[(i, k)] * m[(j, l)] - m[(i, l)] * m[(j, k)]);
            }
        }
        out
    };
    let f10 = minors_at(ONE, ZERO);
    let f01 = minors_at(ZERO, ONE);
    let f11 = minors_at(ONE, ONE);
    let quadratics: Vec<[C64; 3]> = (0..36)
        .map(|i| [f10[i], f11[i] - f10[i] - f01[i], f01[i]])
        .collect();
    let dominant = quadratics
        .iter()
        .max_by(|a, b| linalg::norm(*a).partial_cmp(&linalg::norm(*b)).unwrap())
        .copied()
        .unwrap_or([ZERO; 3]);
    if linalg::norm(&dominant) < 1e-14 {
        return Err(Error::RankTooLow(1));
    }
    let mut planes: Vec<ProjPoint1> = Vec::new();
    for r in BinaryForm::new(dominant.to_vec()).roots(tol.cluster)? {
        if let Some(pt) = refine_to_corank(p, &r.point, 3, tol.rank) {
            if !planes.iter().any(|q| q.dist(&pt) < tol.cluster) {
                planes.push(pt);
            }
        }
    }
    Ok(planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symqr::quadric::ProjQuadric;

    fn diag(d: [f64; 4]) -> ProjQuadric {
        ProjQuadric::diag(d).unwrap()
    }

    #[test]
    fn shared_vertex_cones() {
        let p = Pencil::new(diag([1.0, 1.0, 1.0, 0.0]), diag([1.0, 2.0, 3.0, 0.0])).unwrap();
        match classify_singular_pencil(&p, &Tolerances::default(), 0).unwrap() {
            SingularPencilClass::FixedVertex {
                vertex,
                rank_two_points,
            } => {
                assert!((vertex - Vec4::new(ZERO, ZERO, ZERO, ONE)).norm() < 1e-12);
                assert_eq!(rank_two_points.iter().map(|x| x.1).sum::<usize>(), 3);
                assert_eq!(rank_two_points.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_double_planes() {
        let p = Pencil::new(diag([1.0, 0.0, 0.0, 0.0]), diag([0.0, 1.0, 0.0, 0.0])).unwrap();
        match classify_singular_pencil(&p, &Tolerances::default(), 0).unwrap() {
            SingularPencilClass::InRankTwo {
                family,
                double_planes,
            } => {
                assert_eq!(family, RankTwoFamily::Secant);
                assert_eq!(double_planes.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn regular_pencil_rejected() {
        let p = Pencil::new(diag([1.0; 4]), diag([1.0, 2.0, 3.0, 4.0])).unwrap();
        assert!(matches!(
            classify_singular_pencil(&p, &Tolerances::default(), 0),
            Err(Error::NotSingularPencil)
        ));
    }
}
