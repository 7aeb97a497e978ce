use nalgebra::DMatrix;

use super::quadric::{profile_of, to_dyn, Mat4, ProjQuadric, RankProfile};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};
use crate::poly::{inverse_dft, BinaryForm, ProjPoint1};

/// Phase offset of the determinant sampling circle, chosen so that
/// structured roots such as ±1 never coincide with a sample.
const SAMPLE_PHASE: f64 = 0.318_309_886_183_790_7;
const ZERO_FORM_SCALE: f64 = 1e-12;
const MIN_SEPARATION: f64 = 1e-9;

/// The line λq₁ + μq₂ in the space of quadrics.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    pub q1: ProjQuadric,
    pub q2: ProjQuadric,
    det_form: BinaryForm,
}

impl Pencil {
    pub fn new(q1: ProjQuadric, q2: ProjQuadric) -> Result<Self> {
        if q1.dist(&q2) < MIN_SEPARATION {
            return Err(Error::DependentQuadrics);
        }
        let det_form = pencil_det_form(&q1, &q2);
        Ok(Self { q1, q2, det_form })
    }

    pub fn det_form(&self) -> &BinaryForm {
        &self.det_form
    }

    /// True when every member is singular.
    pub fn inside_determinantal(&self) -> bool {
        self.det_form.identically_zero
    }

    pub fn member(&self, lambda: C64, mu: C64) -> Mat4 {
        self.q1.matrix() * lambda + self.q2.matrix() * mu
    }

    pub fn member_at(&self, p: &ProjPoint1) -> Mat4 {
        self.member(p.lambda, p.mu)
    }

    pub fn quadric_at(&self, p: &ProjPoint1) -> Result<ProjQuadric> {
        ProjQuadric::new(self.member_at(p))
    }
}

/// Coefficients of det(λQ₁ + μQ₂), obtained by sampling on a rotated circle
/// of five points and interpolating.
pub fn pencil_det_form(q1: &ProjQuadric, q2: &ProjQuadric) -> BinaryForm {
    let n = 5;
    let samples: Vec<C64> = (0..n)
        .map(|j| {
            let lambda = C64::from_polar(
                1.0,
                SAMPLE_PHASE + 2.0 * std::f64::consts::PI * j as f64 / n as f64,
            );
            linalg::det(&to_dyn(&(q1.matrix() * lambda + q2.matrix())))
        })
        .collect();
    let scale = q1.matrix().norm() + q2.matrix().norm();
    if samples
        .iter()
        .all(|s| s.norm() < ZERO_FORM_SCALE * scale.powi(4))
    {
        return BinaryForm::zero(4);
    }
    let b = inverse_dft(&samples);
    // sample λ = e^{iθ₀}ωʲ: the transform returns a_p e^{ipθ₀}
    let coeffs = (0..=4)
        .map(|k| {
            let p = 4 - k;
            b[p] * C64::from_polar(1.0, -(p as f64) * SAMPLE_PHASE)
        })
        .collect();
    BinaryForm::new(coeffs)
}

/// det(λA + μB) for square matrices of any size, by sampling on a rotated
/// circle and interpolating.
pub fn dense_pencil_det(a: &DMatrix<C64>, b: &DMatrix<C64>) -> BinaryForm {
    let d = a.nrows();
    let n = d + 1;
    let samples: Vec<C64> = (0..n)
        .map(|j| {
            let lambda = C64::from_polar(
                1.0,
                SAMPLE_PHASE + 2.0 * std::f64::consts::PI * j as f64 / n as f64,
            );
            linalg::det(&(a * lambda + b))
        })
        .collect();
    let coef = inverse_dft(&samples);
    let coeffs = (0..=d)
        .map(|k| {
            let p = d - k;
            coef[p] * C64::from_polar(1.0, -(p as f64) * SAMPLE_PHASE)
        })
        .collect();
    BinaryForm::new(coeffs)
}

/// A singular member of a pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPoint {
    pub point: ProjPoint1,
    pub quadric: ProjQuadric,
    pub profile: RankProfile,
    pub multiplicity: usize,
}

/// Roots of the determinant form with the rank profile of the member at
/// each. Roots are refined toward the lowest rank they support so that
/// rank drops are certified at `tol.rank` rather than at root accuracy.
pub fn pencil_singular_points(p: &Pencil, tol: &Tolerances) -> Result<Vec<SingularPoint>> {
    if p.inside_determinantal() {
        return Err(Error::PencilInsideDeterminantal);
    }
    let roots = p.det_form().roots(tol.cluster)?;
    let mut out: Vec<SingularPoint> = Vec::with_capacity(roots.len());
    for r in roots {
        let refined = (1..=3)
            .rev()
            .find_map(|corank| refine_to_corank(p, &r.point, corank, tol.rank))
            .unwrap_or(r.point);
        let quadric = p.quadric_at(&refined)?;
        let profile = quadric.numeric_rank(tol.rank);
        if let Some(prev) = out
            .iter_mut()
            .find(|s| s.point.dist(&refined) < tol.cluster)
        {
            prev.multiplicity += r.multiplicity;
            if profile.rank < prev.profile.rank {
                prev.profile = profile;
                prev.quadric = quadric;
                prev.point = refined;
            }
            continue;
        }
        out.push(SingularPoint {
            point: refined,
            quadric,
            profile,
            multiplicity: r.multiplicity,
        });
    }
    Ok(out)
}

/// The rank-one member of the pencil, if any.
pub fn pencil_meets_rank_one(p: &Pencil, tol: &Tolerances) -> Result<Option<SingularPoint>> {
    Ok(pencil_singular_points(p, tol)?
        .into_iter()
        .find(|s| s.profile.rank <= 1))
}

/// Newton-type refinement of a pencil parameter near `start` so that the
/// member acquires a kernel of dimension `corank`. Returns the refined point
/// when the rank drop is certified at `tol`.
pub fn refine_to_corank(
    p: &Pencil,
    start: &ProjPoint1,
    corank: usize,
    tol: f64,
) -> Option<ProjPoint1> {
    let a = p.member_at(start);
    // orthogonal direction on P¹
    let b = p.member(-start.mu.conj(), start.lambda.conj());
    let t = refine_affine(&to_dyn(&a), &to_dyn(&b), corank, tol)?;
    ProjPoint1::new(
        start.lambda - t * start.mu.conj(),
        start.mu + t * start.lambda.conj(),
    )
}

/// Find small t with rank(a + t·b) ≤ n − corank for square symmetric a, b.
pub fn refine_affine(a: &DMatrix<C64>, b: &DMatrix<C64>, corank: usize, tol: f64) -> Option<C64> {
    let n = a.nrows();
    let bd = b;
    let mut t = ZERO;
    for _ in 0..40 {
        let m = a + b * t;
        let k = linalg::null_vectors(&m, corank);
        let kt = k.transpose();
        let mk = &kt * &m * &k;
        let bk = &kt * bd * &k;
        let denom = bk.norm_squared();
        if denom == 0.0 {
            break;
        }
        let step = -bk.dotc(&mk) / denom;
        t += step;
        if t.norm() > 0.05 || !t.is_finite() {
            return None;
        }
        if step.norm() < 1e-17 {
            break;
        }
    }
    let m = a + b * t;
    let res = linalg::rank_residual(&m, n - corank);
    (res < tol).then_some(t)
}

/// Rank of a generic member, sampled at two seeded random points.
pub(crate) fn generic_rank(p: &Pencil, tol: f64, rng: &mut impl rand::Rng) -> usize {
    (0..2)
        .map(|_| {
            let z = linalg::random_cvec(rng, 2);
            profile_of(&p.member(z[0], z[1]), tol).rank
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::poly::ProjPoint1;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(d: [f64; 4]) -> ProjQuadric {
        ProjQuadric::diag(d).unwrap()
    }

    fn cofactor_det(m: &Mat4) -> C64 {
        // Laplace expansion along the first row
        let mut total = ZERO;
        for j in 0..4 {
            let minor = nalgebra::Matrix3::<C64>::from_fn(|r, s| {
                let col = if s < j { s } else { s + 1 };
                m[(r + 1, col)]
            });
            let d3 = minor[(0, 0)]
                * (minor[(1, 1)] * minor[(2, 2)] - minor[(1, 2)] * minor[(2, 1)])
                - minor[(0, 1)] * (minor[(1, 0)] * minor[(2, 2)] - minor[(1, 2)] * minor[(2, 0)])
                + minor[(0, 2)] * (minor[(1, 0)] * minor[(2, 1)] - minor[(1, 1)] * minor[(2, 0)]);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += m[(0, j)] * d3 * sign;
        }
        total
    }

    #[test]
    fn diagonal_pencil_roots() {
        let p = Pencil::new(diag([1.0; 4]), diag([1.0, 2.0, 3.0, 4.0])).unwrap();
        let roots = p.det_form().roots(1e-6).unwrap();
        assert_eq!(roots.len(), 4);
        // canonical scalings: I/2 and diag(1..4)/√30
        let s = 2.0 / 30f64.sqrt();
        for k in 1..=4 {
            let target = ProjPoint1::new(c(-(k as f64) * s), c(1.0)).unwrap();
            assert!(roots.iter().any(|r| r.point.dist(&target) < 1e-12));
        }
    }

    #[test]
    fn det_form_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = Mat4::from_column_slice(&linalg::random_cvec(&mut rng, 16));
            let b = Mat4::from_column_slice(&linalg::random_cvec(&mut rng, 16));
            let q1 = ProjQuadric::new(a).unwrap();
            let q2 = ProjQuadric::new(b).unwrap();
            let f = pencil_det_form(&q1, &q2);
            for _ in 0..5 {
                let z = linalg::random_cvec(&mut rng, 2);
                let direct = cofactor_det(&(q1.matrix() * z[0] + q2.matrix() * z[1]));
                let via = f.eval(z[0], z[1]);
                assert!((direct - via).norm() <= 1e-12 * direct.norm().max(f.norm()));
            }
        }
    }

    #[test]
    fn three_plus_one_factorization() {
        let p = Pencil::new(diag([1.0; 4]), diag([1.0, 1.0, 1.0, -1.0])).unwrap();
        let pts = pencil_singular_points(&p, &Tolerances::default()).unwrap();
        assert_eq!(pts.iter().map(|s| s.multiplicity).sum::<usize>(), 4);
        let at = ProjPoint1::new(c(1.0), c(-1.0)).unwrap();
        let triple = pts.iter().find(|s| s.point.dist(&at) < 1e-9).unwrap();
        assert_eq!(triple.multiplicity, 3);
        assert_eq!(triple.profile.rank, 1);
    }

    #[test]
    fn rank_one_difference() {
        let p = Pencil::new(diag([1.0, 1.0, 1.0, -1.0]), diag([1.0, 1.0, -1.0, -1.0])).unwrap();
        let hit = pencil_meets_rank_one(&p, &Tolerances::default())
            .unwrap()
            .unwrap();
        assert!(hit.point.dist(&ProjPoint1::new(c(1.0), c(-1.0)).unwrap()) < 1e-12);
        assert!(hit.quadric.dist(&diag([0.0, 0.0, 1.0, 0.0])) < 1e-12);
    }

    #[test]
    fn generic_pair_has_four_rank_three_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Mat4::from_column_slice(&linalg::random_cvec(&mut rng, 16));
        let b = Mat4::from_column_slice(&linalg::random_cvec(&mut rng, 16));
        let p = Pencil::new(ProjQuadric::new(a).unwrap(), ProjQuadric::new(b).unwrap()).unwrap();
        let pts = pencil_singular_points(&p, &Tolerances::default()).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts
            .iter()
            .all(|s| s.profile.rank == 3 && s.multiplicity == 1));
        assert!(pencil_meets_rank_one(&p, &Tolerances::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn cone_pencil_is_flagged() {
        let p = Pencil::new(diag([1.0, 1.0, 1.0, 0.0]), diag([1.0, 2.0, 3.0, 0.0])).unwrap();
        assert!(p.inside_determinantal());
        assert!(matches!(
            pencil_singular_points(&p, &Tolerances::default()),
            Err(Error::PencilInsideDeterminantal)
        ));
    }

    #[test]
    fn dependent_pair_rejected() {
        let q = diag([1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(Pencil::new(q, q), Err(Error::DependentQuadrics)));
    }
}
