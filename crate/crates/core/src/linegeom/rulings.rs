use nalgebra::{DMatrix, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::nu::{compound2, Mat6};
use super::plucker::{wedge, PluckerLine};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, C64, I, ONE, ZERO};
use crate::poly::{intersect_curves, BinaryForm, FnCurve, IntersectOptions, ProjPoint1};
use crate::symqr::{to_dyn, Mat4, ProjQuadric, Vec4};

const MAX_CONDITION: f64 = 1e8;
const FACTOR_SEED: u64 = 0x7275_6c65;

/// T with TᵗQT = I, via a random unitary congruence followed by a
/// pivot-free symmetric LDLᵗ factorization.
pub fn symmetric_normalizer(q: &ProjQuadric, tol: f64) -> Result<Mat4> {
    if q.numeric_rank(tol).rank < 4 {
        return Err(Error::Singular);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
    for _ in 0..8 {
        let u = linalg::random_unitary(&mut rng, 4);
        let u = Mat4::from_column_slice(u.as_slice());
        let m = u.transpose() * q.matrix() * u;
        let Some((l, d)) = ldlt(&m) else { continue };
        let Some(linv) = l.try_inverse() else {
            continue;
        };
        let dinv_sqrt = Mat4::from_diagonal(&d.map(|x| ONE / x.sqrt()));
        let t = u * linv.transpose() * dinv_sqrt;
        let s = linalg::singular_values(&to_dyn(&t));
        if s[3] > 0.0 && s[0] / s[3] < MAX_CONDITION {
            return Ok(t);
        }
    }
    Err(Error::NonGenericPair("ill-conditioned normalizer"))
}

fn ldlt(m: &Mat4) -> Option<(Mat4, Vec4)> {
    let mut l = Mat4::identity();
    let mut d = Vec4::zeros();
    let scale = m.norm();
    for j in 0..4 {
        let mut dj = m[(j, j)];
        for k in 0..j {
            dj -= l[(j, k)] * l[(j, k)] * d[k];
        }
        if dj.norm() < 1e-6 * scale {
            return None;
        }
        d[j] = dj;
        for i in (j + 1)..4 {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)] * d[k];
            }
            l[(i, j)] = s / dj;
        }
    }
    Some((l, d))
}

/// Coordinates on the standard quadric XY + ZW = 0, mapped back to y with
/// yᵗy = XY + ZW.
fn standard_to_y() -> Mat4 {
    let h = C64::new(0.5, 0.0);
    let hi = -I * 0.5;
    // columns: e_X, e_Y, e_Z, e_W
    Mat4::new(
        h, h, ZERO, ZERO, //
        hi, -hi, ZERO, ZERO, //
        ZERO, ZERO, h, h, //
        ZERO, ZERO, hi, -hi,
    )
}

/// The two rulings of a smooth quadric as quadratic maps (s:t) ↦ P₅.
#[derive(Debug, Clone)]
pub struct Rulings {
    pub normalizer: Mat4,
    /// For each family, Plücker coefficients of s², st, t².
    pub coeffs: [[[C64; 6]; 3]; 2],
}

impl Rulings {
    /// Spanning points of the line of `family` (0 or 1) at (s:t).
    pub fn points(&self, family: usize, s: C64, t: C64) -> (Vec4, Vec4) {
        let m = self.normalizer * standard_to_y();
        let (a, b) = if family == 0 {
            (Vec4::new(t, ZERO, s, ZERO), Vec4::new(ZERO, s, ZERO, -t))
        } else {
            (Vec4::new(t, ZERO, ZERO, s), Vec4::new(ZERO, s, -t, ZERO))
        };
        (m * a, m * b)
    }

    pub fn line(&self, family: usize, s: C64, t: C64) -> Result<PluckerLine> {
        let c = &self.coeffs[family];
        let mut x = [ZERO; 6];
        for k in 0..6 {
            x[k] = c[0][k] * s * s + c[1][k] * s * t + c[2][k] * t * t;
        }
        PluckerLine::from_coords(x)
    }
}

pub fn rulings(q: &ProjQuadric, tol: f64) -> Result<Rulings> {
    let normalizer = symmetric_normalizer(q, tol)?;
    let mut r = Rulings {
        normalizer,
        coeffs: [[[ZERO; 6]; 3]; 2],
    };
    for family in 0..2 {
        let at = |s: f64, t: f64| {
            let (a, b) = r.points(family, C64::new(s, 0.0), C64::new(t, 0.0));
            wedge(&a, &b)
        };
        let p0 = at(1.0, 0.0);
        let p2 = at(0.0, 1.0);
        let p11 = at(1.0, 1.0);
        let mut p1 = [ZERO; 6];
        for k in 0..6 {
            p1[k] = p11[k] - p0[k] - p2[k];
        }
        r.coeffs[family] = [p0, p1, p2];
    }
    Ok(r)
}

fn bilinear(a: &[C64; 6], n: &Mat6, b: &[C64; 6]) -> C64 {
    let mut acc = ZERO;
    for i in 0..6 {
        for j in 0..6 {
            acc += a[i] * n[(i, j)] * b[j];
        }
    }
    acc
}

/// A line of a ruling of one quadric that is tangent to the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RulingTangent {
    /// Which quadric owns the ruling (0 or 1).
    pub on: usize,
    pub family: usize,
    pub parameter: ProjPoint1,
    pub line: PluckerLine,
}

/// The sixteen lines lying on one quadric of a pair and tangent to the
/// other: four per ruling family.
pub fn ruling_tangency_points(
    q1: &ProjQuadric,
    q2: &ProjQuadric,
    tol: &Tolerances,
) -> Result<Vec<RulingTangent>> {
    let mut out = Vec::with_capacity(16);
    for (on, (own, other)) in [(q1, q2), (q2, q1)].into_iter().enumerate() {
        let r = rulings(own, tol.rank)?;
        let n = compound2(other.matrix());
        for family in 0..2 {
            let [p0, p1, p2] = &r.coeffs[family];
            let c = vec![
                bilinear(p0, &n, p0),
                bilinear(p0, &n, p1) * 2.0,
                bilinear(p1, &n, p1) + bilinear(p0, &n, p2) * 2.0,
                bilinear(p1, &n, p2) * 2.0,
                bilinear(p2, &n, p2),
            ];
            let scale = (linalg::norm(p0) + linalg::norm(p1) + linalg::norm(p2)).powi(2) * n.norm();
            if linalg::norm(&c) <= 1e-11 * scale {
                return Err(Error::NonGenericPair("ruling lies in the tangent complex"));
            }
            let roots = BinaryForm::new(c).roots(tol.cluster)?;
            if roots.len() != 4 {
                return Err(Error::NonGenericPair("clustered ruling tangency roots"));
            }
            for root in roots {
                let line = r.line(family, root.point.lambda, root.point.mu)?;
                out.push(RulingTangent {
                    on,
                    family,
                    parameter: root.point,
                    line,
                });
            }
        }
    }
    Ok(out)
}

/// A point of E = q₁ ∩ q₂ with the tangent line of E there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveTangent {
    pub point: Vec4,
    pub line: PluckerLine,
}

/// Sample `n` tangent lines of the base curve of the pencil [q₁,q₂] by
/// slicing with seeded random planes.
pub fn intersection_curve_tangents(
    q1: &ProjQuadric,
    q2: &ProjQuadric,
    n: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<CurveTangent>> {
    if q1.numeric_rank(tol.rank).rank < 4 || q2.numeric_rank(tol.rank).rank < 4 {
        return Err(Error::Singular);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut failures = 0;
    while out.len() < n {
        if failures > 20 {
            return Err(Error::SingularIntersection);
        }
        let b = DMatrix::from_column_slice(4, 3, &linalg::random_cvec(&mut rng, 12));
        let restrict = |q: &ProjQuadric| {
            let m = b.transpose() * to_dyn(q.matrix()) * &b;
            nalgebra::Matrix3::from_column_slice(m.as_slice())
        };
        let c1 = restrict(q1);
        let c2 = restrict(q2);
        let f = FnCurve {
            degree: 2,
            f: |v: &Vector3<C64>| (v.transpose() * c1 * v)[(0, 0)],
        };
        let g = FnCurve {
            degree: 2,
            f: |v: &Vector3<C64>| (v.transpose() * c2 * v)[(0, 0)],
        };
        let opts = IntersectOptions {
            seed: seed.wrapping_add(out.len() as u64 + 1),
            tol_cluster: tol.cluster,
            ..IntersectOptions::default()
        };
        let pts = match intersect_curves(&f, &g, &opts) {
            Ok(p) if p.len() == 4 && p.iter().all(|x| x.multiplicity == 1) => p,
            _ => {
                failures += 1;
                continue;
            }
        };
        for p in pts {
            if out.len() == n {
                break;
            }
            let x = Vec4::from_iterator(
                (&b * nalgebra::DVector::from_column_slice(p.v.as_slice()))
                    .iter()
                    .copied(),
            );
            let x = x / C64::new(x.norm(), 0.0);
            let g1 = q1.matrix() * x;
            let g2 = q2.matrix() * x;
            let m = DMatrix::from_row_slice(
                2,
                4,
                &[g1[0], g1[1], g1[2], g1[3], g2[0], g2[1], g2[2], g2[3]],
            );
            let k = linalg::null_vectors(&m, 2);
            let a = Vec4::from_iterator(k.column(0).iter().copied());
            let c = Vec4::from_iterator(k.column(1).iter().copied());
            let line = PluckerLine::from_coords(wedge(&a, &c))?;
            out.push(CurveTangent { point: x, line });
        }
    }
    Ok(out)
}
