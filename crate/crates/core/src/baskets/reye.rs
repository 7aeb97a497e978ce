use nalgebra::{DMatrix, Matrix3};

use super::pair::{is_basket_pair, Witness};
use super::space;
use crate::config::Tolerances;
use crate::error::Result;
use crate::linalg::{self, C64};
use crate::symqr::{dense_pencil_det, refine_affine, Mat4, ProjPoint1, ProjQuadric};

/// Labels of the twelve rank-two points: (i, j, sign) for p_ij^±.
pub type PointLabel = (usize, usize, i8);

/// The double-four qᵢ, b^α with the tetrad of double-planes dᵢ, twelve
/// rank-two points and sixteen lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ReyeConfiguration {
    pub q: [ProjQuadric; 4],
    pub b: [ProjQuadric; 4],
    pub d: [ProjQuadric; 4],
    pub points: Vec<ProjQuadric>,
    pub point_labels: Vec<PointLabel>,
    /// ℓᵢ^α as two spanning members, indexed 4i + α.
    pub lines: Vec<[ProjQuadric; 2]>,
    pub incidence: Vec<Vec<bool>>,
}

fn diag(d: [f64; 4]) -> Result<ProjQuadric> {
    ProjQuadric::diag(d)
}

const INCIDENCE_GATE: f64 = 1e-8;

fn incidence_matrix(
    points: &[ProjQuadric],
    lines: &[[ProjQuadric; 2]],
    tol: f64,
) -> Vec<Vec<bool>> {
    points
        .iter()
        .map(|p| {
            lines
                .iter()
                .map(|l| space::span_residual(&[&l[0], &l[1]], p) < tol)
                .collect()
        })
        .collect()
}

/// qᵢ = Σx² − 2xᵢ², b¹ = Σx², b^β = Σx² − 2(x₁² + x_β²), dᵢ = xᵢ².
pub fn standard_double_four() -> Result<ReyeConfiguration> {
    let mut q = Vec::with_capacity(4);
    let mut d = Vec::with_capacity(4);
    let mut b = Vec::with_capacity(4);
    for i in 0..4 {
        let mut w = [1.0; 4];
        w[i] = -1.0;
        q.push(diag(w)?);
        let mut e = [0.0; 4];
        e[i] = 1.0;
        d.push(diag(e)?);
        let mut w = [1.0; 4];
        if i > 0 {
            w[0] = -1.0;
            w[i] = -1.0;
        }
        b.push(diag(w)?);
    }
    let mut points = Vec::with_capacity(12);
    let mut point_labels = Vec::with_capacity(12);
    for sign in [1i8, -1] {
        for i in 0..4 {
            for j in i + 1..4 {
                let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
                let mut w = [0.0; 4];
                w[rest[0]] = 1.0;
                w[rest[1]] = f64::from(sign);
                points.push(diag(w)?);
                point_labels.push((i, j, sign));
            }
        }
    }
    let mut lines = Vec::with_capacity(16);
    for i in 0..4 {
        let qf: Vec<&ProjQuadric> = (0..4).filter(|&k| k != i).map(|k| &q[k]).collect();
        for a in 0..4 {
            let bf: Vec<&ProjQuadric> = (0..4).filter(|&k| k != a).map(|k| &b[k]).collect();
            let span = space::meet_spans(&qf, &bf, 2, 1e-8)?;
            lines.push([span[0], span[1]]);
        }
    }
    let incidence = incidence_matrix(&points, &lines, INCIDENCE_GATE);
    Ok(ReyeConfiguration {
        q: [q[0], q[1], q[2], q[3]],
        b: [b[0], b[1], b[2], b[3]],
        d: [d[0], d[1], d[2], d[3]],
        points,
        point_labels,
        lines,
        incidence,
    })
}

impl ReyeConfiguration {
    /// Pull-back of every member by x ↦ Ax.
    pub fn conjugate(&self, a: &Mat4) -> Result<Self> {
        let map = |v: &[ProjQuadric]| -> Result<Vec<ProjQuadric>> {
            v.iter().map(|x| x.conjugate(a)).collect()
        };
        let q = map(&self.q)?;
        let b = map(&self.b)?;
        let d = map(&self.d)?;
        let lines = self
            .lines
            .iter()
            .map(|l| Ok([l[0].conjugate(a)?, l[1].conjugate(a)?]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            q: [q[0], q[1], q[2], q[3]],
            b: [b[0], b[1], b[2], b[3]],
            d: [d[0], d[1], d[2], d[3]],
            points: map(&self.points)?,
            point_labels: self.point_labels.clone(),
            lines,
            incidence: self.incidence.clone(),
        })
    }

    /// Witnesses for the sixteen pairs (qᵢ, b^α), indexed 4i + α.
    pub fn basket_witnesses(&self, tol: &Tolerances) -> Result<Vec<Option<Witness>>> {
        let mut out = Vec::with_capacity(16);
        for qi in &self.q {
            for ba in &self.b {
                out.push(is_basket_pair(ba, qi, tol)?);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceReport {
    pub point_degrees: Vec<usize>,
    pub line_degrees: Vec<usize>,
    pub ok: bool,
}

/// Recomputes incidences from the geometry and checks the (12₄, 16₃) counts.
pub fn reye_incidence(r: &ReyeConfiguration, tol: f64) -> IncidenceReport {
    let inc = incidence_matrix(&r.points, &r.lines, tol);
    let point_degrees: Vec<usize> = inc
        .iter()
        .map(|row| row.iter().filter(|&&x| x).count())
        .collect();
    let line_degrees: Vec<usize> = (0..r.lines.len())
        .map(|l| inc.iter().filter(|row| row[l]).count())
        .collect();
    let ok = point_degrees.len() == 12
        && line_degrees.len() == 16
        && point_degrees.iter().all(|&x| x == 4)
        && line_degrees.iter().all(|&x| x == 3);
    IncidenceReport {
        point_degrees,
        line_degrees,
        ok,
    }
}

pub type Mat3 = Matrix3<C64>;

/// A point (x, y, z) of the affine chart of {s₁₃ = s₂₃ = 0} in which the
/// Veronese conic s₁₁s₂₂ = s₁₂² is the unit circle of the plane z = 0.
pub fn chart_conic(x: f64, y: f64, z: f64) -> Mat3 {
    let r = |t: f64| C64::new(t, 0.0);
    Mat3::new(
        r(1.0 + x),
        r(y),
        r(0.0),
        r(y),
        r(1.0 - x),
        r(0.0),
        r(0.0),
        r(0.0),
        r(z),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct PencilRankOne {
    pub i: usize,
    pub j: usize,
    pub location: Option<ProjPoint1>,
    /// σ₂/σ₁ of the best member found.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubleFive {
    pub q: [Mat3; 5],
    pub b: [Mat3; 5],
    pub pencils: Vec<PencilRankOne>,
    pub pencils_with_rank_one: usize,
    pub max_residual: f64,
}

fn dyn3(m: &Mat3) -> DMatrix<C64> {
    DMatrix::from_column_slice(3, 3, m.as_slice())
}

/// Rank-one member of the pencil of conics λa + μb, from the roots of the
/// cubic determinant refined to corank two.
pub fn conic_pencil_rank_one(
    a: &Mat3,
    b: &Mat3,
    tol: &Tolerances,
) -> Result<(Option<ProjPoint1>, f64)> {
    let an = a / C64::new(a.norm(), 0.0);
    let bn = b / C64::new(b.norm(), 0.0);
    let (ad, bd) = (dyn3(&an), dyn3(&bn));
    let cubic = dense_pencil_det(&ad, &bd);
    let mut best = (None, f64::INFINITY);
    for r in cubic.roots(tol.cluster)? {
        let s = r.point;
        let m0 = &ad * s.lambda + &bd * s.mu;
        let dir = &ad * (-s.mu.conj()) + &bd * s.lambda.conj();
        let at = match refine_affine(&m0, &dir, 2, tol.rank) {
            Some(t) => {
                ProjPoint1::new(s.lambda - t * s.mu.conj(), s.mu + t * s.lambda.conj()).unwrap_or(s)
            }
            None => s,
        };
        let m = &ad * at.lambda + &bd * at.mu;
        let res = linalg::rank_residual(&m, 1);
        if res < best.1 {
            best = (Some(at), res);
        }
    }
    if best.1 >= tol.rank {
        return Ok((None, best.1));
    }
    Ok(best)
}

/// The two quintets of conics: qₖ = (−2ωₖ, −1), bₖ = (−2ωₖ, 1) for the cube
/// roots of unity, q₀ = (0,−1), b₀ = (0,1), q₄ = (0,⅓), b₄ = (0,−⅓).
pub fn double_five_with(q4_shift: f64, tol: &Tolerances) -> Result<DoubleFive> {
    let w: Vec<(f64, f64)> = (1..=3)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            (-2.0 * a.cos(), -2.0 * a.sin())
        })
        .collect();
    let q = [
        chart_conic(0.0, 0.0, -1.0),
        chart_conic(w[0].0, w[0].1, -1.0),
        chart_conic(w[1].0, w[1].1, -1.0),
        chart_conic(w[2].0, w[2].1, -1.0),
        chart_conic(q4_shift, 0.0, 1.0 / 3.0),
    ];
    let b = [
        chart_conic(0.0, 0.0, 1.0),
        chart_conic(w[0].0, w[0].1, 1.0),
        chart_conic(w[1].0, w[1].1, 1.0),
        chart_conic(w[2].0, w[2].1, 1.0),
        chart_conic(0.0, 0.0, -1.0 / 3.0),
    ];
    let mut pencils = Vec::with_capacity(25);
    for i in 0..5 {
        for j in 0..5 {
            let (location, residual) = conic_pencil_rank_one(&q[i], &b[j], tol)?;
            pencils.push(PencilRankOne {
                i,
                j,
                location,
                residual,
            });
        }
    }
    let pencils_with_rank_one = pencils.iter().filter(|p| p.location.is_some()).count();
    let max_residual = pencils.iter().map(|p| p.residual).fold(0.0, f64::max);
    Ok(DoubleFive {
        q,
        b,
        pencils,
        pencils_with_rank_one,
        max_residual,
    })
}

pub fn double_five(tol: &Tolerances) -> Result<DoubleFive> {
    double_five_with(0.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reye_counts() {
        let r = standard_double_four().unwrap();
        assert_eq!(r.points.len(), 12);
        assert_eq!(r.lines.len(), 16);
        let rep = reye_incidence(&r, 1e-8);
        assert!(rep.ok, "{rep:?}");
        let tol = Tolerances::default();
        assert!(r.points.iter().all(|p| p.numeric_rank(1e-8).rank == 2));
        assert!(r
            .basket_witnesses(&tol)
            .unwrap()
            .iter()
            .all(|w| w.is_some()));
    }

    #[test]
    fn deleting_a_point_breaks_the_count() {
        let mut r = standard_double_four().unwrap();
        r.points.pop();
        assert!(!reye_incidence(&r, 1e-8).ok);
    }

    #[test]
    fn conjugation_preserves_incidence() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = Mat4::from_column_slice(&linalg::random_cvec(&mut rng, 16));
        let r = standard_double_four().unwrap().conjugate(&a).unwrap();
        assert!(reye_incidence(&r, 1e-8).ok);
    }

    #[test]
    fn double_five_all_pencils() {
        let tol = Tolerances::default();
        let d5 = double_five(&tol).unwrap();
        assert_eq!(d5.pencils_with_rank_one, 25);
        assert!(d5.max_residual < 1e-9);
        let p00 = &d5.pencils[0];
        let at = p00.location.unwrap();
        let m = d5.q[0] * at.lambda / C64::new(d5.q[0].norm(), 0.0)
            + d5.b[0] * at.mu / C64::new(d5.b[0].norm(), 0.0);
        // the member is a multiple of s₃₃²
        assert!(m[(0, 0)].norm() < 1e-9 && m[(2, 2)].norm() > 1e-3);
    }

    #[test]
    fn perturbed_double_five_breaks() {
        let d5 = double_five_with(0.05, &Tolerances::default()).unwrap();
        assert!(d5.pencils_with_rank_one < 25);
    }
}
