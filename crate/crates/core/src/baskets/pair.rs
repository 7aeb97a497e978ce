use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::space;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::symqr::{
    classify_singular_pencil, factor_rank_two, pencil_singular_points, refine_to_corank, Pencil,
    PlanePair, ProjPoint1, ProjQuadric, SingularPencilClass,
};

/// Rank-one member of the pencil [b, q] at λb + μq.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub location: ProjPoint1,
    pub d: ProjQuadric,
    /// σ₂/σ₁ of d.
    pub residual: f64,
}

/// A basket together with its double-plane witnesses against each input.
#[derive(Debug, Clone, PartialEq)]
pub struct BasketWitness {
    pub basket: ProjQuadric,
    pub witnesses: Vec<Witness>,
}

impl BasketWitness {
    pub fn max_residual(&self) -> f64 {
        self.witnesses
            .iter()
            .map(|w| w.residual)
            .fold(0.0, f64::max)
    }
}

fn check_rank(q: &ProjQuadric, tol: f64) -> Result<()> {
    let r = q.numeric_rank(tol).rank;
    if r <= 2 {
        return Err(Error::RankTooLow(r));
    }
    Ok(())
}

fn witness_at(p: &Pencil, at: ProjPoint1, tol: f64) -> Result<Witness> {
    let d = p.quadric_at(&at)?;
    let residual = d.numeric_rank(tol).residual(1);
    Ok(Witness {
        location: at,
        d,
        residual,
    })
}

/// Rank-one member of a pencil inside the determinantal hypersurface, found
/// among its rank-two candidates.
fn rank_one_in_singular_pencil(p: &Pencil, tol: &Tolerances) -> Result<Option<Witness>> {
    let candidates = match classify_singular_pencil(p, tol, 0)? {
        SingularPencilClass::FixedVertex {
            rank_two_points, ..
        } => rank_two_points.into_iter().map(|x| x.0).collect(),
        SingularPencilClass::MovingVertex { .. } => compressed_rank_drops(p, tol)?,
        SingularPencilClass::InRankTwo { .. } => return Err(Error::RankTooLow(2)),
    };
    for c in candidates {
        if let Some(at) = refine_to_corank(p, &c, 3, tol.rank) {
            return Ok(Some(witness_at(p, at, tol.rank)?));
        }
    }
    Ok(None)
}

/// Rank-two members of a singular pencil: roots of det(Wᵗ(λq₁+μq₂)W) for a
/// random 4×3 compression W, certified on the full matrix.
fn compressed_rank_drops(p: &Pencil, tol: &Tolerances) -> Result<Vec<ProjPoint1>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let w = DMatrix::from_column_slice(4, 3, &linalg::random_cvec(&mut rng, 12));
    let a = w.transpose() * p.q1.to_dmatrix() * &w;
    let b = w.transpose() * p.q2.to_dmatrix() * &w;
    let cubic = crate::symqr::dense_pencil_det(&a, &b);
    let mut out = Vec::new();
    for r in cubic.roots(tol.cluster)? {
        if let Some(pt) = refine_to_corank(p, &r.point, 2, tol.rank) {
            if !out.iter().any(|q: &ProjPoint1| q.dist(&pt) < tol.cluster) {
                out.push(pt);
            }
        }
    }
    Ok(out)
}

/// The double-plane of the pencil [b, q] when b is a basket for q.
pub fn is_basket_pair(
    b: &ProjQuadric,
    q: &ProjQuadric,
    tol: &Tolerances,
) -> Result<Option<Witness>> {
    check_rank(b, tol.rank)?;
    check_rank(q, tol.rank)?;
    let p = Pencil::new(*b, *q)?;
    if p.inside_determinantal() {
        return rank_one_in_singular_pencil(&p, tol);
    }
    for s in pencil_singular_points(&p, tol)? {
        if s.profile.rank <= 1 {
            return Ok(Some(Witness {
                location: s.point,
                d: s.quadric,
                residual: s.profile.residual(1),
            }));
        }
    }
    Ok(None)
}

/// One rational curve of common baskets of q₁ and q₂, attached to a
/// rank-two member p = uv of their pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct BasketCurve {
    pub q1: ProjQuadric,
    pub q2: ProjQuadric,
    pub anchor: ProjPoint1,
    pub p: ProjQuadric,
    pub pair: PlanePair,
}

/// Common baskets of a pair: the rational curves through rank-two members,
/// and the pencil itself when it contains a double-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct BasketLoci {
    pub curves: Vec<BasketCurve>,
    pub whole_pencil: Option<Witness>,
}

pub fn common_basket_curves(
    q1: &ProjQuadric,
    q2: &ProjQuadric,
    tol: &Tolerances,
) -> Result<BasketLoci> {
    check_rank(q1, tol.rank)?;
    check_rank(q2, tol.rank)?;
    let p = Pencil::new(*q1, *q2)?;
    let mut points: Vec<ProjPoint1> = Vec::new();
    let mut whole_pencil = None;
    if p.inside_determinantal() {
        let candidates = match classify_singular_pencil(&p, tol, 0)? {
            SingularPencilClass::FixedVertex {
                rank_two_points, ..
            } => rank_two_points.into_iter().map(|x| x.0).collect(),
            SingularPencilClass::MovingVertex { .. } => compressed_rank_drops(&p, tol)?,
            SingularPencilClass::InRankTwo { .. } => return Err(Error::RankTooLow(2)),
        };
        for c in candidates {
            if let Some(at) = refine_to_corank(&p, &c, 3, tol.rank) {
                whole_pencil = Some(witness_at(&p, at, tol.rank)?);
            } else {
                points.push(c);
            }
        }
    } else {
        for s in pencil_singular_points(&p, tol)? {
            match s.profile.rank {
                0 | 1 => {
                    whole_pencil = Some(Witness {
                        location: s.point,
                        d: s.quadric,
                        residual: s.profile.residual(1),
                    })
                }
                2 => points.push(s.point),
                _ => {}
            }
        }
    }
    let curves = points
        .into_iter()
        .map(|anchor| {
            let pq = p.quadric_at(&anchor)?;
            let pair = factor_rank_two(&pq, tol.rank)?;
            Ok(BasketCurve {
                q1: *q1,
                q2: *q2,
                anchor,
                p: pq,
                pair,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BasketLoci {
        curves,
        whole_pencil,
    })
}

impl BasketCurve {
    /// The two double-planes (u + sv)², (u − sv)² on the secant through p.
    pub fn double_planes(&self, s: C64) -> Result<(ProjQuadric, ProjQuadric)> {
        if !s.is_finite() || s.norm() < 1e-12 || s.norm() > 1e12 {
            return Err(Error::DegenerateParameter);
        }
        let u = self.pair.u;
        let v = self.pair.v / C64::new(self.pair.v.norm(), 0.0);
        Ok((
            ProjQuadric::rank_one(&(u + v * s))?,
            ProjQuadric::rank_one(&(u - v * s))?,
        ))
    }
}

/// The basket b = [q₁,d₁] ∩ [q₂,d₂] at parameter s, with its witnesses.
pub fn sample_basket(c: &BasketCurve, s: C64, tol: &Tolerances) -> Result<BasketWitness> {
    let (d1, d2) = c.double_planes(s)?;
    let (basket, res) = space::meet_lines((&c.q1, &d1), (&c.q2, &d2), 1e3 * tol.rank)?;
    let mut witnesses = Vec::with_capacity(2);
    for q in [&c.q1, &c.q2] {
        match is_basket_pair(&basket, q, tol)? {
            Some(w) => witnesses.push(w),
            None => return Err(Error::NoIntersection(res)),
        }
    }
    Ok(BasketWitness { basket, witnesses })
}
