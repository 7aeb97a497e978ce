//! Seeded ensembles and the invariant suite run by `tangentloci selfcheck`.

use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::baskets::conic::{Coords3, PlaneLine};
use crate::baskets::{
    check_c1, common_basket_curves, desargues_basket, double_five, is_basket_pair,
    perspective_relation, reye_incidence, sample_basket, standard_double_four,
};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::linegeom::{
    dual_quadric, duality_identity_residual, intersection_curve_tangents, plucker_from_points,
    plucker_orthogonal, ruling_tangency_points, tangency_residual, PVLine, PluckerLine,
};
use crate::poly::ProjPoint1;
use crate::spheres::{
    basket_conditions_spheres, classify_collinear, common_tangents_coplanar, parallelogram_foot,
    solve, transform_spheres, DegenerateClass, Meridian, SolveOptions, Sphere, SphereCoords,
    TangentSolution,
};
use crate::symqr::{
    classify_singular_pencil, Mat4, Pencil, ProjQuadric, RankTwoFamily, SingularPencilClass, Vec4,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    /// Passes when `value < threshold`.
    pub fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: value.is_finite() && value < threshold,
            value,
            threshold,
        }
    }

    /// Passes when the number of failures is zero.
    pub fn exact(name: &str, failures: usize) -> Self {
        Self {
            name: name.into(),
            passed: failures == 0,
            value: failures as f64,
            threshold: 0.0,
        }
    }

    fn failed(name: &str, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: false,
            value: f64::INFINITY,
            threshold,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_real_quadric<R: Rng>(rng: &mut R) -> Result<ProjQuadric> {
    let a = linalg::random_rvec(rng, 16);
    let m = Mat4::from_fn(|i, j| C64::new(a[4 * i + j] + a[4 * j + i], 0.0));
    ProjQuadric::new(m)
}

pub fn random_complex_quadric<R: Rng>(rng: &mut R) -> Result<ProjQuadric> {
    ProjQuadric::new(Mat4::from_column_slice(&linalg::random_cvec(rng, 16)))
}

fn random_vec4<R: Rng>(rng: &mut R) -> Vec4 {
    Vec4::from_column_slice(&linalg::random_cvec(rng, 4))
}

/// A line through a random point of q inside the tangent plane there.
pub fn random_tangent_line<R: Rng>(rng: &mut R, q: &ProjQuadric) -> Result<PluckerLine> {
    let a = random_vec4(rng);
    let b = random_vec4(rng);
    let m = q.matrix();
    let qa = (a.transpose() * m * a)[(0, 0)];
    let qab = (a.transpose() * m * b)[(0, 0)];
    let qb = (b.transpose() * m * b)[(0, 0)];
    let disc = (qab * qab - qa * qb).sqrt();
    let t = (-qab + disc) / qb;
    let x = a + b * t;
    let g = m * x;
    let row = DMatrix::from_row_slice(1, 4, g.as_slice());
    let plane = linalg::null_vectors(&row, 3);
    let coef = nalgebra::DVector::from_vec(linalg::random_cvec(rng, 3));
    let w = Vec4::from_iterator((plane * coef).iter().copied());
    plucker_from_points(&x, &w)
}

/// (b, q) with q = b + t·uuᵀ, so that the pencil meets the rank-one locus.
pub fn constructed_basket_pair<R: Rng>(rng: &mut R) -> Result<(ProjQuadric, ProjQuadric)> {
    let b = random_complex_quadric(rng)?;
    let d = ProjQuadric::rank_one(&random_vec4(rng))?;
    let t = linalg::random_cvec(rng, 1)[0];
    let q = ProjQuadric::new(b.matrix() + d.matrix() * t)?;
    Ok((b, q))
}

/// Alternates random pairs with pencils through a two-plane, which meet
/// the rank-two locus but not the rank-one locus.
pub fn constructed_non_basket_pair<R: Rng>(
    rng: &mut R,
    k: usize,
) -> Result<(ProjQuadric, ProjQuadric)> {
    let b = random_complex_quadric(rng)?;
    let q = if k % 2 == 0 {
        random_complex_quadric(rng)?
    } else {
        let r = ProjQuadric::rank_two(&random_vec4(rng), &random_vec4(rng))?;
        ProjQuadric::new(b.matrix() + r.matrix() * linalg::random_cvec(rng, 1)[0])?
    };
    Ok((b, q))
}

/// Two cones with a common vertex over conics with three distinct
/// two-lines, in a random projective frame.
pub fn fixed_vertex_cone_pair<R: Rng>(rng: &mut R) -> Result<(ProjQuadric, ProjQuadric)> {
    let a = Mat4::from_column_slice(&linalg::random_cvec(rng, 16));
    let w: [f64; 3] = [
        rng.random_range(0.5..1.5),
        rng.random_range(2.0..3.0),
        rng.random_range(3.5..5.0),
    ];
    let q1 = ProjQuadric::diag([1.0, 1.0, 1.0, 0.0])?.conjugate(&a)?;
    let q2 = ProjQuadric::diag([w[0], w[1], w[2], 0.0])?.conjugate(&a)?;
    Ok((q1, q2))
}

/// The edge-points pₖ and projections qₖ on a line of the plane of a
/// triangle of double-planes, seen from a random perspective centre.
pub fn perspective_parameters<R: Rng>(rng: &mut R) -> Result<([ProjPoint1; 3], [ProjPoint1; 3])> {
    let rc = |rng: &mut R| Coords3::from_column_slice(&linalg::random_cvec(rng, 3));
    let line = PlaneLine {
        e: rc(rng),
        f: rc(rng),
    };
    let b = rc(rng);
    let d = [Coords3::x(), Coords3::y(), Coords3::z()];
    let mut p = Vec::with_capacity(3);
    let mut q = Vec::with_capacity(3);
    for k in 0..3 {
        p.push(line.meet(&d[(k + 1) % 3], &d[(k + 2) % 3])?);
        q.push(line.meet(&b, &d[k])?);
    }
    Ok(([p[0], p[1], p[2]], [q[0], q[1], q[2]]))
}

pub fn random_spheres<R: Rng>(rng: &mut R) -> [Sphere; 4] {
    std::array::from_fn(|_| Sphere {
        center: [
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        ],
        radius: rng.random_range(0.3..2.0),
    })
}

/// Coplanar centers in a random plane; every third instance is a
/// parallelogram.
pub fn random_coplanar_spheres<R: Rng>(rng: &mut R, k: usize) -> [Sphere; 4] {
    let flat: [[f64; 2]; 4] = if k % 3 == 2 {
        let a = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let b = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        [a, b, [-a[0], -a[1]], [-b[0], -b[1]]]
    } else {
        std::array::from_fn(|_| [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)])
    };
    let rot = linalg::random_orthogonal(rng, 3);
    let rot = Matrix3::from_iterator(rot.iter().copied());
    let shift = Vector3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    std::array::from_fn(|i| Sphere {
        center: (rot * Vector3::new(flat[i][0], flat[i][1], 0.0) + shift).into(),
        radius: rng.random_range(0.3..2.0),
    })
}

/// Centers ±a, ±b in the plane z = 0, in the order a, b, −a, −b.
pub fn parallelogram(a: [f64; 2], b: [f64; 2], r: [f64; 4]) -> [Sphere; 4] {
    let c = [a, b, [-a[0], -a[1]], [-b[0], -b[1]]];
    std::array::from_fn(|i| Sphere {
        center: [c[i][0], c[i][1], 0.0],
        radius: r[i],
    })
}

pub fn on_axis(x: [f64; 4], r: [f64; 4]) -> [Sphere; 4] {
    std::array::from_fn(|i| Sphere {
        center: [x[i], 0.0, 0.0],
        radius: r[i],
    })
}

/// Collinear fixtures, one per class, with the class the classifier
/// should return.
pub fn collinear_fixtures() -> Vec<([Sphere; 4], DegenerateClass)> {
    let m = |a, b, c| Meridian { a, b, c };
    let x = [0.0, 1.0, 2.0, 3.0];
    let xc = [1.0, 2.0, 3.0, 4.0];
    let xr = [-1.0, 0.0, 2.0, 3.5];
    vec![
        (
            on_axis(xr, xr.map(|t: f64| ((t - 0.5).powi(2) + 1.0).sqrt())),
            DegenerateClass::CommonCircle {
                center_x: 0.5,
                rho: 1.0,
            },
        ),
        (
            on_axis(xr, xr.map(|t: f64| (t - 0.5).abs())),
            DegenerateClass::CommonPoint { x: 0.5 },
        ),
        (
            on_axis(x, [1.0; 4]),
            DegenerateClass::Cylinder(m(0.0, 0.0, 1.0)),
        ),
        (
            on_axis(xc, xc.map(|t| t / 2f64.sqrt())),
            DegenerateClass::Cone(m(1.0, 0.0, 0.0)),
        ),
        (
            on_axis(x, x.map(|t| (1.0 + t * t / 2.0).sqrt())),
            DegenerateClass::Hyperboloid(m(1.0, 0.0, 1.0)),
        ),
    ]
}

/// Largest coordinate difference between two classes of the same kind;
/// infinite when the kinds differ.
pub fn class_distance(a: &DegenerateClass, b: &DegenerateClass) -> f64 {
    use DegenerateClass::*;
    let md = |m: &Meridian, n: &Meridian| {
        (m.a - n.a)
            .abs()
            .max((m.b - n.b).abs())
            .max((m.c - n.c).abs())
    };
    match (a, b) {
        (
            CommonCircle {
                center_x: x,
                rho: r,
            },
            CommonCircle {
                center_x: y,
                rho: s,
            },
        ) => (x - y).abs().max((r - s).abs()),
        (CommonPoint { x }, CommonPoint { x: y }) => (x - y).abs(),
        (Cylinder(m), Cylinder(n))
        | (Cone(m), Cone(n))
        | (Hyperboloid(m), Hyperboloid(n))
        | (ComplexOnly(m), ComplexOnly(n)) => md(m, n),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    }
}

/// Foot of the perpendicular from the origin and ⟨v,v⟩ = 1 direction.
fn canonical(l: &PVLine) -> (Vector3<C64>, Vector3<C64>) {
    let v = l.v / l.v.dot(&l.v).sqrt();
    let p = l.p - v * l.p.dot(&v);
    (p, v)
}

fn line_distance(a: &PVLine, b: &PVLine) -> f64 {
    let (p, v) = canonical(a);
    let (q, w) = canonical(b);
    (p - q).norm() + (v - w).norm().min((v + w).norm())
}

/// Maps every tangent of `spheres` by x ↦ sRx + t and returns the largest
/// distance to the nearest tangent of the transformed configuration,
/// relative to the configuration scale.
pub fn similarity_defect<R: Rng>(
    rng: &mut R,
    spheres: &[Sphere; 4],
    opts: &SolveOptions,
) -> Result<f64> {
    let rot = linalg::random_orthogonal(rng, 3);
    let rot = Matrix3::from_iterator(rot.iter().copied());
    let shift = Vector3::new(
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
    );
    let s = rng.random_range(0.5..2.0);
    let a = solve(spheres, opts)?;
    let b = solve(&transform_spheres(spheres, &rot, &shift, s), opts)?;
    if a.tangents.tangents.len() != b.tangents.tangents.len() {
        return Ok(f64::INFINITY);
    }
    let rc = rot.map(|x| C64::new(x, 0.0));
    let tc = shift.map(|x| C64::new(x, 0.0));
    let scale = spheres
        .iter()
        .map(|x| x.c().norm() + x.radius)
        .fold(0.0, f64::max)
        * s;
    let mut worst: f64 = 0.0;
    for t in &a.tangents.tangents {
        let image = PVLine {
            p: rc * t.line.p * C64::new(s, 0.0) + tc,
            v: rc * t.line.v,
        };
        let best = b
            .tangents
            .tangents
            .iter()
            .map(|u: &TangentSolution| line_distance(&image, &u.line))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best / scale);
    }
    Ok(worst)
}

fn quadric_from(rows: [f64; 4]) -> ProjQuadric {
    ProjQuadric::diag(rows).expect("nonzero diagonal")
}

fn xx(i: usize, j: usize) -> Result<ProjQuadric> {
    let e = |k: usize| {
        Vec4::from_fn(|r, _| {
            if r == k {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    };
    if i == j {
        ProjQuadric::rank_one(&e(i))
    } else {
        ProjQuadric::rank_two(&e(i), &e(j))
    }
}

/// Constructed pencils in the rank strata with the expected counts of
/// rank-two points (fixed vertex) or double-planes (inside rank two).
pub fn census_fixtures() -> Result<Vec<(&'static str, Pencil, usize)>> {
    Ok(vec![
        (
            "fixed-vertex",
            Pencil::new(
                quadric_from([1.0, 1.0, 0.0, 0.0]),
                quadric_from([0.0, 1.0, 1.0, 0.0]),
            )?,
            3,
        ),
        (
            "fixed-vertex-diagonal",
            Pencil::new(
                quadric_from([1.0, 1.0, 1.0, 0.0]),
                quadric_from([1.0, 2.0, 3.0, 0.0]),
            )?,
            3,
        ),
        ("secant", Pencil::new(xx(0, 0)?, xx(1, 1)?)?, 2),
        ("moving-plane", Pencil::new(xx(0, 1)?, xx(0, 2)?)?, 0),
    ])
}

/// The observed count for a census fixture: rank-two points with
/// multiplicity for fixed-vertex pencils, double-planes otherwise.
pub fn census_count(p: &Pencil, tol: &Tolerances) -> Result<(usize, Option<RankTwoFamily>)> {
    Ok(match classify_singular_pencil(p, tol, 0)? {
        SingularPencilClass::FixedVertex {
            rank_two_points, ..
        } => (rank_two_points.iter().map(|x| x.1).sum(), None),
        SingularPencilClass::InRankTwo {
            family,
            double_planes,
        } => (double_planes.len(), Some(family)),
        SingularPencilClass::MovingVertex { .. } => (usize::MAX, None),
    })
}

fn check_or_fail(name: &str, threshold: f64, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|_| Check::failed(name, threshold))
}

/// Runs the invariant suite on small seeded ensembles. Rank decisions use
/// `tol.rank` and root clustering uses `tol.cluster`.
pub fn run_selfcheck(tol: &Tolerances, seed: u64) -> Vec<Check> {
    let opts = SolveOptions {
        seed,
        cluster: tol.cluster,
        ..SolveOptions::default()
    };
    let mut out = Vec::new();

    out.push(check_or_fail("spheres.det_identity", 1e-12, || {
        let mut r = rng(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let a = linalg::random_rvec(&mut r, 5);
            let sc = SphereCoords {
                a: [a[0], a[1], a[2], a[3], a[4]],
            };
            worst = worst.max(sc.det_identity_residual());
        }
        Ok(Check::below("spheres.det_identity", worst, 1e-12))
    }));

    out.push(check_or_fail("spheres.twelve_generic", 1e-7, || {
        let mut r = rng(seed.wrapping_add(1));
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let s = random_spheres(&mut r);
            let res = solve(&s, &opts)?;
            if res.tangents.complex_count() != 12 {
                return Ok(Check::failed("spheres.twelve_generic", 1e-7));
            }
            worst = worst.max(res.tangents.max_residual());
            for t in res.tangents.tangents.iter().filter(|t| t.is_real) {
                worst = worst.max(t.distance_error(&s));
            }
        }
        Ok(Check::below("spheres.twelve_generic", worst, 1e-7))
    }));

    out.push(check_or_fail("spheres.twelve_coplanar", 1e-7, || {
        let mut r = rng(seed.wrapping_add(2));
        let mut worst: f64 = 0.0;
        for k in 0..9 {
            let s = random_coplanar_spheres(&mut r, k);
            let set = common_tangents_coplanar(&s, &opts)?;
            if set.complex_count() + set.null_direction != 12 {
                return Ok(Check::failed("spheres.twelve_coplanar", 1e-7));
            }
            worst = worst.max(set.max_residual());
        }
        Ok(Check::below("spheres.twelve_coplanar", worst, 1e-7))
    }));

    out.push(check_or_fail("spheres.real_bound", 0.0, || {
        let mut r = rng(seed.wrapping_add(3));
        let mut violations = 0;
        for k in 0..40 {
            let s = if k % 2 == 0 {
                random_spheres(&mut r)
            } else {
                random_coplanar_spheres(&mut r, k)
            };
            if solve(&s, &opts)?.tangents.real_count() > 12 {
                violations += 1;
            }
        }
        Ok(Check::exact("spheres.real_bound", violations))
    }));

    out.push(check_or_fail("spheres.parallelogram_foot", 1e-9, || {
        let (a, b) = ([2.0, 1.0 / 3.0], [0.5, 1.5]);
        let radii = [1.0, 1.2, 0.7, 0.9];
        let set = common_tangents_coplanar(&parallelogram(a, b, radii), &opts)?;
        let foot = parallelogram_foot(a, b, radii).ok_or(Error::Singular)?;
        let worst = set
            .tangents
            .iter()
            .map(|t| {
                (t.line.p[0] - foot[0])
                    .norm()
                    .max((t.line.p[1] - foot[1]).norm())
            })
            .fold(0.0, f64::max);
        Ok(Check::below("spheres.parallelogram_foot", worst, 1e-9))
    }));

    out.push(check_or_fail("spheres.collinear_classes", 1e-8, || {
        let mut worst: f64 = 0.0;
        for (s, class) in collinear_fixtures() {
            let rep = classify_collinear(&s)?;
            if rep.classes.len() != 1 {
                return Ok(Check::failed("spheres.collinear_classes", 1e-8));
            }
            let c = &rep.classes[0];
            worst = worst
                .max(class_distance(&c.class, &class))
                .max(c.max_residual());
            if matches!(
                class,
                DegenerateClass::Cylinder(_)
                    | DegenerateClass::Cone(_)
                    | DegenerateClass::Hyperboloid(_)
            ) && c.lines.len() < 10
            {
                worst = f64::INFINITY;
            }
        }
        Ok(Check::below("spheres.collinear_classes", worst, 1e-8))
    }));

    out.push(check_or_fail("spheres.similarity", 1e-6, || {
        let mut r = rng(seed.wrapping_add(4));
        let mut worst: f64 = 0.0;
        for k in 0..4 {
            let s = if k % 2 == 0 {
                random_spheres(&mut r)
            } else {
                random_coplanar_spheres(&mut r, k)
            };
            worst = worst.max(similarity_defect(&mut r, &s, &opts)?);
        }
        Ok(Check::below("spheres.similarity", worst, 1e-6))
    }));

    out.push(check_or_fail("spheres.basket_conditions", 1e-9, || {
        let (hyper, _) = collinear_fixtures().swap_remove(4);
        let (cone, _) = collinear_fixtures().swap_remove(3);
        let quad = basket_conditions_spheres(&hyper)?;
        let triple = basket_conditions_spheres(&cone[..3])?;
        let worst = quad
            .conic_residual
            .unwrap_or(f64::INFINITY)
            .max(triple.span_residual)
            .max(triple.collinear_residual);
        Ok(Check::below("spheres.basket_conditions", worst, 1e-9))
    }));

    out.push(check_or_fail("baskets.pair_predicate", 0.0, || {
        let mut r = rng(seed.wrapping_add(5));
        let mut wrong = 0;
        for k in 0..50 {
            let (b, q) = constructed_basket_pair(&mut r)?;
            if is_basket_pair(&b, &q, tol)?.is_none() {
                wrong += 1;
            }
            let (b, q) = constructed_non_basket_pair(&mut r, k)?;
            if is_basket_pair(&b, &q, tol)?.is_some() {
                wrong += 1;
            }
        }
        Ok(Check::exact("baskets.pair_predicate", wrong))
    }));

    out.push(check_or_fail("baskets.basket_curves", 1e-8, || {
        let mut r = rng(seed.wrapping_add(6));
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let (q1, q2) = fixed_vertex_cone_pair(&mut r)?;
            let loci = common_basket_curves(&q1, &q2, tol)?;
            if loci.curves.len() != 3 {
                return Ok(Check::failed("baskets.basket_curves", 1e-8));
            }
            for curve in &loci.curves {
                let s = linalg::random_cvec(&mut r, 1)[0];
                let w = sample_basket(curve, s, tol)?;
                for q in [&q1, &q2] {
                    match is_basket_pair(&w.basket, q, tol)? {
                        Some(x) => worst = worst.max(x.residual),
                        None => worst = f64::INFINITY,
                    }
                }
            }
        }
        Ok(Check::below("baskets.basket_curves", worst, 1e-8))
    }));

    out.push(check_or_fail("baskets.c1_fixture", 1e-12, || {
        let pt = |x: f64| ProjPoint1::affine(C64::new(x, 0.0));
        let p = [pt(0.0), ProjPoint1::infinity(), pt(-1.0)];
        let q = [pt(-2.0), pt(-0.5), pt(1.0)];
        Ok(Check::below("baskets.c1_fixture", check_c1(&p, &q)?, 1e-12))
    }));

    out.push(check_or_fail("baskets.perspective_relation", 1e-9, || {
        let mut r = rng(seed.wrapping_add(7));
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let (p, q) = perspective_parameters(&mut r)?;
            worst = worst.max(perspective_relation(&p, &q)?);
        }
        Ok(Check::below("baskets.perspective_relation", worst, 1e-9))
    }));

    out.push(check_or_fail("baskets.desargues", 1e-9, || {
        let mut r = rng(seed.wrapping_add(8));
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let b = random_complex_quadric(&mut r)?;
            let mut q = Vec::new();
            let mut d = Vec::new();
            for _ in 0..3 {
                let di = ProjQuadric::rank_one(&random_vec4(&mut r))?;
                let t = linalg::random_cvec(&mut r, 1)[0];
                q.push(ProjQuadric::new(b.matrix() + di.matrix() * t)?);
                d.push(di);
            }
            let w = desargues_basket(&[q[0], q[1], q[2]], &[d[0], d[1], d[2]], tol)?;
            worst = worst.max(w.basket.dist(&b));
        }
        Ok(Check::below("baskets.desargues", worst, 1e-9))
    }));

    out.push(check_or_fail("baskets.reye", 0.0, || {
        let reye = standard_double_four()?;
        let inc = reye_incidence(&reye, tol.rank);
        let witnesses = reye.basket_witnesses(tol)?;
        let mut bad = witnesses.iter().filter(|w| w.is_none()).count();
        if !inc.ok || reye.points.len() != 12 || reye.lines.len() != 16 {
            bad += 1;
        }
        Ok(Check::exact("baskets.reye", bad))
    }));

    out.push(check_or_fail("baskets.double_five", 1e-9, || {
        let d = double_five(tol)?;
        let value = if d.pencils_with_rank_one == 25 {
            d.max_residual
        } else {
            f64::INFINITY
        };
        Ok(Check::below("baskets.double_five", value, 1e-9))
    }));

    out.push(check_or_fail("symqr.rank_census", 0.0, || {
        let mut bad = 0;
        for (_, p, expected) in census_fixtures()? {
            if census_count(&p, tol)?.0 != expected {
                bad += 1;
            }
        }
        Ok(Check::exact("symqr.rank_census", bad))
    }));

    out.push(check_or_fail("linegeom.duality", 1e-10, || {
        let mut r = rng(seed.wrapping_add(9));
        let mut worst =
            duality_identity_residual(&quadric_from([1.0, 2.0, 3.0, 4.0]), tol.rank)? * 1e4;
        for _ in 0..200 {
            worst = worst.max(duality_identity_residual(
                &random_real_quadric(&mut r)?,
                tol.rank,
            )?);
        }
        Ok(Check::below("linegeom.duality", worst, 1e-10))
    }));

    out.push(check_or_fail("linegeom.orthogonality", 1e-8, || {
        let mut r = rng(seed.wrapping_add(10));
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let q = random_real_quadric(&mut r)?;
            let l = random_tangent_line(&mut r, &q)?;
            let dual = dual_quadric(&q, tol.rank)?;
            worst = worst.max(tangency_residual(&plucker_orthogonal(&l), &dual));
        }
        Ok(Check::below("linegeom.orthogonality", worst, 1e-8))
    }));

    out.push(check_or_fail("linegeom.sixteen_tangents", 1e-8, || {
        let mut r = rng(seed.wrapping_add(11));
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let q1 = random_real_quadric(&mut r)?;
            let q2 = random_real_quadric(&mut r)?;
            let lines = ruling_tangency_points(&q1, &q2, tol)?;
            if lines.len() != 16 {
                return Ok(Check::failed("linegeom.sixteen_tangents", 1e-8));
            }
            for (i, l) in lines.iter().enumerate() {
                worst = worst
                    .max(tangency_residual(&l.line, &q1))
                    .max(tangency_residual(&l.line, &q2));
                if lines[i + 1..].iter().any(|m| m.line.dist(&l.line) < 1e-6) {
                    worst = f64::INFINITY;
                }
            }
        }
        Ok(Check::below("linegeom.sixteen_tangents", worst, 1e-8))
    }));

    out.push(check_or_fail("linegeom.pencil_continuum", 1e-7, || {
        let mut r = rng(seed.wrapping_add(12));
        let q1 = random_real_quadric(&mut r)?;
        let q2 = random_real_quadric(&mut r)?;
        let tangents = intersection_curve_tangents(&q1, &q2, 20, seed, tol)?;
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let z = linalg::random_cvec(&mut r, 2);
            let member = ProjQuadric::new(q1.matrix() * z[0] + q2.matrix() * z[1])?;
            for t in &tangents {
                worst = worst.max(tangency_residual(&t.line, &member));
            }
        }
        Ok(Check::below("linegeom.pencil_continuum", worst, 1e-7))
    }));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let checks = run_selfcheck(&Tolerances::default(), 0);
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn perspective_parameters_satisfy_the_product_relation() {
        let mut r = rng(3);
        let mut sums: f64 = 0.0;
        for _ in 0..10 {
            let (p, q) = perspective_parameters(&mut r).unwrap();
            assert!(perspective_relation(&p, &q).unwrap() < 1e-9);
            sums = sums.max(check_c1(&p, &q).unwrap());
        }
        assert!(sums > 1e-2);
    }

    #[test]
    fn tangent_lines_are_tangent() {
        let mut r = rng(4);
        let q = random_real_quadric(&mut r).unwrap();
        for _ in 0..10 {
            let l = random_tangent_line(&mut r, &q).unwrap();
            assert!(tangency_residual(&l, &q) < 1e-10);
        }
    }

    #[test]
    fn class_distance_separates_kinds() {
        let m = Meridian {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        assert_eq!(
            class_distance(&DegenerateClass::Cone(m), &DegenerateClass::Cone(m)),
            0.0
        );
        assert!(
            class_distance(&DegenerateClass::Cone(m), &DegenerateClass::Hyperboloid(m))
                .is_infinite()
        );
    }
}
