use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use super::generic::NULL_GATE;
use super::geometry::{center_geometry, CenterGeometry};
use super::sphere::Sphere;
use super::system::{config_scale, finish, CVec3, Frame, SolveOptions, TangentSet};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::poly::{intersect_curves, FnCurve, IntersectOptions};

type CVec2 = Vector2<C64>;

/// Below this |v₃|/‖v‖ a direction is treated as parallel to the plane of
/// the centers.
const FLAT_DIRECTION: f64 = 1e-7;

/// Orthonormal frame with third axis normal to the plane of the centers.
fn plane_rotation(c: &[Vector3<f64>; 4], first: usize) -> Matrix3<f64> {
    let d = Matrix3::from_rows(&[
        (c[(first + 1) % 4] - c[first]).transpose(),
        (c[(first + 2) % 4] - c[first]).transpose(),
        (c[(first + 3) % 4] - c[first]).transpose(),
    ]);
    let svd = d.svd(false, true);
    let vt = svd.v_t.unwrap();
    let k = (0..3)
        .min_by(|&a, &b| {
            svd.singular_values[a]
                .partial_cmp(&svd.singular_values[b])
                .unwrap()
        })
        .unwrap();
    let e3: Vector3<f64> = vt.row(k).transpose().normalize();
    let e1 = {
        let x = d.row(0).transpose();
        (x - e3 * e3.dot(&x)).normalize()
    };
    let e2 = e3.cross(&e1);
    Matrix3::from_columns(&[e1, e2, e3])
}

/// Labelling (origin, first, second, third) that best conditions the 2×2
/// block of center differences.
fn best_labelling(c: &[Vector3<f64>; 4]) -> [usize; 4] {
    let mut best = ([0, 1, 2, 3], -1.0);
    for o in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&k| k != o).collect();
        for third in 0..3 {
            let pair: Vec<usize> = (0..3).filter(|&k| k != third).map(|k| others[k]).collect();
            let a = c[pair[0]] - c[o];
            let b = c[pair[1]] - c[o];
            let q = a.cross(&b).norm() / (a.norm() * b.norm()).max(f64::MIN_POSITIVE);
            if q > best.1 {
                best = ([o, pair[0], pair[1], others[third]], q);
            }
        }
    }
    best.0
}

/// Common tangents for four spheres with coplanar centers, no three
/// collinear: the conic E₂ from a kernel vector of Mᵗ meets the sextic E₆
/// in twelve points counting multiplicity. Isotropic intersection points
/// are counted in `null_direction` and carry no line.
pub fn common_tangents_coplanar(spheres: &[Sphere; 4], opts: &SolveOptions) -> Result<TangentSet> {
    let geom = center_geometry(spheres)?;
    match geom.kind {
        CenterGeometry::Coplanar {
            three_collinear: false,
        } => {}
        CenterGeometry::Coplanar {
            three_collinear: true,
        } => return Err(Error::ThreeCollinear),
        k => {
            return Err(Error::InvalidInput(format!(
                "centers are not coplanar ({k:?})"
            )))
        }
    }
    coplanar_unchecked(spheres, opts)
}

pub(crate) fn coplanar_unchecked(spheres: &[Sphere; 4], opts: &SolveOptions) -> Result<TangentSet> {
    let c = spheres.map(|s| s.c());
    let order = best_labelling(&c);
    let ordered = order.map(|k| spheres[k]);
    let rot = plane_rotation(&c, order[0]);
    let frame = Frame::new(&ordered, ordered[0].c(), rot, config_scale(spheres));
    let planar: Vec<Vector2<f64>> = frame
        .centers
        .iter()
        .map(|x| Vector2::new(x[0], x[1]))
        .collect();
    let m12 = Matrix2::from_rows(&[planar[1].transpose(), planar[2].transpose()]);
    let m12inv = m12
        .try_inverse()
        .ok_or(Error::ThreeCollinear)?
        .map(|x| C64::new(x, 0.0));
    let k = Vector3::new(planar[1][0], planar[2][0], planar[3][0]).cross(&Vector3::new(
        planar[1][1],
        planar[2][1],
        planar[3][1],
    ));
    let k = k.map(|x| C64::new(x, 0.0));
    let r2 = frame.radii[0] * frame.radii[0];
    let phi0 = CVec3::from_iterator((1..4).map(|i| {
        C64::new(
            planar[i].norm_squared() + r2 - frame.radii[i] * frame.radii[i],
            0.0,
        )
    }));
    let cs: Vec<CVec2> = planar[1..]
        .iter()
        .map(|x| x.map(|t| C64::new(t, 0.0)))
        .collect();
    let phi2 = |v: &CVec3| -> CVec3 {
        let v12 = CVec2::new(v[0], v[1]);
        CVec3::from_iterator(cs.iter().map(|c| {
            let t = c.dot(&v12);
            -t * t
        }))
    };
    let psi0 = m12inv * CVec2::new(phi0[0], phi0[1]);
    let big_w = |v: &CVec3| -> CVec2 {
        let f = phi2(v);
        m12inv * CVec2::new(f[0], f[1]) + psi0 * v.dot(v)
    };
    let conic = FnCurve {
        degree: 2,
        f: |v: &CVec3| phi2(v).dot(&k) + v.dot(v) * phi0.dot(&k),
    };
    let sextic = FnCurve {
        degree: 6,
        f: |v: &CVec3| {
            let w = big_w(v);
            let v12 = CVec2::new(v[0], v[1]);
            let n = v.dot(v);
            let t = w.dot(&v12);
            v[2] * v[2] * (w.dot(&w) - C64::new(4.0 * r2, 0.0) * n * n) + t * t
        },
    };
    let iopts = IntersectOptions {
        seed: opts.seed,
        tol_cluster: opts.cluster,
        ..IntersectOptions::default()
    };
    let points = intersect_curves(&conic, &sextic, &iopts)?;
    let mut set = TangentSet {
        tangents: Vec::new(),
        bezout_total: points.iter().map(|p| p.multiplicity).sum(),
        null_direction: 0,
    };
    let two = C64::new(2.0, 0.0);
    for pt in points {
        let v = pt.v;
        let n = v.dot(&v);
        if n.norm() < NULL_GATE * v.norm_squared() {
            set.null_direction += pt.multiplicity;
            continue;
        }
        let p12 = big_w(&v) / (two * n);
        let v12 = CVec2::new(v[0], v[1]);
        if v[2].norm() > FLAT_DIRECTION * v.norm() {
            let p = CVec3::new(p12[0], p12[1], -p12.dot(&v12) / v[2]);
            set.tangents
                .push(finish(&frame, spheres, &p, &v, pt.multiplicity)?);
        } else {
            // a direction parallel to the plane: the two mirror lines share v
            let h = (C64::new(r2, 0.0) - p12.dot(&p12)).sqrt();
            let half = pt.multiplicity.div_ceil(2);
            for (sign, mult) in [(1.0, half), (-1.0, pt.multiplicity - half)] {
                if mult == 0 {
                    continue;
                }
                let p = CVec3::new(p12[0], p12[1], h * sign);
                set.tangents.push(finish(&frame, spheres, &p, &v, mult)?);
            }
        }
    }
    set.check(12)?;
    Ok(set)
}

/// For centers ±a, ±b of a parallelogram (spheres 1..4 in that order) the
/// in-plane part of the foot p of every tangent solves
/// 4⟨a,p⟩ = r₃² − r₁², 4⟨b,p⟩ = r₄² − r₂².
pub fn parallelogram_foot(a: [f64; 2], b: [f64; 2], r: [f64; 4]) -> Option<[f64; 2]> {
    let m = Matrix2::new(a[0], a[1], b[0], b[1]);
    let rhs = Vector2::new(
        (r[2] * r[2] - r[0] * r[0]) / 4.0,
        (r[3] * r[3] - r[1] * r[1]) / 4.0,
    );
    let x = m.try_inverse()? * rhs;
    Some([x[0], x[1]])
}
