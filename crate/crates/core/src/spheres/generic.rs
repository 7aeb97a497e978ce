use nalgebra::{Matrix3, Vector3};

use super::geometry::{center_geometry, CenterGeometry};
use super::sphere::Sphere;
use super::system::{config_scale, finish, CVec3, Frame, SolveOptions, TangentSet};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::poly::{intersect_curves, FnCurve, IntersectOptions};

/// Relative size of ⟨v,v⟩ under which a direction counts as isotropic.
pub(crate) const NULL_GATE: f64 = 1e-8;

fn reorder(spheres: &[Sphere; 4], first: usize) -> [Sphere; 4] {
    let mut idx: Vec<usize> = vec![first];
    idx.extend((0..4).filter(|&k| k != first));
    [
        spheres[idx[0]],
        spheres[idx[1]],
        spheres[idx[2]],
        spheres[idx[3]],
    ]
}

fn conditioning(m: &Matrix3<f64>) -> f64 {
    let s = m.singular_values();
    s.min() / s.max()
}

fn center_matrix(c: &[Vector3<f64>; 4]) -> Matrix3<f64> {
    Matrix3::from_rows(&[c[1].transpose(), c[2].transpose(), c[3].transpose()])
}

fn cplx(v: &Vector3<f64>) -> CVec3 {
    v.map(|x| C64::new(x, 0.0))
}

/// The twelve tangents "away from infinity" of four spheres with affinely
/// independent centers: with c₀ at the origin, p = w(v)/(2⟨v,v⟩) where
/// w(v) = M⁻¹(Φ₂(v) + ⟨v,v⟩Φ₀), and v runs over the intersection of the
/// cubic ⟨w,v⟩ = 0 with the quartic ⟨w,w⟩ = 4r²⟨v,v⟩².
pub fn common_tangents_generic(spheres: &[Sphere; 4], opts: &SolveOptions) -> Result<TangentSet> {
    let geom = center_geometry(spheres)?;
    if geom.kind != CenterGeometry::Generic {
        return Err(Error::InvalidInput(format!(
            "centers are not affinely independent ({:?})",
            geom.kind
        )));
    }
    let scale = config_scale(spheres);
    let frame = (0..4)
        .map(|k| {
            let s = reorder(spheres, k);
            Frame::new(&s, s[0].c(), Matrix3::identity(), scale)
        })
        .max_by(|a, b| {
            conditioning(&center_matrix(&a.centers))
                .partial_cmp(&conditioning(&center_matrix(&b.centers)))
                .unwrap()
        })
        .unwrap();
    let m = center_matrix(&frame.centers);
    let minv = m
        .try_inverse()
        .ok_or(Error::Singular)?
        .map(|x| C64::new(x, 0.0));
    let r2 = frame.radii[0] * frame.radii[0];
    let cs: Vec<CVec3> = frame.centers[1..].iter().map(cplx).collect();
    let phi0 = CVec3::from_iterator((1..4).map(|i| {
        C64::new(
            frame.centers[i].norm_squared() + r2 - frame.radii[i] * frame.radii[i],
            0.0,
        )
    }));
    let w = |v: &CVec3| -> CVec3 {
        let n = v.dot(v);
        let phi2 = CVec3::from_iterator(cs.iter().map(|c| {
            let t = c.dot(v);
            -t * t
        }));
        minv * (phi2 + phi0 * n)
    };
    let cubic = FnCurve {
        degree: 3,
        f: |v: &CVec3| w(v).dot(v),
    };
    let quartic = FnCurve {
        degree: 4,
        f: |v: &CVec3| {
            let x = w(v);
            let n = v.dot(v);
            x.dot(&x) - C64::new(4.0 * r2, 0.0) * n * n
        },
    };
    let iopts = IntersectOptions {
        seed: opts.seed,
        tol_cluster: opts.cluster,
        ..IntersectOptions::default()
    };
    let points = intersect_curves(&cubic, &quartic, &iopts)?;
    let mut set = TangentSet {
        tangents: Vec::new(),
        bezout_total: points.iter().map(|p| p.multiplicity).sum(),
        null_direction: 0,
    };
    for pt in points {
        let v = pt.v;
        let n = v.dot(&v);
        if n.norm() < NULL_GATE * v.norm_squared() {
            set.null_direction += pt.multiplicity;
            continue;
        }
        let p = w(&v) / (n * C64::new(2.0, 0.0));
        set.tangents
            .push(finish(&frame, spheres, &p, &v, pt.multiplicity)?);
    }
    set.check(12)?;
    Ok(set)
}
