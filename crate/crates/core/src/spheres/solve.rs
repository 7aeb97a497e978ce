use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::collinear::{classify_collinear, DegenerateReport};
use super::coplanar::{common_tangents_coplanar, coplanar_unchecked};
use super::generic::common_tangents_generic;
use super::geometry::{center_geometry, coincident_centers, CenterGeometry, GeometryReport};
use super::sphere::Sphere;
use super::system::{
    config_scale, finish, CVec3, Frame, SolveOptions, TangentSet, TangentSolution,
};
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Frame changes tried before a count defect is reported.
const RETRIES: u64 = 3;
/// Relative size of the center perturbation used by the fallback.
const PERTURBATION: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Generic,
    Coplanar,
    Collinear,
    Concentric,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Generic => "generic",
            Self::Coplanar => "coplanar",
            Self::Collinear => "collinear",
            Self::Concentric => "concentric",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub regime: Regime,
    pub geometry: Option<GeometryReport>,
    pub tangents: TangentSet,
    pub degenerate: Option<DegenerateReport>,
    pub warnings: Vec<String>,
    pub options: SolveOptions,
}

fn empty_set() -> TangentSet {
    TangentSet {
        tangents: Vec::new(),
        bezout_total: 0,
        null_direction: 0,
    }
}

fn with_retries(
    opts: &SolveOptions,
    f: impl Fn(&SolveOptions) -> Result<TangentSet>,
) -> Result<TangentSet> {
    let mut last = Error::EliminationFailed(0);
    for k in 0..RETRIES {
        let o = SolveOptions {
            seed: opts.seed.wrapping_add(k),
            ..*opts
        };
        match f(&o) {
            Ok(set) => return Ok(set),
            Err(e @ (Error::DefectiveCount { .. } | Error::EliminationFailed(_))) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Solves a slightly perturbed configuration and keeps the solutions that
/// Newton refinement pulls back onto the original spheres.
pub fn perturbation_fallback(
    spheres: &[Sphere; 4],
    opts: &SolveOptions,
) -> Result<Vec<TangentSolution>> {
    let scale = config_scale(spheres);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let moved: [Sphere; 4] = spheres.map(|s| {
        let mut c = s.center;
        for x in c.iter_mut() {
            *x += PERTURBATION * scale * rng.random_range(-1.0..1.0);
        }
        Sphere {
            center: c,
            radius: s.radius,
        }
    });
    let set = with_retries(opts, |o| common_tangents_generic(&moved, o))?;
    let frame = Frame::new(spheres, spheres[0].c(), Matrix3::identity(), scale);
    let mut kept: Vec<TangentSolution> = Vec::new();
    for t in set.tangents {
        let to_frame = |x: &CVec3| x.map(|z| z / C64::new(scale, 0.0));
        let origin = frame.origin.map(|x| C64::new(x, 0.0));
        let p = to_frame(&(t.line.p - origin));
        let sol = finish(&frame, spheres, &p, &t.line.v, t.multiplicity)?;
        if sol.max_residual() < opts.accept {
            kept.push(sol);
        }
    }
    Ok(kept)
}

/// Common tangent lines to four spheres, dispatched on the position of the
/// centers.
pub fn solve(spheres: &[Sphere; 4], opts: &SolveOptions) -> Result<SolveResult> {
    for s in spheres {
        s.validate()?;
    }
    let mut warnings = Vec::new();
    let pairs = coincident_centers(spheres);
    if !pairs.is_empty() {
        for &(i, j) in &pairs {
            if (spheres[i].radius - spheres[j].radius).abs() <= 1e-12 * spheres[i].radius {
                return Err(Error::InvalidInput(format!(
                    "spheres {i} and {j} are identical"
                )));
            }
        }
        warnings.push("concentric spheres have no common tangent line in the affine part".into());
        return Ok(SolveResult {
            regime: Regime::Concentric,
            geometry: None,
            tangents: empty_set(),
            degenerate: None,
            warnings,
            options: *opts,
        });
    }
    let geometry = center_geometry(spheres)?;
    if geometry.borderline {
        warnings
            .push("BorderlineGeometry: center configuration is close to a regime boundary".into());
    }
    let (regime, tangents, degenerate) = match geometry.kind {
        CenterGeometry::Generic => {
            let set = with_retries(opts, |o| common_tangents_generic(spheres, o))?;
            (Regime::Generic, set, None)
        }
        CenterGeometry::Coplanar {
            three_collinear: false,
        } => {
            let set = with_retries(opts, |o| common_tangents_coplanar(spheres, o))?;
            (Regime::Coplanar, set, None)
        }
        CenterGeometry::Coplanar {
            three_collinear: true,
        } => {
            warnings.push("three centers are collinear".into());
            match with_retries(opts, |o| coplanar_unchecked(spheres, o)) {
                Ok(set) => (Regime::Coplanar, set, None),
                Err(_) => {
                    warnings.push("perturbation fallback used".into());
                    let tangents = perturbation_fallback(spheres, opts)?;
                    let mut set = empty_set();
                    set.tangents = tangents;
                    (Regime::Coplanar, set, None)
                }
            }
        }
        CenterGeometry::Collinear => {
            let report = classify_collinear(spheres)?;
            let mut set = empty_set();
            if !report.has_infinite_family() {
                set.tangents = perturbation_fallback(spheres, opts).unwrap_or_default();
                if !set.tangents.is_empty() {
                    warnings.push("finite tangents found by perturbation fallback".into());
                }
            }
            (Regime::Collinear, set, Some(report))
        }
    };
    Ok(SolveResult {
        regime,
        geometry: Some(geometry),
        tangents,
        degenerate,
        warnings,
        options: *opts,
    })
}

/// Applies x ↦ s·R·x + t to the spheres.
pub fn transform_spheres(
    spheres: &[Sphere; 4],
    rot: &Matrix3<f64>,
    shift: &Vector3<f64>,
    s: f64,
) -> [Sphere; 4] {
    spheres.map(|sp| Sphere {
        center: (rot * sp.c() * s + shift).into(),
        radius: sp.radius * s,
    })
}
