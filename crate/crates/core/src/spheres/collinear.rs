use nalgebra::{Matrix4x3, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use super::geometry::{center_geometry, CenterGeometry};
use super::sphere::Sphere;
use super::system::validate;
use crate::error::{Error, Result};
use crate::linegeom::PVLine;

/// Relative tolerance of the classifier, in units of the axial spread.
pub const CLASS_TOL: f64 = 1e-9;
/// Number of lines sampled per infinite family.
pub const SAMPLES: usize = 10;

/// Meridian y² = Ax² + Bx + C of a quadric of revolution about the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Meridian {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DegenerateClass {
    CommonCircle { center_x: f64, rho: f64 },
    CommonPoint { x: f64 },
    Cylinder(Meridian),
    Cone(Meridian),
    Hyperboloid(Meridian),
    ComplexOnly(Meridian),
    None,
}

impl DegenerateClass {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CommonCircle { .. } => "CommonCircle",
            Self::CommonPoint { .. } => "CommonPoint",
            Self::Cylinder(_) => "Cylinder",
            Self::Cone(_) => "Cone",
            Self::Hyperboloid(_) => "Hyperboloid",
            Self::ComplexOnly(_) => "ComplexOnly",
            Self::None => "None",
        }
    }

    /// Whether the class carries infinitely many real common tangents.
    pub fn is_infinite(&self) -> bool {
        !matches!(self, Self::ComplexOnly(_) | Self::None)
    }
}

/// The line through the centers, with abscissa x measured from the foot of
/// the world origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub origin: [f64; 3],
    pub direction: [f64; 3],
}

impl Axis {
    fn o(&self) -> Vector3<f64> {
        Vector3::from(self.origin)
    }

    fn d(&self) -> Vector3<f64> {
        Vector3::from(self.direction)
    }

    pub fn abscissa(&self, x: &Vector3<f64>) -> f64 {
        (x - self.o()).dot(&self.d())
    }

    /// Orthonormal completion (e₂, e₃) of the direction.
    fn normals(&self) -> (Vector3<f64>, Vector3<f64>) {
        let d = self.d();
        let pick = if d[0].abs() < 0.9 {
            Vector3::x()
        } else {
            Vector3::y()
        };
        let e2 = (pick - d * d.dot(&pick)).normalize();
        (e2, d.cross(&e2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledLine {
    pub p: [f64; 3],
    pub v: [f64; 3],
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSamples {
    pub class: DegenerateClass,
    pub lines: Vec<SampledLine>,
}

impl ClassSamples {
    pub fn max_residual(&self) -> f64 {
        self.lines.iter().map(|l| l.residual).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateReport {
    pub axis: Axis,
    pub classes: Vec<ClassSamples>,
}

impl DegenerateReport {
    pub fn has_infinite_family(&self) -> bool {
        self.classes.iter().any(|c| c.class.is_infinite())
    }

    pub fn sample_tangents(&self) -> impl Iterator<Item = &SampledLine> {
        self.classes.iter().flat_map(|c| c.lines.iter())
    }
}

fn axis_of(spheres: &[Sphere; 4]) -> Axis {
    let c = spheres.map(|s| s.c());
    let mut best = (0, 1, 0.0);
    for i in 0..4 {
        for j in i + 1..4 {
            let d = (c[j] - c[i]).norm();
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let d = (c[best.1] - c[best.0]).normalize();
    let o = c[best.0] - d * c[best.0].dot(&d);
    Axis {
        origin: o.into(),
        direction: d.into(),
    }
}

/// Abscissa of the radical plane of two coaxal spheres.
pub fn radical_abscissa(xi: f64, ri: f64, xj: f64, rj: f64) -> f64 {
    ((xi * xi - xj * xj) - (ri * ri - rj * rj)) / (2.0 * (xi - xj))
}

fn common_circle(x: &[f64; 4], r: &[f64; 4], spread: f64) -> Option<DegenerateClass> {
    let mut xs = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            xs.push(radical_abscissa(x[i], r[i], x[j], r[j]));
        }
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.iter().any(|v| (v - mean).abs() > CLASS_TOL * spread) {
        return None;
    }
    let rho2 = r[0] * r[0] - (mean - x[0]).powi(2);
    if rho2.abs() <= CLASS_TOL * spread * spread {
        Some(DegenerateClass::CommonPoint { x: mean })
    } else if rho2 > 0.0 {
        Some(DegenerateClass::CommonCircle {
            center_x: mean,
            rho: rho2.sqrt(),
        })
    } else {
        None
    }
}

/// Solves u + 4A(rᵢ² − xᵢ²) − 4Bxᵢ = −4rᵢ² for (u, A, B), which says the
/// meridian circle of each sphere touches y² = Ax² + Bx + C doubly, with
/// u = B² − 4(A+1)C. Coordinates are pre-scaled by the axial spread.
pub fn basket_meridian(x: &[f64; 4], r: &[f64; 4]) -> Option<Meridian> {
    let spread = x
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(r.iter().fold(0.0f64, |m, v| m.max(*v)));
    let (xs, rs) = (x.map(|v| v / spread), r.map(|v| v / spread));
    let m = Matrix4x3::from_fn(|i, j| match j {
        0 => 1.0,
        1 => 4.0 * (rs[i] * rs[i] - xs[i] * xs[i]),
        _ => -4.0 * xs[i],
    });
    let rhs = Vector4::from_fn(|i, _| -4.0 * rs[i] * rs[i]);
    let svd = m.svd(true, true);
    let sv = svd.singular_values;
    if sv.min() <= CLASS_TOL * sv.max() {
        return None;
    }
    let sol = svd.solve(&rhs, 0.0).ok()?;
    if (m * sol - rhs).norm() > CLASS_TOL * rhs.norm().max(1.0) {
        return None;
    }
    let (u, a, b) = (sol[0], sol[1], sol[2]);
    if (a + 1.0).abs() <= CLASS_TOL {
        return None;
    }
    let c = (b * b - u) / (4.0 * (a + 1.0));
    Some(Meridian {
        a,
        b: b * spread,
        c: c * spread * spread,
    })
}

/// (B − 2x)² − 4(A+1)(C + x² − r²): zero when the meridian circle of the
/// sphere at abscissa x touches the meridian doubly.
pub fn tangency_discriminant(m: &Meridian, x: f64, r: f64) -> f64 {
    (m.b - 2.0 * x).powi(2) - 4.0 * (m.a + 1.0) * (m.c + x * x - r * r)
}

fn classify_meridian(m: Meridian, spread: f64) -> DegenerateClass {
    let tol = CLASS_TOL;
    let b = m.b / spread;
    let c = m.c / (spread * spread);
    if m.a.abs() <= tol && b.abs() <= tol {
        if c > tol {
            DegenerateClass::Cylinder(m)
        } else {
            DegenerateClass::ComplexOnly(m)
        }
    } else if m.a > tol {
        let neck = c - b * b / (4.0 * m.a);
        if neck.abs() <= tol {
            DegenerateClass::Cone(m)
        } else if neck > 0.0 {
            DegenerateClass::Hyperboloid(m)
        } else {
            DegenerateClass::ComplexOnly(m)
        }
    } else {
        DegenerateClass::ComplexOnly(m)
    }
}

fn sample_line(spheres: &[Sphere; 4], p: Vector3<f64>, v: Vector3<f64>) -> Result<SampledLine> {
    let line = PVLine::real(p.into(), v.into())?;
    let sol = validate(spheres, line, 1)?;
    let (p, v) = line.real_parts();
    Ok(SampledLine {
        p,
        v,
        residual: sol.max_residual(),
    })
}

fn samples(
    spheres: &[Sphere; 4],
    axis: &Axis,
    class: &DegenerateClass,
    x: &[f64; 4],
) -> Result<Vec<SampledLine>> {
    let (e2, e3) = axis.normals();
    let (o, d) = (axis.o(), axis.d());
    let angle = |k: usize| 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / SAMPLES as f64;
    let mut out = Vec::with_capacity(SAMPLES);
    match *class {
        DegenerateClass::CommonCircle { center_x, rho } => {
            for k in 0..SAMPLES {
                let (s, c) = angle(k).sin_cos();
                let p = o + d * center_x + (e2 * c + e3 * s) * rho;
                out.push(sample_line(spheres, p, e3 * c - e2 * s)?);
            }
        }
        DegenerateClass::CommonPoint { x } => {
            for k in 0..SAMPLES {
                let (s, c) = angle(k).sin_cos();
                out.push(sample_line(spheres, o + d * x, e2 * c + e3 * s)?);
            }
        }
        DegenerateClass::Cylinder(m)
        | DegenerateClass::Cone(m)
        | DegenerateClass::Hyperboloid(m) => {
            // a point of the contact circle of the first sphere
            let x0 = (2.0 * x[0] - m.b) / (2.0 * (1.0 + m.a));
            let rho0 = (m.a * x0 * x0 + m.b * x0 + m.c).max(0.0).sqrt();
            if rho0 == 0.0 {
                return Err(Error::NoSolution);
            }
            let slope = (2.0 * m.a * x0 + m.b) / (2.0 * rho0);
            let twist = (m.a - slope * slope).max(0.0).sqrt();
            for k in 0..SAMPLES {
                let (s, c) = angle(k).sin_cos();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let radial = e2 * c + e3 * s;
                let tangential = e3 * c - e2 * s;
                let p = o + d * x0 + radial * rho0;
                out.push(sample_line(
                    spheres,
                    p,
                    d + radial * slope + tangential * (twist * sign),
                )?);
            }
        }
        DegenerateClass::ComplexOnly(_) | DegenerateClass::None => {}
    }
    Ok(out)
}

/// Degenerate configurations of four spheres with collinear centers: a
/// common circle or point, or a common real basket of revolution (cylinder,
/// cone, one-sheeted hyperboloid), each certified by sampled tangents.
pub fn classify_collinear(spheres: &[Sphere; 4]) -> Result<DegenerateReport> {
    if center_geometry(spheres)?.kind != CenterGeometry::Collinear {
        return Err(Error::InvalidInput("centers are not collinear".into()));
    }
    let axis = axis_of(spheres);
    let x = spheres.map(|s| axis.abscissa(&s.c()));
    let r = spheres.map(|s| s.radius);
    let spread = x
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(r.iter().fold(0.0f64, |m, v| m.max(*v)));
    let mut found = Vec::new();
    if let Some(c) = common_circle(&x, &r, spread) {
        found.push(c);
    }
    if let Some(m) = basket_meridian(&x, &r) {
        found.push(classify_meridian(m, spread));
    }
    if found.is_empty() {
        found.push(DegenerateClass::None);
    }
    let classes = found
        .into_iter()
        .map(|class| {
            Ok(ClassSamples {
                lines: samples(spheres, &axis, &class, &x)?,
                class,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DegenerateReport { axis, classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on_axis(x: [f64; 4], r: [f64; 4]) -> [Sphere; 4] {
        std::array::from_fn(|i| Sphere::new([x[i], 0.0, 0.0], r[i]).unwrap())
    }

    fn only(report: &DegenerateReport) -> &ClassSamples {
        assert_eq!(report.classes.len(), 1, "{report:?}");
        &report.classes[0]
    }

    fn close(m: &Meridian, a: f64, b: f64, c: f64) -> bool {
        (m.a - a).abs() < 1e-8 && (m.b - b).abs() < 1e-8 && (m.c - c).abs() < 1e-8
    }

    #[test]
    fn cylinder() {
        let rep = classify_collinear(&on_axis([0.0, 1.0, 2.0, 3.0], [1.0; 4])).unwrap();
        let c = only(&rep);
        assert!(matches!(c.class, DegenerateClass::Cylinder(m) if close(&m, 0.0, 0.0, 1.0)));
        assert!(c.lines.len() >= 10 && c.max_residual() < 1e-8);
    }

    #[test]
    fn cone() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let rep = classify_collinear(&on_axis(x, x.map(|t| t / 2f64.sqrt()))).unwrap();
        let c = only(&rep);
        assert!(
            matches!(c.class, DegenerateClass::Cone(m) if close(&m, 1.0, 0.0, 0.0)),
            "{c:?}"
        );
        assert!(c.lines.len() >= 10 && c.max_residual() < 1e-8);
    }

    #[test]
    fn hyperboloid() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let rep = classify_collinear(&on_axis(x, x.map(|t| (1.0 + t * t / 2.0).sqrt()))).unwrap();
        let c = only(&rep);
        assert!(
            matches!(c.class, DegenerateClass::Hyperboloid(m) if close(&m, 1.0, 0.0, 1.0)),
            "{c:?}"
        );
        assert!(c.lines.len() >= 10 && c.max_residual() < 1e-8);
    }

    #[test]
    fn circle_and_point() {
        // spheres through the circle x = 0.5, ρ = 1
        let x = [-1.0, 0.0, 2.0, 3.5];
        let r = x.map(|t: f64| ((t - 0.5).powi(2) + 1.0).sqrt());
        let rep = classify_collinear(&on_axis(x, r)).unwrap();
        let c = only(&rep);
        assert!(
            matches!(c.class, DegenerateClass::CommonCircle { center_x, rho } if (center_x - 0.5).abs() < 1e-8 && (rho - 1.0).abs() < 1e-8)
        );
        assert!(c.max_residual() < 1e-8);
        let r = x.map(|t: f64| (t - 0.5).abs());
        let rep = classify_collinear(&on_axis(x, r)).unwrap();
        let c = only(&rep);
        assert!(matches!(c.class, DegenerateClass::CommonPoint { x } if (x - 0.5).abs() < 1e-8));
        assert!(c.max_residual() < 1e-8);
    }

    #[test]
    fn incompatible_radii() {
        let rep = classify_collinear(&on_axis([0.0, 1.0, 2.0, 3.0], [1.0, 0.5, 2.0, 0.7])).unwrap();
        assert!(!rep.has_infinite_family());
    }

    #[test]
    fn off_origin_axis() {
        // cylinder about the line through (1,2,3) with direction (1,1,0)/√2
        let d = Vector3::new(1.0, 1.0, 0.0).normalize();
        let s: [Sphere; 4] = std::array::from_fn(|i| {
            Sphere::new((Vector3::new(1.0, 2.0, 3.0) + d * i as f64).into(), 0.7).unwrap()
        });
        let rep = classify_collinear(&s).unwrap();
        let c = only(&rep);
        assert!(matches!(c.class, DegenerateClass::Cylinder(m) if close(&m, 0.0, 0.0, 0.49)));
        assert!(c.max_residual() < 1e-8);
    }

    #[test]
    fn discriminant_vanishes_on_fixtures() {
        let cyl = Meridian {
            a: 0.0,
            b: 0.0,
            c: 1.0,
        };
        let cone = Meridian {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        let hyp = Meridian {
            a: 1.0,
            b: 0.0,
            c: 1.0,
        };
        for x in [0.0f64, 1.0, 2.0, 3.0] {
            assert_eq!(tangency_discriminant(&cyl, x, 1.0), 0.0);
            assert!(tangency_discriminant(&cone, x, x / 2f64.sqrt()).abs() < 1e-14);
            assert!(tangency_discriminant(&hyp, x, (1.0 + x * x / 2.0).sqrt()).abs() < 1e-13);
        }
    }
}
