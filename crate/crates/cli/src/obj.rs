//! Wavefront OBJ export: spheres as icospheres, real tangent lines as
//! segments clipped to a box around the configuration.

use std::collections::HashMap;
use std::fmt::Write;

use tangentloci::spheres::{SolveResult, Sphere};

type P3 = [f64; 3];

const SUBDIVISIONS: usize = 2;
/// Half-width of the clipping box in units of the configuration radius.
const BOX_FACTOR: f64 = 3.0;

fn normalize(p: P3) -> P3 {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

/// Unit icosphere: vertices and triangles (0-based).
pub fn icosphere(subdivisions: usize) -> (Vec<P3>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<P3> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .into_iter()
    .map(normalize)
    .collect();
    let mut faces = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<P3>| -> usize {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (verts, faces)
}

/// Centroid of the centers and the radius of a ball holding all spheres.
pub fn bounds(spheres: &[Sphere]) -> (P3, f64) {
    let n = spheres.len() as f64;
    let c: P3 = std::array::from_fn(|i| spheres.iter().map(|s| s.center[i]).sum::<f64>() / n);
    let r = spheres
        .iter()
        .map(|s| {
            let d: f64 = (0..3).map(|i| (s.center[i] - c[i]).powi(2)).sum::<f64>().sqrt();
            d + s.radius
        })
        .fold(0.0, f64::max);
    (c, r)
}

/// The part of the line p + t·v inside the axis-aligned cube of half-width
/// `half` around `c`.
pub fn clip(p: P3, v: P3, c: P3, half: f64) -> Option<(P3, P3)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..3 {
        let (a, b) = (c[i] - half - p[i], c[i] + half - p[i]);
        if v[i].abs() < 1e-300 {
            if a > 0.0 || b < 0.0 {
                return None;
            }
            continue;
        }
        let (t1, t2) = (a / v[i], b / v[i]);
        lo = lo.max(t1.min(t2));
        hi = hi.min(t1.max(t2));
    }
    if lo >= hi {
        return None;
    }
    let at = |t: f64| -> P3 { std::array::from_fn(|i| p[i] + v[i] * t) };
    Some((at(lo), at(hi)))
}

pub fn scene(solved: &[([Sphere; 4], SolveResult)]) -> String {
    let (unit, faces) = icosphere(SUBDIVISIONS);
    let mut out = String::from("# spheres and real common tangent lines\n");
    let mut base = 1;
    for (k, (spheres, res)) in solved.iter().enumerate() {
        for (j, s) in spheres.iter().enumerate() {
            writeln!(out, "o instance{k}_sphere{j}").unwrap();
            for u in &unit {
                let q: P3 = std::array::from_fn(|i| s.center[i] + s.radius * u[i]);
                writeln!(out, "v {:.9} {:.9} {:.9}", q[0], q[1], q[2]).unwrap();
            }
            for f in &faces {
                writeln!(out, "f {} {} {}", f[0] + base, f[1] + base, f[2] + base).unwrap();
            }
            base += unit.len();
        }
        let (c, r) = bounds(spheres);
        let mut lines: Vec<(P3, P3)> = res
            .tangents
            .tangents
            .iter()
            .filter(|t| t.is_real)
            .map(|t| t.line.real_parts())
            .collect();
        if let Some(d) = &res.degenerate {
            lines.extend(d.sample_tangents().map(|l| (l.p, l.v)));
        }
        for (j, (p, v)) in lines.into_iter().enumerate() {
            if let Some((a, b)) = clip(p, v, c, BOX_FACTOR * r) {
                writeln!(out, "o instance{k}_tangent{j}").unwrap();
                writeln!(out, "v {:.9} {:.9} {:.9}", a[0], a[1], a[2]).unwrap();
                writeln!(out, "v {:.9} {:.9} {:.9}", b[0], b[1], b[2]).unwrap();
                writeln!(out, "l {} {}", base, base + 1).unwrap();
                base += 2;
            }
        }
    }
    out
}
