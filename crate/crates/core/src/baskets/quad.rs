use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::conic::{self, ConicFrame, Coords3};
use super::space;
use super::triple::trio_of_double_planes;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::symqr::{
    classify_singular_pencil, cross_ratio_value, Pencil, ProjPoint1, ProjQuadric, RankProfile,
    SingularPencilClass, Vec4,
};

/// Vertex order: p₁₂, p₁₃, p₁₄, p₂₃, p₂₄, p₃₄, with p_ij = ℓ_i ∩ ℓ_j.
pub const QUAD_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    QUAD_PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .expect("distinct indices below 4")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadrilateralClass {
    Typical,
    Special,
    Solvable,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadVertex {
    pub quadric: ProjQuadric,
    pub profile: RankProfile,
}

/// Four pencils in a plane of quadric space, no three concurrent.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteQuadrilateral {
    pub plane: [ProjQuadric; 3],
    pub lines: [[ProjQuadric; 2]; 4],
    pub vertices: [QuadVertex; 6],
    pub classification: QuadrilateralClass,
}

impl CompleteQuadrilateral {
    /// Builds the vertices and classifies. Fails when the lines do not lie in
    /// a common plane or three of them are concurrent.
    pub fn from_lines(lines: [[ProjQuadric; 2]; 4], tol: &Tolerances) -> Result<Self> {
        let gate = 1e3 * tol.rank;
        let all: Vec<&ProjQuadric> = lines.iter().flatten().collect();
        let m = space::stack(&all);
        let (s, v) = linalg::right_svd(&m);
        if s[3] / s[0] > gate || s[2] / s[0] <= gate {
            return Err(Error::InvalidInput("lines do not span a plane".into()));
        }
        let mut plane = Vec::with_capacity(3);
        for c in 0..3 {
            // top right-singular directions map onto the column space
            let x = &m * v.column(c);
            plane.push(space::quadric10(&x)?);
        }
        let mut vertices = Vec::with_capacity(6);
        for &(i, j) in &QUAD_PAIRS {
            let (q, _) = space::meet_lines(
                (&lines[i][0], &lines[i][1]),
                (&lines[j][0], &lines[j][1]),
                gate,
            )?;
            vertices.push(QuadVertex {
                quadric: q,
                profile: q.numeric_rank(tol.rank),
            });
        }
        for (a, &(i, j)) in QUAD_PAIRS.iter().enumerate() {
            for (b, &(k, l)) in QUAD_PAIRS.iter().enumerate().skip(a + 1) {
                let shared = i == k || i == l || j == k || j == l;
                if shared && vertices[a].quadric.dist(&vertices[b].quadric) < tol.cluster {
                    return Err(Error::InvalidInput("three lines are concurrent".into()));
                }
            }
        }
        let mut cq = Self {
            plane: [plane[0], plane[1], plane[2]],
            lines,
            vertices: [
                vertices[0],
                vertices[1],
                vertices[2],
                vertices[3],
                vertices[4],
                vertices[5],
            ],
            classification: QuadrilateralClass::Other,
        };
        cq.classification = cq.classify(tol);
        Ok(cq)
    }

    fn classify(&self, tol: &Tolerances) -> QuadrilateralClass {
        let ranks: Vec<usize> = self.vertices.iter().map(|v| v.profile.rank).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x9a4);
        let z = linalg::random_cvec(&mut rng, 3);
        let generic = self.plane[0].matrix() * z[0]
            + self.plane[1].matrix() * z[1]
            + self.plane[2].matrix() * z[2];
        let generic_rank = ProjQuadric::new(generic)
            .map(|q| q.numeric_rank(tol.rank).rank)
            .unwrap_or(0);
        if generic_rank <= 2 {
            return match solve_in_rank_two_plane(self, tol) {
                Ok(s) if !s.is_empty() => QuadrilateralClass::Solvable,
                _ => QuadrilateralClass::Other,
            };
        }
        let twos = ranks.iter().filter(|&&r| r == 2).count();
        let ones = ranks.iter().filter(|&&r| r == 1).count();
        if ones == 1 && twos == 5 {
            return QuadrilateralClass::Special;
        }
        if twos == 6 && reconstruct_tetrahedron_lines(&self.lines, tol).is_ok() {
            return QuadrilateralClass::Typical;
        }
        QuadrilateralClass::Other
    }

    pub fn vertex(&self, i: usize, j: usize) -> &QuadVertex {
        &self.vertices[pair_index(i, j)]
    }

    /// Each line holds exactly three vertices and each vertex exactly two
    /// lines, at the given span tolerance.
    pub fn incidence_ok(&self, tol: f64) -> bool {
        let on = |l: usize, v: usize| {
            space::span_residual(
                &[&self.lines[l][0], &self.lines[l][1]],
                &self.vertices[v].quadric,
            ) < tol
        };
        let line_ok = (0..4).all(|l| (0..6).filter(|&v| on(l, v)).count() == 3);
        let vertex_ok = (0..6).all(|v| (0..4).filter(|&l| on(l, v)).count() == 2);
        line_ok && vertex_ok
    }
}

/// The traces ℓᵢ = plane ∩ [dⱼ,d_k,d_l] of the faces of the tetrahedron d.
pub fn construct_typical_quadrilateral(
    d: &[ProjQuadric; 4],
    plane: &[ProjQuadric; 3],
    tol: &Tolerances,
) -> Result<CompleteQuadrilateral> {
    let gate = 1e3 * tol.rank;
    let dm = space::stack(&[&d[0], &d[1], &d[2], &d[3]]);
    let sd = linalg::singular_values(&dm);
    if sd[3] / sd[0] <= gate {
        return Err(Error::InvalidInput("double-planes are dependent".into()));
    }
    let mut coords = DMatrix::<C64>::zeros(4, 3);
    for (c, q) in plane.iter().enumerate() {
        let (x, res) = linalg::lstsq(&dm, &space::vec10(q));
        if res > gate {
            return Err(Error::InvalidInput(format!(
                "plane is not inside the span of the tetrahedron (residual {res:.3e})"
            )));
        }
        coords.set_column(c, &x);
    }
    let sc = linalg::singular_values(&coords);
    if sc[2] / sc[0] <= gate {
        return Err(Error::InvalidInput("plane quadrics are dependent".into()));
    }
    for i in 0..4 {
        let mut e = vec![C64::new(0.0, 0.0); 4];
        e[i] = C64::new(1.0, 0.0);
        if linalg::span_residual(&coords, &e) < gate {
            return Err(Error::PlaneThroughVertex);
        }
    }
    let to_quadric = |k: DVector<C64>| space::quadric10(&(&dm * (&coords * k)));
    let mut lines = Vec::with_capacity(4);
    for i in 0..4 {
        let row = coords.rows(i, 1).into_owned();
        let k = linalg::null_vectors(&row, 2);
        lines.push([
            to_quadric(k.column(0).into_owned())?,
            to_quadric(k.column(1).into_owned())?,
        ]);
    }
    let mut cq = CompleteQuadrilateral::from_lines([lines[0], lines[1], lines[2], lines[3]], tol)?;
    cq.classification = QuadrilateralClass::Typical;
    Ok(cq)
}

/// The tetrahedron of double-planes producing a typical quadrilateral.
/// With distinct pencil vertices vᵢ, dᵢ is the square of the plane through
/// the other three; with one common vertex the problem is solved one
/// dimension down from the trios of double-planes of the four pencils.
pub fn reconstruct_tetrahedron(
    cq: &CompleteQuadrilateral,
    tol: &Tolerances,
) -> Result<[ProjQuadric; 4]> {
    reconstruct_tetrahedron_lines(&cq.lines, tol)
}

fn reconstruct_tetrahedron_lines(
    lines: &[[ProjQuadric; 2]; 4],
    tol: &Tolerances,
) -> Result<[ProjQuadric; 4]> {
    let mut vertices = Vec::with_capacity(4);
    for l in lines {
        let p = Pencil::new(l[0], l[1])?;
        match classify_singular_pencil(&p, tol, 0) {
            Ok(SingularPencilClass::FixedVertex { vertex, .. }) => vertices.push(vertex),
            Ok(_) | Err(Error::NotSingularPencil) => return Err(Error::NotFixedVertex),
            Err(e) => return Err(e),
        }
    }
    let close = |a: &Vec4, b: &Vec4| linalg::proj_dist(a.as_slice(), b.as_slice()) < tol.cluster;
    let coincident = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .filter(|&(i, j)| close(&vertices[i], &vertices[j]))
        .count();
    match coincident {
        0 => {}
        6 => return common_vertex_tetrahedron(lines, tol),
        _ => return Err(Error::CoincidentVertices),
    }
    let mut out = Vec::with_capacity(4);
    for i in 0..4 {
        let others: Vec<C64> = (0..4)
            .filter(|&j| j != i)
            .flat_map(|j| vertices[j].iter().copied().collect::<Vec<_>>())
            .collect();
        let m = DMatrix::from_row_slice(3, 4, &others);
        let k = linalg::null_vectors(&m, 1);
        out.push(ProjQuadric::rank_one(&Vec4::from_column_slice(
            k.as_slice(),
        ))?);
    }
    Ok([out[0], out[1], out[2], out[3]])
}

/// Common-vertex case: the pencil ℓᵢ lies in the span of the three
/// double-planes other than dᵢ, so dᵢ is the one missing from its trio.
fn common_vertex_tetrahedron(
    lines: &[[ProjQuadric; 2]; 4],
    tol: &Tolerances,
) -> Result<[ProjQuadric; 4]> {
    let trios = lines
        .iter()
        .map(|l| trio_of_double_planes(&Pencil::new(l[0], l[1])?, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut distinct: Vec<ProjQuadric> = Vec::new();
    for t in &trios {
        for d in &t.d {
            if !distinct.iter().any(|x| x.dist(d) < 1e-6) {
                distinct.push(*d);
            }
        }
    }
    if distinct.len() != 4 {
        return Err(Error::CoincidentVertices);
    }
    let mut out = Vec::with_capacity(4);
    for t in &trios {
        let missing: Vec<&ProjQuadric> = distinct
            .iter()
            .filter(|x| !t.d.iter().any(|d| d.dist(x) < 1e-6))
            .collect();
        if missing.len() != 1 {
            return Err(Error::CoincidentVertices);
        }
        out.push(*missing[0]);
    }
    Ok([out[0], out[1], out[2], out[3]])
}

/// Quadruples d₁..d₄ on the Veronese conic with p_ij ∈ [d_k, d_l], for six
/// marks given in conic coordinates in [`QUAD_PAIRS`] order. d₂, d₃, d₄ are
/// the chord images of d₁ through p₃₄, p₂₄, p₂₃; d₁ is a fixed point of the
/// loop d₁ → d₂ → d₃ → d₁ through p₃₄, p₁₄, p₂₄. Candidates are kept when all
/// six incidences hold.
pub fn solve_on_conic(marks: &[Coords3; 6], tol: &Tolerances) -> Result<Vec<[ProjPoint1; 4]>> {
    let m = |i: usize, j: usize| conic::chord_involution(&marks[pair_index(i, j)]);
    let loop_map = m(1, 3) * m(0, 3) * m(2, 3);
    let mut out = Vec::new();
    for t1 in conic::fixed_points(&loop_map, tol.cluster)? {
        let t = [
            Some(t1),
            conic::apply(&m(2, 3), &t1),
            conic::apply(&m(1, 3), &t1),
            conic::apply(&m(1, 2), &t1),
        ];
        if t.iter().any(|x| x.is_none()) {
            continue;
        }
        let t = [t[0].unwrap(), t[1].unwrap(), t[2].unwrap(), t[3].unwrap()];
        let v: Vec<Coords3> = t.iter().map(conic::veronese).collect();
        let worst = QUAD_PAIRS
            .iter()
            .map(|&(i, j)| {
                let (k, l) = complement(i, j);
                conic::collinearity(&marks[pair_index(i, j)], &v[k], &v[l])
            })
            .fold(0.0, f64::max);
        let distinct = (0..4).all(|a| (a + 1..4).all(|b| t[a].dist(&t[b]) > tol.cluster));
        if worst < 1e3 * tol.rank && distinct {
            out.push(t);
        }
    }
    Ok(out)
}

pub fn complement(i: usize, j: usize) -> (usize, usize) {
    let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
    (rest[0], rest[1])
}

/// Solvable branch for quadrilaterals inside a plane of two-planes through
/// a common line: frame the plane by its common column space and solve on
/// the Veronese conic.
pub fn solve_in_rank_two_plane(
    cq: &CompleteQuadrilateral,
    tol: &Tolerances,
) -> Result<Vec<[ProjQuadric; 4]>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    let z = linalg::random_cvec(&mut rng, 3);
    let generic =
        cq.plane[0].matrix() * z[0] + cq.plane[1].matrix() * z[1] + cq.plane[2].matrix() * z[2];
    let u = linalg::column_space(&crate::symqr::to_dyn(&generic), 2);
    // every member is uvᵗ + vuᵗ for forms u, v in the common column space
    let e1 = Vec4::from_iterator(u.column(0).iter().copied());
    let e2 = Vec4::from_iterator(u.column(1).iter().copied());
    let frame = ConicFrame::new(e1, e2);
    let gate = 1e3 * tol.rank;
    let mut marks = [Coords3::zeros(); 6];
    for (k, v) in cq.vertices.iter().enumerate() {
        marks[k] = frame.coords(&v.quadric, gate)?;
    }
    solve_on_conic(&marks, tol)?
        .into_iter()
        .map(|t| {
            Ok([
                frame.square(&t[0])?,
                frame.square(&t[1])?,
                frame.square(&t[2])?,
                frame.square(&t[3])?,
            ])
        })
        .collect()
}

/// Contact of the line carrying the marks with the Veronese conic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contact {
    Secant(ProjPoint1, ProjPoint1),
    Tangent(ProjPoint1),
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let s = [i, j, k, l];
                    if (0..4).all(|a| (a + 1..4).all(|b| s[a] != s[b])) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

/// Largest violation of the cross-ratio relations among six marks on a
/// secant or tangent of the conic, marks in [`QUAD_PAIRS`] order.
pub fn check_c3(marks: &[ProjPoint1; 6], contact: &Contact) -> Result<f64> {
    let p = |i: usize, j: usize| &marks[pair_index(i, j)];
    let cr = cross_ratio_value;
    let mut worst: f64 = 0.0;
    for [i, j, k, l] in permutations4() {
        let r = match contact {
            Contact::Secant(a, b) => {
                (cr(a, b, p(j, k), p(j, l))? - cr(a, b, p(i, k), p(i, l))?).norm()
            }
            Contact::Tangent(t) => {
                let lhs = cr(t, p(k, l), p(l, j), p(j, k))? * cr(p(k, l), t, p(l, i), p(i, k))?;
                let rhs = cr(t, p(i, j), p(j, l), p(l, i))? * cr(p(i, j), t, p(j, k), p(k, i))?;
                (lhs - rhs).norm()
            }
        };
        worst = worst.max(r);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baskets::conic::PlaneLine;
    use crate::linalg::{c, ONE, ZERO};
    use crate::symqr::Mat4;

    fn diag(d: [f64; 4]) -> ProjQuadric {
        ProjQuadric::diag(d).unwrap()
    }

    fn squares() -> [ProjQuadric; 4] {
        [
            diag([1.0, 0.0, 0.0, 0.0]),
            diag([0.0, 1.0, 0.0, 0.0]),
            diag([0.0, 0.0, 1.0, 0.0]),
            diag([0.0, 0.0, 0.0, 1.0]),
        ]
    }

    fn random_plane(rng: &mut ChaCha8Rng) -> [ProjQuadric; 3] {
        let mut out = Vec::new();
        for _ in 0..3 {
            let w = linalg::random_rvec(rng, 4);
            out.push(diag([w[0], w[1], w[2], w[3]]));
        }
        [out[0], out[1], out[2]]
    }

    #[test]
    fn typical_quadrilateral_of_the_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tol = Tolerances::default();
        let cq =
            construct_typical_quadrilateral(&squares(), &random_plane(&mut rng), &tol).unwrap();
        assert!(cq.vertices.iter().all(|v| v.profile.rank == 2));
        assert!(cq.incidence_ok(1e-8));
        assert_eq!(cq.classification, QuadrilateralClass::Typical);
        let again = CompleteQuadrilateral::from_lines(cq.lines, &tol).unwrap();
        assert_eq!(again.classification, QuadrilateralClass::Typical);
        let d = reconstruct_tetrahedron(&cq, &tol).unwrap();
        for (i, s) in squares().iter().enumerate() {
            assert!(d[i].dist(s) < 1e-8);
        }
    }

    #[test]
    fn plane_through_a_vertex() {
        let s = squares();
        let plane = [
            s[0],
            diag([0.0, 1.0, 1.0, 1.0]),
            diag([0.0, 1.0, -1.0, 2.0]),
        ];
        assert!(matches!(
            construct_typical_quadrilateral(&s, &plane, &Tolerances::default()),
            Err(Error::PlaneThroughVertex)
        ));
    }

    #[test]
    fn reconstruction_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let tol = Tolerances::default();
        let a = Mat4::from_column_slice(&linalg::random_cvec(&mut rng, 16));
        let d: Vec<ProjQuadric> = squares().iter().map(|q| q.conjugate(&a).unwrap()).collect();
        let plane: Vec<ProjQuadric> = random_plane(&mut rng)
            .iter()
            .map(|q| q.conjugate(&a).unwrap())
            .collect();
        let d = [d[0], d[1], d[2], d[3]];
        let cq =
            construct_typical_quadrilateral(&d, &[plane[0], plane[1], plane[2]], &tol).unwrap();
        let back = reconstruct_tetrahedron(&cq, &tol).unwrap();
        for i in 0..4 {
            assert!(back[i].dist(&d[i]) < 1e-7);
        }
    }

    #[test]
    fn common_vertex_routes_to_conics() {
        // double-planes of P(Sym(3)): squares of forms in x₁,x₂,x₃ only
        let forms = [
            Vec4::new(ONE, ZERO, ZERO, ZERO),
            Vec4::new(ZERO, ONE, ZERO, ZERO),
            Vec4::new(ZERO, ZERO, ONE, ZERO),
            Vec4::new(ONE, ONE, ONE, ZERO),
        ];
        let d: Vec<ProjQuadric> = forms
            .iter()
            .map(|u| ProjQuadric::rank_one(u).unwrap())
            .collect();
        let d = [d[0], d[1], d[2], d[3]];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut plane = Vec::new();
        for _ in 0..3 {
            let w = linalg::random_rvec(&mut rng, 4);
            let m = d[0].matrix() * c(w[0])
                + d[1].matrix() * c(w[1])
                + d[2].matrix() * c(w[2])
                + d[3].matrix() * c(w[3]);
            plane.push(ProjQuadric::new(m).unwrap());
        }
        let tol = Tolerances::default();
        let cq =
            construct_typical_quadrilateral(&d, &[plane[0], plane[1], plane[2]], &tol).unwrap();
        let back = reconstruct_tetrahedron(&cq, &tol).unwrap();
        for i in 0..4 {
            assert!(back[i].dist(&d[i]) < 1e-7, "{i}");
        }
    }

    fn marks_on(line: &PlaneLine, ts: &[ProjPoint1; 4]) -> [ProjPoint1; 6] {
        let v: Vec<Coords3> = ts.iter().map(conic::veronese).collect();
        let mut out = [ProjPoint1::infinity(); 6];
        for (k, &(i, j)) in QUAD_PAIRS.iter().enumerate() {
            let (a, b) = complement(i, j);
            out[k] = line.meet(&v[a], &v[b]).unwrap();
        }
        out
    }

    fn params() -> [ProjPoint1; 4] {
        [0.3, -1.2, 2.5, -0.4].map(|x| ProjPoint1::affine(c(x)))
    }

    #[test]
    fn c3_secant() {
        let line = PlaneLine {
            e: Coords3::new(c(1.0), c(0.3), c(-2.0)),
            f: Coords3::new(c(0.5), c(2.0), c(1.0)),
        };
        let marks = marks_on(&line, &params());
        let ab = line.conic_points(1e-9).unwrap();
        let contact = Contact::Secant(ab[0].point, ab[1].point);
        assert!(check_c3(&marks, &contact).unwrap() < 1e-9);
        let mut bent = marks;
        bent[2] = ProjPoint1::new(bent[2].lambda + c(1e-3), bent[2].mu).unwrap();
        assert!(check_c3(&bent, &contact).unwrap() > 1e-6);
    }

    #[test]
    fn c3_tangent() {
        let line = PlaneLine::tangent_at(&ProjPoint1::affine(c(1.7)));
        let marks = marks_on(&line, &params());
        let contact = Contact::Tangent(ProjPoint1::infinity());
        assert!(check_c3(&marks, &contact).unwrap() < 1e-9);
        let mut bent = marks;
        bent[4] = ProjPoint1::new(bent[4].lambda + c(1e-3), bent[4].mu).unwrap();
        assert!(check_c3(&bent, &contact).unwrap() > 1e-6);
        let on_mark = Contact::Tangent(marks[0]);
        assert!(matches!(
            check_c3(&marks, &on_mark),
            Err(Error::Indeterminate)
        ));
    }

    /// A solvable quadrilateral for the squares at `ts`: ℓ₄ is chosen, p₁₂
    /// slides on [d₃,d₄] until ℓ₃ closes up.
    fn solvable_marks(ts: &[ProjPoint1; 4], l4: &PlaneLine) -> [Coords3; 6] {
        let v: Vec<Coords3> = ts.iter().map(conic::veronese).collect();
        let at = |t: &ProjPoint1| l4.point(t);
        let p14 = at(&l4.meet(&v[1], &v[2]).unwrap());
        let p24 = at(&l4.meet(&v[0], &v[2]).unwrap());
        let p34 = at(&l4.meet(&v[0], &v[1]).unwrap());
        let build = |a: C64| {
            let p12 = v[2] + v[3] * a;
            let l1 = PlaneLine { e: p12, f: p14 };
            let p13 = l1.point(&l1.meet(&v[1], &v[3]).unwrap());
            let l2 = PlaneLine { e: p12, f: p24 };
            let p23 = l2.point(&l2.meet(&v[0], &v[3]).unwrap());
            let gap =
                nalgebra::Matrix3::from_rows(&[p13.transpose(), p23.transpose(), p34.transpose()])
                    .determinant();
            ([p12, p13, p14, p23, p24, p34], gap)
        };
        let g0 = build(c(0.0)).1;
        let g1 = build(c(1.0)).1;
        // the other root sits at a = ∞ (p₁₂ = d₄), so the gap is affine in a
        build(-g0 / (g1 - g0)).0
    }

    #[test]
    fn solvable_marks_have_unique_solution() {
        let tol = Tolerances::default();
        let ts = params();
        let l4 = PlaneLine {
            e: Coords3::new(c(1.0), c(0.3), c(-2.0)),
            f: Coords3::new(c(0.5), c(2.0), c(1.0)),
        };
        let marks = solvable_marks(&ts, &l4);
        let sols = solve_on_conic(&marks, &tol).unwrap();
        assert_eq!(sols.len(), 1);
        for k in 0..4 {
            assert!(sols[0][k].dist(&ts[k]) < 1e-8);
        }
        let mut bent = marks;
        bent[0] += Coords3::new(c(1e-3), ZERO, ZERO);
        assert!(solve_on_conic(&bent, &tol).unwrap().is_empty());
    }

    #[test]
    fn solvable_quadrilateral_in_quadric_space() {
        let tol = Tolerances::default();
        let ts = params();
        let l4 = PlaneLine {
            e: Coords3::new(c(-1.0), c(0.7), c(0.2)),
            f: Coords3::new(c(0.4), c(-1.0), c(1.5)),
        };
        let marks = solvable_marks(&ts, &l4);
        let frame = ConicFrame::new(
            Vec4::new(ONE, c(2.0), ZERO, c(-1.0)),
            Vec4::new(ZERO, ONE, c(1.0), c(0.5)),
        );
        let q = |k: usize| frame.quadric(&marks[k]).unwrap();
        let lines = [[q(0), q(1)], [q(0), q(3)], [q(1), q(3)], [q(2), q(4)]];
        let cq = CompleteQuadrilateral::from_lines(lines, &tol).unwrap();
        assert_eq!(cq.classification, QuadrilateralClass::Solvable);
        let sols = solve_in_rank_two_plane(&cq, &tol).unwrap();
        assert_eq!(sols.len(), 1);
        for k in 0..4 {
            assert!(sols[0][k].dist(&frame.square(&ts[k]).unwrap()) < 1e-7);
        }
    }
}
