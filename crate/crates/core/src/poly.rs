//! Univariate/binary-form root finding and intersection of plane curves by
//! Sylvester resultants.

use nalgebra::{DMatrix, Schur, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ONE, ZERO};

/// Seed for the projective rotations used by the binary-form root finder.
const ROOT_SEED: u64 = 0x5eed_b1a7;
/// Widest chordal radius over which roots may be merged into one cluster,
/// provided the merge is certified by vanishing derivatives.
const MERGE_RADIUS: f64 = 2e-3;
const MERGE_CERT: f64 = 1e-10;

/// A point (λ:μ) of the projective line, stored with unit norm and the
/// leading entry of largest modulus real positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjPoint1 {
    pub lambda: C64,
    pub mu: C64,
}

impl ProjPoint1 {
    pub fn new(lambda: C64, mu: C64) -> Option<Self> {
        let mut v = [lambda, mu];
        if !linalg::canonicalize(&mut v) {
            return None;
        }
        Some(Self {
            lambda: v[0],
            mu: v[1],
        })
    }

    /// The affine point (z:1).
    pub fn affine(z: C64) -> Self {
        Self::new(z, ONE).expect("nonzero")
    }

    pub fn infinity() -> Self {
        Self::new(ONE, ZERO).expect("nonzero")
    }

    /// Affine coordinate λ/μ, or None at infinity.
    pub fn to_affine(&self) -> Option<C64> {
        if self.mu.norm() < 1e-300 {
            None
        } else {
            Some(self.lambda / self.mu)
        }
    }

    /// Chordal distance on P¹ (sine of the angle between the two lines).
    pub fn dist(&self, other: &Self) -> f64 {
        bracket(self, other).norm()
    }

    pub fn as_array(&self) -> [C64; 2] {
        [self.lambda, self.mu]
    }
}

/// The 2×2 determinant [a,b] = a_λ b_μ − a_μ b_λ.
pub fn bracket(a: &ProjPoint1, b: &ProjPoint1) -> C64 {
    a.lambda * b.mu - a.mu * b.lambda
}

/// A homogeneous binary form Σ c_k λ^(d−k) μ^k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryForm {
    pub coeffs: Vec<C64>,
    /// Set when the form vanishes identically (coefficients are then zero).
    pub identically_zero: bool,
}

/// A projective root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormRoot {
    pub point: ProjPoint1,
    pub multiplicity: usize,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<C64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "binary form needs at least one coefficient"
        );
        let identically_zero = coeffs.iter().all(|c| *c == ZERO);
        Self {
            coeffs,
            identically_zero,
        }
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![ZERO; degree + 1],
            identically_zero: true,
        }
    }

    /// Form with the given roots (each with multiplicity one) and unit scale.
    pub fn from_roots(roots: &[ProjPoint1]) -> Self {
        let mut coeffs = vec![ONE];
        for r in roots {
            // multiply by (μ_r λ − λ_r μ)
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k] += c * r.mu;
                next[k + 1] -= c * r.lambda;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.coeffs)
    }

    pub fn eval(&self, lambda: C64, mu: C64) -> C64 {
        let d = self.degree();
        // Horner in whichever ratio is bounded.
        if lambda.norm() >= mu.norm() {
            let t = mu / lambda;
            let mut acc = ZERO;
            for c in self.coeffs.iter().rev() {
                acc = acc * t + c;
            }
            acc * lambda.powu(d as u32)
        } else {
            let t = lambda / mu;
            let mut acc = ZERO;
            for c in self.coeffs.iter() {
                acc = acc * t + c;
            }
            acc * mu.powu(d as u32)
        }
    }

    pub fn eval_at(&self, p: &ProjPoint1) -> C64 {
        self.eval(p.lambda, p.mu)
    }

    /// Projective roots with multiplicities summing to the degree.
    ///
    /// The form is rotated by a seeded unitary change of (λ:μ) chosen to
    /// make the leading coefficient large, the resulting monic polynomial
    /// is solved through its companion matrix, and nearby roots are
    /// clustered.
    pub fn roots(&self, tol_cluster: f64) -> Result<Vec<FormRoot>> {
        if self.identically_zero || self.norm() == 0.0 {
            return Err(Error::InvalidInput("identically zero binary form".into()));
        }
        let d = self.degree();
        if d == 0 {
            return Ok(Vec::new());
        }
        let scale = self.norm();
        let mut rng = ChaCha8Rng::seed_from_u64(ROOT_SEED);
        let mut best: Option<(f64, [[C64; 2]; 2])> = None;
        for _ in 0..12 {
            let u = linalg::random_unitary(&mut rng, 2);
            let lead = self.eval(u[(0, 0)], u[(1, 0)]).norm();
            if best.map_or(true, |(b, _)| lead > b) {
                best = Some((lead, [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]));
            }
        }
        let (_, u) = best.expect("candidates");
        // g(s, t) = f(u·(s,t)); coefficients by sampling s on the unit circle.
        let g = self.rotated(&u);
        let s_roots = poly_roots(&g.coeffs)?;
        let gpoly = g.coeffs.clone();
        let groups = cluster_affine(&s_roots, &gpoly, tol_cluster);
        let mut out = Vec::with_capacity(groups.len());
        for (s, mult) in groups {
            let s = if mult == 1 {
                newton_polish(&gpoly, s)
            } else {
                s
            };
            let lambda = u[0][0] * s + u[0][1];
            let mu = u[1][0] * s + u[1][1];
            let point = ProjPoint1::new(lambda, mu).ok_or(Error::NoSolution)?;
            out.push(FormRoot {
                point,
                multiplicity: mult,
            });
        }
        let _ = scale;
        Ok(out)
    }

    /// The form composed with the linear map (s,t) ↦ u·(s,t).
    fn rotated(&self, u: &[[C64; 2]; 2]) -> BinaryForm {
        let d = self.degree();
        let n = d + 1;
        let samples: Vec<C64> = (0..n)
            .map(|j| {
                let s = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
                self.eval(u[0][0] * s + u[0][1], u[1][0] * s + u[1][1])
            })
            .collect();
        // g(s,1) = Σ_k g_k s^(d−k): power a = d−k carries coefficient g_k.
        let by_power = inverse_dft(&samples);
        let coeffs = (0..=d).map(|k| by_power[d - k]).collect();
        BinaryForm::new(coeffs)
    }
}

/// Coefficients c_a of p(s) = Σ c_a s^a from samples at the n-th roots of
/// unity.
pub fn inverse_dft(samples: &[C64]) -> Vec<C64> {
    let n = samples.len();
    (0..n)
        .map(|a| {
            let mut acc = ZERO;
            for (j, v) in samples.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * ((a * j) % n) as f64 / n as f64;
                acc += v * C64::from_polar(1.0, ang);
            }
            acc / n as f64
        })
        .collect()
}

/// Evaluate Σ coeffs[k] s^(d−k) (highest power first).
pub fn horner(coeffs: &[C64], s: C64) -> C64 {
    coeffs.iter().fold(ZERO, |acc, c| acc * s + c)
}

/// Roots of Σ coeffs[k] s^(d−k) (highest power first, nonzero leading
/// coefficient) via companion-matrix eigenvalues.
pub fn poly_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[0];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidInput("zero leading coefficient".into()));
    }
    if d == 1 {
        return Ok(vec![-coeffs[1] / lead]);
    }
    let mut comp = DMatrix::<C64>::zeros(d, d);
    for j in 0..d {
        comp[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..d {
        comp[(i, i - 1)] = ONE;
    }
    let schur = Schur::try_new(comp, f64::EPSILON, 10_000).ok_or(Error::NoSolution)?;
    let eig = schur.eigenvalues().ok_or(Error::NoSolution)?;
    Ok(eig.iter().copied().collect())
}

fn derivative(coeffs: &[C64]) -> Vec<C64> {
    let d = coeffs.len() - 1;
    coeffs[..d]
        .iter()
        .enumerate()
        .map(|(k, c)| c * (d - k) as f64)
        .collect()
}

fn newton_polish(coeffs: &[C64], mut s: C64) -> C64 {
    let dp = derivative(coeffs);
    for _ in 0..3 {
        let f = horner(coeffs, s);
        let df = horner(&dp, s);
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        let next = s - step;
        if horner(coeffs, next).norm() <= f.norm() {
            s = next;
        } else {
            break;
        }
    }
    s
}

/// Chordal distance between affine points a and b on P¹.
fn chordal(a: C64, b: C64) -> f64 {
    (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
}

/// Group roots: first by single linkage at `radius`, then merge groups up
/// to `MERGE_RADIUS` apart when the polynomial's derivatives up to the
/// merged multiplicity vanish at the merged mean.
fn cluster_affine(roots: &[C64], coeffs: &[C64], radius: f64) -> Vec<(C64, usize)> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if chordal(roots[i], roots[j]) < radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(i);
    }
    let mean = |g: &[usize]| g.iter().map(|&i| roots[i]).sum::<C64>() / g.len() as f64;
    // certified merging, closest pairs first
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..groups.len() {
            for b in (a + 1)..groups.len() {
                let d = chordal(mean(&groups[a]), mean(&groups[b]));
                if d < MERGE_RADIUS && best.map_or(true, |(bd, _, _)| d < bd) {
                    let mut merged = groups[a].clone();
                    merged.extend_from_slice(&groups[b]);
                    if derivatives_vanish(coeffs, mean(&merged), merged.len()) {
                        best = Some((d, a, b));
                    }
                }
            }
        }
        match best {
            Some((_, a, b)) => {
                let gb = groups.remove(b);
                groups[a].extend(gb);
            }
            None => break,
        }
    }
    groups.iter().map(|g| (mean(g), g.len())).collect()
}

fn derivatives_vanish(coeffs: &[C64], s: C64, mult: usize) -> bool {
    let scale = linalg::norm(coeffs) * (1.0 + s.norm()).powi(coeffs.len() as i32 - 1);
    let mut p = coeffs.to_vec();
    let mut factorial = 1.0;
    for j in 0..mult {
        if j > 0 {
            p = derivative(&p);
            factorial *= j as f64;
        }
        if p.is_empty() {
            return false;
        }
        if horner(&p, s).norm() / factorial > MERGE_CERT * scale {
            return false;
        }
    }
    true
}

/// A homogeneous plane curve given by its degree and an evaluator.
pub trait PlaneCurve {
    fn degree(&self) -> usize;
    fn eval(&self, v: &Vector3<C64>) -> C64;
}

/// Plane curve backed by a closure.
pub struct FnCurve<F: Fn(&Vector3<C64>) -> C64> {
    pub degree: usize,
    pub f: F,
}

impl<F: Fn(&Vector3<C64>) -> C64> PlaneCurve for FnCurve<F> {
    fn degree(&self) -> usize {
        self.degree
    }
    fn eval(&self, v: &Vector3<C64>) -> C64 {
        (self.f)(v)
    }
}

/// An intersection point of two plane curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub v: Vector3<C64>,
    pub multiplicity: usize,
}

/// Options for [`intersect_curves`].
#[derive(Debug, Clone, Copy)]
pub struct IntersectOptions {
    pub seed: u64,
    pub tol_cluster: f64,
    pub max_attempts: usize,
    /// Reject a frame when the resultant's leading coefficient falls below
    /// this fraction of its coefficient norm.
    pub lead_floor: f64,
}

impl Default for IntersectOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            tol_cluster: 1e-6,
            max_attempts: 5,
            lead_floor: 1e-8,
        }
    }
}

/// Intersect two plane curves without common components.
///
/// A seeded random unitary frame change is applied, the Sylvester resultant
/// with respect to the second affine coordinate is sampled on roots of unity
/// and interpolated, its roots are clustered into multiplicities, and the
/// second coordinate is recovered by back-substitution. Frames that make the
/// leading coefficient small or fail back-substitution are retried.
pub fn intersect_curves<F: PlaneCurve, G: PlaneCurve>(
    f: &F,
    g: &G,
    opts: &IntersectOptions,
) -> Result<Vec<CurvePoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.max_attempts {
        let u = linalg::random_unitary(&mut rng, 3);
        if let Some(points) = intersect_in_frame(f, g, &u, opts) {
            return Ok(points);
        }
    }
    Err(Error::EliminationFailed(opts.max_attempts))
}

fn intersect_in_frame<F: PlaneCurve, G: PlaneCurve>(
    f: &F,
    g: &G,
    u: &DMatrix<C64>,
    opts: &IntersectOptions,
) -> Option<Vec<CurvePoint>> {
    let m = f.degree();
    let n = g.degree();
    let to_world = |x: C64, y: C64, z: C64| -> Vector3<C64> {
        Vector3::new(
            u[(0, 0)] * x + u[(0, 1)] * y + u[(0, 2)] * z,
            u[(1, 0)] * x + u[(1, 1)] * y + u[(1, 2)] * z,
            u[(2, 0)] * x + u[(2, 1)] * y + u[(2, 2)] * z,
        )
    };
    // y-leading coefficients: F(0,1,0), G(0,1,0) must not vanish.
    let probe = |curve: &dyn Fn(&Vector3<C64>) -> C64, deg: usize| -> (C64, f64) {
        let coeffs = y_coeffs(curve, deg, ZERO, &to_world);
        let lead = coeffs[0];
        (lead, linalg::norm(&coeffs))
    };
    let fe = |v: &Vector3<C64>| f.eval(v);
    let ge = |v: &Vector3<C64>| g.eval(v);
    let (fl, fnorm) = probe(&fe, m);
    let (gl, gnorm) = probe(&ge, n);
    if fl.norm() < 1e-6 * fnorm || gl.norm() < 1e-6 * gnorm {
        return None;
    }
    // resultant samples
    let total = m * n;
    let count = total + 1;
    let samples: Vec<C64> = (0..count)
        .map(|j| {
            let x = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / count as f64);
            let fc = y_coeffs(&fe, m, x, &to_world);
            let gc = y_coeffs(&ge, n, x, &to_world);
            linalg::det(&sylvester(&fc, &gc))
        })
        .collect();
    let by_power = inverse_dft(&samples);
    let coeffs: Vec<C64> = (0..=total).map(|k| by_power[total - k]).collect();
    let rnorm = linalg::norm(&coeffs);
    if rnorm == 0.0 || coeffs[0].norm() < opts.lead_floor * rnorm {
        return None;
    }
    let xs = poly_roots(&coeffs).ok()?;
    let groups = cluster_affine(&xs, &coeffs, opts.tol_cluster);
    let mut out = Vec::with_capacity(groups.len());
    for (x, mult) in groups {
        let fc = y_coeffs(&fe, m, x, &to_world);
        let ys = poly_roots(&fc).ok()?;
        let gc = y_coeffs(&ge, n, x, &to_world);
        let gscale = linalg::norm(&gc) * (1.0 + x.norm()).powi(n as i32);
        let (y, gval) = ys
            .iter()
            .map(|&y| {
                (
                    y,
                    horner(&gc, y).norm() / (gscale * (1.0 + y.norm()).powi(n as i32)),
                )
            })
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())?;
        let (x, y) = if mult == 1 {
            newton2(f, g, x, y, &to_world)
        } else {
            (x, y)
        };
        // back-substitution gate: loose for clusters, whose coordinates
        // carry the multiplicity-th root of the rounding error
        let gate = if mult == 1 { 1e-6 } else { 1e-3 };
        if gval > gate {
            return None;
        }
        let mut v = to_world(x, y, ONE);
        let nv = v.norm();
        v /= C64::new(nv, 0.0);
        out.push(CurvePoint {
            v,
            multiplicity: mult,
        });
    }
    Some(out)
}

/// Coefficients (highest y power first) of y ↦ curve(frame(x, y, 1)).
fn y_coeffs(
    curve: &dyn Fn(&Vector3<C64>) -> C64,
    deg: usize,
    x: C64,
    to_world: &dyn Fn(C64, C64, C64) -> Vector3<C64>,
) -> Vec<C64> {
    let n = deg + 1;
    let samples: Vec<C64> = (0..n)
        .map(|j| {
            let y = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            curve(&to_world(x, y, ONE))
        })
        .collect();
    let by_power = inverse_dft(&samples);
    (0..=deg).map(|k| by_power[deg - k]).collect()
}

/// Sylvester matrix of two polynomials given highest power first.
pub fn sylvester(a: &[C64], b: &[C64]) -> DMatrix<C64> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut s = DMatrix::<C64>::zeros(size, size);
    for i in 0..n {
        for (k, c) in a.iter().enumerate() {
            s[(i, i + k)] = *c;
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().enumerate() {
            s[(n + i, i + k)] = *c;
        }
    }
    s
}

/// Newton polishing of a simple intersection in the affine chart, with
/// derivatives by complex finite differences.
fn newton2<F: PlaneCurve, G: PlaneCurve>(
    f: &F,
    g: &G,
    mut x: C64,
    mut y: C64,
    to_world: &dyn Fn(C64, C64, C64) -> Vector3<C64>,
) -> (C64, C64) {
    let eval = |x: C64, y: C64| {
        let v = to_world(x, y, ONE);
        (f.eval(&v), g.eval(&v))
    };
    let size = |p: (C64, C64)| p.0.norm() + p.1.norm();
    let mut cur = eval(x, y);
    for _ in 0..4 {
        let h = 1e-7 * (1.0 + x.norm().max(y.norm()));
        let hx = eval(x + h, y);
        let hy = eval(x, y + h);
        let (fx, gx) = ((hx.0 - cur.0) / h, (hx.1 - cur.1) / h);
        let (fy, gy) = ((hy.0 - cur.0) / h, (hy.1 - cur.1) / h);
        let det = fx * gy - fy * gx;
        if det.norm() == 0.0 {
            break;
        }
        let dx = (cur.0 * gy - cur.1 * fy) / det;
        let dy = (fx * cur.1 - gx * cur.0) / det;
        let next = eval(x - dx, y - dy);
        if size(next) < size(cur) {
            x -= dx;
            y -= dy;
            cur = next;
        } else {
            break;
        }
    }
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn roots_sorted(f: &BinaryForm) -> Vec<FormRoot> {
        let mut r = f.roots(1e-6).unwrap();
        r.sort_by(|a, b| {
            let za = a.point.to_affine().unwrap_or(C64::new(1e300, 0.0));
            let zb = b.point.to_affine().unwrap_or(C64::new(1e300, 0.0));
            za.re.partial_cmp(&zb.re).unwrap()
        });
        r
    }

    #[test]
    fn difference_of_squares() {
        // λ² − μ²
        let f = BinaryForm::new(vec![c(1.0), c(0.0), c(-1.0)]);
        let r = roots_sorted(&f);
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.multiplicity == 1));
        assert!(r[0].point.dist(&ProjPoint1::affine(c(-1.0))) < 1e-14);
        assert!(r[1].point.dist(&ProjPoint1::affine(c(1.0))) < 1e-14);
    }

    #[test]
    fn fourfold_root() {
        // (λ − μ)⁴
        let f = BinaryForm::new(vec![c(1.0), c(-4.0), c(6.0), c(-4.0), c(1.0)]);
        let r = f.roots(1e-6).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 4);
        assert!(r[0].point.dist(&ProjPoint1::affine(c(1.0))) < 1e-8);
    }

    #[test]
    fn root_at_infinity() {
        // λ μ² has roots (0:1) once and (1:0) twice
        let f = BinaryForm::new(vec![c(0.0), c(0.0), c(1.0), c(0.0)]);
        let r = f.roots(1e-6).unwrap();
        let total: usize = r.iter().map(|x| x.multiplicity).sum();
        assert_eq!(total, 3);
        let inf = r
            .iter()
            .find(|x| x.point.dist(&ProjPoint1::infinity()) < 1e-7)
            .unwrap();
        assert_eq!(inf.multiplicity, 2);
    }

    #[test]
    fn roots_vanish_on_form() {
        let pts: Vec<ProjPoint1> = [c(0.3), C64::new(-1.0, 2.0), C64::new(0.5, -0.25), c(7.0)]
            .iter()
            .map(|z| ProjPoint1::affine(*z))
            .collect();
        let f = BinaryForm::from_roots(&pts);
        let r = f.roots(1e-6).unwrap();
        assert_eq!(r.len(), 4);
        for p in &pts {
            assert!(r.iter().any(|x| x.point.dist(p) < 1e-12));
        }
    }

    #[test]
    fn triple_root_is_merged() {
        let a = ProjPoint1::affine(C64::new(0.4, 0.1));
        let b = ProjPoint1::affine(c(-2.0));
        let f = BinaryForm::from_roots(&[a, a, a, b]);
        let r = f.roots(1e-6).unwrap();
        assert_eq!(r.len(), 2);
        let triple = r.iter().find(|x| x.multiplicity == 3).unwrap();
        assert!(triple.point.dist(&a) < 1e-9);
    }

    #[test]
    fn close_simple_roots_stay_apart() {
        let a = ProjPoint1::affine(c(0.5));
        let b = ProjPoint1::affine(c(0.5 + 2e-4));
        let f = BinaryForm::from_roots(&[a, b, ProjPoint1::affine(c(3.0))]);
        let r = f.roots(1e-6).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn conic_line_intersection() {
        // x² + y² − z² = 0 meets x = 0 at (0:±1:1)
        let conic = FnCurve {
            degree: 2,
            f: |v: &Vector3<C64>| v[0] * v[0] + v[1] * v[1] - v[2] * v[2],
        };
        let line = FnCurve {
            degree: 1,
            f: |v: &Vector3<C64>| v[0],
        };
        let pts = intersect_curves(&conic, &line, &IntersectOptions::default()).unwrap();
        assert_eq!(pts.iter().map(|p| p.multiplicity).sum::<usize>(), 2);
        for p in &pts {
            assert!(conic.eval(&p.v).norm() < 1e-12);
            assert!(line.eval(&p.v).norm() < 1e-12);
        }
    }

    #[test]
    fn tangent_conics_report_multiplicity() {
        // x² + y² − z² and (x − z)... circle with tangent line x = z: double point (1:0:1)
        let conic = FnCurve {
            degree: 2,
            f: |v: &Vector3<C64>| v[0] * v[0] + v[1] * v[1] - v[2] * v[2],
        };
        let line = FnCurve {
            degree: 1,
            f: |v: &Vector3<C64>| v[0] - v[2],
        };
        let pts = intersect_curves(&conic, &line, &IntersectOptions::default()).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].multiplicity, 2);
    }
}
