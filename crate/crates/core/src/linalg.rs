//! Small dense complex linear algebra used throughout the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Hermitian 2-norm of a slice.
pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Bilinear (non-conjugating) dot product.
pub fn bdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Hermitian inner product conj(a)·b.
pub fn hdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Scale to unit norm and rotate the phase so that the first entry of
/// (numerically) largest modulus is real and positive. Returns false for
/// the zero vector.
pub fn canonicalize(v: &mut [C64]) -> bool {
    let n = norm(v);
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lead = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-9))
        .unwrap_or(0);
    let phase = v[lead].conj() / v[lead].norm();
    for z in v.iter_mut() {
        *z = *z * phase / n;
    }
    v[lead] = C64::new(v[lead].re, 0.0);
    true
}

/// Distance between the projective classes of two vectors:
/// `min_θ ‖a/‖a‖ − e^{iθ} b/‖b‖‖ = sqrt(2 − 2|⟨a,b⟩|/(‖a‖‖b‖))`.
pub fn proj_dist(a: &[C64], b: &[C64]) -> f64 {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return f64::INFINITY;
    }
    let cosine = (hdot(a, b).norm() / (na * nb)).min(1.0);
    // 2 - 2cos loses precision near 1; use the sine-based form instead.
    let sin2 = sin2_between(a, b, na, nb);
    if cosine > 0.99 {
        (2.0 * sin2 / (1.0 + cosine)).sqrt()
    } else {
        (2.0 - 2.0 * cosine).max(0.0).sqrt()
    }
}

/// Squared sine of the angle between complex lines spanned by a and b.
fn sin2_between(a: &[C64], b: &[C64], na: f64, nb: f64) -> f64 {
    // ‖b̂ − ⟨â,b̂⟩â‖²
    let proj = hdot(a, b) / (na * na);
    a.iter()
        .zip(b)
        .map(|(x, y)| (y - proj * x).norm_sqr())
        .sum::<f64>()
        / (nb * nb)
}

/// Thin SVD A = U·diag(s)·Vᴴ with s descending. U is m×n and V is n×n
/// (rows are padded when m < n); columns of U for zero singular values are
/// zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<C64>,
    pub s: Vec<f64>,
    pub v: DMatrix<C64>,
}

/// One-sided Jacobi SVD. Accurate on rank-deficient complex matrices, where
/// the bidiagonal QR of nalgebra 0.35 can return a wrong factorization.
pub fn svd(m: &DMatrix<C64>) -> Svd {
    let n = m.ncols();
    let rows = m.nrows().max(n);
    let mut w = DMatrix::<C64>::zeros(rows, n);
    w.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let mut v = DMatrix::<C64>::identity(n, n);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut w, &mut v] {
                    for r in 0..mat.nrows() {
                        let a = mat[(r, p)];
                        let b = mat[(r, q)] * phase.conj();
                        mat[(r, p)] = a * cs - b * sn;
                        mat[(r, q)] = a * sn + b * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());
    let mut u = DMatrix::<C64>::zeros(m.nrows(), n);
    let mut vs = DMatrix::<C64>::zeros(n, n);
    for (col, &j) in order.iter().enumerate() {
        if norms[j] > 0.0 {
            for r in 0..m.nrows() {
                u[(r, col)] = w[(r, j)] / norms[j];
            }
        }
        vs.set_column(col, &v.column(j));
    }
    Svd {
        u,
        s: order.iter().map(|&j| norms[j]).collect(),
        v: vs,
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s = svd(m).s;
    s.truncate(m.nrows().min(m.ncols()));
    s
}

/// Singular values (descending, length ncols, zero-padded) and the
/// matching right singular vectors as columns of a unitary matrix.
pub fn right_svd(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let d = svd(m);
    (d.s, d.v)
}

/// Leading `k` left singular vectors: an orthonormal basis of the
/// dominant part of the column space.
pub fn column_space(m: &DMatrix<C64>, k: usize) -> DMatrix<C64> {
    svd(m).u.columns(0, k).into_owned()
}

/// Orthonormal basis (columns) of the `k`-dimensional approximate
/// nullspace, i.e. the right singular vectors of the `k` smallest singular
/// values.
pub fn null_vectors(m: &DMatrix<C64>, k: usize) -> DMatrix<C64> {
    let (_, v) = right_svd(m);
    let n = v.ncols();
    v.columns(n - k, k).into_owned()
}

/// Numerical rank: count of σᵢ > tol·σ₁.
pub fn numeric_rank(values: &[f64], tol: f64) -> usize {
    match values.first() {
        None => 0,
        Some(&s1) if s1 == 0.0 => 0,
        Some(&s1) => values.iter().filter(|&&s| s > tol * s1).count(),
    }
}

/// Relative gap `σ_{k+1}/σ₁` for deciding whether `m` has rank at most `k`.
pub fn rank_residual(m: &DMatrix<C64>, k: usize) -> f64 {
    let s = singular_values(m);
    if s.is_empty() || s[0] == 0.0 {
        return 0.0;
    }
    s.get(k).copied().unwrap_or(0.0) / s[0]
}

pub fn det(m: &DMatrix<C64>) -> C64 {
    m.clone().lu().determinant()
}

/// A standard complex Gaussian vector.
pub fn random_cvec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| {
            C64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            )
        })
        .collect()
}

pub fn random_rvec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Haar-ish random unitary matrix (QR of a complex Gaussian matrix with the
/// diagonal phases of R removed).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let g = DMatrix::from_vec(n, n, random_cvec(rng, n * n));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Random real orthogonal matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_vec(n, n, random_rvec(rng, n * n));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Least-squares coordinates of `target` in the span of the columns of
/// `basis`, together with the relative residual ‖basis·x − target‖/‖target‖.
pub fn lstsq(basis: &DMatrix<C64>, target: &DVector<C64>) -> (DVector<C64>, f64) {
    let d = svd(basis);
    let smax = d.s.first().copied().unwrap_or(0.0);
    let mut x = DVector::<C64>::zeros(basis.ncols());
    for (j, &sj) in d.s.iter().enumerate() {
        if sj > smax * 1e-13 && sj > 0.0 {
            let coef = d.u.column(j).dotc(target) / sj;
            x += d.v.column(j) * coef;
        }
    }
    let r = basis * &x - target;
    let tn = target.norm();
    let res = if tn == 0.0 { r.norm() } else { r.norm() / tn };
    (x, res)
}

/// Relative distance of `v` from the span of the columns of `basis`.
pub fn span_residual(basis: &DMatrix<C64>, v: &[C64]) -> f64 {
    let target = DVector::from_column_slice(v);
    lstsq(basis, &target).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonicalize_is_idempotent_and_phase_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = random_cvec(&mut rng, 5);
        let mut a = v.clone();
        canonicalize(&mut a);
        let mut b: Vec<C64> = v.iter().map(|z| z * C64::from_polar(2.5, 1.1)).collect();
        canonicalize(&mut b);
        let mut a2 = a.clone();
        canonicalize(&mut a2);
        for i in 0..5 {
            assert!((a[i] - b[i]).norm() < 1e-14);
            assert!((a[i] - a2[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn proj_dist_ignores_scale() {
        let a = [c(1.0), I, c(2.0)];
        let b: Vec<C64> = a.iter().map(|z| z * C64::new(0.0, -3.0)).collect();
        assert!(proj_dist(&a, &b) < 1e-15);
        assert!((proj_dist(&[ONE, ZERO], &[ZERO, ONE]) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = random_unitary(&mut rng, 4);
        let e = u.adjoint() * &u - DMatrix::identity(4, 4);
        assert!(e.norm() < 1e-13);
    }

    #[test]
    fn jacobi_svd_on_rank_deficient_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let a = DMatrix::from_vec(4, 1, random_cvec(&mut rng, 4));
            let b = DMatrix::from_vec(4, 1, random_cvec(&mut rng, 4));
            let m = &a * b.transpose() + &b * a.transpose();
            let d = svd(&m);
            let sig = DMatrix::from_diagonal(&DVector::from_iterator(4, d.s.iter().map(|&x| c(x))));
            assert!((&d.u * sig * d.v.adjoint() - &m).norm() < 1e-13 * m.norm());
            assert!((d.v.adjoint() * &d.v - DMatrix::identity(4, 4)).norm() < 1e-13);
            assert!(d.s[2] < 1e-14 * d.s[0]);
        }
    }

    #[test]
    fn lstsq_recovers_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let basis = DMatrix::from_vec(6, 3, random_cvec(&mut rng, 18));
        let x = DVector::from_vec(random_cvec(&mut rng, 3));
        let (y, res) = lstsq(&basis, &(&basis * &x));
        assert!((y - x).norm() < 1e-12 && res < 1e-14);
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let m = DMatrix::from_row_slice(2, 4, &[ONE, ZERO, ZERO, ZERO, ZERO, ONE, ZERO, ZERO]);
        let k = null_vectors(&m, 2);
        assert!((&m * &k).norm() < 1e-14);
    }
}
