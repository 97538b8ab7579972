//! Dense complex matrix helpers shared by the algebra and dynamics modules.
//!
//! All Lie algebra elements are stored as `N x N` complex matrices. The
//! invariant bilinear form used throughout is `<X, Y> = Re tr(XY)`, which for
//! `su(m,n)` coincides with `tr(XY)` and for `sl(k,C)` (viewed as a real Lie
//! algebra) is the real part needed to keep the form real-valued.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Elementary matrix `E_{ij}` of size `n`.
pub fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = zeros(n);
    m[(i, j)] = real(1.0);
    m
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// `Re tr(AB)` without forming the product.
pub fn pairing(a: &CMat, b: &CMat) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = a[(i, j)];
            let y = b[(j, i)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().iter().sum()
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Applies a real function to a Hermitian matrix through its eigendecomposition.
pub fn hermitian_function(h: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|x| real(f(x))));
    v * d * v.adjoint()
}

/// Sorted (ascending) eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    let mut ev: Vec<f64> = h
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Evaluates `phi(ad_Q) Y` for Hermitian `Q` via the eigenbasis of `Q`.
///
/// In the eigenbasis `Q = V diag(d) V^*`, `ad_Q` acts on matrix units as
/// multiplication by `d_i - d_j`, so `phi(ad_Q)` is an entrywise weight.
pub fn hermitian_ad_function(q: &CMat, y: &CMat, phi: impl Fn(f64) -> f64) -> CMat {
    let eig = q.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let d = &eig.eigenvalues;
    let mut t = v.adjoint() * y * v;
    let n = t.nrows();
    for i in 0..n {
        for j in 0..n {
            t[(i, j)] *= phi(d[i] - d[j]);
        }
    }
    v * t * v.adjoint()
}

pub fn expm(a: &CMat) -> CMat {
    a.exp()
}

/// Eigenvalues of a general complex matrix from its Schur form.
pub fn eigenvalues(a: &CMat) -> Vec<Complex64> {
    match nalgebra::linalg::Schur::new(a.clone()).eigenvalues() {
        Some(v) => v.iter().copied().collect(),
        None => {
            // Schur form of a complex matrix is triangular, so this is unreachable
            // in practice; fall back to the diagonal of the unpacked form.
            let (_, t) = nalgebra::linalg::Schur::new(a.clone()).unpack();
            t.diagonal().iter().copied().collect()
        }
    }
}

/// Sorts a spectrum lexicographically by (real, imaginary) part.
pub fn sort_spectrum(mut v: Vec<Complex64>) -> Vec<Complex64> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

/// Largest distance between two spectra after greedy nearest matching.
///
/// Sorting alone is unstable for eigenvalues sharing a real part, so each
/// reference eigenvalue is paired with its nearest unused partner.
pub fn spectrum_distance(reference: &[Complex64], other: &[Complex64]) -> f64 {
    assert_eq!(reference.len(), other.len());
    let mut used = vec![false; other.len()];
    let mut worst: f64 = 0.0;
    for r in reference {
        let mut best = f64::INFINITY;
        let mut best_j = 0;
        for (j, o) in other.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (r - o).norm();
            if d < best {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

pub fn random_complex_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        cplx(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    })
}

/// Haar-distributed unitary matrix from the QR factorization of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let z = random_complex_matrix(n, n, rng);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            real(1.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Least-squares solution of a real linear system; returns the solution and
/// the Euclidean norm of the residual.
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    if a.ncols() == 0 {
        return (DVector::zeros(0), b.norm());
    }
    let svd = a.clone().svd(true, true);
    let tol = 1e-12 * svd.singular_values.max().max(1.0);
    let x = svd
        .solve(b, tol)
        .unwrap_or_else(|_| DVector::zeros(a.ncols()));
    let res = (a * &x - b).norm();
    (x, res)
}

/// Flattens a complex matrix into a real vector of (re, im) pairs.
pub fn flatten(a: &CMat) -> DVector<f64> {
    let n = a.len();
    let mut out = DVector::zeros(2 * n);
    for (k, z) in a.iter().enumerate() {
        out[2 * k] = z.re;
        out[2 * k + 1] = z.im;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pairing_matches_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_complex_matrix(4, 4, &mut rng);
        let b = random_complex_matrix(4, 4, &mut rng);
        assert!((pairing(&a, &b) - trace(&(&a * &b)).re).abs() < 1e-12);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_unitary(5, &mut rng);
        assert!(max_abs(&(u.adjoint() * &u - identity(5))) < 1e-12);
    }

    #[test]
    fn hermitian_ad_function_matches_series_for_sinh() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = random_complex_matrix(3, 3, &mut rng) * real(0.3);
        let q = &z + z.adjoint();
        let y = random_complex_matrix(3, 3, &mut rng);
        let exact = hermitian_ad_function(&q, &y, f64::sinh);
        // sinh(ad_Q) Y = (e^Q Y e^{-Q} - e^{-Q} Y e^{Q}) / 2
        let e = expm(&q);
        let ei = expm(&(-q.clone()));
        let series = (&e * &y * &ei - &ei * &y * &e) * real(0.5);
        assert!(max_abs(&(exact - series)) < 1e-12);
    }

    #[test]
    fn spectrum_distance_ignores_order() {
        let a = vec![cplx(1.0, 1.0), cplx(1.0, -1.0), cplx(-2.0, 0.0)];
        let b = vec![cplx(-2.0, 0.0), cplx(1.0, -1.0), cplx(1.0, 1.0)];
        assert_eq!(spectrum_distance(&a, &b), 0.0);
    }
}
