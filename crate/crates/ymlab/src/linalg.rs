//! Dense complex linear algebra helpers shared by every module.
//!
//! Thin wrappers over LAPACK (through `ndarray-linalg`) plus the orthonormal
//! subspace machinery (null spaces, ranges, intersections, complements) that
//! the gauge module needs. All bases are returned with orthonormal columns.

use crate::{C64, CMat, CVec, Error, Result};
use ndarray::{concatenate, s, Array1, Axis};
use ndarray_linalg::{Eigh, Inverse, SVD, UPLO};
use rand::Rng;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

pub fn mm(a: &CMat, b: &CMat) -> CMat {
    a.dot(b)
}

pub fn mm3(a: &CMat, b: &CMat, c: &CMat) -> CMat {
    a.dot(&b.dot(c))
}

pub fn eye(n: usize) -> CMat {
    CMat::eye(n)
}

/// Frobenius norm.
pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(u: &CVec, v: &CVec) -> C64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Spectral norm (largest singular value) by power iteration on A*A.
///
/// The batteries compare residual norms against tolerances with orders of
/// magnitude of headroom, so 80 iterations from a deterministic start are
/// plenty; a full SVD per check would dominate the runtime.
pub fn two_norm(a: &CMat) -> f64 {
    let (r, c) = a.dim();
    if r == 0 || c == 0 {
        return 0.0;
    }
    let mut v: CVec = Array1::from_shape_fn(c, |i| {
        c64(1.0 + 0.3 * ((i * 2654435761) % 97) as f64 / 97.0, 0.17 * ((i * 40503) % 89) as f64 / 89.0)
    });
    let n0 = vec_norm(&v);
    v.mapv_inplace(|z| z / n0);
    let ah = dagger(a);
    let mut sigma = 0.0f64;
    for _ in 0..80 {
        let w = a.dot(&v);
        let u = ah.dot(&w);
        let nu = vec_norm(&u);
        if nu == 0.0 {
            return 0.0;
        }
        sigma = nu.sqrt();
        v = u.mapv(|z| z / nu);
    }
    sigma
}

/// Relative deviation from hermiticity, ‖A − A*‖ / max(1, ‖A‖).
pub fn herm_residual(a: &CMat) -> f64 {
    let d = a - &dagger(a);
    two_norm(&d) / two_norm(a).max(1.0)
}

/// Relative residual ‖A − B‖ / max(scale, 1).
pub fn rel_diff(a: &CMat, b: &CMat, scale: f64) -> f64 {
    two_norm(&(a - b)) / scale.max(1.0)
}

/// Hermitian eigendecomposition, ascending eigenvalues.
///
/// The input is symmetrized; if its hermiticity residual exceeds
/// [`crate::tol::FUNCALC_HERMITICITY`] the call is a contract violation.
pub fn eigh_checked(a: &CMat) -> Result<(Array1<f64>, CMat)> {
    let res = herm_residual(a);
    if res > crate::tol::FUNCALC_HERMITICITY {
        return Err(Error::Contract(format!(
            "eigh on non-hermitian input, residual {res:.3e}"
        )));
    }
    let sym = (a + &dagger(a)).mapv(|z| z * 0.5);
    let (w, v) = sym.eigh(UPLO::Lower)?;
    Ok((w, v))
}

/// Apply `f` to the eigenvalues of a hermitian matrix.
///
/// Eigenvalues within [`crate::tol::FUNCALC_CLUSTER`] (relative to the
/// spectral scale) of each other form one cluster and `f` is evaluated at the
/// cluster mean, which keeps square roots and cutoff functions stable across
/// degeneracies.
pub fn herm_fn(a: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (w, v) = eigh_checked(a)?;
    let fw = cluster_apply(&w, f);
    Ok(recompose(&v, &fw))
}

/// Evaluate `f` on clustered eigenvalues.
pub fn cluster_apply(w: &Array1<f64>, f: impl Fn(f64) -> f64) -> Array1<f64> {
    let n = w.len();
    let scale = w.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let gap = crate::tol::FUNCALC_CLUSTER * scale;
    let mut out = Array1::zeros(n);
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && (w[j] - w[j - 1]).abs() <= gap {
            j += 1;
        }
        let mean = w.slice(s![i..j]).sum() / (j - i) as f64;
        let val = f(mean);
        for k in i..j {
            out[k] = val;
        }
        i = j;
    }
    out
}

/// V diag(w) V*.
pub fn recompose(v: &CMat, w: &Array1<f64>) -> CMat {
    let mut scaled = v.clone();
    for (mut col, &wi) in scaled.axis_iter_mut(Axis(1)).zip(w.iter()) {
        col.mapv_inplace(|z| z * wi);
    }
    scaled.dot(&dagger(v))
}

pub fn inv(a: &CMat) -> Result<CMat> {
    Ok(a.inv()?)
}

/// Full SVD; panics never, errors map to the backend variant.
pub fn svd_full(a: &CMat) -> Result<(CMat, Array1<f64>, CMat)> {
    let (u, s, vt) = a.svd(true, true)?;
    Ok((
        u.ok_or_else(|| Error::Backend("svd returned no U".into()))?,
        s,
        vt.ok_or_else(|| Error::Backend("svd returned no V^H".into()))?,
    ))
}

pub fn rank(a: &CMat, tol_abs: f64) -> Result<usize> {
    let (_, s, _) = a.svd(false, false).map(|(_, s, _)| ((), s, ()))?;
    Ok(s.iter().filter(|&&x| x > tol_abs).count())
}

/// Orthonormal basis of the null space: right singular vectors with
/// singular value below `tol_abs`.
pub fn nullspace(a: &CMat, tol_abs: f64) -> Result<CMat> {
    let (_, s, vt) = svd_full(a)?;
    let n = a.dim().1;
    let r = s.iter().filter(|&&x| x > tol_abs).count();
    let mut basis = CMat::zeros((n, n - r));
    for (k, row) in (r..n).enumerate() {
        for j in 0..n {
            basis[[j, k]] = vt[[row, j]].conj();
        }
    }
    Ok(basis)
}

/// Orthonormal basis of the column range.
pub fn range_basis(a: &CMat, tol_abs: f64) -> Result<CMat> {
    let (u, s, _) = svd_full(a)?;
    let r = s.iter().filter(|&&x| x > tol_abs).count();
    Ok(u.slice(s![.., ..r]).to_owned())
}

/// Orthonormalize the columns of `a` (SVD-based, rank-revealing).
pub fn orthonormalize(a: &CMat, tol_abs: f64) -> Result<CMat> {
    range_basis(a, tol_abs)
}

/// Least-squares solution of A X = B through the thresholded pseudo-inverse.
pub fn lstsq(a: &CMat, b: &CMat, rel_tol: f64) -> Result<CMat> {
    let (u, s, vt) = svd_full(a)?;
    let smax = s.iter().cloned().fold(0.0f64, f64::max);
    let cut = rel_tol * smax.max(1e-300);
    let ub = dagger(&u).dot(b);
    let k = s.len();
    let mut scaled = ub.slice(s![..k, ..]).to_owned();
    for (i, mut row) in scaled.axis_iter_mut(Axis(0)).enumerate() {
        let f = if s[i] > cut { 1.0 / s[i] } else { 0.0 };
        row.mapv_inplace(|z| z * f);
    }
    Ok(dagger(&vt).slice(s![.., ..k]).dot(&scaled))
}

/// Moore-Penrose pseudo-inverse with relative threshold.
pub fn pinv(a: &CMat, rel_tol: f64) -> Result<CMat> {
    let n = a.dim().0;
    lstsq(a, &eye(n), rel_tol)
}

/// Orthonormal basis of span(U) ∩ span(V), both inputs orthonormal.
pub fn intersection(u: &CMat, v: &CMat, tol_abs: f64) -> Result<CMat> {
    if u.dim().1 == 0 || v.dim().1 == 0 {
        return Ok(CMat::zeros((u.dim().0, 0)));
    }
    let minus_v = v.mapv(|z| -z);
    let stacked = concatenate(Axis(1), &[u.view(), minus_v.view()])
        .map_err(|e| Error::Dimension(e.to_string()))?;
    let ns = nullspace(&stacked, tol_abs)?;
    let p = u.dim().1;
    let coeffs = ns.slice(s![..p, ..]).to_owned();
    let w = u.dot(&coeffs);
    orthonormalize(&w, tol_abs)
}

/// Orthonormal basis of the orthogonal complement of span(U) inside span(W).
pub fn complement_within(w: &CMat, u: &CMat, tol_abs: f64) -> Result<CMat> {
    let proj = u.dot(&dagger(u));
    let residual = w - &proj.dot(w);
    orthonormalize(&residual, tol_abs)
}

/// Random matrix with i.i.d. standard-normal-ish entries (Box-Muller over the
/// supplied generator, deterministic given the generator state).
pub fn random_cmat<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_shape_fn((rows, cols), |_| {
        let u1: f64 = rng.gen_range(1e-12..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (-2.0 * u1.ln()).sqrt();
        c64(r * u2.cos(), r * u2.sin()) / std::f64::consts::SQRT_2
    })
}

pub fn random_cvec<R: Rng>(rng: &mut R, n: usize) -> CVec {
    random_cmat(rng, n, 1).column(0).to_owned()
}

pub fn random_herm<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let a = random_cmat(rng, n, n);
    (&a + &dagger(&a)).mapv(|z| z * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_norm_matches_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3, 17, 40] {
            let a = random_cmat(&mut rng, n, n);
            let (_, s, _) = svd_full(&a).unwrap();
            assert_relative_eq!(two_norm(&a), s[0], max_relative = 1e-8);
        }
    }

    #[test]
    fn herm_fn_square_root_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_herm(&mut rng, 24);
        let shifted = &a + &(eye(24).mapv(|z| z * 30.0));
        let root = herm_fn(&shifted, f64::sqrt).unwrap();
        assert!(rel_diff(&root.dot(&root), &shifted, two_norm(&shifted)) < 1e-12);
    }

    #[test]
    fn pseudo_inverse_agrees_with_dense_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = &random_herm(&mut rng, 12) + &eye(12).mapv(|z| z * 20.0);
        let p = pinv(&a, 1e-13).unwrap();
        let direct = inv(&a).unwrap();
        assert!(rel_diff(&p, &direct, two_norm(&direct)) < 1e-11);
    }

    #[test]
    fn nullspace_of_projection() {
        let n = 10;
        let mut m = CMat::zeros((n, n));
        for i in 0..4 {
            m[[i, i]] = c64(1.0, 0.0);
        }
        let ns = nullspace(&m, 1e-12).unwrap();
        assert_eq!(ns.dim().1, 6);
        assert!(two_norm(&m.dot(&ns)) < 1e-14);
    }

    #[test]
    fn intersection_of_planes() {
        // span(e0,e1) ∩ span(e1,e2) = span(e1)
        let mut u = CMat::zeros((4, 2));
        u[[0, 0]] = c64(1.0, 0.0);
        u[[1, 1]] = c64(1.0, 0.0);
        let mut v = CMat::zeros((4, 2));
        v[[1, 0]] = c64(1.0, 0.0);
        v[[2, 1]] = c64(1.0, 0.0);
        let w = intersection(&u, &v, 1e-12).unwrap();
        assert_eq!(w.dim().1, 1);
        assert_relative_eq!(w[[1, 0]].norm(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn cluster_apply_merges_degenerate_pairs() {
        let w = Array1::from(vec![1.0, 1.0 + 1e-15, 2.0]);
        let out = cluster_apply(&w, |x| if x > 1.5 { 10.0 } else { x });
        assert_eq!(out[0], out[1]);
        assert_eq!(out[2], 10.0);
    }
}
