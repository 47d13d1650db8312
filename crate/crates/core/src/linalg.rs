//! Vector-level Gram–Schmidt and kernel routines.
//!
//! Everything here works on flat coefficient vectors with the standard
//! Hermitian inner product `<x, y> = Σ x_i conj(y_i)`. Matrix-level callers
//! flatten with a `1/√N` scale so that this inner product coincides with the
//! normalized trace inner product.

use num_complex::Complex64;

pub(crate) fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub(crate) fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [Complex64], alpha: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= alpha * xi;
    }
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Vectors whose
/// residual norm falls below `eps` are dropped.
pub(crate) fn orthonormalize(vectors: &[Vec<Complex64>], eps: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let h = dot(&r, q);
                axpy(&mut r, h, q);
            }
        }
        let nrm = norm(&r);
        if nrm >= eps {
            r.iter_mut().for_each(|z| *z /= nrm);
            basis.push(r);
        }
    }
    basis
}

/// Basis of the kernel of the linear map whose `j`-th column is `columns[j]`.
///
/// Runs Gram–Schmidt on the columns while tracking, for each orthonormal
/// image, the coefficient vector that produces it. A column whose residual
/// drops below `eps` yields a kernel vector; kernel vectors are linearly
/// independent because each carries a unit leading coefficient at its own
/// column index.
pub(crate) fn kernel(columns: &[Vec<Complex64>], eps: f64) -> Vec<Vec<Complex64>> {
    let m = columns.len();
    let mut images: Vec<Vec<Complex64>> = Vec::new();
    let mut coeffs: Vec<Vec<Complex64>> = Vec::new();
    let mut out = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut r = col.clone();
        let mut c = vec![Complex64::new(0.0, 0.0); m];
        c[j] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for (q, z) in images.iter().zip(&coeffs) {
                let h = dot(&r, q);
                axpy(&mut r, h, q);
                axpy(&mut c, h, z);
            }
        }
        let nrm = norm(&r);
        if nrm < eps {
            out.push(c);
        } else {
            r.iter_mut().for_each(|z| *z /= nrm);
            c.iter_mut().for_each(|z| *z /= nrm);
            images.push(r);
            coeffs.push(c);
        }
    }
    out
}
