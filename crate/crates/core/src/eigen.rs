//! Cyclic Jacobi eigensolver for 4×4 symmetric matrices.
//!
//! nalgebra's `SymmetricEigen` leaves eigenvector residuals near 1e-8 on some Gram
//! matrices; Jacobi rotations converge to machine precision, repeated eigenvalues included.

use nalgebra::Matrix4;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues and orthonormal eigenvectors (as columns) of a symmetric matrix.
pub(crate) fn symmetric_eigen(m: &Matrix4<f64>) -> ([f64; 4], Matrix4<f64>) {
    let mut a = *m;
    let mut v = Matrix4::identity();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..4)
            .flat_map(|p| (p + 1..4).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)] * a[(p, q)])
            .sum();
        let diag: f64 = (0..4).map(|i| a[(i, i)] * a[(i, i)]).sum();
        if off <= f64::EPSILON * f64::EPSILON * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..4 {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ([a[(0, 0)], a[(1, 1)], a[(2, 2)], a[(3, 3)]], v)
}
