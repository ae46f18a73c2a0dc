//! Independent oracle routines for the verification suites.
//!
//! Everything here is written from scratch against the definitions, without
//! touching the production realignment or SVD paths: the realignment is a
//! direct block walk, and singular values come from a two-sided Jacobi
//! eigensolver applied to the Hermitian dilation `[[0, A], [A^H, 0]]`,
//! whose eigenvalues are exactly `+-sigma_i` (padded with zeros). Working
//! on the dilation instead of the Gram matrix `A^H A` keeps tiny singular
//! values accurate at absolute level `eps * sigma_1`, which matters when
//! rank decisions sit near the threshold.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use qprod::matcore::CMatrix;

/// Realignment written independently: walk the n x n blocks of `z` in
/// column-major block order and column-stack each one into a row.
pub fn oracle_realign(z: &CMatrix, m: usize, n: usize) -> CMatrix {
    assert_eq!(z.nrows(), m * n);
    assert_eq!(z.ncols(), m * n);
    let mut out = CMatrix::zeros(m * m, n * n);
    for block_col in 0..m {
        for block_row in 0..m {
            let row = block_col * m + block_row;
            let mut col = 0;
            for q in 0..n {
                for p in 0..n {
                    out[(row, col)] = z[(block_row * n + p, block_col * n + q)];
                    col += 1;
                }
            }
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix by cyclic two-sided Jacobi rotations;
/// ascending order. Panics if the sweep does not converge (test code).
pub fn hermitian_jacobi_eigenvalues(mut h: CMatrix) -> Vec<f64> {
    let n = h.nrows();
    assert_eq!(n, h.ncols());
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let tol = scale * f64::EPSILON;

    let mut converged = false;
    for _ in 0..100 {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let hpq = h[(p, q)];
                let mag = hpq.norm();
                if mag <= tol {
                    continue;
                }
                rotated = true;
                let phase = hpq / C64::new(mag, 0.0);
                let tau = (h[(q, q)].re - h[(p, p)].re) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let cp = C64::new(c, 0.0);
                let sp = phase * s;
                // similarity transform J^H H J on the (p, q) plane:
                // columns first, then rows with the conjugate coefficients
                for i in 0..n {
                    let a = h[(i, p)];
                    let b = h[(i, q)];
                    h[(i, p)] = a * cp - b * sp.conj();
                    h[(i, q)] = a * sp + b * cp;
                }
                for j in 0..n {
                    let a = h[(p, j)];
                    let b = h[(q, j)];
                    h[(p, j)] = a * cp - b * sp;
                    h[(q, j)] = a * sp.conj() + b * cp;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    assert!(converged, "oracle Jacobi eigensolver did not converge");

    let mut eigs: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

/// Singular values of `a`, nonincreasing, via the eigenvalues of the
/// Hermitian dilation.
pub fn oracle_singular_values(a: &CMatrix) -> Vec<f64> {
    let (m, n) = a.shape();
    let d = m + n;
    let mut dilation = CMatrix::zeros(d, d);
    for i in 0..m {
        for j in 0..n {
            dilation[(i, m + j)] = a[(i, j)];
            dilation[(m + j, i)] = a[(i, j)].conj();
        }
    }
    let mut eigs = hermitian_jacobi_eigenvalues(dilation);
    eigs.reverse();
    eigs.truncate(m.min(n));
    eigs.into_iter().map(|x| x.max(0.0)).collect()
}

/// Rank decision from the dilation spectrum: eigenvalues above
/// `rel_tol * lambda_max` each correspond to one singular value above
/// `rel_tol * sigma_1`.
pub fn oracle_rank(a: &CMatrix, rel_tol: f64) -> usize {
    let (m, n) = a.shape();
    let d = m + n;
    let mut dilation = CMatrix::zeros(d, d);
    for i in 0..m {
        for j in 0..n {
            dilation[(i, m + j)] = a[(i, j)];
            dilation[(m + j, i)] = a[(i, j)].conj();
        }
    }
    let eigs = hermitian_jacobi_eigenvalues(dilation);
    let top = eigs.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    eigs.iter().filter(|&&x| x > rel_tol * top).count()
}
