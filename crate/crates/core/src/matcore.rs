//! Dense complex matrix primitives: column stacking, the realignment map,
//! SVD, numerical rank, and the operator Schmidt decomposition.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex<f64>`, stored in
//! nalgebra's column-major layout. None of the index maps below rely on that
//! layout; they are written out as explicit index arithmetic so the
//! definitions stay correct under any storage order.
//!
//! The central map is [`realign`]: an `mn x mn` matrix `Z`, viewed as an
//! `m x m` grid of `n x n` blocks `Z_ij`, is rearranged into the `m^2 x n^2`
//! matrix whose row `(j-1)m + i` (1-based) is `vec(Z_ij)^T`, blocks taken in
//! column-major order. `Z` is a tensor product `X (x) Y` exactly when the
//! realigned matrix is `vec(X) vec(Y)^T`, i.e. has rank one; that equivalence
//! is what the `product` module builds on.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMatrix = DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = DVector<C64>;

/// Default relative threshold under which a singular value is treated as
/// zero when computing numerical rank.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Iteration cap handed to nalgebra's iterative decompositions.
const MAX_EIG_ITER: usize = 100_000;

/// True when every entry has finite real and imaginary part.
pub fn is_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Column-stacking map: entry `(i, j)` of an `m x n` matrix lands at
/// position `j*m + i` (0-based) of a length-`mn` vector.
pub fn vec(x: &CMatrix) -> CVector {
    let (m, n) = x.shape();
    let mut out = CVector::zeros(m * n);
    for j in 0..n {
        for i in 0..m {
            out[j * m + i] = x[(i, j)];
        }
    }
    out
}

/// Inverse of [`vec`]: reshape a length-`mn` vector into an `m x n` matrix.
pub fn unvec(v: &CVector, m: usize, n: usize) -> Result<CMatrix> {
    if v.len() != m * n {
        return Err(Error::Dimension(format!(
            "unvec: vector of length {} cannot fill a {}x{} matrix",
            v.len(),
            m,
            n
        )));
    }
    let mut out = CMatrix::zeros(m, n);
    for j in 0..n {
        for i in 0..m {
            out[(i, j)] = v[j * m + i];
        }
    }
    Ok(out)
}

/// Realignment of an `mn x mn` matrix into an `m^2 x n^2` matrix.
///
/// Row `j*m + i` (0-based) of the output is `vec(Z_ij)^T`, where `Z_ij` is
/// the `n x n` block at block-row `i`, block-column `j`. A pure entry
/// rearrangement, so the Frobenius norm is preserved exactly.
pub fn realign(z: &CMatrix, m: usize, n: usize) -> Result<CMatrix> {
    let side = m * n;
    if z.nrows() != side || z.ncols() != side {
        return Err(Error::Dimension(format!(
            "realign: expected a {side}x{side} matrix for block sizes m={m}, n={n}, got {}x{}",
            z.nrows(),
            z.ncols()
        )));
    }
    let mut out = CMatrix::zeros(m * m, n * n);
    for j in 0..m {
        for i in 0..m {
            let row = j * m + i;
            for q in 0..n {
                for p in 0..n {
                    out[(row, q * n + p)] = z[(i * n + p, j * n + q)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product `x (x) y`.
pub fn kron(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x.kronecker(y)
}

/// Frobenius norm, `sqrt(sum |a_ij|^2)`.
pub fn frobenius_norm(a: &CMatrix) -> f64 {
    a.norm()
}

/// Largest entrywise deviation from Hermiticity, `max |A - A^H|`.
pub fn hermitian_error(a: &CMatrix) -> Result<f64> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "hermitian_error: matrix is {}x{}, not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let mut err = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            err = err.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    Ok(err)
}

/// Hermitian part `(A + A^H) / 2`.
pub fn hermitian_part(a: &CMatrix) -> Result<CMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "hermitian_part: matrix is {}x{}, not square",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok((a + a.adjoint()) * C64::new(0.5, 0.0))
}

/// Eigenvalues of the Hermitian part, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    if !is_finite(a) {
        return Err(Error::Numerical(
            "hermitian_eigenvalues: non-finite input".into(),
        ));
    }
    let h = hermitian_part(a)?;
    let eig = nalgebra::SymmetricEigen::try_new(h, f64::EPSILON, MAX_EIG_ITER)
        .ok_or_else(|| Error::Numerical("hermitian eigendecomposition did not converge".into()))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(vals)
}

/// Smallest eigenvalue of `(A + A^H) / 2`.
///
/// The input must already be Hermitian up to `1e-6` entrywise; taking the
/// Hermitian part only absorbs rounding noise, not genuinely asymmetric
/// matrices.
pub fn psd_min_eigenvalue(a: &CMatrix) -> Result<f64> {
    let herr = hermitian_error(a)?;
    if herr > 1e-6 {
        return Err(Error::Contract(format!(
            "psd_min_eigenvalue: input deviates from Hermitian by {herr:.3e}"
        )));
    }
    let vals = hermitian_eigenvalues(a)?;
    Ok(vals[0])
}

/// Thin singular value decomposition `A = sum_i sigma_i u_i v_i^H`.
///
/// `left` holds the `u_i` as columns, `right` the `v_i`; singular values are
/// nonincreasing and all `min(m, n)` of them are kept, zeros included.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left: CMatrix,
    pub singular_values: Vec<f64>,
    pub right: CMatrix,
}

impl SvdResult {
    /// Number of retained triples (`min(m, n)` of the input).
    pub fn len(&self) -> usize {
        self.singular_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singular_values.is_empty()
    }

    /// `sum_i sigma_i u_i v_i^H`.
    pub fn reconstruct(&self) -> CMatrix {
        let sigma = CMatrix::from_diagonal(&CVector::from_iterator(
            self.len(),
            self.singular_values.iter().map(|&s| C64::new(s, 0.0)),
        ));
        &self.left * sigma * self.right.adjoint()
    }
}

/// Singular value decomposition with singular values sorted nonincreasing.
///
/// Implemented as cyclic one-sided Jacobi: unitary 2x2 rotations
/// orthogonalize column pairs of the (transposed-if-wide) matrix until a
/// full sweep changes nothing; column norms are then the singular values.
/// Chosen over iterative bidiagonalization because the matrices this crate
/// decomposes are routinely rank-deficient (realignments of product states
/// are exactly rank one), where one-sided Jacobi stays accurate.
pub fn svd(a: &CMatrix) -> Result<SvdResult> {
    if !is_finite(a) {
        return Err(Error::Numerical("svd: non-finite input".into()));
    }
    let (m, n) = a.shape();
    let transposed = m < n;
    let work = if transposed { a.adjoint() } else { a.clone() };
    let (u, singular_values, v) = one_sided_jacobi(work)?;
    let (left, right) = if transposed { (v, u) } else { (u, v) };
    Ok(SvdResult {
        left,
        singular_values,
        right,
    })
}

const MAX_JACOBI_SWEEPS: usize = 60;

/// Factor a tall matrix (rows >= cols) as `U diag(sigma) V^H` with
/// orthonormal `U` columns, unitary `V`, and nonincreasing `sigma`.
fn one_sided_jacobi(mut b: CMatrix) -> Result<(CMatrix, Vec<f64>, CMatrix)> {
    let (rows, cols) = b.shape();
    let mut v = CMatrix::identity(cols, cols);
    // columns below this norm are rounding debris; rotating them against
    // full-size columns only stirs the noise and prevents convergence
    let floor_sq = (b.norm() * f64::EPSILON).powi(2);

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..cols.saturating_sub(1) {
            for q in (p + 1)..cols {
                let app: f64 = b.column(p).norm_squared();
                let aqq: f64 = b.column(q).norm_squared();
                if app <= floor_sq || aqq <= floor_sq {
                    continue;
                }
                let apq: C64 = b.column(p).dotc(&b.column(q));
                let mag = apq.norm();
                if mag <= f64::EPSILON * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                // unit phase of the off-diagonal Gram entry; the rotation
                // [[c, s*phase], [-s*conj(phase), c]] zeroes it when
                // tan(2*theta) = 2|apq| / (aqq - app)
                let phase = apq / C64::new(mag, 0.0);
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut b, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "one-sided Jacobi SVD did not converge within {MAX_JACOBI_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols).map(|j| b.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));

    let mut u = CMatrix::zeros(rows, cols);
    let mut v_sorted = CMatrix::zeros(cols, cols);
    let mut singular_values = Vec::with_capacity(cols);
    let mut zero_cols = Vec::new();
    for (col, &k) in order.iter().enumerate() {
        let sigma = norms[k];
        singular_values.push(sigma);
        v_sorted.set_column(col, &v.column(k));
        if sigma >= f64::MIN_POSITIVE {
            u.set_column(col, &(b.column(k) / C64::new(sigma, 0.0)));
        } else {
            zero_cols.push(col);
        }
    }
    complete_orthonormal(&mut u, &zero_cols);
    Ok((u, singular_values, v_sorted))
}

/// Apply the 2x2 column rotation `[[c, s*phase], [-s*conj(phase), c]]`.
fn rotate_columns(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let cp = C64::new(c, 0.0);
    let sp = phase * s;
    for i in 0..m.nrows() {
        let bp = m[(i, p)];
        let bq = m[(i, q)];
        m[(i, p)] = bp * cp - bq * sp.conj();
        m[(i, q)] = bp * sp + bq * cp;
    }
}

/// Fill the listed zero columns with unit vectors orthogonal to every other
/// column (Gram-Schmidt against standard basis vectors).
fn complete_orthonormal(u: &mut CMatrix, zero_cols: &[usize]) {
    let rows = u.nrows();
    let mut next_basis = 0usize;
    for &col in zero_cols {
        while next_basis < rows {
            let mut candidate = CVector::zeros(rows);
            candidate[next_basis] = C64::new(1.0, 0.0);
            next_basis += 1;
            for other in 0..u.ncols() {
                if other == col {
                    continue;
                }
                let overlap = u.column(other).dotc(&candidate);
                candidate -= u.column(other) * overlap;
            }
            let norm = candidate.norm();
            if norm > 0.5 {
                u.set_column(col, &(candidate / C64::new(norm, 0.0)));
                break;
            }
        }
    }
}

/// Count of singular values above `rel_tol * sigma_1`; zero for an all-zero
/// spectrum. The input must be nonincreasing and `rel_tol` in `(0, 1)`.
pub fn numerical_rank(sigmas: &[f64], rel_tol: f64) -> Result<usize> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::Contract(format!(
            "numerical_rank: rel_tol must lie in (0, 1), got {rel_tol}"
        )));
    }
    if sigmas.iter().any(|s| s.is_nan()) {
        return Err(Error::Contract("numerical_rank: NaN singular value".into()));
    }
    if sigmas.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Contract(
            "numerical_rank: singular values not nonincreasing".into(),
        ));
    }
    match sigmas.first() {
        None => Ok(0),
        Some(&s1) if s1 <= 0.0 => Ok(0),
        Some(&s1) => Ok(sigmas.iter().take_while(|&&s| s > rel_tol * s1).count()),
    }
}

/// One term `sigma_i, X_i, Y_i` of an operator Schmidt decomposition.
#[derive(Debug, Clone)]
pub struct SchmidtTerm {
    pub coefficient: f64,
    /// `m x m` left factor with `vec(X_i) = sqrt(sigma_i) u_i`.
    pub left: CMatrix,
    /// `n x n` right factor with `vec(Y_i) = sqrt(sigma_i) conj(v_i)`.
    pub right: CMatrix,
}

/// Expansion `Z = sum_i X_i (x) Y_i` obtained from the SVD of the realigned
/// matrix, keeping only terms above the numerical-rank threshold.
#[derive(Debug, Clone)]
pub struct SchmidtOperatorDecomposition {
    pub terms: Vec<SchmidtTerm>,
    pub m: usize,
    pub n: usize,
}

impl SchmidtOperatorDecomposition {
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    /// `sum_i X_i (x) Y_i`.
    pub fn reconstruct(&self) -> CMatrix {
        let side = self.m * self.n;
        let mut out = CMatrix::zeros(side, side);
        for term in &self.terms {
            out += kron(&term.left, &term.right);
        }
        out
    }
}

/// Operator Schmidt decomposition of an `mn x mn` matrix across the
/// `(m, n)` split: SVD of `realign(Z)`, one term per singular value above
/// the rank threshold.
pub fn schmidt_operator_decomposition(
    z: &CMatrix,
    m: usize,
    n: usize,
    rel_tol: f64,
) -> Result<SchmidtOperatorDecomposition> {
    let realigned = realign(z, m, n)?;
    let fact = svd(&realigned)?;
    let rank = numerical_rank(&fact.singular_values, rel_tol)?;
    let mut terms = Vec::with_capacity(rank);
    for i in 0..rank {
        let sigma = fact.singular_values[i];
        let w = C64::new(sigma.sqrt(), 0.0);
        let left = unvec(&(fact.left.column(i) * w), m, m)?;
        let right = unvec(&(fact.right.column(i).map(|z| z.conj()) * w), n, n)?;
        terms.push(SchmidtTerm {
            coefficient: sigma,
            left,
            right,
        });
    }
    Ok(SchmidtOperatorDecomposition { terms, m, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cm(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
        assert_eq!(entries.len(), rows * cols);
        CMatrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j], 0.0))
    }

    /// `p (|00><00| + |11><11|)/2 + (1-p) I/4`, written out as a diagonal.
    fn noisy_pair_matrix(p: f64) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_vec(vec![
            c((1.0 + p) / 4.0, 0.0),
            c((1.0 - p) / 4.0, 0.0),
            c((1.0 - p) / 4.0, 0.0),
            c((1.0 + p) / 4.0, 0.0),
        ]))
    }

    #[test]
    fn vec_column_stacks() {
        let x = cm(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let v = vec(&x);
        assert_eq!(
            v.iter().map(|z| z.re).collect::<Vec<_>>(),
            [1.0, 3.0, 2.0, 4.0]
        );

        let single = CMatrix::from_element(1, 1, c(0.3, -0.7));
        assert_eq!(vec(&single)[0], c(0.3, -0.7));

        let nilpotent = cm(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(
            vec(&nilpotent).iter().map(|z| z.re).collect::<Vec<_>>(),
            [0.0, 0.0, 1.0, 0.0]
        );
    }

    #[test]
    fn unvec_inverts_vec() {
        let x = cm(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let back = unvec(&vec(&x), 2, 2).unwrap();
        assert_eq!(back, x);

        let v = CVector::from_vec(vec![c(1.0, 0.0), c(3.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(unvec(&v, 2, 2).unwrap(), x);

        // column case: m = len, n = 1
        let col = unvec(&v, 4, 1).unwrap();
        assert_eq!(vec(&col), v);

        assert!(matches!(unvec(&v, 3, 2), Err(Error::Dimension(_))));
    }

    #[test]
    fn realign_monomial_is_outer_product() {
        let x = cm(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let y = cm(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let r = realign(&kron(&x, &y), 2, 2).unwrap();
        let outer = vec(&x) * vec(&y).transpose();
        assert_eq!(r, outer);
    }

    #[test]
    fn realign_diagonal_pair_family() {
        // correlated two-qubit mixture: (1+p)/4 lands on the realigned
        // corners (0,0) and (3,3); (1-p)/4 on (0,3) and (3,0)
        let p = 0.3;
        let r = realign(&noisy_pair_matrix(p), 2, 2).unwrap();
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 0)] = c((1.0 + p) / 4.0, 0.0);
        expected[(3, 3)] = c((1.0 + p) / 4.0, 0.0);
        expected[(0, 3)] = c((1.0 - p) / 4.0, 0.0);
        expected[(3, 0)] = c((1.0 - p) / 4.0, 0.0);
        assert_relative_eq!((r - expected).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn realign_rank_one_projector_across_uneven_split() {
        // (|000> + |110>)/sqrt(2) as a 2 x 4 split: four 1/2 entries
        let mut rho = CMatrix::zeros(8, 8);
        for &(i, j) in &[(0, 0), (0, 6), (6, 0), (6, 6)] {
            rho[(i, j)] = c(0.5, 0.0);
        }
        let r = realign(&rho, 2, 4).unwrap();
        assert_eq!(r.shape(), (4, 16));
        let mut expected = CMatrix::zeros(4, 16);
        for &(i, j) in &[(0, 0), (1, 2), (2, 8), (3, 10)] {
            expected[(i, j)] = c(0.5, 0.0);
        }
        assert_eq!(r, expected);
    }

    #[test]
    fn realign_rejects_bad_split() {
        let z = CMatrix::zeros(6, 6);
        assert!(realign(&z, 2, 2).is_err());
        assert!(realign(&z, 2, 3).is_ok());
    }

    #[test]
    fn svd_diagonal() {
        let a = cm(2, 2, &[3.0, 0.0, 0.0, 1.0]);
        let fact = svd(&a).unwrap();
        assert_relative_eq!(fact.singular_values[0], 3.0, epsilon = 1e-14);
        assert_relative_eq!(fact.singular_values[1], 1.0, epsilon = 1e-14);
        // singular vectors are the standard basis up to phase
        for i in 0..2 {
            assert_relative_eq!(fact.left.column(i)[i].norm(), 1.0, epsilon = 1e-12);
            assert_relative_eq!(fact.right.column(i)[i].norm(), 1.0, epsilon = 1e-12);
        }
        assert_relative_eq!((fact.reconstruct() - a).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn svd_of_realigned_pair_family() {
        // eigenvalues of the symmetric corner block are (1+p)/4 +- (1-p)/4,
        // i.e. 1/2 and p/2
        let r = realign(&noisy_pair_matrix(0.5), 2, 2).unwrap();
        let fact = svd(&r).unwrap();
        let expected = [0.5, 0.25, 0.0, 0.0];
        for (got, want) in fact.singular_values.iter().zip(expected) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn svd_zero_matrix() {
        let z = CMatrix::zeros(3, 5);
        let fact = svd(&z).unwrap();
        assert_eq!(fact.len(), 3);
        assert!(fact.singular_values.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn svd_rejects_non_finite() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(svd(&a), Err(Error::Numerical(_))));
    }

    #[test]
    fn numerical_rank_thresholds() {
        assert_eq!(numerical_rank(&[0.5, 0.25, 0.0, 0.0], 1e-8).unwrap(), 2);
        assert_eq!(numerical_rank(&[0.5, 0.0, 0.0, 0.0], 1e-8).unwrap(), 1);
        assert_eq!(numerical_rank(&[0.0, 0.0], 0.5).unwrap(), 0);
        assert_eq!(numerical_rank(&[], 1e-8).unwrap(), 0);
        assert!(matches!(
            numerical_rank(&[0.1, 0.5], 1e-8),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            numerical_rank(&[1.0], 2.0),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn schmidt_single_term_for_tensor_product() {
        let x = CMatrix::from_fn(2, 2, |i, j| c(0.3 + (i * 2 + j) as f64, 0.1 * j as f64));
        let y = CMatrix::from_fn(3, 3, |i, j| c(1.0 - 0.2 * i as f64, 0.05 * (i + j) as f64));
        let z = kron(&x, &y);
        let dec = schmidt_operator_decomposition(&z, 2, 3, DEFAULT_REL_TOL).unwrap();
        assert_eq!(dec.rank(), 1);
        assert_relative_eq!(
            (dec.reconstruct() - &z).norm() / z.norm(),
            0.0,
            epsilon = 1e-10
        );
        // vec(X_1) has norm sqrt(sigma_1)
        assert_relative_eq!(
            dec.terms[0].left.norm(),
            dec.terms[0].coefficient.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn schmidt_two_terms_for_pair_family() {
        let dec =
            schmidt_operator_decomposition(&noisy_pair_matrix(0.5), 2, 2, DEFAULT_REL_TOL).unwrap();
        assert_eq!(dec.rank(), 2);
        assert_relative_eq!(dec.terms[0].coefficient, 0.5, epsilon = 1e-12);
        assert_relative_eq!(dec.terms[1].coefficient, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn schmidt_w_state_operator_rank_is_four() {
        // W projector across the 2 x 4 split: the pure Schmidt ranks are
        // (2/3, 1/3), so the operator spectrum is sqrt(l_i l_j):
        // 2/3, sqrt(2)/3, sqrt(2)/3, 1/3
        let mut psi = CVector::zeros(8);
        let amp = c(1.0 / 3f64.sqrt(), 0.0);
        psi[1] = amp;
        psi[2] = amp;
        psi[4] = amp;
        let rho = &psi * psi.adjoint();
        let dec = schmidt_operator_decomposition(&rho, 2, 4, DEFAULT_REL_TOL).unwrap();
        assert_eq!(dec.rank(), 4);
        let expected = [2.0 / 3.0, 2f64.sqrt() / 3.0, 2f64.sqrt() / 3.0, 1.0 / 3.0];
        for (term, want) in dec.terms.iter().zip(expected) {
            assert_relative_eq!(term.coefficient, want, epsilon = 1e-12);
        }
        assert_relative_eq!((dec.reconstruct() - &rho).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn schmidt_zero_matrix_is_empty() {
        let dec =
            schmidt_operator_decomposition(&CMatrix::zeros(4, 4), 2, 2, DEFAULT_REL_TOL).unwrap();
        assert_eq!(dec.rank(), 0);
    }

    #[test]
    fn kron_basics() {
        let eye2 = CMatrix::identity(2, 2);
        assert_eq!(kron(&eye2, &eye2), CMatrix::identity(4, 4));

        let x = cm(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let y = cm(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let k = kron(&x, &y);
        assert_eq!(k[(0, 1)], c(1.0, 0.0));
        assert_eq!(k.iter().map(|z| z.norm_sqr()).sum::<f64>(), 1.0);
    }

    #[test]
    fn hermitian_and_psd_checks() {
        let a = cm(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(hermitian_error(&a).unwrap(), 0.0);
        assert_relative_eq!(psd_min_eigenvalue(&a).unwrap(), 0.0, epsilon = 1e-14);

        let flip = cm(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_relative_eq!(psd_min_eigenvalue(&flip).unwrap(), -1.0, epsilon = 1e-14);

        for p in [0.0, 0.4, 1.0] {
            assert_relative_eq!(
                psd_min_eigenvalue(&noisy_pair_matrix(p)).unwrap(),
                (1.0 - p) / 4.0,
                epsilon = 1e-14
            );
        }

        let skew = cm(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(psd_min_eigenvalue(&skew), Err(Error::Contract(_))));
    }
}
