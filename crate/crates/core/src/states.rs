//! Multipartite density matrices and pure states: validation, tensor
//! products, partial trace, subsystem permutation, and state generators.
//!
//! Subsystem labels are 1-based throughout. A state over dims
//! `[d_1, ..., d_N]` lives on a space of dimension `D = d_1 * ... * d_N`,
//! with subsystem 1 the most significant digit of the mixed-radix basis
//! index (the usual Kronecker-product ordering).

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, CVector};

/// Default tolerance for accepting a matrix as a valid density matrix.
pub const VALIDATION_TOL: f64 = 1e-9;

/// Mixed-radix flattening, subsystem 1 most significant.
pub(crate) fn flatten(multi: &[usize], dims: &[usize]) -> usize {
    multi.iter().zip(dims).fold(0, |acc, (&a, &d)| acc * d + a)
}

/// Inverse of [`flatten`] into a caller-provided buffer.
pub(crate) fn unflatten(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::Validation("empty subsystem dimension list".into()));
    }
    if dims.contains(&0) {
        return Err(Error::Validation(format!(
            "subsystem dimensions must be positive, got {dims:?}"
        )));
    }
    Ok(())
}

/// Hermitian, positive semidefinite, trace-one matrix over a list of
/// subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validate at the default tolerance.
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(dims, matrix, VALIDATION_TOL)
    }

    /// Validate with an explicit tolerance on Hermiticity, trace deviation,
    /// and the negative-eigenvalue floor.
    pub fn with_tolerance(dims: Vec<usize>, matrix: CMatrix, tol: f64) -> Result<Self> {
        check_dims(&dims)?;
        let d: usize = dims.iter().product();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Dimension(format!(
                "state over dims {dims:?} needs a {d}x{d} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !matcore::is_finite(&matrix) {
            return Err(Error::Validation("non-finite matrix entry".into()));
        }
        let herr = matcore::hermitian_error(&matrix)?;
        if herr > tol {
            return Err(Error::Validation(format!(
                "Hermiticity violated by {herr:.3e} (tolerance {tol:.1e})"
            )));
        }
        let trace = matrix.trace();
        let tdev = (trace - C64::new(1.0, 0.0)).norm();
        if tdev > tol {
            return Err(Error::Validation(format!(
                "trace deviates from 1 by {tdev:.3e} (tolerance {tol:.1e})"
            )));
        }
        let min_eig = matcore::psd_min_eigenvalue(&matrix)?;
        if min_eig < -tol {
            return Err(Error::Validation(format!(
                "smallest eigenvalue {min_eig:.3e} below -{tol:.1e}"
            )));
        }
        Ok(Self { dims, matrix })
    }

    /// Constructor for results whose validity follows from the operation
    /// itself (tensor products, partial traces, entry permutations).
    pub(crate) fn new_unchecked(dims: Vec<usize>, matrix: CMatrix) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.nrows());
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Tensor product; dims concatenate.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix::new_unchecked(dims, matcore::kron(&self.matrix, &other.matrix))
    }

    /// Trace out every subsystem not in `keep` (1-based labels). The kept
    /// subsystems retain their original relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.n_subsystems();
        if keep.is_empty() {
            return Err(Error::Partition("partial_trace: empty keep set".into()));
        }
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        if keep_sorted.len() != keep.len() {
            return Err(Error::Partition(format!(
                "partial_trace: duplicate subsystem in keep set {keep:?}"
            )));
        }
        if keep_sorted.iter().any(|&k| k < 1 || k > n) {
            return Err(Error::Partition(format!(
                "partial_trace: keep set {keep:?} out of range 1..={n}"
            )));
        }
        let traced: Vec<usize> = (1..=n).filter(|k| !keep_sorted.contains(k)).collect();
        let kdims: Vec<usize> = keep_sorted.iter().map(|&k| self.dims[k - 1]).collect();
        let tdims: Vec<usize> = traced.iter().map(|&k| self.dims[k - 1]).collect();
        let dk: usize = kdims.iter().product();
        let dt: usize = tdims.iter().product();

        let mut out = CMatrix::zeros(dk, dk);
        let mut kmulti_r = vec![0usize; kdims.len()];
        let mut kmulti_c = vec![0usize; kdims.len()];
        let mut tmulti = vec![0usize; tdims.len()];
        let mut full_r = vec![0usize; n];
        let mut full_c = vec![0usize; n];
        for rk in 0..dk {
            unflatten(rk, &kdims, &mut kmulti_r);
            for ck in 0..dk {
                unflatten(ck, &kdims, &mut kmulti_c);
                let mut sum = C64::new(0.0, 0.0);
                for t in 0..dt.max(1) {
                    unflatten(t, &tdims, &mut tmulti);
                    for (pos, &sub) in keep_sorted.iter().enumerate() {
                        full_r[sub - 1] = kmulti_r[pos];
                        full_c[sub - 1] = kmulti_c[pos];
                    }
                    for (pos, &sub) in traced.iter().enumerate() {
                        full_r[sub - 1] = tmulti[pos];
                        full_c[sub - 1] = tmulti[pos];
                    }
                    sum +=
                        self.matrix[(flatten(&full_r, &self.dims), flatten(&full_c, &self.dims))];
                }
                out[(rk, ck)] = sum;
            }
        }
        Ok(DensityMatrix::new_unchecked(kdims, out))
    }

    /// Reorder subsystems. `perm[t]` is the 1-based original label of the
    /// subsystem placed at slot `t`; entries move under the induced
    /// multi-index bijection on rows and columns, so the spectrum is
    /// untouched.
    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<DensityMatrix> {
        let map = permutation_index_map(&self.dims, perm)?;
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p - 1]).collect();
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                out[(map[r], map[c])] = self.matrix[(r, c)];
            }
        }
        Ok(DensityMatrix::new_unchecked(new_dims, out))
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

/// Validate `perm` as a bijection on `{1..N}` and return the induced map
/// from old flat basis indices to new ones.
pub(crate) fn permutation_index_map(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let n = dims.len();
    if perm.len() != n {
        return Err(Error::Partition(format!(
            "permutation {perm:?} has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p < 1 || p > n || seen[p - 1] {
            return Err(Error::Partition(format!(
                "permutation {perm:?} is not a bijection on 1..={n}"
            )));
        }
        seen[p - 1] = true;
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p - 1]).collect();
    let d: usize = dims.iter().product();
    let mut multi = vec![0usize; n];
    let mut map = vec![0usize; d];
    for (idx, slot) in map.iter_mut().enumerate() {
        unflatten(idx, dims, &mut multi);
        let mut new_idx = 0;
        for t in 0..n {
            new_idx = new_idx * new_dims[t] + multi[perm[t] - 1];
        }
        *slot = new_idx;
    }
    Ok(map)
}

/// Inverse of a 1-based permutation.
pub fn inverse_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; perm.len()];
    for (t, &p) in perm.iter().enumerate() {
        inv[p - 1] = t + 1;
    }
    inv
}

/// Unit vector over a list of subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: CVector,
}

impl PureState {
    /// Accepts amplitude vectors within `1e-6` of unit norm and rescales to
    /// exact unit norm.
    pub fn new(dims: Vec<usize>, amplitudes: CVector) -> Result<Self> {
        Self::with_tolerance(dims, amplitudes, 1e-6)
    }

    /// [`PureState::new`] with an explicit bound on the norm deviation.
    pub fn with_tolerance(dims: Vec<usize>, amplitudes: CVector, tol: f64) -> Result<Self> {
        check_dims(&dims)?;
        let d: usize = dims.iter().product();
        if amplitudes.len() != d {
            return Err(Error::Dimension(format!(
                "state over dims {dims:?} needs {d} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::Validation("non-finite amplitude".into()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::Validation(format!(
                "amplitude vector has norm {norm}, expected 1 within {tol:.1e}"
            )));
        }
        Ok(Self {
            dims,
            amplitudes: amplitudes / C64::new(norm, 0.0),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Rank-one projector `|psi><psi|` with the same dims.
    pub fn density(&self) -> DensityMatrix {
        let matrix = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::new_unchecked(self.dims.clone(), matrix)
    }
}

/// Projector onto a pure state.
pub fn density_from_pure(psi: &PureState) -> DensityMatrix {
    psi.density()
}

/// Built-in state families and seeded random generators.
pub mod gen {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    /// `p (|00><00| + |11><11|)/2 + (1-p) I/4`: a classically correlated
    /// two-qubit mixture in white noise. Product exactly at `p = 0`.
    pub fn noisy_pair(p: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::Validation(format!("p must lie in [0, 1], got {p}")));
        }
        let diag = [
            (1.0 + p) / 4.0,
            (1.0 - p) / 4.0,
            (1.0 - p) / 4.0,
            (1.0 + p) / 4.0,
        ];
        let matrix = CMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Ok(DensityMatrix::new_unchecked(vec![2, 2], matrix))
    }

    /// `(|0...0> + |1...1>)/sqrt(2)` on `n >= 2` qubits.
    pub fn ghz(n: usize) -> Result<PureState> {
        if n < 2 {
            return Err(Error::Validation(format!("ghz needs n >= 2, got {n}")));
        }
        let d = 1usize << n;
        let mut amp = CVector::zeros(d);
        let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amp[0] = w;
        amp[d - 1] = w;
        PureState::new(vec![2; n], amp)
    }

    /// Equal superposition of the `n` single-excitation basis states on
    /// `n >= 2` qubits.
    pub fn w(n: usize) -> Result<PureState> {
        if n < 2 {
            return Err(Error::Validation(format!("w needs n >= 2, got {n}")));
        }
        let d = 1usize << n;
        let mut amp = CVector::zeros(d);
        let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        for k in 0..n {
            amp[1usize << (n - 1 - k)] = a;
        }
        PureState::new(vec![2; n], amp)
    }

    /// Two-qubit `(|00> + |11>)/sqrt(2)`.
    pub fn bell() -> PureState {
        ghz(2).expect("n = 2 is valid")
    }

    /// Three-qubit `(|000> + |110>)/sqrt(2)`: a Bell pair on qubits 1,2
    /// with qubit 3 in `|0>`.
    pub fn bell_zero() -> PureState {
        let mut amp = CVector::zeros(8);
        let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amp[0] = w;
        amp[6] = w;
        PureState::new(vec![2, 2, 2], amp).expect("normalized by construction")
    }

    fn standard_complex<R: Rng>(rng: &mut R) -> C64 {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    }

    /// Square matrix of independent standard complex Gaussians.
    pub fn ginibre<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
        CMatrix::from_fn(dim, dim, |_, _| standard_complex(rng))
    }

    /// Full-rank random density matrix `G G^H / tr(G G^H)`.
    pub fn random_density_with<R: Rng>(dims: &[usize], rng: &mut R) -> Result<DensityMatrix> {
        check_dims(dims)?;
        let d: usize = dims.iter().product();
        let g = ginibre(d, rng);
        let gram = &g * g.adjoint();
        let trace = gram.trace().re;
        Ok(DensityMatrix::new_unchecked(
            dims.to_vec(),
            gram / C64::new(trace, 0.0),
        ))
    }

    /// Seeded wrapper around [`random_density_with`]; bitwise reproducible
    /// for a fixed seed.
    pub fn random_density(dims: &[usize], seed: u64) -> Result<DensityMatrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_density_with(dims, &mut rng)
    }

    /// Tensor product of independent random density matrices, one per block
    /// of subsystem dimensions.
    pub fn random_product_with<R: Rng>(
        blocks: &[Vec<usize>],
        rng: &mut R,
    ) -> Result<DensityMatrix> {
        if blocks.is_empty() {
            return Err(Error::Validation("no dimension blocks given".into()));
        }
        let mut out: Option<DensityMatrix> = None;
        for block in blocks {
            let factor = random_density_with(block, rng)?;
            out = Some(match out {
                None => factor,
                Some(acc) => acc.tensor(&factor),
            });
        }
        Ok(out.expect("at least one block"))
    }

    /// Seeded wrapper around [`random_product_with`].
    pub fn random_product(blocks: &[Vec<usize>], seed: u64) -> Result<DensityMatrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_product_with(blocks, &mut rng)
    }

    /// Haar-ish random unitary: Q factor of a Ginibre matrix.
    pub fn random_unitary_with<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
        ginibre(dim, rng).qr().q()
    }

    /// Seeded wrapper around [`random_unitary_with`].
    pub fn random_unitary(dim: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_unitary_with(dim, &mut rng)
    }
}
