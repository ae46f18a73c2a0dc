//! Decision procedures for tensor-product structure of density matrices.
//!
//! The bipartite test: a density matrix factors as `rho_1 (x) rho_2` across
//! a bipartition exactly when its realigned matrix has rank one. The rank-one
//! Schmidt term is then trace-normalized into the two factors (the complex
//! traces cancel the SVD's arbitrary joint phase, since their product is
//! `tr(rho) = 1`). Multipartite structure reduces to bipartite tests:
//! product under every one-vs-rest split is equivalent to fully product,
//! and a state is k-product under a partition exactly when the coarse-grained
//! state over the k blocks passes the one-vs-rest family.

use nalgebra::SymmetricEigen;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix};
use crate::partitions::{
    coarse_grain_dims, enumerate_bipartitions, one_vs_rest_partitions, Partition,
};
use crate::states::{inverse_permutation, DensityMatrix};

/// Traces smaller than this cannot be normalized away; treated as a signal
/// that the input is not a genuine product despite the rank test.
const DEGENERATE_TRACE_TOL: f64 = 1e-12;

/// Outcome of one bipartite product test.
#[derive(Debug, Clone)]
pub struct ProductReport {
    /// The bipartition tested, in the orientation it was given.
    pub partition: Partition,
    /// Relative singular-value threshold used for the rank decision.
    pub rel_tol: f64,
    /// `rank == 1` under the threshold.
    pub is_product: bool,
    /// Numerical rank of the realigned matrix.
    pub rank: usize,
    /// `sigma_2 / sigma_1`; zero when fewer than two singular values exist
    /// or the spectrum vanishes. The raw gap, so callers can apply stricter
    /// thresholds than `rel_tol` after the fact.
    pub ratio: f64,
    /// Singular values of the realigned matrix, nonincreasing.
    pub singular_values: Vec<f64>,
    /// Extracted factors in block order; present only for a product verdict
    /// from a factorizing call.
    pub factors: Option<Vec<DensityMatrix>>,
    /// Largest adjustment applied while projecting the factors back to
    /// Hermitian PSD trace-one form; zero when no factors were extracted.
    pub factor_adjustment: f64,
}

/// A density matrix permuted so the first block's subsystems lead.
#[derive(Debug, Clone)]
pub struct BipartiteView {
    /// Matrix of the permuted state.
    pub matrix: CMatrix,
    /// Composite dimension of the leading block.
    pub m: usize,
    /// Composite dimension of the trailing block.
    pub n: usize,
    /// Permutation applied: `perm[t]` is the original label now at slot `t`.
    pub perm: Vec<usize>,
}

fn check_bipartition(rho: &DensityMatrix, partition: &Partition) -> Result<()> {
    if partition.n_subsystems() != rho.n_subsystems() {
        return Err(Error::Partition(format!(
            "partition over {} subsystems applied to a state with {}",
            partition.n_subsystems(),
            rho.n_subsystems()
        )));
    }
    if !partition.is_bipartition() {
        return Err(Error::Partition(format!(
            "expected a bipartition, got {} blocks",
            partition.k()
        )));
    }
    Ok(())
}

/// Permute `rho` so the partition's first block leads, and report the
/// composite dimensions of the two sides.
pub fn bipartite_view(rho: &DensityMatrix, partition: &Partition) -> Result<BipartiteView> {
    check_bipartition(rho, partition)?;
    let mut perm: Vec<usize> = partition.blocks()[0].clone();
    perm.extend_from_slice(&partition.blocks()[1]);
    let sizes = coarse_grain_dims(rho.dims(), partition)?;
    let permuted = rho.permute_subsystems(&perm)?;
    Ok(BipartiteView {
        matrix: permuted.into_matrix(),
        m: sizes[0],
        n: sizes[1],
        perm,
    })
}

fn ratio_of(sigmas: &[f64]) -> f64 {
    match sigmas {
        [first, second, ..] if *first > 0.0 => second / first,
        _ => 0.0,
    }
}

/// Project a near-Hermitian, near-PSD matrix onto an exact density matrix:
/// Hermitian part, negative eigenvalues clipped to zero, trace renormalized.
/// Returns the projected matrix and the largest adjustment applied.
fn psd_project(a: &CMatrix) -> Result<(CMatrix, f64)> {
    let herm_err = matcore::hermitian_error(a)?;
    let h = matcore::hermitian_part(a)?;
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Numerical("factor eigendecomposition did not converge".into()))?;
    let mut clip = 0.0f64;
    let d = a.nrows();
    let mut rebuilt = CMatrix::zeros(d, d);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < 0.0 {
            clip = clip.max(-lambda);
            continue;
        }
        let q = eig.eigenvectors.column(i);
        rebuilt += q * q.adjoint() * C64::new(lambda, 0.0);
    }
    let trace = rebuilt.trace().re;
    if trace < DEGENERATE_TRACE_TOL {
        return Err(Error::DegenerateFactor(format!(
            "projected factor has trace {trace:.3e}"
        )));
    }
    let drift = (trace - 1.0).abs();
    Ok((
        rebuilt / C64::new(trace, 0.0),
        herm_err.max(clip).max(drift),
    ))
}

/// Divide a Schmidt factor by its (complex) trace. A vanishing trace means
/// the rank-one term cannot come from a product of density matrices.
fn trace_normalize(factor: &CMatrix) -> Result<CMatrix> {
    let trace = factor.trace();
    if trace.norm() < DEGENERATE_TRACE_TOL {
        return Err(Error::DegenerateFactor(format!(
            "Schmidt factor has trace magnitude {:.3e}, cannot normalize",
            trace.norm()
        )));
    }
    Ok(factor / trace)
}

fn product_report(
    rho: &DensityMatrix,
    partition: &Partition,
    rel_tol: f64,
    with_factors: bool,
) -> Result<ProductReport> {
    let view = bipartite_view(rho, partition)?;
    let realigned = matcore::realign(&view.matrix, view.m, view.n)?;
    let fact = matcore::svd(&realigned)?;
    let rank = matcore::numerical_rank(&fact.singular_values, rel_tol)?;
    let is_product = rank == 1;
    let ratio = ratio_of(&fact.singular_values);

    let mut factors = None;
    let mut factor_adjustment = 0.0f64;
    if with_factors && is_product {
        let sigma = fact.singular_values[0];
        let w = C64::new(sigma.sqrt(), 0.0);
        let x = matcore::unvec(&(fact.left.column(0) * w), view.m, view.m)?;
        let y = matcore::unvec(
            &(fact.right.column(0).map(|z| z.conj()) * w),
            view.n,
            view.n,
        )?;
        let mut out = Vec::with_capacity(2);
        for (raw, block) in [(x, &partition.blocks()[0]), (y, &partition.blocks()[1])] {
            let normalized = trace_normalize(&raw)?;
            let (projected, adjustment) = psd_project(&normalized)?;
            factor_adjustment = factor_adjustment.max(adjustment);
            let block_dims: Vec<usize> = block.iter().map(|&i| rho.dims()[i - 1]).collect();
            out.push(DensityMatrix::new(block_dims, projected)?);
        }
        factors = Some(out);
    }

    Ok(ProductReport {
        partition: partition.clone(),
        rel_tol,
        is_product,
        rank,
        ratio,
        singular_values: fact.singular_values,
        factors,
        factor_adjustment,
    })
}

/// Bipartite product test: realign the bipartite view and decide by the
/// numerical rank. No factors are extracted.
pub fn is_product_bipartition(
    rho: &DensityMatrix,
    partition: &Partition,
    rel_tol: f64,
) -> Result<ProductReport> {
    product_report(rho, partition, rel_tol, false)
}

/// Bipartite product test with factor extraction. On a product verdict the
/// report carries the two trace-normalized, PSD-projected factors (block
/// order); on a non-product verdict it carries the diagnostics only.
pub fn factorize_bipartition(
    rho: &DensityMatrix,
    partition: &Partition,
    rel_tol: f64,
) -> Result<ProductReport> {
    product_report(rho, partition, rel_tol, true)
}

/// Outcome of the one-vs-rest family of tests.
#[derive(Debug, Clone)]
pub struct SemiproductReport {
    pub is_semiproduct: bool,
    /// One report per one-vs-rest partition, in enumeration order.
    pub reports: Vec<ProductReport>,
}

/// Product under every `i | rest` bipartition.
pub fn is_semiproduct(rho: &DensityMatrix, rel_tol: f64) -> Result<SemiproductReport> {
    let parts = one_vs_rest_partitions(rho.n_subsystems())?;
    let reports = parts
        .iter()
        .map(|p| is_product_bipartition(rho, p, rel_tol))
        .collect::<Result<Vec<_>>>()?;
    let is_semiproduct = reports.iter().all(|r| r.is_product);
    Ok(SemiproductReport {
        is_semiproduct,
        reports,
    })
}

/// Outcome of a k-partition product test over coarse-grained blocks.
#[derive(Debug, Clone)]
pub struct KProductReport {
    pub is_k_product: bool,
    /// One-vs-rest reports over the composite subsystems; partitions inside
    /// refer to block labels `1..k`, not original subsystem labels.
    pub reports: Vec<ProductReport>,
}

/// Whether `rho` is the tensor product of one state per block of the given
/// k-partition: coarse-grain the blocks into composite subsystems, then run
/// the one-vs-rest family over them.
pub fn is_k_product(
    rho: &DensityMatrix,
    partition: &Partition,
    rel_tol: f64,
) -> Result<KProductReport> {
    let composite = coarse_grained(rho, partition)?;
    let sp = is_semiproduct(&composite, rel_tol)?;
    Ok(KProductReport {
        is_k_product: sp.is_semiproduct,
        reports: sp.reports,
    })
}

/// Permute `rho` so the partition's blocks are contiguous and retag each
/// block as one composite subsystem.
fn coarse_grained(rho: &DensityMatrix, partition: &Partition) -> Result<DensityMatrix> {
    if partition.n_subsystems() != rho.n_subsystems() {
        return Err(Error::Partition(format!(
            "partition over {} subsystems applied to a state with {}",
            partition.n_subsystems(),
            rho.n_subsystems()
        )));
    }
    if partition.k() < 2 {
        return Err(Error::Partition(
            "k-product tests need at least 2 blocks".into(),
        ));
    }
    let perm: Vec<usize> = partition.blocks().iter().flatten().copied().collect();
    let coarse = coarse_grain_dims(rho.dims(), partition)?;
    let permuted = rho.permute_subsystems(&perm)?;
    Ok(DensityMatrix::new_unchecked(coarse, permuted.into_matrix()))
}

/// Factorization of `rho` along a k-partition.
#[derive(Debug, Clone)]
pub struct KFactorization {
    pub is_product: bool,
    /// One factor per block (block order, fine-grained dims) on success.
    pub factors: Option<Vec<DensityMatrix>>,
    /// Reports of the successive peeling splits. Step `t` splits block
    /// `t+1` off the remaining tail, labeled `1 | 2..` in composite labels.
    pub reports: Vec<ProductReport>,
}

/// Extract one factor per block of a k-partition by peeling: split the
/// first block off the tail, then recurse on the tail.
pub fn factorize_partition(
    rho: &DensityMatrix,
    partition: &Partition,
    rel_tol: f64,
) -> Result<KFactorization> {
    let composite = coarse_grained(rho, partition)?;
    let k = partition.k();
    let mut factors: Vec<DensityMatrix> = Vec::with_capacity(k);
    let mut reports = Vec::with_capacity(k - 1);
    let mut current = composite;
    for step in 0..k - 1 {
        let rem = current.n_subsystems();
        let split = Partition::new(vec![vec![1], (2..=rem).collect()], rem)?;
        let mut report = factorize_bipartition(&current, &split, rel_tol)?;
        let extracted = report.factors.take();
        reports.push(report);
        let Some(mut pair) = extracted else {
            return Ok(KFactorization {
                is_product: false,
                factors: None,
                reports,
            });
        };
        let tail = pair.pop().expect("two factors");
        let head = pair.pop().expect("two factors");
        factors.push(retag_block(head, partition, step, rho));
        current = tail;
    }
    factors.push(retag_block(current, partition, k - 1, rho));
    Ok(KFactorization {
        is_product: true,
        factors: Some(factors),
        reports,
    })
}

/// Swap a composite single-subsystem factor's dims for the fine-grained
/// dims of the partition block it represents.
fn retag_block(
    factor: DensityMatrix,
    partition: &Partition,
    block_idx: usize,
    rho: &DensityMatrix,
) -> DensityMatrix {
    let dims: Vec<usize> = partition.blocks()[block_idx]
        .iter()
        .map(|&i| rho.dims()[i - 1])
        .collect();
    DensityMatrix::new_unchecked(dims, factor.into_matrix())
}

/// Outcome of the fully-product decision.
#[derive(Debug, Clone)]
pub struct FullProductReport {
    pub is_fully_product: bool,
    /// One single-subsystem factor per subsystem when fully product.
    pub factors: Option<Vec<DensityMatrix>>,
    /// The one-vs-rest reports the verdict rests on.
    pub reports: Vec<ProductReport>,
}

/// Whether `rho` is a tensor product of single-subsystem states, decided by
/// the one-vs-rest family; on a positive verdict the factors are extracted
/// by peeling. A peeling failure after a positive family verdict is
/// reported as [`Error::Inconsistency`] rather than silently resolved.
pub fn is_fully_product(rho: &DensityMatrix, rel_tol: f64) -> Result<FullProductReport> {
    let sp = is_semiproduct(rho, rel_tol)?;
    if !sp.is_semiproduct {
        return Ok(FullProductReport {
            is_fully_product: false,
            factors: None,
            reports: sp.reports,
        });
    }
    let singles = Partition::singletons(rho.n_subsystems())?;
    let peeled = factorize_partition(rho, &singles, rel_tol)?;
    if !peeled.is_product {
        return Err(Error::Inconsistency(
            "one-vs-rest tests all passed but factor peeling found a non-product split \
             at the same tolerance"
                .into(),
        ));
    }
    Ok(FullProductReport {
        is_fully_product: true,
        factors: peeled.factors,
        reports: sp.reports,
    })
}

/// One recorded bipartite test from the finest-partition search.
#[derive(Debug, Clone)]
pub struct SplitReport {
    /// Original labels of the subsystem chunk the test ran on, ascending.
    pub subsystems: Vec<usize>,
    /// The test outcome; its partition uses chunk-local labels `1..len`.
    pub report: ProductReport,
}

impl SplitReport {
    /// The tested split rendered in original subsystem labels.
    pub fn original_partition_text(&self) -> String {
        self.report
            .partition
            .blocks()
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|&i| self.subsystems[i - 1].to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Finest product structure found for a state: the partition, one factor
/// per block, and every bipartite test performed along the way.
#[derive(Debug, Clone)]
pub struct FactorizationTree {
    /// Finest product partition, canonical block order.
    pub partition: Partition,
    /// One factor per block, aligned with `partition.blocks()`.
    pub factors: Vec<DensityMatrix>,
    /// All bipartite tests performed during the search, in search order.
    pub reports: Vec<SplitReport>,
}

/// Greedy search for the finest partition under which `rho` is a product:
/// try candidate first blocks containing the lowest label in the fixed
/// enumeration order (size ascending, then lexicographic), split on the
/// first product bipartition found, and recurse independently on both
/// factors. A chunk with no product bipartition is an irreducible block.
pub fn finest_product_partition(rho: &DensityMatrix, rel_tol: f64) -> Result<FactorizationTree> {
    let labels: Vec<usize> = (1..=rho.n_subsystems()).collect();
    let mut blocks = Vec::new();
    let mut factors = Vec::new();
    let mut reports = Vec::new();
    finest_rec(
        rho,
        &labels,
        rel_tol,
        &mut blocks,
        &mut factors,
        &mut reports,
    )?;

    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| blocks[i][0]);
    let blocks: Vec<Vec<usize>> = order.iter().map(|&i| blocks[i].clone()).collect();
    let factors: Vec<DensityMatrix> = order.into_iter().map(|i| factors[i].clone()).collect();
    let partition = Partition::new(blocks, rho.n_subsystems())?;
    Ok(FactorizationTree {
        partition,
        factors,
        reports,
    })
}

fn finest_rec(
    rho: &DensityMatrix,
    labels: &[usize],
    rel_tol: f64,
    blocks: &mut Vec<Vec<usize>>,
    factors: &mut Vec<DensityMatrix>,
    reports: &mut Vec<SplitReport>,
) -> Result<()> {
    let n = rho.n_subsystems();
    if n == 1 {
        blocks.push(labels.to_vec());
        factors.push(rho.clone());
        return Ok(());
    }
    for candidate in enumerate_bipartitions(n)? {
        let mut report = factorize_bipartition(rho, &candidate, rel_tol)?;
        let extracted = report.factors.take();
        let found = report.is_product;
        reports.push(SplitReport {
            subsystems: labels.to_vec(),
            report,
        });
        if found {
            let mut pair = extracted.expect("factors accompany a product verdict");
            let second = pair.pop().expect("two factors");
            let first = pair.pop().expect("two factors");
            let map =
                |block: &[usize]| -> Vec<usize> { block.iter().map(|&i| labels[i - 1]).collect() };
            let labels_a = map(&candidate.blocks()[0]);
            let labels_b = map(&candidate.blocks()[1]);
            finest_rec(&first, &labels_a, rel_tol, blocks, factors, reports)?;
            finest_rec(&second, &labels_b, rel_tol, blocks, factors, reports)?;
            return Ok(());
        }
    }
    blocks.push(labels.to_vec());
    factors.push(rho.clone());
    Ok(())
}

/// Tensor the factors of a tree back together and undo the block
/// permutation; the result should match the analyzed state.
pub fn reconstruct_from_tree(tree: &FactorizationTree) -> Result<DensityMatrix> {
    let mut iter = tree.factors.iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::Contract("tree has no factors".into()))?;
    let mut acc = first.clone();
    for factor in iter {
        acc = acc.tensor(factor);
    }
    let perm: Vec<usize> = tree.partition.blocks().iter().flatten().copied().collect();
    acc.permute_subsystems(&inverse_permutation(&perm))
}
