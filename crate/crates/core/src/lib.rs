//! Tensor-product structure of multipartite density matrices.
//!
//! A bipartite density matrix is a tensor product `rho_1 (x) rho_2` exactly
//! when its *realigned* matrix — the rearrangement whose rows are the
//! column-stackings of the blocks — has rank one. This crate implements that
//! test, the factor extraction it enables, and the multipartite extensions:
//! product under every one-vs-rest split is equivalent to fully product, so
//! k-partition structure reduces to a handful of bipartite rank checks.
//!
//! Modules:
//! - [`matcore`]: complex dense matrix primitives (vec/unvec, realignment,
//!   SVD, numerical rank, operator Schmidt decomposition).
//! - [`states`]: validated density matrices and pure states, partial trace,
//!   subsystem permutation, named and seeded random generators.
//! - [`partitions`]: subsystem partitions, enumeration, text grammar.
//! - [`product`]: the decision procedures and finest-partition search.
//!
//! ```
//! use qprod::{partitions::parse_partition, product, states::gen};
//!
//! let rho = gen::bell_zero().density(); // Bell pair on 1,2; |0> on 3
//! let split = parse_partition("1,2|3", 3).unwrap();
//! let report = product::is_product_bipartition(&rho, &split, 1e-8).unwrap();
//! assert!(report.is_product);
//!
//! let tree = product::finest_product_partition(&rho, 1e-8).unwrap();
//! assert_eq!(tree.partition.to_string(), "1,2|3");
//! ```

pub mod error;
pub mod matcore;
pub mod partitions;
pub mod product;
pub mod states;

pub use error::{Error, Result};
pub use matcore::{CMatrix, CVector, SchmidtOperatorDecomposition, SvdResult, DEFAULT_REL_TOL};
pub use partitions::Partition;
pub use product::{FactorizationTree, ProductReport};
pub use states::{DensityMatrix, PureState};
