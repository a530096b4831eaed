//! Finite-dimensional Hilbert modules over matrix algebras, and the
//! constructive decomposition of a black-box orthogonally additive map f
//! into an additive part plus a linear function of the module inner
//! product, f(x) = T(x) + Phi(<x, x>).
//!
//! The crate is organized in layers:
//!
//! - [`matrix`], [`eigen`], [`algebra`]: dense complex arithmetic, a cyclic
//!   Jacobi eigensolver, and the C*/H*-algebra layer (norms, positivity,
//!   the four-positive split).
//! - [`module`], [`basis`]: concrete module instances, their algebra-valued
//!   inner products, orthonormal bases and the diagonal rebase.
//! - [`map`], [`decompose`]: black-box maps, polarization, the sesquilinear
//!   form extracted from f, and the Phi table over matrix units.
//! - [`catalog`], [`runner`]: stock maps (including the counterexamples
//!   showing when the representation fails), property suites, and the
//!   config-driven runner behind the `oamod` binary.
//!
//! See the crate examples for one runnable demonstration per capability.

pub mod algebra;
pub mod basis;
pub mod catalog;
pub mod decompose;
pub mod eigen;
pub mod error;
pub mod map;
pub mod matrix;
pub mod module;
pub mod rng;
pub mod runner;

pub use algebra::{
    four_positive_parts, hs_inner, is_positive, operator_norm, AlgebraDescriptor, AlgebraElement,
    Flavor,
};
pub use basis::{
    basis_expand, build_orthonormal_basis, module_series, rebase_basis, OrthonormalBasis,
};
pub use decompose::{
    blockwise_decompose, decompose, doubling_construction, phi_assemble, phi_local, polarize,
    residual_stats, sesquilinearize, Decomposition, DoubledModule, DoublingReport, PhiTable,
    ResidualStats,
};
pub use eigen::{hermitian_eig, EigenDecomposition};
pub use error::{Error, Result};
pub use map::{GVector, OaMap};
pub use matrix::{rank_one, CMatrix};
pub use module::{
    inner_product, is_orthogonal, module_action, module_norm, ModuleDescriptor, ModuleElement,
    ModulePayload,
};
pub use runner::{run, RunConfig, RunReport};
