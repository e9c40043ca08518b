//! Exact linear algebra over `F_p` and the rationals.
//!
//! Everything downstream manipulates subspaces of finite-dimensional
//! coordinate spaces: hom-space components of sieves, solution spaces of
//! naturality systems, kernels of quotient maps. This module provides the
//! canonical representation (reduced row echelon bases) that makes subspace
//! equality a plain value comparison.

mod field;
mod matrix;
mod subspace;

pub use field::{Field, Scalar};
pub use matrix::Matrix;
pub use subspace::Subspace;

/// Resource caps for exhaustive enumerations.
///
/// The combinatorial oracles in this crate quantify over all vectors of a
/// subspace, all subspaces of a coordinate space, or all sieves on an
/// object. Caps keep those loops predictable; exceeding one is reported as
/// [`crate::Error::CapExceeded`], never silently truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of vectors (or tuples) a single enumeration may visit.
    pub max_enumeration: u64,
    /// Maximum total dimension of a module in submodule-lattice searches.
    pub max_submodule_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_enumeration: 1 << 20, max_submodule_dim: 8 }
    }
}
