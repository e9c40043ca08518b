//! Exact computations with linear sites.
//!
//! A linear site is a small `k`-linear category together with a linear
//! Grothendieck topology: an assignment of covering sieves to every object,
//! subject to identity, pullback, and glueing axioms. This crate makes the
//! whole dictionary executable at desk scale over exact fields (`F_p` for a
//! small prime `p`, or the rationals):
//!
//! * [`linalg`] — reduced-row-echelon matrices and canonical subspaces, the
//!   substrate for everything else;
//! * [`cat`] — finite linear categories, linear functors, presheaf modules,
//!   and natural transformations, all with explicit ordered bases;
//! * [`sieve`] — sieves as precomposition-closed subfunctors of
//!   representables, with generation, pullback, tensor product, and images;
//! * [`topology`] — cover systems with `raw`/`up`/`upglue` closure semantics,
//!   axiom checkers, tensor-product topologies, and exhaustive enumeration;
//! * [`sheaf`] — sheaf and null-presheaf tests, sheafification, and one-sided
//!   sheafification on tensor categories;
//! * [`serre`] — Gabriel products and semilocalizing hull membership via
//!   submodule enumeration;
//! * [`functoriality`] — checkers for continuous, cocontinuous, (G), (F),
//!   (FF), and (LC) functors between finite sites;
//! * [`zalg`] — windowed positively graded Z-algebras, tails cover systems,
//!   Segre products, and the diagonal comparison functor.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything can be shared and sent between threads freely. Arithmetic
//! is exact throughout; there is no floating point anywhere in the crate.

pub mod cat;
mod error;
pub mod fixtures;
pub mod functoriality;
pub mod linalg;
pub mod serre;
pub mod sheaf;
pub mod sieve;
pub mod topology;
pub mod zalg;

pub use error::{Error, Result};
pub use linalg::{Caps, Field, Matrix, Scalar, Subspace};
