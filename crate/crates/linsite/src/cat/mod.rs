//! Finite `k`-linear categories and the structures living over them.
//!
//! A [`FiniteLinearCategory`] has finitely many objects and hom spaces with
//! chosen ordered bases; composition is given by structure constants.
//! Everything the paper-side theory needs — linear functors, presheaf
//! modules (contravariant linear functors into vector spaces), natural
//! transformations, and tensor products of all of these — is a matrix
//! identity in those bases.

mod category;
mod functor;
mod module;

pub use category::{
    CatRef, CategoryBuilder, CategoryReport, CategoryViolation, FiniteLinearCategory,
    TensorCategory,
};
pub(crate) use category::kron_vec;
pub use functor::LinearFunctor;
pub use module::{HomSpace, NatTransform, PresheafModule};
