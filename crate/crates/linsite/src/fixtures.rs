//! Small reference instances used by the test suites and the CLI examples.
//!
//! The workhorse is the two-object arrow category (the path category of the
//! `1 -> 2` quiver): it is the smallest category with a non-invertible
//! morphism, and its sieve lattice is small enough to enumerate everything.

use std::collections::BTreeMap;

use crate::cat::{CatRef, FiniteLinearCategory, PresheafModule};
use crate::linalg::{Field, Matrix};
use crate::sieve::Sieve;
use crate::topology::{ClosureMode, CoverSystem};

/// The linear path category of the quiver `1 --a--> 2`: two objects,
/// `hom(1,2)` spanned by the arrow, endomorphisms spanned by identities,
/// and no morphisms from `2` to `1`.
pub fn arrow_category(field: Field) -> CatRef {
    let mut b = crate::cat::CategoryBuilder::new(field);
    let o1 = b.object("1");
    let o2 = b.object("2");
    b.hom(o1, o1, &["id1"]);
    b.hom(o2, o2, &["id2"]);
    b.hom(o1, o2, &["a"]);
    b.identity(o1, vec![field.one()]);
    b.identity(o2, vec![field.one()]);
    b.compose_basis(o1, o1, o1, 0, 0, vec![field.one()]);
    b.compose_basis(o2, o2, o2, 0, 0, vec![field.one()]);
    // id2 . a = a and a . id1 = a.
    b.compose_basis(o1, o2, o2, 0, 0, vec![field.one()]);
    b.compose_basis(o1, o1, o2, 0, 0, vec![field.one()]);
    b.build()
}

/// The quotient of the arrow category that kills the arrow: same objects,
/// `hom(1,2) = 0`. Together with [`arrow_quotient_functor`] this is the
/// standard fixture for a functor that is not faithful up to covers.
pub fn arrowless_category(field: Field) -> CatRef {
    let mut b = crate::cat::CategoryBuilder::new(field);
    let o1 = b.object("1");
    let o2 = b.object("2");
    b.hom(o1, o1, &["id1"]);
    b.hom(o2, o2, &["id2"]);
    b.identity(o1, vec![field.one()]);
    b.identity(o2, vec![field.one()]);
    b.compose_basis(o1, o1, o1, 0, 0, vec![field.one()]);
    b.compose_basis(o2, o2, o2, 0, 0, vec![field.one()]);
    b.build()
}

/// The functor from the arrow category onto [`arrowless_category`] sending
/// the arrow to zero.
pub fn arrow_quotient_functor(field: Field) -> crate::cat::LinearFunctor {
    let src = arrow_category(field);
    let tgt = arrowless_category(field);
    let mut hom_maps = BTreeMap::new();
    hom_maps.insert((0, 0), Matrix::identity(field, 1));
    hom_maps.insert((1, 1), Matrix::identity(field, 1));
    hom_maps.insert((0, 1), Matrix::zeros(field, 0, 1));
    crate::cat::LinearFunctor::new(src, tgt, vec![0, 1], hom_maps)
}

/// The simple module at one object: `k` there, zero elsewhere. Assumes the
/// endomorphism space at the object is spanned by the identity, which holds
/// for every fixture category here.
pub fn simple_module(cat: &CatRef, object: usize) -> PresheafModule {
    let field = cat.field();
    debug_assert_eq!(cat.hom_dim(object, object), 1);
    let mut dims = vec![0; cat.object_count()];
    dims[object] = 1;
    let mut action = BTreeMap::new();
    action.insert((object, object), vec![Matrix::identity(field, 1)]);
    PresheafModule::new(cat.clone(), dims, action)
}

/// A category together with a cover system on it.
#[derive(Debug, Clone)]
pub struct SiteFixture {
    category: CatRef,
    system: CoverSystem,
}

impl SiteFixture {
    pub fn category(&self) -> &CatRef {
        &self.category
    }

    pub fn system(&self) -> &CoverSystem {
        &self.system
    }

    pub fn into_parts(self) -> (CatRef, CoverSystem) {
        (self.category, self.system)
    }
}

/// The sieve generated by the arrow, targeting the tip of the arrow
/// category.
pub fn arrow_sieve(cat: &CatRef) -> Sieve {
    let one = cat.field().one();
    Sieve::from_generators(cat, 1, &[(0, vec![one])]).expect("arrow generator")
}

/// The standard site on the arrow category: the representable covers the
/// source object, the arrow sieve covers the tip, up-closed. This is a
/// topology.
pub fn arrow_site(field: Field) -> SiteFixture {
    let category = arrow_category(field);
    let full = Sieve::representable(&category, 0).expect("object 0");
    let arrow = arrow_sieve(&category);
    let system = CoverSystem::new(&category, vec![vec![full], vec![arrow]], ClosureMode::Up)
        .expect("well-targeted covers");
    SiteFixture { category, system }
}

/// The full subcategory of the arrow category on the source object, with
/// its inclusion.
pub fn source_inclusion(field: Field) -> (CatRef, crate::cat::LinearFunctor) {
    let c = arrow_category(field);
    FiniteLinearCategory::full_subcategory(&c, &[0])
}

/// The full subcategory of the arrow category on the tip object, with its
/// inclusion.
pub fn tip_inclusion(field: Field) -> (CatRef, crate::cat::LinearFunctor) {
    let c = arrow_category(field);
    FiniteLinearCategory::full_subcategory(&c, &[1])
}
