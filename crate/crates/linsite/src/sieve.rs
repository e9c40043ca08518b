//! Sieves: precomposition-closed subfunctors of representable modules.
//!
//! A sieve on `A` assigns to every object `B` a subspace of `hom(B, A)`,
//! closed under precomposition by arbitrary morphisms. Because components
//! are canonical subspaces, sieve equality, inclusion, and intersection are
//! plain componentwise comparisons.

use crate::cat::{CatRef, LinearFunctor, PresheafModule, TensorCategory};
use crate::linalg::{Caps, Scalar, Subspace};
use crate::{Error, Result};

/// A sieve on a fixed target object.
#[derive(Debug, Clone)]
pub struct Sieve {
    category: CatRef,
    target: usize,
    components: Vec<Subspace>,
}

impl PartialEq for Sieve {
    fn eq(&self, other: &Self) -> bool {
        self.target == other.target && self.components == other.components
    }
}

impl Eq for Sieve {}

impl PartialOrd for Sieve {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sieve {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.target, &self.components).cmp(&(other.target, &other.components))
    }
}

impl Sieve {
    /// The full representable sieve `hom(-, a)`.
    pub fn representable(category: &CatRef, a: usize) -> Result<Sieve> {
        if a >= category.object_count() {
            return Err(Error::UnknownObject { name: format!("#{a}") });
        }
        let field = category.field();
        let components = (0..category.object_count())
            .map(|b| Subspace::full(field, category.hom_dim(b, a)))
            .collect();
        Ok(Sieve { category: category.clone(), target: a, components })
    }

    /// The zero sieve on `a`.
    pub fn zero(category: &CatRef, a: usize) -> Sieve {
        let field = category.field();
        let components = (0..category.object_count())
            .map(|b| Subspace::zero(field, category.hom_dim(b, a)))
            .collect();
        Sieve { category: category.clone(), target: a, components }
    }

    /// The smallest sieve containing the given generators, each a morphism
    /// vector into `a` from its stated source object.
    ///
    /// A single pass over basis precompositions already yields the closure
    /// (components are subspaces and precomposition is linear); the
    /// fixed-point loop guards against inconsistent composition tables.
    pub fn from_generators(
        category: &CatRef,
        a: usize,
        generators: &[(usize, Vec<Scalar>)],
    ) -> Result<Sieve> {
        let field = category.field();
        let n = category.object_count();
        let mut rows: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
        for (src, v) in generators {
            if v.len() != category.hom_dim(*src, a) {
                return Err(Error::DimensionMismatch {
                    context: "sieve generator",
                    expected: category.hom_dim(*src, a),
                    got: v.len(),
                });
            }
            rows[*src].push(v.clone());
            for b in 0..n {
                let hd = category.hom_dim(b, *src);
                for i in 0..hd {
                    let mut h = vec![field.zero(); hd];
                    h[i] = field.one();
                    rows[b].push(category.compose(v, &h, b, *src, a));
                }
            }
        }
        let components: Vec<Subspace> = (0..n)
            .map(|b| Subspace::from_rows(field, category.hom_dim(b, a), &rows[b]))
            .collect();
        let mut sieve = Sieve { category: category.clone(), target: a, components };
        let mut rounds = 0;
        loop {
            let next = sieve.close_once();
            if next == sieve.components {
                break;
            }
            rounds += 1;
            sieve.components = next;
        }
        debug_assert_eq!(rounds, 0, "generation closure must stabilize in one pass");
        Ok(sieve)
    }

    fn close_once(&self) -> Vec<Subspace> {
        let cat = &self.category;
        let field = cat.field();
        let n = cat.object_count();
        let mut out = Vec::with_capacity(n);
        for b in 0..n {
            let mut rows = self.components[b].basis_rows();
            for b2 in 0..n {
                let hd = cat.hom_dim(b, b2);
                for r in 0..self.components[b2].dim() {
                    let v = self.components[b2].basis().row(r);
                    for i in 0..hd {
                        let mut h = vec![field.zero(); hd];
                        h[i] = field.one();
                        rows.push(cat.compose(v, &h, b, b2, self.target));
                    }
                }
            }
            out.push(Subspace::from_rows(field, cat.hom_dim(b, self.target), &rows));
        }
        out
    }

    pub fn category(&self) -> &CatRef {
        &self.category
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn component(&self, b: usize) -> &Subspace {
        &self.components[b]
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    pub fn component_dims(&self) -> Vec<usize> {
        self.components.iter().map(Subspace::dim).collect()
    }

    /// Builds a sieve from explicit components. The caller asserts closure;
    /// use [`Sieve::is_closed`] to verify untrusted input.
    pub fn from_components(category: &CatRef, target: usize, components: Vec<Subspace>) -> Sieve {
        Sieve { category: category.clone(), target, components }
    }

    pub fn is_full(&self) -> bool {
        self.components.iter().all(Subspace::is_full)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Subspace::is_zero)
    }

    /// Precomposition closure: every component basis vector composed with
    /// every basis morphism stays inside the stated components. This is
    /// exactly action-stability inside the representable module.
    pub fn is_closed(&self) -> bool {
        PresheafModule::representable(&self.category, self.target)
            .is_stable_tuple(&self.components)
    }

    /// Pullback along a morphism vector `f in hom(from, target)`:
    /// the sieve `{ g | f.g in this }` on `from`.
    pub fn pullback(&self, f: &[Scalar], from: usize) -> Result<Sieve> {
        let cat = &self.category;
        if f.len() != cat.hom_dim(from, self.target) {
            return Err(Error::DimensionMismatch {
                context: "sieve pullback",
                expected: cat.hom_dim(from, self.target),
                got: f.len(),
            });
        }
        let n = cat.object_count();
        let mut components = Vec::with_capacity(n);
        for b in 0..n {
            let post = cat.postcompose_matrix(f, b, from, self.target);
            components.push(Subspace::preimage(&post, &self.components[b])?);
        }
        Ok(Sieve { category: cat.clone(), target: from, components })
    }

    pub fn intersect(&self, other: &Sieve) -> Result<Sieve> {
        if self.target != other.target {
            return Err(Error::TargetMismatch { context: "sieve intersection" });
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.intersect(b))
            .collect::<Result<_>>()?;
        Ok(Sieve { category: self.category.clone(), target: self.target, components })
    }

    /// Componentwise inclusion `other ⊆ self`.
    pub fn contains_sieve(&self, other: &Sieve) -> bool {
        self.target == other.target
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.contains_subspace(b))
    }

    pub fn contains_vector(&self, b: usize, v: &[Scalar]) -> bool {
        self.components[b].contains(v)
    }

    /// Tensor product sieve: componentwise tensor of the component
    /// subspaces inside the pair hom spaces. Closure holds automatically.
    pub fn tensor(r: &Sieve, s: &Sieve, tensor: &TensorCategory) -> Result<Sieve> {
        if r.category.as_ref() != tensor.left().as_ref()
            || s.category.as_ref() != tensor.right().as_ref()
        {
            return Err(Error::Precondition {
                what: "tensor sieve: factors do not match the tensor category".into(),
            });
        }
        let prod = tensor.product();
        let target = tensor.pair_object(r.target, s.target);
        let mut components = Vec::with_capacity(prod.object_count());
        for o in 0..prod.object_count() {
            let (a, b) = tensor.split_object(o);
            components.push(r.components[a].tensor(&s.components[b])?);
        }
        let out = Sieve { category: prod.clone(), target, components };
        debug_assert!(out.is_closed());
        Ok(out)
    }

    /// The sieve on `phi(target)` generated by the images of all component
    /// basis vectors.
    pub fn image(&self, phi: &LinearFunctor) -> Result<Sieve> {
        if phi.source().as_ref() != self.category.as_ref() {
            return Err(Error::Precondition {
                what: "image sieve: functor source does not match".into(),
            });
        }
        let mut generators = Vec::new();
        for b in 0..self.category.object_count() {
            for r in 0..self.components[b].dim() {
                let v = self.components[b].basis().row(r);
                generators.push((phi.apply_object(b), phi.apply_morphism(b, self.target, v)));
            }
        }
        Sieve::from_generators(phi.target(), phi.apply_object(self.target), &generators)
    }

    /// The preimage sieve on `a`: all morphisms whose image lands in the
    /// given sieve on `phi(a)`. A valid sieve by functoriality.
    pub fn functor_preimage(phi: &LinearFunctor, t: &Sieve, a: usize) -> Result<Sieve> {
        if phi.target().as_ref() != t.category.as_ref() {
            return Err(Error::Precondition {
                what: "preimage sieve: functor target does not match".into(),
            });
        }
        if t.target != phi.apply_object(a) {
            return Err(Error::TargetMismatch { context: "functor preimage sieve" });
        }
        let src = phi.source();
        let n = src.object_count();
        let mut components = Vec::with_capacity(n);
        for b in 0..n {
            let map = phi.hom_map(b, a);
            components.push(Subspace::preimage(&map, &t.components[phi.apply_object(b)])?);
        }
        let out = Sieve { category: src.clone(), target: a, components };
        debug_assert!(out.is_closed());
        Ok(out)
    }

    /// The quotient module `hom(-, A) / R`, with quotient-coordinate fibers.
    pub fn quotient_of_representable(&self) -> PresheafModule {
        PresheafModule::representable(&self.category, self.target)
            .quotient(&self.components)
            .expect("sieve components are action-stable")
    }

    /// The sieve itself as a module, with the component bases as fibers.
    pub fn as_module(&self) -> PresheafModule {
        PresheafModule::representable(&self.category, self.target)
            .submodule(&self.components)
            .expect("sieve components are action-stable")
    }

    /// All sieves on `a`: componentwise-subspace tuples passing the
    /// precomposition-closure filter. Deterministic order.
    pub fn enumerate(category: &CatRef, a: usize, caps: &Caps) -> Result<Vec<Sieve>> {
        let field = category.field();
        if !field.is_prime_field() {
            return Err(Error::UnsupportedField { op: "sieve enumeration" });
        }
        let n = category.object_count();
        let per_object: Vec<Vec<Subspace>> = (0..n)
            .map(|b| Subspace::enumerate_all(field, category.hom_dim(b, a), caps))
            .collect::<Result<_>>()?;
        let mut total: u64 = 1;
        for list in &per_object {
            total = total.saturating_mul(list.len() as u64);
            if total > caps.max_enumeration {
                return Err(Error::CapExceeded {
                    what: "sieve candidate tuples",
                    cap: caps.max_enumeration,
                    requested: total,
                });
            }
        }
        let rep = PresheafModule::representable(category, a);
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            let tuple: Vec<Subspace> =
                idx.iter().zip(&per_object).map(|(&i, list)| list[i].clone()).collect();
            if rep.is_stable_tuple(&tuple) {
                out.push(Sieve { category: category.clone(), target: a, components: tuple });
            }
            let mut i = n;
            loop {
                if i == 0 {
                    out.sort();
                    return Ok(out);
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < per_object[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    /// Decomposes a pair-hom vector into basis summands `f_i ⊗ g_i`, with
    /// nonzero coefficients folded into the left factor.
    pub fn split_pair_vector(
        tensor: &TensorCategory,
        src: (usize, usize),
        tgt: (usize, usize),
        h: &[Scalar],
    ) -> Vec<(Vec<Scalar>, Vec<Scalar>)> {
        let field = tensor.product().field();
        let dl = tensor.left().hom_dim(src.0, tgt.0);
        let dr = tensor.right().hom_dim(src.1, tgt.1);
        let mut out = Vec::new();
        for i in 0..dl {
            for j in 0..dr {
                let c = &h[i * dr + j];
                if field.is_zero(c) {
                    continue;
                }
                let mut f = vec![field.zero(); dl];
                f[i] = c.clone();
                let mut g = vec![field.zero(); dr];
                g[j] = field.one();
                out.push((f, g));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::FiniteLinearCategory;
    use crate::fixtures;
    use crate::linalg::Field;

    fn f2() -> Field {
        Field::default()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    fn arrow_sieve(c: &CatRef) -> Sieve {
        // The sieve generated by the arrow, targeting the tip.
        Sieve::from_generators(c, 1, &[(0, vec![f2().one()])]).unwrap()
    }

    #[test]
    fn representable_on_point_is_full_line() {
        let pt = FiniteLinearCategory::one_object(f2(), "pt");
        let s = Sieve::representable(&pt, 0).unwrap();
        assert_eq!(s.component_dims(), vec![1]);
        assert!(s.is_full());
        assert!(Sieve::representable(&pt, 3).is_err());
    }

    #[test]
    fn representable_components_follow_hom_dims() {
        let c = fixtures::arrow_category(f2());
        let s = Sieve::representable(&c, 1).unwrap();
        assert_eq!(s.component_dims(), vec![1, 1]);
        assert!(s.is_closed());
    }

    #[test]
    fn generated_by_identity_is_representable() {
        let c = fixtures::arrow_category(f2());
        let s = Sieve::from_generators(&c, 1, &[(1, vec![f2().one()])]).unwrap();
        assert_eq!(s, Sieve::representable(&c, 1).unwrap());
    }

    #[test]
    fn arrow_generated_sieve_components() {
        // Nothing reaches the tip object because hom(2, 1) = 0.
        let c = fixtures::arrow_category(f2());
        let s = arrow_sieve(&c);
        assert_eq!(s.component_dims(), vec![1, 0]);
        assert!(s.is_closed());
    }

    #[test]
    fn empty_generators_give_zero_sieve() {
        let c = fixtures::arrow_category(f2());
        let s = Sieve::from_generators(&c, 1, &[]).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn pullback_along_identity_is_identity() {
        let c = fixtures::arrow_category(f2());
        let s = arrow_sieve(&c);
        let back = s.pullback(&[f2().one()], 1).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn pullback_of_arrow_sieve_along_arrow_is_full() {
        // a . id1 = a lies in the sieve, so the pullback on the source is
        // the full representable.
        let c = fixtures::arrow_category(f2());
        let s = arrow_sieve(&c);
        let back = s.pullback(&[f2().one()], 0).unwrap();
        assert_eq!(back, Sieve::representable(&c, 0).unwrap());
    }

    #[test]
    fn pullback_of_zero_along_injective_precomposition_is_zero() {
        let c = fixtures::arrow_category(f2());
        let z = Sieve::zero(&c, 1);
        let back = z.pullback(&[f2().one()], 1).unwrap();
        assert!(back.is_zero());
    }

    #[test]
    fn intersection_with_representable_is_identity() {
        let c = fixtures::arrow_category(f2());
        let s = arrow_sieve(&c);
        let rep = Sieve::representable(&c, 1).unwrap();
        assert_eq!(s.intersect(&rep).unwrap(), s);
        assert!(rep.contains_sieve(&s));
        let z = Sieve::zero(&c, 1);
        assert_eq!(s.intersect(&z).unwrap(), z);
    }

    #[test]
    fn enumeration_matches_closure_counts() {
        let pt = FiniteLinearCategory::one_object(f2(), "pt");
        assert_eq!(Sieve::enumerate(&pt, 0, &caps()).unwrap().len(), 2);
        let c = fixtures::arrow_category(f2());
        // Zero, the arrow sieve, and the representable; the tuple with zero
        // arrow component but full tip component fails closure.
        let sieves = Sieve::enumerate(&c, 1, &caps()).unwrap();
        assert_eq!(sieves.len(), 3);
        assert_eq!(Sieve::enumerate(&c, 0, &caps()).unwrap().len(), 2);
    }

    #[test]
    fn tensor_sieve_componentwise_dims() {
        let c = fixtures::arrow_category(f2());
        let t = TensorCategory::new(&c, &c).unwrap();
        let r = arrow_sieve(&c);
        let s = Sieve::representable(&c, 1).unwrap();
        let rs = Sieve::tensor(&r, &s, &t).unwrap();
        assert_eq!(rs.component_dims(), vec![1, 1, 0, 0]);
        let full = Sieve::tensor(&s, &s, &t).unwrap();
        assert!(full.is_full());
        let zero = Sieve::tensor(&Sieve::zero(&c, 1), &s, &t).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn tensor_sieve_components_are_subspace_tensors() {
        // (R ⊠ S)(A', B') = R(A') ⊗ S(B') as subspaces, on all sieve pairs.
        let c = fixtures::arrow_category(f2());
        let t = TensorCategory::new(&c, &c).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for r in Sieve::enumerate(&c, a, &caps()).unwrap() {
                    for s in Sieve::enumerate(&c, b, &caps()).unwrap() {
                        let rs = Sieve::tensor(&r, &s, &t).unwrap();
                        for o in 0..4 {
                            let (x, y) = t.split_object(o);
                            assert_eq!(
                                rs.component(o),
                                &r.component(x).tensor(s.component(y)).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn image_along_identity_functor_is_identity() {
        let c = fixtures::arrow_category(f2());
        let id = LinearFunctor::identity(&c);
        let s = arrow_sieve(&c);
        assert_eq!(s.image(&id).unwrap(), s);
        assert!(Sieve::zero(&c, 1).image(&id).unwrap().is_zero());
    }

    #[test]
    fn preimage_of_full_component_sieve_is_full() {
        let c = fixtures::arrow_category(f2());
        let (sub, incl) = fixtures::source_inclusion(f2());
        // Any sieve whose component at the source object is full pulls back
        // to the full sieve on the singleton subcategory.
        let s = Sieve::representable(&c, 0).unwrap();
        let back = Sieve::functor_preimage(&incl, &s, 0).unwrap();
        assert_eq!(back, Sieve::representable(&sub, 0).unwrap());
    }

    #[test]
    fn quotient_of_representable_by_arrow_sieve_is_simple() {
        let c = fixtures::arrow_category(f2());
        let s = arrow_sieve(&c);
        let q = s.quotient_of_representable();
        assert_eq!(q.dims(), &[0, 1]);
        assert!(q.validate().is_empty());
        let full = Sieve::representable(&c, 1).unwrap();
        assert!(full.quotient_of_representable().is_zero_module());
        let z = Sieve::zero(&c, 1);
        assert_eq!(z.quotient_of_representable().dims(), &[1, 1]);
    }

    #[test]
    fn pullback_distributes_over_intersection() {
        let c = fixtures::arrow_category(f2());
        for target in 0..2 {
            let sieves = Sieve::enumerate(&c, target, &caps()).unwrap();
            for from in 0..2 {
                for f in c.enumerate_hom_vectors(from, target, &caps()).unwrap() {
                    for r in &sieves {
                        for s in &sieves {
                            let lhs = r.intersect(s).unwrap().pullback(&f, from).unwrap();
                            let rhs = r
                                .pullback(&f, from)
                                .unwrap()
                                .intersect(&s.pullback(&f, from).unwrap())
                                .unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pullback_intersection_bound_for_tensor_sieves() {
        // (cap f_i^{-1}R) ⊠ (cap g_i^{-1}S) ⊆ h^{-1}(R ⊠ S) for every
        // pair-hom vector h with its basis decomposition.
        let c = fixtures::arrow_category(f2());
        let t = TensorCategory::new(&c, &c).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let rs: Vec<Sieve> = Sieve::enumerate(&c, a, &caps()).unwrap();
                let ss: Vec<Sieve> = Sieve::enumerate(&c, b, &caps()).unwrap();
                for r in &rs {
                    for s in &ss {
                        let tensor_sieve = Sieve::tensor(r, s, &t).unwrap();
                        for src in 0..4 {
                            let (a2, b2) = t.split_object(src);
                            let tgt = t.pair_object(a, b);
                            for h in t.product().enumerate_hom_vectors(src, tgt, &caps()).unwrap()
                            {
                                let terms = Sieve::split_pair_vector(&t, (a2, b2), (a, b), &h);
                                if terms.is_empty() {
                                    continue;
                                }
                                let mut rr = Sieve::representable(&c, a2).unwrap();
                                let mut ss2 = Sieve::representable(&c, b2).unwrap();
                                for (f, g) in &terms {
                                    rr = rr.intersect(&r.pullback(f, a2).unwrap()).unwrap();
                                    ss2 = ss2.intersect(&s.pullback(g, b2).unwrap()).unwrap();
                                }
                                let lhs = Sieve::tensor(&rr, &ss2, &t).unwrap();
                                let rhs = tensor_sieve.pullback(&h, src).unwrap();
                                assert!(rhs.contains_sieve(&lhs));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn functor_image_commutes_with_tensor_sieve() {
        // phi(R) ⊠ S = (phi ⊗ 1)(R ⊠ S) on all sieve pairs of the
        // inclusion fixture.
        let (sub, incl) = fixtures::source_inclusion(f2());
        let c = fixtures::arrow_category(f2());
        let idc = LinearFunctor::identity(&c);
        let (src_t, tgt_t, phi_one) = LinearFunctor::tensor(&incl, &idc).unwrap();
        for a in 0..sub.object_count() {
            for b in 0..2 {
                for r in Sieve::enumerate(&sub, a, &caps()).unwrap() {
                    for s in Sieve::enumerate(&c, b, &caps()).unwrap() {
                        let lhs = Sieve::tensor(&r.image(&incl).unwrap(), &s, &tgt_t).unwrap();
                        let rhs = Sieve::tensor(&r, &s, &src_t).unwrap().image(&phi_one).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
