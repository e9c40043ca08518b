use std::collections::BTreeMap;

use super::category::{basis_vec, CatRef, TensorCategory};
use crate::linalg::{Matrix, Scalar, Subspace};
use crate::{Error, Result};

/// A `k`-linear functor between finite linear categories: an object map
/// plus one matrix per hom space in the chosen bases.
#[derive(Debug, Clone)]
pub struct LinearFunctor {
    source: CatRef,
    target: CatRef,
    object_map: Vec<usize>,
    hom_maps: BTreeMap<(usize, usize), Matrix>,
}

impl LinearFunctor {
    pub fn new(
        source: CatRef,
        target: CatRef,
        object_map: Vec<usize>,
        hom_maps: BTreeMap<(usize, usize), Matrix>,
    ) -> LinearFunctor {
        assert_eq!(object_map.len(), source.object_count());
        LinearFunctor { source, target, object_map, hom_maps }
    }

    pub fn identity(cat: &CatRef) -> LinearFunctor {
        let n = cat.object_count();
        let mut hom_maps = BTreeMap::new();
        for s in 0..n {
            for t in 0..n {
                let d = cat.hom_dim(s, t);
                if d > 0 {
                    hom_maps.insert((s, t), Matrix::identity(cat.field(), d));
                }
            }
        }
        LinearFunctor::new(cat.clone(), cat.clone(), (0..n).collect(), hom_maps)
    }

    pub fn source(&self) -> &CatRef {
        &self.source
    }

    pub fn target(&self) -> &CatRef {
        &self.target
    }

    pub fn apply_object(&self, a: usize) -> usize {
        self.object_map[a]
    }

    /// The matrix `hom_src(b, a) -> hom_tgt(phi b, phi a)`.
    pub fn hom_map(&self, b: usize, a: usize) -> Matrix {
        match self.hom_maps.get(&(b, a)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(
                self.source.field(),
                self.target.hom_dim(self.object_map[b], self.object_map[a]),
                self.source.hom_dim(b, a),
            ),
        }
    }

    /// Applies the functor to a morphism coordinate vector in `hom(b, a)`.
    pub fn apply_morphism(&self, b: usize, a: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.hom_map(b, a).mul_vec(v).expect("hom map shape")
    }

    /// Image of `hom(b, a)` under the functor, as a subspace of the target
    /// hom space.
    pub fn hom_image(&self, b: usize, a: usize) -> Subspace {
        Subspace::image(&self.hom_map(b, a))
    }

    /// Kernel of the functor on `hom(b, a)`.
    pub fn hom_kernel(&self, b: usize, a: usize) -> Subspace {
        Subspace::kernel(&self.hom_map(b, a))
    }

    /// Checks identity and composition preservation on all basis morphisms.
    pub fn validate(&self) -> bool {
        let n = self.source.object_count();
        for a in 0..n {
            let img = self.apply_morphism(a, a, self.source.identity_coords(a));
            if img != self.target.identity_coords(self.object_map[a]) {
                return false;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let df = self.source.hom_dim(a, b);
                    let dg = self.source.hom_dim(b, c);
                    if df == 0 || dg == 0 {
                        continue;
                    }
                    for fi in 0..df {
                        let f = basis_vec(self.source.field(), df, fi);
                        for gi in 0..dg {
                            let g = basis_vec(self.source.field(), dg, gi);
                            let gf = self.source.compose(&g, &f, a, b, c);
                            let lhs = self.apply_morphism(a, c, &gf);
                            let rhs = self.target.compose(
                                &self.apply_morphism(b, c, &g),
                                &self.apply_morphism(a, b, &f),
                                self.object_map[a],
                                self.object_map[b],
                                self.object_map[c],
                            );
                            if lhs != rhs {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Composition `second . first`.
    pub fn compose(second: &LinearFunctor, first: &LinearFunctor) -> Result<LinearFunctor> {
        if second.source.as_ref() != first.target.as_ref() {
            return Err(Error::Precondition {
                what: "functor composition: categories do not match".into(),
            });
        }
        let object_map: Vec<usize> =
            first.object_map.iter().map(|&o| second.object_map[o]).collect();
        let mut hom_maps = BTreeMap::new();
        let n = first.source.object_count();
        for b in 0..n {
            for a in 0..n {
                if first.source.hom_dim(b, a) == 0 {
                    continue;
                }
                let m1 = first.hom_map(b, a);
                let m2 = second.hom_map(first.object_map[b], first.object_map[a]);
                hom_maps.insert((b, a), m2.mul(&m1)?);
            }
        }
        Ok(LinearFunctor::new(
            first.source.clone(),
            second.target.clone(),
            object_map,
            hom_maps,
        ))
    }

    /// The tensor product functor between the tensor product categories.
    /// Returns the two tensor categories together with the functor, so
    /// callers can keep building on the same product values.
    ///
    /// The factorization `phi ⊗ psi = (1 ⊗ psi)(phi ⊗ 1)` holds exactly and
    /// is asserted in the test suite.
    pub fn tensor(
        phi: &LinearFunctor,
        psi: &LinearFunctor,
    ) -> Result<(TensorCategory, TensorCategory, LinearFunctor)> {
        if phi.source.field() != psi.source.field() {
            return Err(Error::FieldMismatch { context: "tensor functor" });
        }
        let src = TensorCategory::new(&phi.source, &psi.source)?;
        let tgt = TensorCategory::new(&phi.target, &psi.target)?;
        let f = Self::tensor_on(phi, psi, &src, &tgt);
        Ok((src, tgt, f))
    }

    /// As [`LinearFunctor::tensor`], over already-built tensor categories.
    pub fn tensor_on(
        phi: &LinearFunctor,
        psi: &LinearFunctor,
        src: &TensorCategory,
        tgt: &TensorCategory,
    ) -> LinearFunctor {
        let nl = phi.source.object_count();
        let nr = psi.source.object_count();
        let mut object_map = Vec::with_capacity(nl * nr);
        for a in 0..nl {
            for b in 0..nr {
                object_map.push(tgt.pair_object(phi.object_map[a], psi.object_map[b]));
            }
        }
        let mut hom_maps = BTreeMap::new();
        for s in 0..nl * nr {
            for t in 0..nl * nr {
                if src.product().hom_dim(s, t) == 0 {
                    continue;
                }
                let (sa, sb) = src.split_object(s);
                let (ta, tb) = src.split_object(t);
                let m = phi.hom_map(sa, ta).kron(&psi.hom_map(sb, tb)).expect("same field");
                hom_maps.insert((s, t), m);
            }
        }
        LinearFunctor::new(
            src.product().clone(),
            tgt.product().clone(),
            object_map,
            hom_maps,
        )
    }
}
