//! Sheaf and null-presheaf tests, sheafification, and the correspondence
//! between topologies and their classes of null presheaves.
//!
//! A module is a sheaf when restriction along every covering sieve is an
//! isomorphism, and a null presheaf when every element is killed by some
//! covering sieve. Over a finite category with a topology, the covering
//! sieves on an object form a lattice with a minimum (the intersection of
//! two covers is a cover), so both tests and the plus construction reduce
//! to the minimal cover: the filtered colimit over all covers is evaluation
//! at the minimum. The test suite cross-checks this against non-minimal
//! covers explicitly.

use std::collections::BTreeMap;

use crate::cat::{CatRef, HomSpace, NatTransform, PresheafModule, TensorCategory};
use crate::linalg::{Caps, Matrix};
use crate::sieve::Sieve;
use crate::topology::{ClosureMode, CoverSystem};
use crate::{Error, Result};

/// Sheaf-side machinery for one cover system: the minimal covers, computed
/// once, plus the plus-construction built on them.
///
/// Requires the system to be a topology (minimal covers must be covering
/// and pullback-nested); construction fails otherwise.
#[derive(Debug, Clone)]
pub struct SheafTester {
    system: CoverSystem,
    minimal: Vec<Sieve>,
    caps: Caps,
}

impl SheafTester {
    pub fn new(system: &CoverSystem, caps: &Caps) -> Result<SheafTester> {
        let n = system.category().object_count();
        let minimal =
            (0..n).map(|a| system.minimal_cover(a, caps)).collect::<Result<Vec<_>>>()?;
        Ok(SheafTester { system: system.clone(), minimal, caps: *caps })
    }

    pub fn system(&self) -> &CoverSystem {
        &self.system
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn minimal_cover(&self, a: usize) -> &Sieve {
        &self.minimal[a]
    }

    fn category(&self) -> &CatRef {
        self.system.category()
    }

    /// The coordinates of the canonical map `F(A) -> Hom(R_min(A), F)`:
    /// column `t` is the transformation `r |-> F(r)(x_t)` expressed in the
    /// canonical basis of the solution space.
    fn canonical_map(&self, f: &PresheafModule, a: usize) -> Result<(HomSpace, Matrix)> {
        let cat = self.category();
        let field = cat.field();
        let sieve_mod = self.minimal[a].as_module();
        let hom = HomSpace::solve(&sieve_mod, f)?;
        let mut m = Matrix::zeros(field, hom.dim(), f.dim_at(a));
        for t in 0..f.dim_at(a) {
            let mut components = Vec::with_capacity(cat.object_count());
            for c in 0..cat.object_count() {
                let rows = self.minimal[a].component(c).dim();
                let mut comp = Matrix::zeros(field, f.dim_at(c), rows);
                for j in 0..rows {
                    let g = self.minimal[a].component(c).basis().row(j);
                    let act = f.action_matrix(c, a, g);
                    for r in 0..f.dim_at(c) {
                        *comp.at_mut(r, j) = act.at(r, t).clone();
                    }
                }
                components.push(comp);
            }
            let flat = hom.pack(&components);
            let coords = hom.space().coords_of(&flat).ok_or_else(|| Error::Precondition {
                what: "canonical transformation is not natural; module action is inconsistent"
                    .into(),
            })?;
            for (r, x) in coords.into_iter().enumerate() {
                *m.at_mut(r, t) = x;
            }
        }
        Ok((hom, m))
    }

    /// Sheaf test: the canonical map into the minimal-cover hom space is an
    /// isomorphism at every object.
    pub fn is_sheaf(&self, f: &PresheafModule) -> Result<bool> {
        for a in 0..self.category().object_count() {
            let (hom, m) = self.canonical_map(f, a)?;
            if hom.dim() != f.dim_at(a) || m.rank() != hom.dim() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Null-presheaf test: every element is killed by the minimal cover.
    /// Linearity in both the element and the morphism reduces this to the
    /// component basis vectors acting as zero matrices.
    pub fn is_null_presheaf(&self, f: &PresheafModule) -> Result<bool> {
        let cat = self.category();
        for a in 0..cat.object_count() {
            if f.dim_at(a) == 0 {
                continue;
            }
            for b in 0..cat.object_count() {
                for j in 0..self.minimal[a].component(b).dim() {
                    let r = self.minimal[a].component(b).basis().row(j);
                    if !f.action_matrix(b, a, r).is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// One plus-construction step: `F^+(A) = Hom(R_min(A), F)` with the
    /// action by pullback, together with the unit `F -> F^+`.
    pub fn plus(&self, f: &PresheafModule) -> Result<(PresheafModule, NatTransform)> {
        let cat = self.category();
        let field = cat.field();
        let n = cat.object_count();
        let mut homs = Vec::with_capacity(n);
        let mut units = Vec::with_capacity(n);
        for a in 0..n {
            let (hom, unit) = self.canonical_map(f, a)?;
            homs.push(hom);
            units.push(unit);
        }
        let dims: Vec<usize> = homs.iter().map(HomSpace::dim).collect();
        let mut action: BTreeMap<(usize, usize), Vec<Matrix>> = BTreeMap::new();
        for b in 0..n {
            for a in 0..n {
                let hd = cat.hom_dim(b, a);
                if hd == 0 || dims[a] == 0 || dims[b] == 0 {
                    continue;
                }
                let mut mats = Vec::with_capacity(hd);
                for i in 0..hd {
                    let mut fvec = vec![field.zero(); hd];
                    fvec[i] = field.one();
                    let mut out = Matrix::zeros(field, dims[b], dims[a]);
                    for col in 0..dims[a] {
                        let tau = homs[a].unpack(field, homs[a].space().basis().row(col));
                        // (tau . f)_C(g) = tau_C(f . g); the composite lies
                        // in the minimal cover on `a` because the minimal
                        // covers of a topology pull back into each other.
                        let mut moved = Vec::with_capacity(n);
                        for c in 0..n {
                            let rb = self.minimal[b].component(c).dim();
                            let mut comp = Matrix::zeros(field, f.dim_at(c), rb);
                            for j in 0..rb {
                                let g = self.minimal[b].component(c).basis().row(j);
                                let fg = cat.compose(&fvec, g, c, b, a);
                                let coords = self.minimal[a]
                                    .component(c)
                                    .coords_of(&fg)
                                    .ok_or_else(|| Error::Precondition {
                                        what: "minimal covers are not pullback-nested; \
                                               the system is not a topology"
                                            .into(),
                                    })?;
                                let img = tau[c].mul_vec(&coords).expect("component shape");
                                for r in 0..f.dim_at(c) {
                                    *comp.at_mut(r, j) = img[r].clone();
                                }
                            }
                            moved.push(comp);
                        }
                        let flat = homs[b].pack(&moved);
                        let coords = homs[b].space().coords_of(&flat).ok_or_else(|| {
                            Error::Precondition {
                                what: "pulled-back transformation is not natural".into(),
                            }
                        })?;
                        for (r, x) in coords.into_iter().enumerate() {
                            *out.at_mut(r, col) = x;
                        }
                    }
                    mats.push(out);
                }
                action.insert((b, a), mats);
            }
        }
        let plus = PresheafModule::new(cat.clone(), dims, action);
        let unit = NatTransform { source: f.clone(), target: plus.clone(), components: units };
        Ok((plus, unit))
    }

    /// Functoriality of the plus construction on a natural transformation:
    /// postcompose each solution with the components of `alpha`.
    pub fn plus_nat(&self, alpha: &NatTransform) -> Result<NatTransform> {
        let cat = self.category();
        let field = cat.field();
        let n = cat.object_count();
        let (src_plus, _) = self.plus(&alpha.source)?;
        let (tgt_plus, _) = self.plus(&alpha.target)?;
        let mut components = Vec::with_capacity(n);
        for a in 0..n {
            let sieve_mod = self.minimal[a].as_module();
            let src_hom = HomSpace::solve(&sieve_mod, &alpha.source)?;
            let tgt_hom = HomSpace::solve(&sieve_mod, &alpha.target)?;
            let mut m = Matrix::zeros(field, tgt_hom.dim(), src_hom.dim());
            for col in 0..src_hom.dim() {
                let tau = src_hom.unpack(field, src_hom.space().basis().row(col));
                let moved: Vec<Matrix> = tau
                    .iter()
                    .zip(&alpha.components)
                    .map(|(t, a)| a.mul(t).expect("component shapes"))
                    .collect();
                let flat = tgt_hom.pack(&moved);
                let coords =
                    tgt_hom.space().coords_of(&flat).ok_or_else(|| Error::Precondition {
                        what: "postcomposed transformation is not natural".into(),
                    })?;
                for (r, x) in coords.into_iter().enumerate() {
                    *m.at_mut(r, col) = x;
                }
            }
            components.push(m);
        }
        Ok(NatTransform { source: src_plus, target: tgt_plus, components })
    }

    /// Full sheafification: two plus steps, with the composite unit.
    /// The result is a sheaf; the unit is an isomorphism exactly when the
    /// input already was one; the result is zero exactly on null presheaves.
    pub fn sheafify(&self, f: &PresheafModule) -> Result<(PresheafModule, NatTransform)> {
        let (once, unit1) = self.plus(f)?;
        let (twice, unit2) = self.plus(&once)?;
        let unit = NatTransform::compose(&unit2, &unit1);
        Ok((twice, unit))
    }
}

/// Convenience wrapper over [`SheafTester::is_sheaf`].
pub fn is_sheaf(f: &PresheafModule, t: &CoverSystem, caps: &Caps) -> Result<bool> {
    SheafTester::new(t, caps)?.is_sheaf(f)
}

/// Convenience wrapper over [`SheafTester::is_null_presheaf`].
pub fn is_null_presheaf(f: &PresheafModule, t: &CoverSystem, caps: &Caps) -> Result<bool> {
    SheafTester::new(t, caps)?.is_null_presheaf(f)
}

/// Convenience wrapper over [`SheafTester::sheafify`].
pub fn sheafify(
    f: &PresheafModule,
    t: &CoverSystem,
    caps: &Caps,
) -> Result<(PresheafModule, NatTransform)> {
    SheafTester::new(t, caps)?.sheafify(f)
}

/// Whether the canonical map `F(A) -> Hom(R, F)` is an isomorphism for one
/// specific sieve. Used to cross-check the minimal-cover sheaf test against
/// non-minimal covering sieves.
pub fn restriction_is_iso(f: &PresheafModule, r: &Sieve) -> Result<bool> {
    let cat = f.category();
    let field = cat.field();
    let a = r.target();
    let hom = HomSpace::solve(&r.as_module(), f)?;
    if hom.dim() != f.dim_at(a) {
        return Ok(false);
    }
    let mut m = Matrix::zeros(field, hom.dim(), f.dim_at(a));
    for t in 0..f.dim_at(a) {
        let mut components = Vec::with_capacity(cat.object_count());
        for c in 0..cat.object_count() {
            let rows = r.component(c).dim();
            let mut comp = Matrix::zeros(field, f.dim_at(c), rows);
            for j in 0..rows {
                let g = r.component(c).basis().row(j);
                let act = f.action_matrix(c, a, g);
                for row in 0..f.dim_at(c) {
                    *comp.at_mut(row, j) = act.at(row, t).clone();
                }
            }
            components.push(comp);
        }
        let flat = hom.pack(&components);
        let Some(coords) = hom.space().coords_of(&flat) else {
            return Ok(false);
        };
        for (row, x) in coords.into_iter().enumerate() {
            *m.at_mut(row, t) = x;
        }
    }
    Ok(m.rank() == hom.dim())
}

/// Which variable of a product category a one-variable operation works in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorSide {
    Left,
    Right,
}

/// One-sided sheafification of a module on a product category: sheafify in
/// the chosen variable for every frozen object of the other factor, and
/// reassemble the frozen-variable action through the functoriality of the
/// plus construction.
pub fn onesided_sheafify(
    f: &PresheafModule,
    tensor: &TensorCategory,
    side: TensorSide,
    factor_system: &CoverSystem,
    caps: &Caps,
) -> Result<PresheafModule> {
    let tester = SheafTester::new(factor_system, caps)?;
    let prod = tensor.product();
    let field = prod.field();
    let (frozen_cat, varying_cat) = match side {
        TensorSide::Left => (tensor.right(), tensor.left()),
        TensorSide::Right => (tensor.left(), tensor.right()),
    };
    if tester.category().as_ref() != varying_cat.as_ref() {
        return Err(Error::Precondition {
            what: "one-sided sheafification: system does not live over the varying factor".into(),
        });
    }
    let slices: Vec<PresheafModule> = (0..frozen_cat.object_count())
        .map(|b| match side {
            TensorSide::Left => PresheafModule::slice_left(f, tensor, b),
            TensorSide::Right => PresheafModule::slice_right(f, tensor, b),
        })
        .collect();
    let sheafified: Vec<PresheafModule> = slices
        .iter()
        .map(|s| tester.sheafify(s).map(|(m, _)| m))
        .collect::<Result<_>>()?;
    // Sheafified connecting maps for each basis morphism of the frozen
    // factor: two plus steps applied to the slice-to-slice transformation.
    let mut connecting: BTreeMap<(usize, usize, usize), NatTransform> = BTreeMap::new();
    for b2 in 0..frozen_cat.object_count() {
        for b1 in 0..frozen_cat.object_count() {
            let hd = frozen_cat.hom_dim(b2, b1);
            for i in 0..hd {
                let mut g = vec![field.zero(); hd];
                g[i] = field.one();
                let components: Vec<Matrix> = (0..varying_cat.object_count())
                    .map(|a| {
                        let (src, tgt) = match side {
                            TensorSide::Left => {
                                (tensor.pair_object(a, b2), tensor.pair_object(a, b1))
                            }
                            TensorSide::Right => {
                                (tensor.pair_object(b2, a), tensor.pair_object(b1, a))
                            }
                        };
                        let pair = match side {
                            TensorSide::Left => {
                                tensor.pair_morphism(varying_cat.identity_coords(a), &g)
                            }
                            TensorSide::Right => {
                                tensor.pair_morphism(&g, varying_cat.identity_coords(a))
                            }
                        };
                        f.action_matrix(src, tgt, &pair)
                    })
                    .collect();
                let alpha = NatTransform {
                    source: slices[b1].clone(),
                    target: slices[b2].clone(),
                    components,
                };
                let plus_once = tester.plus_nat(&alpha)?;
                let plus_twice = tester.plus_nat(&plus_once)?;
                connecting.insert((b2, b1, i), plus_twice);
            }
        }
    }
    // Assemble the product-category module.
    let dims: Vec<usize> = (0..prod.object_count())
        .map(|o| {
            let (x, y) = tensor.split_object(o);
            match side {
                TensorSide::Left => sheafified[y].dim_at(x),
                TensorSide::Right => sheafified[x].dim_at(y),
            }
        })
        .collect();
    let mut action: BTreeMap<(usize, usize), Vec<Matrix>> = BTreeMap::new();
    for s in 0..prod.object_count() {
        for t in 0..prod.object_count() {
            let hd = prod.hom_dim(s, t);
            if hd == 0 || dims[s] == 0 || dims[t] == 0 {
                continue;
            }
            let (sa, sb) = tensor.split_object(s);
            let (ta, tb) = tensor.split_object(t);
            let dr = tensor.right().hom_dim(sb, tb);
            let mut mats = Vec::with_capacity(hd);
            for idx in 0..hd {
                let (fi, gi) = (idx / dr, idx % dr);
                // Split the pair basis morphism as the frozen-factor
                // connecting map followed by the varying-factor action.
                let m = match side {
                    TensorSide::Left => {
                        let conn = &connecting[&(sb, tb, gi)];
                        let step1 = conn.components[ta].clone();
                        let dl = tensor.left().hom_dim(sa, ta);
                        let mut fvec = vec![field.zero(); dl];
                        fvec[fi] = field.one();
                        let step2 = sheafified[sb].action_matrix(sa, ta, &fvec);
                        step2.mul(&step1).expect("shapes")
                    }
                    TensorSide::Right => {
                        let conn = &connecting[&(sa, ta, fi)];
                        let step1 = conn.components[tb].clone();
                        let mut gvec = vec![field.zero(); dr];
                        gvec[gi] = field.one();
                        let step2 = sheafified[sa].action_matrix(sb, tb, &gvec);
                        step2.mul(&step1).expect("shapes")
                    }
                };
                mats.push(m);
            }
            action.insert((s, t), mats);
        }
    }
    Ok(PresheafModule::new(prod.clone(), dims, action))
}

/// Reconstructs a cover system from the null-presheaf class of a witness
/// topology: covering sieves are exactly those whose representable quotient
/// is null, materialized by enumeration into a `raw` system. Composing with
/// the null class itself is the identity on topologies.
pub fn topology_from_null_class(witness: &CoverSystem, caps: &Caps) -> Result<CoverSystem> {
    let tester = SheafTester::new(witness, caps)?;
    let cat = witness.category().clone();
    let mut basic_covers = Vec::with_capacity(cat.object_count());
    for a in 0..cat.object_count() {
        let mut list = Vec::new();
        for s in Sieve::enumerate(&cat, a, caps)? {
            if tester.is_null_presheaf(&s.quotient_of_representable())? {
                list.push(s);
            }
        }
        basic_covers.push(list);
    }
    CoverSystem::new(&cat, basic_covers, ClosureMode::Raw)
}
