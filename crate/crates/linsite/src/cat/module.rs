use std::collections::BTreeMap;

use super::category::{basis_vec, kron_vec, CatRef, TensorCategory};
use super::functor::LinearFunctor;
use crate::linalg::{Caps, Matrix, Scalar, Subspace};
use crate::{Error, Result};

/// A presheaf module: a contravariant linear functor from the category to
/// vector spaces, with explicit fibers and action structure constants.
///
/// The action table at a pair `(B, A)` stores, per basis morphism
/// `f in hom(B, A)`, the matrix `F(f) : F(A) -> F(B)`. Pairs where the hom
/// space or either fiber is zero are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafModule {
    category: CatRef,
    dims: Vec<usize>,
    action: BTreeMap<(usize, usize), Vec<Matrix>>,
}

impl PresheafModule {
    pub fn new(
        category: CatRef,
        dims: Vec<usize>,
        action: BTreeMap<(usize, usize), Vec<Matrix>>,
    ) -> PresheafModule {
        assert_eq!(dims.len(), category.object_count());
        PresheafModule { category, dims, action }
    }

    pub fn zero(category: &CatRef) -> PresheafModule {
        let dims = vec![0; category.object_count()];
        PresheafModule { category: category.clone(), dims, action: BTreeMap::new() }
    }

    /// The representable module at `a`: fibers are the hom spaces into `a`,
    /// the action is precomposition.
    pub fn representable(category: &CatRef, a: usize) -> PresheafModule {
        let n = category.object_count();
        let dims: Vec<usize> = (0..n).map(|b| category.hom_dim(b, a)).collect();
        let mut action = BTreeMap::new();
        for b in 0..n {
            for c in 0..n {
                let hd = category.hom_dim(c, b);
                if hd == 0 || dims[b] == 0 || dims[c] == 0 {
                    continue;
                }
                let mats: Vec<Matrix> = (0..hd)
                    .map(|i| {
                        let g = basis_vec(category.field(), hd, i);
                        category.precompose_matrix(&g, c, b, a)
                    })
                    .collect();
                action.insert((c, b), mats);
            }
        }
        PresheafModule { category: category.clone(), dims, action }
    }

    pub fn category(&self) -> &CatRef {
        &self.category
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, a: usize) -> usize {
        self.dims[a]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero_module(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// The matrix `F(f) : F(a) -> F(b)` for the `i`-th basis morphism of
    /// `hom(b, a)`.
    pub fn action_basis_matrix(&self, b: usize, a: usize, i: usize) -> Matrix {
        match self.action.get(&(b, a)) {
            Some(mats) => mats[i].clone(),
            None => Matrix::zeros(self.category.field(), self.dims[b], self.dims[a]),
        }
    }

    /// The matrix `F(f)` for an arbitrary morphism coordinate vector.
    pub fn action_matrix(&self, b: usize, a: usize, f: &[Scalar]) -> Matrix {
        let field = self.category.field();
        let mut out = Matrix::zeros(field, self.dims[b], self.dims[a]);
        let Some(mats) = self.action.get(&(b, a)) else {
            return out;
        };
        for (i, c) in f.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            for r in 0..self.dims[b] {
                for s in 0..self.dims[a] {
                    let t = field.mul(c, mats[i].at(r, s));
                    *out.at_mut(r, s) = field.add(out.at(r, s), &t);
                }
            }
        }
        out
    }

    /// Checks unitality and contravariant compatibility with composition on
    /// all basis morphisms; returns human-readable violations.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let cat = &self.category;
        let n = cat.object_count();
        for a in 0..n {
            if self.dims[a] == 0 {
                continue;
            }
            let m = self.action_matrix(a, a, cat.identity_coords(a));
            if m != Matrix::identity(cat.field(), self.dims[a]) {
                violations
                    .push(format!("identity does not act as identity at {}", cat.object_name(a)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let df = cat.hom_dim(b, a);
                    let dg = cat.hom_dim(c, b);
                    if df == 0 || dg == 0 {
                        continue;
                    }
                    for fi in 0..df {
                        let f = basis_vec(cat.field(), df, fi);
                        for gi in 0..dg {
                            let g = basis_vec(cat.field(), dg, gi);
                            // Composite f.g lands in hom(c, a); its action
                            // must factor as F(g) after F(f).
                            let fg = cat.compose(&f, &g, c, b, a);
                            let lhs = self.action_matrix(c, a, &fg);
                            let rhs = self
                                .action_basis_matrix(c, b, gi)
                                .mul(&self.action_basis_matrix(b, a, fi))
                                .expect("action shapes");
                            if lhs != rhs {
                                violations.push(format!(
                                    "action incompatible with composition at ({}, {}, {}) basis ({gi}, {fi})",
                                    cat.object_name(c),
                                    cat.object_name(b),
                                    cat.object_name(a),
                                ));
                            }
                        }
                    }
                }
            }
        }
        violations
    }

    /// Restriction along a functor: `(phi^* F)(A) = F(phi A)` with the
    /// action precomposed through the hom maps.
    pub fn restrict(phi: &LinearFunctor, f: &PresheafModule) -> Result<PresheafModule> {
        if f.category.as_ref() != phi.target().as_ref() {
            return Err(Error::Precondition {
                what: "restriction: module does not live over the functor target".into(),
            });
        }
        let src = phi.source();
        let n = src.object_count();
        let dims: Vec<usize> = (0..n).map(|a| f.dims[phi.apply_object(a)]).collect();
        let mut action = BTreeMap::new();
        for b in 0..n {
            for a in 0..n {
                let hd = src.hom_dim(b, a);
                if hd == 0 || dims[a] == 0 || dims[b] == 0 {
                    continue;
                }
                let mats: Vec<Matrix> = (0..hd)
                    .map(|i| {
                        let v = basis_vec(src.field(), hd, i);
                        let img = phi.apply_morphism(b, a, &v);
                        f.action_matrix(phi.apply_object(b), phi.apply_object(a), &img)
                    })
                    .collect();
                action.insert((b, a), mats);
            }
        }
        Ok(PresheafModule { category: src.clone(), dims, action })
    }

    /// External tensor product `(M ⊗ N)(A, B) = M(A) ⊗ N(B)` on the product
    /// category, with the Kronecker action.
    pub fn external_tensor(
        m: &PresheafModule,
        n: &PresheafModule,
        tensor: &TensorCategory,
    ) -> Result<PresheafModule> {
        if m.category.as_ref() != tensor.left().as_ref()
            || n.category.as_ref() != tensor.right().as_ref()
        {
            return Err(Error::Precondition {
                what: "external tensor: modules do not live over the factors".into(),
            });
        }
        let prod = tensor.product();
        let count = prod.object_count();
        let dims: Vec<usize> = (0..count)
            .map(|o| {
                let (a, b) = tensor.split_object(o);
                m.dims[a] * n.dims[b]
            })
            .collect();
        let mut action = BTreeMap::new();
        for s in 0..count {
            for t in 0..count {
                let hd = prod.hom_dim(s, t);
                if hd == 0 || dims[s] == 0 || dims[t] == 0 {
                    continue;
                }
                let (sa, sb) = tensor.split_object(s);
                let (ta, tb) = tensor.split_object(t);
                let dr = tensor.right().hom_dim(sb, tb);
                let mats: Vec<Matrix> = (0..hd)
                    .map(|i| {
                        let (fi, gi) = (i / dr, i % dr);
                        m.action_basis_matrix(sa, ta, fi)
                            .kron(&n.action_basis_matrix(sb, tb, gi))
                            .expect("same field")
                    })
                    .collect();
                action.insert((s, t), mats);
            }
        }
        Ok(PresheafModule { category: prod.clone(), dims, action })
    }

    /// The left slice `F(-, b)` of a module on a product category, as a
    /// module over the left factor.
    pub fn slice_left(f: &PresheafModule, tensor: &TensorCategory, b: usize) -> PresheafModule {
        let left = tensor.left();
        let n = left.object_count();
        let dims: Vec<usize> = (0..n).map(|a| f.dims[tensor.pair_object(a, b)]).collect();
        let id_b = tensor.right().identity_coords(b).to_vec();
        let mut action = BTreeMap::new();
        for a2 in 0..n {
            for a1 in 0..n {
                let hd = left.hom_dim(a2, a1);
                if hd == 0 || dims[a1] == 0 || dims[a2] == 0 {
                    continue;
                }
                let mats: Vec<Matrix> = (0..hd)
                    .map(|i| {
                        let v = basis_vec(left.field(), hd, i);
                        let pair = kron_vec(left.field(), &v, &id_b);
                        f.action_matrix(tensor.pair_object(a2, b), tensor.pair_object(a1, b), &pair)
                    })
                    .collect();
                action.insert((a2, a1), mats);
            }
        }
        PresheafModule { category: left.clone(), dims, action }
    }

    /// The right slice `F(a, -)`, as a module over the right factor.
    pub fn slice_right(f: &PresheafModule, tensor: &TensorCategory, a: usize) -> PresheafModule {
        let right = tensor.right();
        let n = right.object_count();
        let dims: Vec<usize> = (0..n).map(|b| f.dims[tensor.pair_object(a, b)]).collect();
        let id_a = tensor.left().identity_coords(a).to_vec();
        let mut action = BTreeMap::new();
        for b2 in 0..n {
            for b1 in 0..n {
                let hd = right.hom_dim(b2, b1);
                if hd == 0 || dims[b1] == 0 || dims[b2] == 0 {
                    continue;
                }
                let mats: Vec<Matrix> = (0..hd)
                    .map(|i| {
                        let v = basis_vec(right.field(), hd, i);
                        let pair = kron_vec(right.field(), &id_a, &v);
                        f.action_matrix(tensor.pair_object(a, b2), tensor.pair_object(a, b1), &pair)
                    })
                    .collect();
                action.insert((b2, b1), mats);
            }
        }
        PresheafModule { category: right.clone(), dims, action }
    }

    /// Whether a tuple of fiber subspaces is stable under the action, i.e.
    /// defines a submodule.
    pub fn is_stable_tuple(&self, spaces: &[Subspace]) -> bool {
        let cat = &self.category;
        let n = cat.object_count();
        for b in 0..n {
            for a in 0..n {
                let hd = cat.hom_dim(b, a);
                if hd == 0 || self.dims[a] == 0 {
                    continue;
                }
                for i in 0..hd {
                    let m = self.action_basis_matrix(b, a, i);
                    for r in 0..spaces[a].dim() {
                        let img = m.mul_vec(spaces[a].basis().row(r)).expect("shape");
                        if !spaces[b].contains(&img) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The submodule carried by a stable tuple, with fibers in the tuple's
    /// canonical bases.
    pub fn submodule(&self, spaces: &[Subspace]) -> Result<PresheafModule> {
        if !self.is_stable_tuple(spaces) {
            return Err(Error::Precondition { what: "tuple is not action-stable".into() });
        }
        let cat = &self.category;
        let n = cat.object_count();
        let dims: Vec<usize> = spaces.iter().map(Subspace::dim).collect();
        let mut action = BTreeMap::new();
        for b in 0..n {
            for a in 0..n {
                let hd = cat.hom_dim(b, a);
                if hd == 0 || dims[a] == 0 || dims[b] == 0 {
                    continue;
                }
                let mats: Vec<Matrix> = (0..hd)
                    .map(|i| {
                        let m = self.action_basis_matrix(b, a, i);
                        let mut out = Matrix::zeros(cat.field(), dims[b], dims[a]);
                        for col in 0..dims[a] {
                            let img = m.mul_vec(spaces[a].basis().row(col)).expect("shape");
                            let coords = spaces[b].coords_of(&img).expect("stability checked");
                            for (row, x) in coords.into_iter().enumerate() {
                                *out.at_mut(row, col) = x;
                            }
                        }
                        out
                    })
                    .collect();
                action.insert((b, a), mats);
            }
        }
        Ok(PresheafModule { category: cat.clone(), dims, action })
    }

    /// The quotient module by a stable tuple, in quotient coordinates.
    pub fn quotient(&self, spaces: &[Subspace]) -> Result<PresheafModule> {
        if !self.is_stable_tuple(spaces) {
            return Err(Error::Precondition { what: "tuple is not action-stable".into() });
        }
        let cat = &self.category;
        let n = cat.object_count();
        let dims: Vec<usize> = (0..n).map(|a| self.dims[a] - spaces[a].dim()).collect();
        let mut action = BTreeMap::new();
        for b in 0..n {
            for a in 0..n {
                let hd = cat.hom_dim(b, a);
                if hd == 0 || dims[a] == 0 || dims[b] == 0 {
                    continue;
                }
                // The induced map on quotients: lift along the section,
                // act, project. Well defined because the tuple is stable.
                let project = spaces[b].quotient_map();
                let lift = spaces[a].quotient_section();
                let mats: Vec<Matrix> = (0..hd)
                    .map(|i| {
                        let m = self.action_basis_matrix(b, a, i);
                        project.mul(&m).and_then(|pm| pm.mul(&lift)).expect("shape")
                    })
                    .collect();
                action.insert((b, a), mats);
            }
        }
        Ok(PresheafModule { category: cat.clone(), dims, action })
    }

    /// All action-stable subspace tuples (the full submodule lattice),
    /// enumerated deterministically. Requires a prime field and respects
    /// both the total-dimension and enumeration caps.
    pub fn enumerate_submodule_tuples(&self, caps: &Caps) -> Result<Vec<Vec<Subspace>>> {
        let field = self.category.field();
        if !field.is_prime_field() {
            return Err(Error::UnsupportedField { op: "submodule enumeration" });
        }
        if self.total_dim() > caps.max_submodule_dim {
            return Err(Error::CapExceeded {
                what: "submodule search total dimension",
                cap: caps.max_submodule_dim as u64,
                requested: self.total_dim() as u64,
            });
        }
        let per_object: Vec<Vec<Subspace>> = self
            .dims
            .iter()
            .map(|&d| Subspace::enumerate_all(field, d, caps))
            .collect::<Result<_>>()?;
        let mut total: u64 = 1;
        for list in &per_object {
            total = total.saturating_mul(list.len() as u64);
            if total > caps.max_enumeration {
                return Err(Error::CapExceeded {
                    what: "submodule tuples",
                    cap: caps.max_enumeration,
                    requested: total,
                });
            }
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; per_object.len()];
        loop {
            let tuple: Vec<Subspace> =
                idx.iter().zip(&per_object).map(|(&i, list)| list[i].clone()).collect();
            if self.is_stable_tuple(&tuple) {
                out.push(tuple);
            }
            let mut i = idx.len();
            loop {
                if i == 0 {
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

    /// Every module over `cat` with fibers of dimension at most `max_dim`,
    /// enumerated as raw action tables filtered by [`Self::validate`].
    /// Deterministic order; prime fields only.
    pub fn enumerate_all(cat: &CatRef, max_dim: usize, caps: &Caps) -> Result<Vec<PresheafModule>> {
        let field = cat.field();
        let Some(p) = field.order() else {
            return Err(Error::UnsupportedField { op: "module enumeration" });
        };
        let n = cat.object_count();
        let mut out = Vec::new();
        let mut visited: u64 = 0;
        let mut dims = vec![0usize; n];
        loop {
            // Free entries of all action tables for this dimension vector.
            let mut positions = Vec::new();
            for b in 0..n {
                for a in 0..n {
                    let hd = cat.hom_dim(b, a);
                    if hd == 0 || dims[a] == 0 || dims[b] == 0 {
                        continue;
                    }
                    for i in 0..hd {
                        for r in 0..dims[b] {
                            for c in 0..dims[a] {
                                positions.push((b, a, i, r, c));
                            }
                        }
                    }
                }
            }
            let combos = p.checked_pow(positions.len() as u32).unwrap_or(u64::MAX);
            visited = visited.saturating_add(combos);
            if visited > caps.max_enumeration {
                return Err(Error::CapExceeded {
                    what: "module action tables",
                    cap: caps.max_enumeration,
                    requested: visited,
                });
            }
            let mut assignment = vec![0u64; positions.len()];
            loop {
                let mut action: BTreeMap<(usize, usize), Vec<Matrix>> = BTreeMap::new();
                for (&(b, a, i, r, c), &v) in positions.iter().zip(&assignment) {
                    let mats = action.entry((b, a)).or_insert_with(|| {
                        vec![Matrix::zeros(field, dims[b], dims[a]); cat.hom_dim(b, a)]
                    });
                    *mats[i].at_mut(r, c) = field.element(v);
                }
                let candidate = PresheafModule::new(cat.clone(), dims.clone(), action);
                if candidate.validate().is_empty() {
                    out.push(candidate);
                }
                let mut i = positions.len();
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    assignment[i] += 1;
                    if assignment[i] < p {
                        break;
                    }
                    assignment[i] = 0;
                }
                if assignment.iter().all(|&x| x == 0) {
                    break;
                }
            }
            // Next dimension vector.
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                dims[i] += 1;
                if dims[i] <= max_dim {
                    break;
                }
                dims[i] = 0;
            }
        }
    }
}

/// The space of natural transformations between two modules, with the
/// bookkeeping to move between flat coordinates and per-object component
/// matrices.
///
/// Coordinates are laid out object by object, each component row-major.
#[derive(Debug, Clone)]
pub struct HomSpace {
    space: Subspace,
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
}

impl HomSpace {
    /// Solves the naturality system for transformations `m => n`.
    pub fn solve(m: &PresheafModule, n: &PresheafModule) -> Result<HomSpace> {
        if m.category().as_ref() != n.category().as_ref() {
            return Err(Error::Precondition {
                what: "hom space: modules live over different categories".into(),
            });
        }
        let cat = m.category();
        let field = cat.field();
        let count = cat.object_count();
        let mut offsets = Vec::with_capacity(count);
        let mut shapes = Vec::with_capacity(count);
        let mut total = 0usize;
        for x in 0..count {
            offsets.push(total);
            shapes.push((n.dim_at(x), m.dim_at(x)));
            total += n.dim_at(x) * m.dim_at(x);
        }
        // Naturality per basis morphism f in hom(b, a):
        //   tau_b . M(f) = N(f) . tau_a.
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for b in 0..count {
            for a in 0..count {
                let hd = cat.hom_dim(b, a);
                if hd == 0 {
                    continue;
                }
                for i in 0..hd {
                    let mf = m.action_basis_matrix(b, a, i);
                    let nf = n.action_basis_matrix(b, a, i);
                    for r in 0..n.dim_at(b) {
                        for c in 0..m.dim_at(a) {
                            let mut eq = vec![field.zero(); total];
                            for l in 0..m.dim_at(b) {
                                // + tau_b[r, l] * M(f)[l, c]
                                let var = offsets[b] + r * m.dim_at(b) + l;
                                eq[var] = field.add(&eq[var], mf.at(l, c));
                            }
                            for k in 0..n.dim_at(a) {
                                // - N(f)[r, k] * tau_a[k, c]
                                let var = offsets[a] + k * m.dim_at(a) + c;
                                eq[var] = field.sub(&eq[var], nf.at(r, k));
                            }
                            rows.push(eq);
                        }
                    }
                }
            }
        }
        let constraints = Matrix::from_rows(field, total, &rows);
        let space = Subspace::kernel(&constraints);
        Ok(HomSpace { space, offsets, shapes })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn total_coords(&self) -> usize {
        self.space.ambient_dim()
    }

    /// Splits a flat coordinate vector into per-object component matrices.
    pub fn unpack(&self, field: crate::linalg::Field, v: &[Scalar]) -> Vec<Matrix> {
        self.offsets
            .iter()
            .zip(&self.shapes)
            .map(|(&off, &(r, c))| Matrix::new(field, r, c, v[off..off + r * c].to_vec()))
            .collect()
    }

    /// Flattens component matrices back into coordinates.
    pub fn pack(&self, components: &[Matrix]) -> Vec<Scalar> {
        let mut out = Vec::new();
        for comp in components {
            out.extend(comp.entries().iter().cloned());
        }
        out
    }
}

/// A natural transformation between presheaf modules, one matrix per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransform {
    pub source: PresheafModule,
    pub target: PresheafModule,
    pub components: Vec<Matrix>,
}

impl NatTransform {
    /// Checks naturality against every basis morphism.
    pub fn validate(&self) -> bool {
        let cat = self.source.category();
        let n = cat.object_count();
        for b in 0..n {
            for a in 0..n {
                let hd = cat.hom_dim(b, a);
                for i in 0..hd {
                    let mf = self.source.action_basis_matrix(b, a, i);
                    let nf = self.target.action_basis_matrix(b, a, i);
                    let lhs = self.components[b].mul(&mf).expect("shape");
                    let rhs = nf.mul(&self.components[a]).expect("shape");
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// An isomorphism is a square full-rank component at every object.
    pub fn is_isomorphism(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.rows() == c.cols() && c.rank() == c.rows())
    }

    pub fn identity(m: &PresheafModule) -> NatTransform {
        let field = m.category().field();
        let components = m.dims().iter().map(|&d| Matrix::identity(field, d)).collect();
        NatTransform { source: m.clone(), target: m.clone(), components }
    }

    /// Componentwise composition `second . first`.
    pub fn compose(second: &NatTransform, first: &NatTransform) -> NatTransform {
        let components = second
            .components
            .iter()
            .zip(&first.components)
            .map(|(s, f)| s.mul(f).expect("component shapes"))
            .collect();
        NatTransform {
            source: first.source.clone(),
            target: second.target.clone(),
            components,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::Field;

    fn f2() -> Field {
        Field::default()
    }

    #[test]
    fn representable_validates_on_arrow_category() {
        let c = fixtures::arrow_category(f2());
        for a in 0..2 {
            let m = PresheafModule::representable(&c, a);
            assert!(m.validate().is_empty());
        }
        // Dims of hom(-, 2): one at each object.
        let m = PresheafModule::representable(&c, 1);
        assert_eq!(m.dims(), &[1, 1]);
    }

    #[test]
    fn restriction_along_identity_is_identity() {
        let c = fixtures::arrow_category(f2());
        let m = PresheafModule::representable(&c, 1);
        let id = LinearFunctor::identity(&c);
        assert_eq!(PresheafModule::restrict(&id, &m).unwrap(), m);
    }

    #[test]
    fn restriction_of_zero_is_zero() {
        let c = fixtures::arrow_category(f2());
        let (sub, incl) = crate::cat::FiniteLinearCategory::full_subcategory(&c, &[0]);
        let z = PresheafModule::zero(&c);
        let r = PresheafModule::restrict(&incl, &z).unwrap();
        assert_eq!(r, PresheafModule::zero(&sub));
    }

    #[test]
    fn external_tensor_of_representables_is_pair_representable() {
        // a(-,A) ⊗ b(-,B) = (a⊗b)(-, (A,B)) with identical bases.
        let c = fixtures::arrow_category(f2());
        let t = TensorCategory::new(&c, &c).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let m = PresheafModule::representable(&c, a);
                let n = PresheafModule::representable(&c, b);
                let ext = PresheafModule::external_tensor(&m, &n, &t).unwrap();
                let rep = PresheafModule::representable(t.product(), t.pair_object(a, b));
                assert_eq!(ext, rep);
            }
        }
    }

    #[test]
    fn external_tensor_with_zero_is_zero() {
        let c = fixtures::arrow_category(f2());
        let t = TensorCategory::new(&c, &c).unwrap();
        let m = PresheafModule::representable(&c, 1);
        let z = PresheafModule::zero(&c);
        assert!(PresheafModule::external_tensor(&m, &z, &t).unwrap().is_zero_module());
    }

    #[test]
    fn slices_of_external_tensor_scale_by_fiber_dims() {
        let c = fixtures::arrow_category(f2());
        let t = TensorCategory::new(&c, &c).unwrap();
        let m = PresheafModule::representable(&c, 1);
        let n = PresheafModule::representable(&c, 0);
        let ext = PresheafModule::external_tensor(&m, &n, &t).unwrap();
        for b in 0..2 {
            let sl = PresheafModule::slice_left(&ext, &t, b);
            assert!(sl.validate().is_empty());
            for a in 0..2 {
                assert_eq!(sl.dim_at(a), m.dim_at(a) * n.dim_at(b));
            }
        }
    }

    #[test]
    fn yoneda_dimension_check() {
        // hom(a(-,A), F) has the dimension of F(A), for every fixture
        // module; computed by solving the naturality system.
        let c = fixtures::arrow_category(f2());
        let modules = [
            PresheafModule::representable(&c, 0),
            PresheafModule::representable(&c, 1),
            fixtures::simple_module(&c, 0),
            fixtures::simple_module(&c, 1),
        ];
        for a in 0..2 {
            let rep = PresheafModule::representable(&c, a);
            for m in &modules {
                let hom = HomSpace::solve(&rep, m).unwrap();
                assert_eq!(hom.dim(), m.dim_at(a), "object {a}");
            }
        }
    }

    #[test]
    fn hom_from_zero_is_zero_and_identity_exists() {
        let c = fixtures::arrow_category(f2());
        let m = PresheafModule::representable(&c, 1);
        let z = PresheafModule::zero(&c);
        assert_eq!(HomSpace::solve(&z, &m).unwrap().dim(), 0);
        let endo = HomSpace::solve(&m, &m).unwrap();
        let id = NatTransform::identity(&m);
        let coords = endo.pack(&id.components);
        assert!(endo.space().contains(&coords));
    }

    #[test]
    fn submodule_and_quotient_of_representable() {
        // The representable at the arrow tip has the simple-at-tip quotient
        // by the arrow-generated submodule.
        let c = fixtures::arrow_category(f2());
        let m = PresheafModule::representable(&c, 1);
        let spaces = vec![Subspace::full(f2(), 1), Subspace::zero(f2(), 1)];
        assert!(m.is_stable_tuple(&spaces));
        let sub = m.submodule(&spaces).unwrap();
        assert_eq!(sub.dims(), &[1, 0]);
        let quot = m.quotient(&spaces).unwrap();
        assert_eq!(quot.dims(), &[0, 1]);
        assert!(sub.validate().is_empty());
        assert!(quot.validate().is_empty());
    }

    #[test]
    fn submodule_lattice_of_representable_at_tip() {
        let c = fixtures::arrow_category(f2());
        let m = PresheafModule::representable(&c, 1);
        let tuples = m.enumerate_submodule_tuples(&Caps::default()).unwrap();
        // 0, the arrow component, the full module; the tuple (0, full) is
        // unstable because the identity at the tip maps into the arrow
        // component under precomposition.
        assert_eq!(tuples.len(), 3);
    }

    #[test]
    fn module_enumeration_on_point_category() {
        let pt = crate::cat::FiniteLinearCategory::one_object(f2(), "pt");
        let all = PresheafModule::enumerate_all(&pt, 1, &Caps::default()).unwrap();
        // Dimension 0 and dimension 1 (identity action forced).
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn natural_transform_validation() {
        let c = fixtures::arrow_category(f2());
        let m = PresheafModule::representable(&c, 1);
        let id = NatTransform::identity(&m);
        assert!(id.validate());
        assert!(id.is_isomorphism());
        // The quotient map onto the simple module at the tip is natural.
        let quotient = NatTransform {
            source: m.clone(),
            target: fixtures::simple_module(&c, 1),
            components: vec![Matrix::zeros(f2(), 0, 1), Matrix::identity(f2(), 1)],
        };
        assert!(quotient.validate());
        assert!(!quotient.is_isomorphism());
        // The reverse direction is not: the identity at the tip would have
        // to hit the arrow under precomposition, but the simple fiber at
        // the source object is zero.
        let broken = NatTransform {
            source: fixtures::simple_module(&c, 1),
            target: m.clone(),
            components: vec![Matrix::zeros(f2(), 1, 0), Matrix::identity(f2(), 1)],
        };
        assert!(!broken.validate());
    }
}
