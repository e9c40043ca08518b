use std::collections::BTreeMap;
use std::sync::Arc;

use crate::linalg::{Caps, Field, Matrix, Scalar, Subspace};
use crate::{Error, Result};

/// Shared handle to an immutable category.
pub type CatRef = Arc<FiniteLinearCategory>;

/// A small `k`-linear category with explicit ordered hom bases and
/// composition structure constants.
///
/// `hom(B, A)` is the space of morphisms `B -> A`; composition takes
/// `g in hom(B, C)` and `f in hom(A, B)` to `g.f in hom(A, C)`. Structure
/// tables are stored only for triples where all three spaces are nonzero.
///
/// Constructors trust their input; [`FiniteLinearCategory::validate`] checks
/// the axioms explicitly and reports every violated basis triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLinearCategory {
    field: Field,
    objects: Vec<String>,
    hom_dims: Vec<Vec<usize>>,
    hom_labels: BTreeMap<(usize, usize), Vec<String>>,
    identities: Vec<Vec<Scalar>>,
    // (A, B, C) -> flattened table: entry(g, f, k) with g in hom(B,C),
    // f in hom(A,B), k indexing hom(A,C).
    composition: BTreeMap<(usize, usize, usize), Vec<Scalar>>,
}

/// Mutable assembly buffer for [`FiniteLinearCategory`].
#[derive(Debug, Clone)]
pub struct CategoryBuilder {
    field: Field,
    objects: Vec<String>,
    homs: BTreeMap<(usize, usize), Vec<String>>,
    identities: BTreeMap<usize, Vec<Scalar>>,
    composition: BTreeMap<(usize, usize, usize), Vec<Scalar>>,
}

impl CategoryBuilder {
    pub fn new(field: Field) -> CategoryBuilder {
        CategoryBuilder {
            field,
            objects: Vec::new(),
            homs: BTreeMap::new(),
            identities: BTreeMap::new(),
            composition: BTreeMap::new(),
        }
    }

    /// Adds an object and returns its index.
    pub fn object(&mut self, name: &str) -> usize {
        self.objects.push(name.to_string());
        self.objects.len() - 1
    }

    /// Declares `hom(src, tgt)` with the given basis labels.
    pub fn hom(&mut self, src: usize, tgt: usize, labels: &[&str]) {
        self.homs.insert((src, tgt), labels.iter().map(|s| s.to_string()).collect());
    }

    /// Sets the identity coordinates of an object inside `hom(a, a)`.
    pub fn identity(&mut self, a: usize, coords: Vec<Scalar>) {
        self.identities.insert(a, coords);
    }

    /// Records one structure constant row: the composite of basis morphism
    /// `g` (index in `hom(b, c)`) after `f` (index in `hom(a, b)`), as
    /// coordinates in `hom(a, c)`.
    pub fn compose_basis(&mut self, a: usize, b: usize, c: usize, g: usize, f: usize, coords: Vec<Scalar>) {
        let g_dim = self.homs.get(&(b, c)).map_or(0, Vec::len);
        let f_dim = self.homs.get(&(a, b)).map_or(0, Vec::len);
        let out_dim = self.homs.get(&(a, c)).map_or(0, Vec::len);
        assert!(g < g_dim && f < f_dim, "basis index out of range");
        assert_eq!(coords.len(), out_dim, "composite coordinate length");
        let table = self
            .composition
            .entry((a, b, c))
            .or_insert_with(|| vec![self.field.zero(); g_dim * f_dim * out_dim]);
        let base = (g * f_dim + f) * out_dim;
        table[base..base + out_dim].clone_from_slice(&coords);
    }

    pub fn build(self) -> CatRef {
        let n = self.objects.len();
        let mut hom_dims = vec![vec![0; n]; n];
        for (&(s, t), labels) in &self.homs {
            hom_dims[s][t] = labels.len();
        }
        let field = self.field;
        let identities = (0..n)
            .map(|a| {
                self.identities
                    .get(&a)
                    .cloned()
                    .unwrap_or_else(|| vec![field.zero(); hom_dims[a][a]])
            })
            .collect();
        Arc::new(FiniteLinearCategory {
            field,
            objects: self.objects,
            hom_dims,
            hom_labels: self.homs,
            identities,
            composition: self.composition,
        })
    }
}

/// One failed axiom instance found by [`FiniteLinearCategory::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryViolation {
    EmptyCategory,
    MissingIdentity { object: String },
    UnitFails { object: String, other: String, basis: usize, side: &'static str },
    AssociativityFails { objects: (String, String, String, String), basis: (usize, usize, usize) },
}

/// Outcome of category validation; valid when no violations were found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryReport {
    pub violations: Vec<CategoryViolation>,
}

impl CategoryReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteLinearCategory {
    /// The one-object category with endomorphisms `k` and composition given
    /// by field multiplication.
    pub fn one_object(field: Field, name: &str) -> CatRef {
        let mut b = CategoryBuilder::new(field);
        let o = b.object(name);
        b.hom(o, o, &["id"]);
        b.identity(o, vec![field.one()]);
        b.compose_basis(o, o, o, 0, 0, vec![field.one()]);
        b.build()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, i: usize) -> &str {
        &self.objects[i]
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject { name: name.to_string() })
    }

    /// Dimension of `hom(src, tgt)`.
    pub fn hom_dim(&self, src: usize, tgt: usize) -> usize {
        self.hom_dims[src][tgt]
    }

    pub fn hom_label(&self, src: usize, tgt: usize, i: usize) -> String {
        self.hom_labels
            .get(&(src, tgt))
            .and_then(|l| l.get(i).cloned())
            .unwrap_or_else(|| format!("e{i}"))
    }

    pub fn hom_labels(&self, src: usize, tgt: usize) -> Vec<String> {
        (0..self.hom_dim(src, tgt)).map(|i| self.hom_label(src, tgt, i)).collect()
    }

    pub fn identity_coords(&self, a: usize) -> &[Scalar] {
        &self.identities[a]
    }

    /// Bilinear composition of morphism coordinate vectors:
    /// `g in hom(b, c)` after `f in hom(a, b)`, landing in `hom(a, c)`.
    pub fn compose(&self, g: &[Scalar], f: &[Scalar], a: usize, b: usize, c: usize) -> Vec<Scalar> {
        let out_dim = self.hom_dim(a, c);
        let f_dim = self.hom_dim(a, b);
        let mut out = vec![self.field.zero(); out_dim];
        let Some(table) = self.composition.get(&(a, b, c)) else {
            return out;
        };
        for (gi, gc) in g.iter().enumerate() {
            if self.field.is_zero(gc) {
                continue;
            }
            for (fj, fc) in f.iter().enumerate() {
                if self.field.is_zero(fc) {
                    continue;
                }
                let coeff = self.field.mul(gc, fc);
                let base = (gi * f_dim + fj) * out_dim;
                for k in 0..out_dim {
                    let t = self.field.mul(&coeff, &table[base + k]);
                    out[k] = self.field.add(&out[k], &t);
                }
            }
        }
        out
    }

    fn basis_vector(&self, dim: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); dim];
        v[i] = self.field.one();
        v
    }

    /// Matrix of "precompose with `g`": `hom(b, a) -> hom(b_pre, a)` for a
    /// morphism vector `g in hom(b_pre, b)`.
    pub fn precompose_matrix(&self, g: &[Scalar], b_pre: usize, b: usize, a: usize) -> Matrix {
        let rows = self.hom_dim(b_pre, a);
        let cols = self.hom_dim(b, a);
        let mut m = Matrix::zeros(self.field, rows, cols);
        for j in 0..cols {
            let e = self.basis_vector(cols, j);
            let composite = self.compose(&e, g, b_pre, b, a);
            for (i, x) in composite.into_iter().enumerate() {
                *m.at_mut(i, j) = x;
            }
        }
        m
    }

    /// Matrix of "postcompose with `f`": `hom(c, b) -> hom(c, a)` for a
    /// morphism vector `f in hom(b, a)`.
    pub fn postcompose_matrix(&self, f: &[Scalar], c: usize, b: usize, a: usize) -> Matrix {
        let rows = self.hom_dim(c, a);
        let cols = self.hom_dim(c, b);
        let mut m = Matrix::zeros(self.field, rows, cols);
        for j in 0..cols {
            let e = self.basis_vector(cols, j);
            let composite = self.compose(f, &e, c, b, a);
            for (i, x) in composite.into_iter().enumerate() {
                *m.at_mut(i, j) = x;
            }
        }
        m
    }

    /// All coordinate vectors of `hom(src, tgt)` over a prime field.
    pub fn enumerate_hom_vectors(&self, src: usize, tgt: usize, caps: &Caps) -> Result<Vec<Vec<Scalar>>> {
        Subspace::full(self.field, self.hom_dim(src, tgt)).enumerate_vectors(caps)
    }

    /// Checks identity and associativity axioms on all basis triples.
    pub fn validate(&self) -> CategoryReport {
        let mut violations = Vec::new();
        let n = self.objects.len();
        if n == 0 {
            violations.push(CategoryViolation::EmptyCategory);
        }
        for a in 0..n {
            if self.hom_dim(a, a) == 0 || self.identities[a].iter().all(|c| self.field.is_zero(c)) {
                violations.push(CategoryViolation::MissingIdentity {
                    object: self.objects[a].clone(),
                });
            }
        }
        // Unit axiom: id_b . f = f and f . id_a = f for f in hom(a, b).
        for a in 0..n {
            for b in 0..n {
                let d = self.hom_dim(a, b);
                for i in 0..d {
                    let f = self.basis_vector(d, i);
                    let left = self.compose(&self.identities[b], &f, a, b, b);
                    if left != f {
                        violations.push(CategoryViolation::UnitFails {
                            object: self.objects[b].clone(),
                            other: self.objects[a].clone(),
                            basis: i,
                            side: "left",
                        });
                    }
                    let right = self.compose(&f, &self.identities[a], a, a, b);
                    if right != f {
                        violations.push(CategoryViolation::UnitFails {
                            object: self.objects[a].clone(),
                            other: self.objects[b].clone(),
                            basis: i,
                            side: "right",
                        });
                    }
                }
            }
        }
        // Associativity (h . g) . f = h . (g . f) on basis triples.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let df = self.hom_dim(a, b);
                        let dg = self.hom_dim(b, c);
                        let dh = self.hom_dim(c, d);
                        if df == 0 || dg == 0 || dh == 0 {
                            continue;
                        }
                        for fi in 0..df {
                            let f = self.basis_vector(df, fi);
                            for gi in 0..dg {
                                let g = self.basis_vector(dg, gi);
                                for hi in 0..dh {
                                    let h = self.basis_vector(dh, hi);
                                    let hg = self.compose(&h, &g, b, c, d);
                                    let left = self.compose(&hg, &f, a, b, d);
                                    let gf = self.compose(&g, &f, a, b, c);
                                    let right = self.compose(&h, &gf, a, c, d);
                                    if left != right {
                                        violations.push(CategoryViolation::AssociativityFails {
                                            objects: (
                                                self.objects[a].clone(),
                                                self.objects[b].clone(),
                                                self.objects[c].clone(),
                                                self.objects[d].clone(),
                                            ),
                                            basis: (hi, gi, fi),
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        CategoryReport { violations }
    }

    /// The full subcategory on the listed objects, with its inclusion
    /// functor into `cat`.
    pub fn full_subcategory(cat: &CatRef, keep: &[usize]) -> (CatRef, super::LinearFunctor) {
        let field = cat.field;
        let mut objects = Vec::with_capacity(keep.len());
        let mut hom_labels = BTreeMap::new();
        let mut hom_dims = vec![vec![0; keep.len()]; keep.len()];
        for (i, &o) in keep.iter().enumerate() {
            objects.push(cat.objects[o].clone());
            for (j, &t) in keep.iter().enumerate() {
                hom_dims[i][j] = cat.hom_dim(o, t);
                if hom_dims[i][j] > 0 {
                    hom_labels.insert((i, j), cat.hom_labels(o, t));
                }
            }
        }
        let identities = keep.iter().map(|&o| cat.identities[o].clone()).collect();
        let mut composition = BTreeMap::new();
        for (ai, &a) in keep.iter().enumerate() {
            for (bi, &b) in keep.iter().enumerate() {
                for (ci, &c) in keep.iter().enumerate() {
                    if let Some(table) = cat.composition.get(&(a, b, c)) {
                        composition.insert((ai, bi, ci), table.clone());
                    }
                }
            }
        }
        let sub = Arc::new(FiniteLinearCategory {
            field,
            objects,
            hom_dims,
            hom_labels,
            identities,
            composition,
        });
        let mut hom_maps = BTreeMap::new();
        for (i, &_o) in keep.iter().enumerate() {
            for (j, &_t) in keep.iter().enumerate() {
                let d = sub.hom_dim(i, j);
                if d > 0 {
                    hom_maps.insert((i, j), Matrix::identity(field, d));
                }
            }
        }
        let inclusion =
            super::LinearFunctor::new(Arc::clone(&sub), Arc::clone(cat), keep.to_vec(), hom_maps);
        (sub, inclusion)
    }
}

/// A tensor product of categories together with its factors and the index
/// bookkeeping between pair objects/bases and factor indices.
#[derive(Debug, Clone)]
pub struct TensorCategory {
    left: CatRef,
    right: CatRef,
    product: CatRef,
}

impl TensorCategory {
    /// The standard tensor product of linear categories: objects are pairs,
    /// hom spaces tensor, composition is componentwise (Kronecker structure
    /// constants).
    pub fn new(left: &CatRef, right: &CatRef) -> Result<TensorCategory> {
        if left.field != right.field {
            return Err(Error::FieldMismatch { context: "tensor category" });
        }
        let field = left.field;
        let nl = left.object_count();
        let nr = right.object_count();
        let mut objects = Vec::with_capacity(nl * nr);
        for a in 0..nl {
            for b in 0..nr {
                objects.push(format!("({},{})", left.objects[a], right.objects[b]));
            }
        }
        let n = nl * nr;
        let mut hom_dims = vec![vec![0; n]; n];
        let mut hom_labels = BTreeMap::new();
        for s in 0..n {
            for t in 0..n {
                let (sa, sb) = (s / nr, s % nr);
                let (ta, tb) = (t / nr, t % nr);
                let d = left.hom_dim(sa, ta) * right.hom_dim(sb, tb);
                hom_dims[s][t] = d;
                if d > 0 {
                    let mut labels = Vec::with_capacity(d);
                    for i in 0..left.hom_dim(sa, ta) {
                        for j in 0..right.hom_dim(sb, tb) {
                            labels.push(format!(
                                "{}⊗{}",
                                left.hom_label(sa, ta, i),
                                right.hom_label(sb, tb, j)
                            ));
                        }
                    }
                    hom_labels.insert((s, t), labels);
                }
            }
        }
        let mut identities = Vec::with_capacity(n);
        for o in 0..n {
            let (a, b) = (o / nr, o % nr);
            identities.push(kron_vec(
                field,
                left.identity_coords(a),
                right.identity_coords(b),
            ));
        }
        let mut composition = BTreeMap::new();
        for s in 0..n {
            for m in 0..n {
                for t in 0..n {
                    let (sa, sb) = (s / nr, s % nr);
                    let (ma, mb) = (m / nr, m % nr);
                    let (ta, tb) = (t / nr, t % nr);
                    let g_dim = hom_dims[m][t];
                    let f_dim = hom_dims[s][m];
                    let out_dim = hom_dims[s][t];
                    if g_dim == 0 || f_dim == 0 || out_dim == 0 {
                        continue;
                    }
                    let mut table = vec![field.zero(); g_dim * f_dim * out_dim];
                    let (gl, gr) = (left.hom_dim(ma, ta), right.hom_dim(mb, tb));
                    let (fl, fr) = (left.hom_dim(sa, ma), right.hom_dim(sb, mb));
                    for g1 in 0..gl {
                        let g1v = basis_vec(field, gl, g1);
                        for g2 in 0..gr {
                            let g2v = basis_vec(field, gr, g2);
                            for f1 in 0..fl {
                                let f1v = basis_vec(field, fl, f1);
                                let c1 = left.compose(&g1v, &f1v, sa, ma, ta);
                                for f2 in 0..fr {
                                    let f2v = basis_vec(field, fr, f2);
                                    let c2 = right.compose(&g2v, &f2v, sb, mb, tb);
                                    let out = kron_vec(field, &c1, &c2);
                                    let g = g1 * gr + g2;
                                    let f = f1 * fr + f2;
                                    let base = (g * f_dim + f) * out_dim;
                                    table[base..base + out_dim].clone_from_slice(&out);
                                }
                            }
                        }
                    }
                    composition.insert((s, m, t), table);
                }
            }
        }
        let product = Arc::new(FiniteLinearCategory {
            field,
            objects,
            hom_dims,
            hom_labels,
            identities,
            composition,
        });
        Ok(TensorCategory { left: Arc::clone(left), right: Arc::clone(right), product })
    }

    pub fn left(&self) -> &CatRef {
        &self.left
    }

    pub fn right(&self) -> &CatRef {
        &self.right
    }

    pub fn product(&self) -> &CatRef {
        &self.product
    }

    /// Index of the pair object `(a, b)` in the product.
    pub fn pair_object(&self, a: usize, b: usize) -> usize {
        a * self.right.object_count() + b
    }

    /// Factor indices of a product object.
    pub fn split_object(&self, o: usize) -> (usize, usize) {
        let nr = self.right.object_count();
        (o / nr, o % nr)
    }

    /// Kronecker coordinates of `f ⊗ g` inside the pair hom space.
    pub fn pair_morphism(
        &self,
        f: &[Scalar],
        g: &[Scalar],
    ) -> Vec<Scalar> {
        kron_vec(self.product.field, f, g)
    }
}

pub(crate) fn basis_vec(field: Field, dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); dim];
    v[i] = field.one();
    v
}

pub(crate) fn kron_vec(field: Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(field.mul(x, y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn one_object_category_is_valid() {
        let c = FiniteLinearCategory::one_object(Field::default(), "pt");
        assert!(c.validate().is_valid());
    }

    #[test]
    fn arrow_category_is_valid() {
        // Finite check of all triples on the two-object arrow fixture.
        let c = fixtures::arrow_category(Field::default());
        assert!(c.validate().is_valid());
    }

    #[test]
    fn broken_unit_is_reported_at_the_offending_pair() {
        let f = Field::default();
        let mut b = CategoryBuilder::new(f);
        let o1 = b.object("1");
        let o2 = b.object("2");
        b.hom(o1, o1, &["id1"]);
        b.hom(o2, o2, &["id2"]);
        b.hom(o1, o2, &["a"]);
        b.identity(o1, vec![f.one()]);
        b.identity(o2, vec![f.one()]);
        b.compose_basis(o1, o1, o1, 0, 0, vec![f.one()]);
        b.compose_basis(o2, o2, o2, 0, 0, vec![f.one()]);
        // id2 . a deliberately set to 0: the left unit axiom must fail at a.
        b.compose_basis(o1, o2, o2, 0, 0, vec![f.zero()]);
        b.compose_basis(o1, o1, o2, 0, 0, vec![f.one()]);
        let c = b.build();
        let report = c.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| matches!(
            v,
            CategoryViolation::UnitFails { object, side: "left", .. } if object == "2"
        )));
    }

    #[test]
    fn tensor_of_point_categories_is_a_point() {
        let f = Field::default();
        let pt = FiniteLinearCategory::one_object(f, "pt");
        let t = TensorCategory::new(&pt, &pt).unwrap();
        assert_eq!(t.product().object_count(), 1);
        assert_eq!(t.product().hom_dim(0, 0), 1);
        assert!(t.product().validate().is_valid());
    }

    #[test]
    fn tensor_hom_dims_multiply() {
        let c = fixtures::arrow_category(Field::default());
        let t = TensorCategory::new(&c, &c).unwrap();
        assert_eq!(t.product().object_count(), 4);
        for s in 0..4 {
            for u in 0..4 {
                let (sa, sb) = t.split_object(s);
                let (ua, ub) = t.split_object(u);
                assert_eq!(
                    t.product().hom_dim(s, u),
                    c.hom_dim(sa, ua) * c.hom_dim(sb, ub)
                );
            }
        }
        // hom((1,1),(2,2)) is one-dimensional, spanned by a⊗a.
        let p11 = t.pair_object(0, 0);
        let p22 = t.pair_object(1, 1);
        assert_eq!(t.product().hom_dim(p11, p22), 1);
        assert!(t.product().validate().is_valid());
    }

    #[test]
    fn tensor_is_associative_on_dimensions_and_tables() {
        let f = Field::default();
        let c = fixtures::arrow_category(f);
        let pt = FiniteLinearCategory::one_object(f, "pt");
        let left = TensorCategory::new(&TensorCategory::new(&c, &pt).unwrap().product(), &c)
            .unwrap();
        let right = TensorCategory::new(&c, &TensorCategory::new(&pt, &c).unwrap().product())
            .unwrap();
        let (l, r) = (left.product(), right.product());
        assert_eq!(l.object_count(), r.object_count());
        for s in 0..l.object_count() {
            for t in 0..l.object_count() {
                assert_eq!(l.hom_dim(s, t), r.hom_dim(s, t));
            }
        }
        assert_eq!(l.composition, r.composition);
    }

    #[test]
    fn full_subcategory_inclusion_validates() {
        let c = fixtures::arrow_category(Field::default());
        let (sub, incl) = FiniteLinearCategory::full_subcategory(&c, &[0]);
        assert_eq!(sub.object_count(), 1);
        assert!(sub.validate().is_valid());
        assert!(incl.validate());
    }
}
