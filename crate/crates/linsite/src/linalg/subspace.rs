use super::{Caps, Field, Matrix, Scalar};
use crate::{Error, Result};

/// A subspace of `k^n`, stored as its canonical reduced-row-echelon basis.
///
/// Canonicalization is the load-bearing invariant: two `Subspace` values are
/// equal as sets if and only if they are equal as values, so sieve equality
/// and covering-set comparisons downstream reduce to `==`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The zero subspace of `k^n`.
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    /// The full space `k^n`.
    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the rows of `m`, canonicalized.
    pub fn from_matrix(m: &Matrix) -> Subspace {
        let (basis, pivots) = m.rref_with_pivots();
        Subspace { ambient: m.cols(), basis, pivots }
    }

    /// Span of a list of row vectors in `k^ambient`.
    pub fn from_rows(field: Field, ambient: usize, rows: &[Vec<Scalar>]) -> Subspace {
        Subspace::from_matrix(&Matrix::from_rows(field, ambient, rows))
    }

    /// Column space of `m`, i.e. the image of the linear map it represents.
    pub fn image(m: &Matrix) -> Subspace {
        Subspace::from_matrix(&m.transpose())
    }

    /// Null space of `m`.
    pub fn kernel(m: &Matrix) -> Subspace {
        let f = m.field();
        let n = m.cols();
        let (r, pivots) = m.rref_with_pivots();
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &j in &free {
            let mut v = vec![f.zero(); n];
            v[j] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.at(i, j));
            }
            rows.push(v);
        }
        Subspace::from_rows(f, n, &rows)
    }

    /// `{ v | m . v  in  s }` for `m : k^c -> k^r` and `s` inside `k^r`.
    pub fn preimage(m: &Matrix, s: &Subspace) -> Result<Subspace> {
        if s.ambient != m.rows() {
            return Err(Error::DimensionMismatch {
                context: "preimage",
                expected: m.rows(),
                got: s.ambient,
            });
        }
        let q = s.quotient_map();
        Ok(Subspace::kernel(&q.mul(m)?))
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// The canonical basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Residual of `v` after reduction by the canonical basis. Zero exactly
    /// when `v` lies in the subspace.
    fn residual(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        let mut r = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if f.is_zero(&r[p]) {
                continue;
            }
            let c = r[p].clone();
            for j in 0..self.ambient {
                let t = f.mul(&c, self.basis.at(i, j));
                r[j] = f.sub(&r[j], &t);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector has wrong ambient dimension");
        let f = self.field();
        self.residual(v).iter().all(|x| f.is_zero(x))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the space.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient
            && (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other, "subspace sum")?;
        Ok(Subspace::from_matrix(&self.basis.vstack(&other.basis)?))
    }

    /// Intersection via the kernel of the stacked-basis matrix: a kernel
    /// vector `(x, y)` of `[U^T W^T]` encodes one element `x.U = -y.W` of
    /// the intersection.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other, "subspace intersection")?;
        let stacked = self.basis.transpose().hstack(&other.basis.transpose())?;
        let ker = Subspace::kernel(&stacked);
        let d1 = self.dim();
        let mut rows = Vec::with_capacity(ker.dim());
        for k in 0..ker.dim() {
            let coeffs = &ker.basis.row(k)[..d1];
            let f = self.field();
            let mut v = vec![f.zero(); self.ambient];
            for (i, c) in coeffs.iter().enumerate() {
                for j in 0..self.ambient {
                    let t = f.mul(c, self.basis.at(i, j));
                    v[j] = f.add(&v[j], &t);
                }
            }
            rows.push(v);
        }
        Ok(Subspace::from_rows(self.field(), self.ambient, &rows))
    }

    /// Tensor product inside `k^(m*n)`: spanned by the Kronecker products of
    /// the two canonical bases, which is again a canonical basis.
    pub fn tensor(&self, other: &Subspace) -> Result<Subspace> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch { context: "subspace tensor" });
        }
        let basis = self.basis.kron(&other.basis)?;
        let out = Subspace::from_matrix(&basis);
        debug_assert_eq!(out.dim(), self.dim() * other.dim());
        Ok(out)
    }

    /// A matrix `Q : k^n -> k^(n-d)` with kernel exactly this subspace; the
    /// coordinates are the non-pivot columns of the residual.
    pub fn quotient_map(&self) -> Matrix {
        let f = self.field();
        let free: Vec<usize> = (0..self.ambient).filter(|j| !self.pivots.contains(j)).collect();
        let mut q = Matrix::zeros(f, free.len(), self.ambient);
        for (r, &c) in free.iter().enumerate() {
            *q.at_mut(r, c) = f.one();
            for (i, &p) in self.pivots.iter().enumerate() {
                *q.at_mut(r, p) = f.neg(self.basis.at(i, c));
            }
        }
        q
    }

    /// A right inverse of [`Subspace::quotient_map`]: embeds quotient
    /// coordinates back as ambient vectors supported on non-pivot columns.
    pub fn quotient_section(&self) -> Matrix {
        let f = self.field();
        let free: Vec<usize> = (0..self.ambient).filter(|j| !self.pivots.contains(j)).collect();
        let mut s = Matrix::zeros(f, self.ambient, free.len());
        for (c, &r) in free.iter().enumerate() {
            *s.at_mut(r, c) = f.one();
        }
        s
    }

    /// All vectors of the subspace, in lexicographic coefficient order over
    /// the canonical basis. Requires a prime field and respects the
    /// enumeration cap.
    pub fn enumerate_vectors(&self, caps: &Caps) -> Result<Vec<Vec<Scalar>>> {
        let f = self.field();
        let Some(p) = f.order() else {
            return Err(Error::UnsupportedField { op: "vector enumeration" });
        };
        let count = checked_pow(p, self.dim() as u32).filter(|&c| c <= caps.max_enumeration);
        let Some(count) = count else {
            return Err(Error::CapExceeded {
                what: "subspace vectors",
                cap: caps.max_enumeration,
                requested: checked_pow(p, self.dim() as u32).unwrap_or(u64::MAX),
            });
        };
        let d = self.dim();
        let mut out = Vec::with_capacity(count as usize);
        let mut coeffs = vec![0u64; d];
        loop {
            let mut v = vec![f.zero(); self.ambient];
            for (i, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let s = f.element(c);
                for j in 0..self.ambient {
                    let t = f.mul(&s, self.basis.at(i, j));
                    v[j] = f.add(&v[j], &t);
                }
            }
            out.push(v);
            // Odometer increment, last coordinate fastest.
            let mut i = d;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }

    /// All subspaces of `k^n`, by enumerating reduced-row-echelon bases:
    /// every pivot-column set once, with all field values in the free
    /// positions. Requires a prime field.
    pub fn enumerate_all(field: Field, ambient: usize, caps: &Caps) -> Result<Vec<Subspace>> {
        let Some(p) = field.order() else {
            return Err(Error::UnsupportedField { op: "subspace enumeration" });
        };
        let mut out = vec![Subspace::zero(field, ambient)];
        let mut budget = caps.max_enumeration;
        for rank in 1..=ambient {
            for pivots in combinations(ambient, rank) {
                // Free positions: to the right of each pivot, excluding
                // later pivot columns.
                let mut free_positions = Vec::new();
                for (i, &pi) in pivots.iter().enumerate() {
                    for j in pi + 1..ambient {
                        if !pivots.contains(&j) {
                            free_positions.push((i, j));
                        }
                    }
                }
                let combos = checked_pow(p, free_positions.len() as u32)
                    .filter(|&c| c <= budget)
                    .ok_or(Error::CapExceeded {
                        what: "subspaces",
                        cap: caps.max_enumeration,
                        requested: u64::MAX,
                    })?;
                budget -= combos;
                let mut assignment = vec![0u64; free_positions.len()];
                loop {
                    let mut m = Matrix::zeros(field, rank, ambient);
                    for (i, &pi) in pivots.iter().enumerate() {
                        *m.at_mut(i, pi) = field.one();
                    }
                    for (&(i, j), &v) in free_positions.iter().zip(&assignment) {
                        *m.at_mut(i, j) = field.element(v);
                    }
                    out.push(Subspace { ambient, basis: m, pivots: pivots.clone() });
                    let mut i = free_positions.len();
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
                    if assignment.iter().all(|&a| a == 0) {
                        break;
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn check_compatible(&self, other: &Subspace, context: &'static str) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch { context });
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.ambient,
                got: other.ambient,
            });
        }
        Ok(())
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn f2() -> Field {
        Field::default()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn kernel_of_sum_map_over_f2() {
        // x + y = 0 over F_2 has solution space spanned by (1,1).
        let m = Matrix::from_i64(f2(), 1, 2, &[1, 1]);
        let k = Subspace::kernel(&m);
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[f2().one(), f2().one()]));
    }

    #[test]
    fn preimage_of_zero_is_kernel() {
        let m = Matrix::from_i64(f2(), 2, 3, &[1, 0, 1, 0, 1, 1]);
        let z = Subspace::zero(f2(), 2);
        assert_eq!(Subspace::preimage(&m, &z).unwrap(), Subspace::kernel(&m));
    }

    #[test]
    fn image_of_zero_map_is_zero() {
        let m = Matrix::zeros(f2(), 3, 2);
        assert!(Subspace::image(&m).is_zero());
    }

    #[test]
    fn sum_of_axes_is_full_plane() {
        let e0 = Subspace::from_rows(f2(), 2, &[vec![f2().one(), f2().zero()]]);
        let e1 = Subspace::from_rows(f2(), 2, &[vec![f2().zero(), f2().one()]]);
        assert!(e0.sum(&e1).unwrap().is_full());
    }

    #[test]
    fn intersection_of_distinct_lines_is_zero() {
        // Brute-force oracle: intersect the enumerated vector sets.
        let a = Subspace::from_rows(f2(), 2, &[vec![f2().one(), f2().zero()]]);
        let b = Subspace::from_rows(f2(), 2, &[vec![f2().one(), f2().one()]]);
        let got = a.intersect(&b).unwrap();
        let va: BTreeSet<_> = a.enumerate_vectors(&caps()).unwrap().into_iter().collect();
        let vb: BTreeSet<_> = b.enumerate_vectors(&caps()).unwrap().into_iter().collect();
        let common: BTreeSet<_> = va.intersection(&vb).cloned().collect();
        assert_eq!(common.len(), 1);
        assert!(got.is_zero());
    }

    #[test]
    fn contains_diagonal_vector() {
        let d = Subspace::from_rows(f2(), 2, &[vec![f2().one(), f2().one()]]);
        assert!(d.contains(&[f2().one(), f2().one()]));
        assert!(!d.contains(&[f2().one(), f2().zero()]));
    }

    #[test]
    fn enumerate_zero_dim_gives_zero_vector() {
        let z = Subspace::zero(f2(), 3);
        assert_eq!(z.enumerate_vectors(&caps()).unwrap(), vec![vec![f2().zero(); 3]]);
    }

    #[test]
    fn enumerate_line_and_plane_counts() {
        let d = Subspace::from_rows(f2(), 2, &[vec![f2().one(), f2().one()]]);
        let vs = d.enumerate_vectors(&caps()).unwrap();
        assert_eq!(vs, vec![vec![f2().zero(); 2], vec![f2().one(), f2().one()]]);
        assert_eq!(Subspace::full(f2(), 2).enumerate_vectors(&caps()).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_cap_is_reported() {
        let tight = Caps { max_enumeration: 3, ..Caps::default() };
        let err = Subspace::full(f2(), 2).enumerate_vectors(&tight).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 3, requested: 4, .. }));
    }

    #[test]
    fn enumerate_all_matches_gaussian_binomials() {
        // Subspace counts of F_2^n: n=2 -> 5, n=3 -> 16, n=4 -> 67.
        for (n, expected) in [(2usize, 5usize), (3, 16), (4, 67)] {
            let all = Subspace::enumerate_all(f2(), n, &caps()).unwrap();
            assert_eq!(all.len(), expected, "ambient {n}");
            let set: BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), expected, "duplicates for ambient {n}");
        }
        let f3 = Field::prime(3).unwrap();
        assert_eq!(Subspace::enumerate_all(f3, 2, &caps()).unwrap().len(), 6);
    }

    #[test]
    fn quotient_map_kernel_is_the_subspace() {
        let s = Subspace::from_rows(
            f2(),
            3,
            &[vec![f2().one(), f2().zero(), f2().one()], vec![f2().zero(), f2().one(), f2().one()]],
        );
        let q = s.quotient_map();
        assert_eq!(Subspace::kernel(&q), s);
        let sec = s.quotient_section();
        assert_eq!(q.mul(&sec).unwrap(), Matrix::identity(f2(), 1));
    }

    #[test]
    fn lattice_ops_agree_with_bruteforce_over_f2() {
        // Exhaustive dimension-4 check of the modular law inputs: compare
        // sum and intersection against vector-set arithmetic.
        let all = Subspace::enumerate_all(f2(), 3, &caps()).unwrap();
        for a in &all {
            for b in &all {
                let va: BTreeSet<_> = a.enumerate_vectors(&caps()).unwrap().into_iter().collect();
                let vb: BTreeSet<_> = b.enumerate_vectors(&caps()).unwrap().into_iter().collect();
                let inter = a.intersect(b).unwrap();
                let vi: BTreeSet<_> =
                    inter.enumerate_vectors(&caps()).unwrap().into_iter().collect();
                let expected: BTreeSet<_> = va.intersection(&vb).cloned().collect();
                assert_eq!(vi, expected);
                let sum = a.sum(b).unwrap();
                assert_eq!(sum.dim() + inter.dim(), a.dim() + b.dim());
                for v in &va {
                    assert!(sum.contains(v));
                }
            }
        }
    }

    #[test]
    fn preimage_contains_source_subspace() {
        let m = Matrix::from_i64(f2(), 2, 3, &[1, 1, 0, 0, 1, 1]);
        let all = Subspace::enumerate_all(f2(), 3, &caps()).unwrap();
        for s in &all {
            // Push s forward then pull back; must recover at least s.
            let image_rows: Vec<Vec<Scalar>> = (0..s.dim())
                .map(|i| m.mul_vec(s.basis().row(i)).unwrap())
                .collect();
            let fs = Subspace::from_rows(f2(), 2, &image_rows);
            let back = Subspace::preimage(&m, &fs).unwrap();
            assert!(back.contains_subspace(s));
        }
    }
}
