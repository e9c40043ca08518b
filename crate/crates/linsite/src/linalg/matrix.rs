use std::fmt;

use super::{Field, Scalar};
use crate::{Error, Result};

/// A dense matrix over an exact [`Field`], entries in row-major order.
///
/// Matrices represent linear maps acting on coordinate *columns*: an
/// `r x c` matrix maps `k^c` to `k^r`. Row vectors double as elements of
/// hom spaces and module fibers throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Matrix { field, rows, cols, entries }
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        let entries = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, entries }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    /// Builds a matrix from integer entries, reduced into the field.
    pub fn from_i64(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
        assert_eq!(entries.len(), rows * cols);
        let entries = entries.iter().map(|&n| field.from_i64(n)).collect();
        Matrix { field, rows, cols, entries }
    }

    /// Stacks row vectors into a matrix. All rows must share the length
    /// `cols` (which disambiguates the zero-row case).
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<Scalar>]) -> Matrix {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            entries.extend(r.iter().cloned());
        }
        Matrix { field, rows: rows.len(), cols, entries }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { context: "matrix product" });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                got: other.rows,
            });
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other.at(k, j));
                    *out.at_mut(i, j) = f.add(out.at(i, j), &t);
                }
            }
        }
        Ok(out)
    }

    /// Applies the matrix to a coordinate column vector.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                got: v.len(),
            });
        }
        let f = self.field;
        let mut out = vec![f.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if !f.is_zero(a) {
                    out[i] = f.add(&out[i], &f.mul(a, &v[j]));
                }
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { context: "vstack" });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "vstack",
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { context: "hstack" });
        }
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "hstack",
                expected: self.rows,
                got: other.rows,
            });
        }
        let mut entries = Vec::with_capacity((self.cols + other.cols) * self.rows);
        for i in 0..self.rows {
            entries.extend(self.row(i).iter().cloned());
            entries.extend(other.row(i).iter().cloned());
        }
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols + other.cols, entries })
    }

    /// Kronecker product; acts as the tensor product of linear maps in the
    /// lexicographic pair basis.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { context: "kronecker product" });
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        *out.at_mut(i * other.rows + k, j * other.cols + l) =
                            f.mul(a, other.at(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form: pivots are 1 with zeros above and below,
    /// pivot columns strictly increasing, no zero rows. The row space is
    /// preserved; the output is the canonical representative of it.
    pub fn rref(&self) -> Matrix {
        let (m, _) = self.rref_with_pivots();
        m
    }

    /// As [`Matrix::rref`], also reporting the pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut rows: Vec<Vec<Scalar>> = self.row_vecs();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            let Some(pivot_row) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][col])) else {
                continue;
            };
            rows.swap(r, pivot_row);
            let inv = f.inv(&rows[r][col]);
            for x in rows[r].iter_mut() {
                *x = f.mul(x, &inv);
            }
            for i in 0..rows.len() {
                if i != r && !f.is_zero(&rows[i][col]) {
                    let factor = rows[i][col].clone();
                    for j in 0..self.cols {
                        let t = f.mul(&factor, &rows[r][j]);
                        rows[i][j] = f.sub(&rows[i][j], &t);
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        (Matrix::from_rows(f, self.cols, &rows), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().rows()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Scalar::render).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
