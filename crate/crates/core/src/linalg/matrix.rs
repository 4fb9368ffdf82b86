use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{fma, Field, Scalar};

use super::subspace::{Echelon, Subspace};

/// Dense row-major matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_flat(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| x.field() != field) {
            return Err(Error::InvalidField("matrix entries from another field".into()));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Matrix::from_flat(field, n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| field.from_i64(x))
            })
            .collect();
        Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
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

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    fma(&mut acc, a, b);
                }
                acc
            })
            .collect()
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self * other)
    }

    /// Kronecker product; with row-major flattening `vec(A X Bᵀ) = (A ⊗ B) vec(X)`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut m = Matrix::zeros(self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            m.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        m
    }

    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Result<Matrix> {
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            if p.cols != cols {
                return Err(Error::DimensionMismatch("vstack column count".into()));
            }
            rows += p.rows;
            data.extend_from_slice(&p.data);
        }
        Matrix::from_flat(field, rows, cols, data)
    }

    /// Reduced row-echelon form, same shape, zero rows at the bottom.
    pub fn rref(&self) -> Matrix {
        let mut e = Echelon::new(self.field, self.cols);
        for r in 0..self.rows {
            e.insert(self.row(r).to_vec());
        }
        let mut rows = e.into_rows();
        rows.resize(self.rows, vec![self.field.zero(); self.cols]);
        Matrix::from_rows(self.field, self.cols, rows).expect("rref shape")
    }

    pub fn rank(&self) -> usize {
        self.row_space().dim()
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::span(self.field, self.cols, self.row_vectors())
    }

    pub fn column_space(&self) -> Subspace {
        self.transpose().row_space()
    }

    /// `{v : self · v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let mut e = Echelon::new(self.field, self.cols);
        for r in 0..self.rows {
            e.insert(self.row(r).to_vec());
        }
        e.kernel()
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn rref_of_permutation_is_identity() {
        let m = Matrix::from_i64(q(), &[&[0, 1], &[1, 0]]);
        assert_eq!(m.rref(), Matrix::identity(q(), 2));
    }

    #[test]
    fn rref_rank_one() {
        let m = Matrix::from_i64(q(), &[&[2, 4], &[1, 2]]);
        assert_eq!(m.rref(), Matrix::from_i64(q(), &[&[1, 2], &[0, 0]]));
        assert_eq!(m.row_space().basis_matrix(), Matrix::from_i64(q(), &[&[1, 2]]));
    }

    #[test]
    fn rref_char_two() {
        let f2 = Field::prime(2).unwrap();
        let m = Matrix::from_i64(f2, &[&[1, 1], &[1, 1]]);
        assert_eq!(m.row_space().basis_matrix(), Matrix::from_i64(f2, &[&[1, 1]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(q(), 3).kernel().dim(), 0);
        assert_eq!(Matrix::zeros(q(), 2, 3).kernel().dim(), 3);
        // Multiplication map of Q[x]/(x^2): columns e_i ⊗ e_j, rows 1, x.
        let m = Matrix::from_i64(q(), &[&[1, 0, 0, 0], &[0, 1, 1, 0]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 2);
        assert_eq!(k.dim() + m.rank(), 4);
        for v in k.basis() {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn kron_matches_vec_identity() {
        // vec(A X B^T) = (A ⊗ B) vec(X)
        let a = Matrix::from_i64(q(), &[&[1, 2], &[0, -1]]);
        let b = Matrix::from_i64(q(), &[&[3, 0, 1], &[1, 1, 0]]);
        let x = Matrix::from_i64(q(), &[&[1, 0, 2], &[0, 5, -1]]);
        let lhs = &(&a * &x) * &b.transpose();
        let rhs = a.kron(&b).mul_vec(x.data());
        assert_eq!(lhs.data(), rhs.as_slice());
    }
}
