//! Dense matrices over an exact field.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// A dense row-major matrix. All entries belong to `field`.
///
/// Equality and hashing are entrywise, which is exact because scalars are
/// stored canonically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// The matrix unit `E_ij` (zero-based indices).
    pub fn unit(field: FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        m.data[i * n + j] = field.one();
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {c}", row.len())));
            }
            for s in row {
                if !field.owns(&s) {
                    return Err(Error::FieldMismatch(field.to_string(), s.field().to_string()));
                }
                data.push(s);
            }
        }
        Ok(Matrix { rows: r, cols: c, field, data })
    }

    /// Builds a matrix with explicit shape; useful when `rows` may be empty.
    pub fn from_flat(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "flat data does not match shape");
        debug_assert!(data.iter().all(|s| field.owns(s)));
        Matrix { rows, cols, field, data }
    }

    /// Integer-entry convenience constructor, mostly for tests and examples.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, data).expect("rectangular integer matrix")
    }

    pub fn diagonal(field: FieldSpec, diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = field.from_i64(d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Scalar) {
        debug_assert!(self.field.owns(&s));
        self.data[i * self.cols + j] = s;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    fn check_same_shape(&self, other: &Matrix) {
        assert!(
            self.rows == other.rows && self.cols == other.cols && self.field == other.field,
            "shape/field mismatch: {}x{} over {} vs {}x{} over {}",
            self.rows,
            self.cols,
            self.field,
            other.rows,
            other.cols,
            other.field
        );
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_same_shape(other);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check_same_shape(other);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { data, ..*self }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { data: self.data.iter().map(|a| -a).collect(), ..*self }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { data: self.data.iter().map(|a| a * s).collect(), ..*self }
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> Matrix {
        assert!(self.is_square());
        let mut m = self.clone();
        let one = self.field.one();
        for i in 0..self.rows {
            let d = &m.data[i * self.cols + i] - &one;
            m.data[i * self.cols + i] = d;
        }
        m
    }

    /// `self + I`.
    pub fn plus_identity(&self) -> Matrix {
        assert!(self.is_square());
        let mut m = self.clone();
        let one = self.field.one();
        for i in 0..self.rows {
            let d = &m.data[i * self.cols + i] + &one;
            m.data[i * self.cols + i] = d;
        }
        m
    }

    /// Matrix product. Zero entries of `self` are skipped, which keeps sparse
    /// operands (matrix units, nilpotent parts) cheap.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert!(
            self.cols == other.rows && self.field == other.field,
            "cannot multiply {}x{} by {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        let mut data = vec![self.field.zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let cell = &mut data[i * other.cols + j];
                    *cell = &*cell + &(a * b);
                }
            }
        }
        Matrix { rows: self.rows, cols: other.cols, field: self.field, data }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![self.field.zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, cell) in out.iter_mut().enumerate() {
                let b = &self.data[k * self.cols + j];
                if !b.is_zero() {
                    *cell = &*cell + &(a * b);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, field: self.field, data }
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        (0..self.rows).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert!(self.cols == other.cols && self.field == other.field);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, field: self.field, data }
    }

    /// Places `self` left of `other`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert!(self.rows == other.rows && self.field == other.field);
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        Matrix { rows: self.rows, cols: self.cols + other.cols, field: self.field, data }
    }

    /// Flattens to a single row vector (row-major), the coordinate form used
    /// for spans of matrices.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn unflatten(field: FieldSpec, n: usize, v: &[Scalar]) -> Matrix {
        Matrix::from_flat(field, n, n, v.to_vec())
    }

    /// Inverse by Gauss-Jordan elimination, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(self.field, n));
        let w = 2 * n;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug.data[r * w + col].is_zero())?;
            if pivot != col {
                for j in 0..w {
                    aug.data.swap(pivot * w + j, col * w + j);
                }
            }
            let inv = aug.data[col * w + col].inv()?;
            for j in 0..w {
                let v = &aug.data[col * w + j] * &inv;
                aug.data[col * w + j] = v;
            }
            for r in 0..n {
                if r == col || aug.data[r * w + col].is_zero() {
                    continue;
                }
                let factor = aug.data[r * w + col].clone();
                for j in 0..w {
                    let t = &factor * &aug.data[col * w + j];
                    if !t.is_zero() {
                        aug.data[r * w + j] = &aug.data[r * w + j] - &t;
                    }
                }
            }
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            data.extend(aug.data[i * w + n..(i + 1) * w].iter().cloned());
        }
        Some(Matrix { rows: n, cols: n, field: self.field, data })
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return self.field.zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -&det;
            }
            let p = a.get(col, col).clone();
            det = &det * &p;
            let inv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col) * &inv;
                for j in col..n {
                    let t = &factor * a.get(col, j);
                    a.data[r * n + j] = &a.data[r * n + j] - &t;
                }
            }
        }
        det
    }

    /// `self^{-1} · other · self`, i.e. conjugation `other^self`.
    pub fn conjugate(&self, other: &Matrix) -> Option<Matrix> {
        Some(self.inverse()?.mul(other).mul(self))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Renders a row vector the same way matrices are rendered.
pub fn format_vector(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}
