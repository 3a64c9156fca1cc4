//! Exact rational scalars and dense vector/matrix algebra.
//!
//! Everything here is exact: there is no tolerance anywhere. Elimination
//! picks the first nonzero entry in a column as its pivot.

use std::fmt;
use std::ops::{Index, IndexMut};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational. Always stored in lowest terms with a
/// positive denominator; zero is `0/1`.
pub type Rational = BigRational;

/// Builds `num/den` in canonical form. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("dimension mismatch in {op}: {lhs_rows}x{lhs_cols} vs {rhs_rows}x{rhs_cols}")]
    DimensionMismatch {
        op: &'static str,
        lhs_rows: usize,
        lhs_cols: usize,
        rhs_rows: usize,
        rhs_cols: usize,
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix data has {len} entries, expected {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
}

/// Dense column vector of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        RatVector(vec![Rational::zero(); len])
    }

    pub fn from_ints(values: &[i64]) -> Self {
        RatVector(values.iter().map(|&v| int(v)).collect())
    }

    /// Unit vector `e_index` of the given length.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[index] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &RatVector) -> Result<Rational, NumericsError> {
        self.check_len("dot", other)?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn add(&self, other: &RatVector) -> Result<RatVector, NumericsError> {
        self.check_len("add", other)?;
        Ok(RatVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &RatVector) -> Result<RatVector, NumericsError> {
        self.check_len("sub", other)?;
        Ok(RatVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, factor: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn neg(&self) -> RatVector {
        RatVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Componentwise `>= 0`.
    pub fn is_nonneg(&self) -> bool {
        !self.0.iter().any(Signed::is_negative)
    }

    /// Index of the first strictly negative entry.
    pub fn first_negative(&self) -> Option<usize> {
        self.0.iter().position(Signed::is_negative)
    }

    fn check_len(&self, op: &'static str, other: &RatVector) -> Result<(), NumericsError> {
        if self.len() != other.len() {
            return Err(NumericsError::DimensionMismatch {
                op,
                lhs_rows: self.len(),
                lhs_cols: 1,
                rhs_rows: other.len(),
                rhs_cols: 1,
            });
        }
        Ok(())
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(v: Vec<Rational>) -> Self {
        RatVector(v)
    }
}

impl FromIterator<Rational> for RatVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RatVector(iter.into_iter().collect())
    }
}

impl Index<usize> for RatVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RatVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

/// Formats as `(a, b, c)`.
impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major matrix of rationals.
///
/// A matrix may have zero rows; this is how empty constraint blocks are
/// represented. The column count is kept regardless.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, NumericsError> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(NumericsError::BadShape {
                    rows: n_rows,
                    cols,
                    len: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RatMatrix {
            rows: n_rows,
            cols,
            data,
        })
    }

    /// Integer literal helper; panics on ragged input.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_rows(cols, rows).expect("ragged integer rows")
    }

    /// Single-column matrix holding `v`.
    pub fn column(v: &RatVector) -> Self {
        RatMatrix {
            rows: v.len(),
            cols: 1,
            data: v.as_slice().to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> RatVector {
        RatVector::new(self.row(i).to_vec())
    }

    pub fn col_vector(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.row_iter().map(<[Rational]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, factor: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix, NumericsError> {
        self.check_same_shape("add", other)?;
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix, NumericsError> {
        self.check_same_shape("sub", other)?;
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Exact product `self * rhs`.
    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix, NumericsError> {
        if self.cols != rhs.rows {
            return Err(self.mismatch("mat_mul", rhs.rows, rhs.cols));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &RatVector) -> Result<RatVector, NumericsError> {
        if self.cols != v.len() {
            return Err(self.mismatch("mat_vec", v.len(), 1));
        }
        Ok(self
            .row_iter()
            .map(|row| {
                row.iter()
                    .zip(v.iter())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Exact determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<Rational, NumericsError> {
        if !self.is_square() {
            return Err(self.not_square("determinant"));
        }
        let n = self.rows;
        let mut work = self.to_rows();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !work[r][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if pivot != col {
                work.swap(pivot, col);
                det = -det;
            }
            let p = work[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if work[r][col].is_zero() {
                    continue;
                }
                let factor = &work[r][col] / &p;
                let (top, bottom) = work.split_at_mut(r);
                for (cell, above) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *cell -= &factor * above;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix, NumericsError> {
        if !self.is_square() {
            return Err(self.not_square("inverse"));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }));
                row
            })
            .collect();
        gauss_jordan(&mut aug, n)?;
        let rows = aug.into_iter().map(|row| row[n..].to_vec()).collect();
        Self::from_rows(n, rows)
    }

    /// Solves `self * x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &RatVector) -> Result<RatVector, NumericsError> {
        if !self.is_square() {
            return Err(self.not_square("solve_linear"));
        }
        if rhs.len() != self.rows {
            return Err(self.mismatch("solve_linear", rhs.len(), 1));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(rhs[i].clone());
                row
            })
            .collect();
        gauss_jordan(&mut aug, n)?;
        Ok(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
    }

    pub fn rank(&self) -> usize {
        let mut work = self.to_rows();
        reduce_to_echelon(&mut work, self.cols).len()
    }

    /// Basis of `{ x : self * x = 0 }`, one vector per free column of the
    /// reduced row echelon form.
    pub fn null_space(&self) -> Vec<RatVector> {
        let mut work = self.to_rows();
        let pivots = reduce_to_echelon(&mut work, self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = RatVector::zeros(self.cols);
                v[f] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -work[r][f].clone();
                }
                v
            })
            .collect()
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &RatMatrix) -> Result<RatMatrix, NumericsError> {
        if self.cols != other.cols {
            return Err(self.mismatch("vstack", other.rows, other.cols));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `other` to the right of `self` (same row count).
    pub fn hstack(&self, other: &RatMatrix) -> Result<RatMatrix, NumericsError> {
        if self.rows != other.rows {
            return Err(self.mismatch("hstack", other.rows, other.cols));
        }
        let rows = (0..self.rows)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend_from_slice(other.row(i));
                row
            })
            .collect();
        Self::from_rows(self.cols + other.cols, rows)
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> RatMatrix {
        let rows = indices.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(self.cols, rows).expect("rows share a width")
    }

    fn check_same_shape(&self, op: &'static str, other: &RatMatrix) -> Result<(), NumericsError> {
        if self.shape() != other.shape() {
            return Err(self.mismatch(op, other.rows, other.cols));
        }
        Ok(())
    }

    fn mismatch(&self, op: &'static str, rhs_rows: usize, rhs_cols: usize) -> NumericsError {
        NumericsError::DimensionMismatch {
            op,
            lhs_rows: self.rows,
            lhs_cols: self.cols,
            rhs_rows,
            rhs_cols,
        }
    }

    fn not_square(&self, op: &'static str) -> NumericsError {
        NumericsError::NotSquare {
            op,
            rows: self.rows,
            cols: self.cols,
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Formats as `[[a, b], [c, d]]`.
impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn mat_mul(lhs: &RatMatrix, rhs: &RatMatrix) -> Result<RatMatrix, NumericsError> {
    lhs.mul(rhs)
}

pub fn determinant(m: &RatMatrix) -> Result<Rational, NumericsError> {
    m.determinant()
}

pub fn inverse(m: &RatMatrix) -> Result<RatMatrix, NumericsError> {
    m.inverse()
}

pub fn solve_linear(m: &RatMatrix, rhs: &RatVector) -> Result<RatVector, NumericsError> {
    m.solve(rhs)
}

/// Reduces the left `n x n` block of `aug` to the identity.
fn gauss_jordan(aug: &mut [Vec<Rational>], n: usize) -> Result<(), NumericsError> {
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or(NumericsError::SingularMatrix)?;
        aug.swap(pivot, col);
        let inv = aug[col][col].recip();
        for cell in &mut aug[col][col..] {
            *cell *= &inv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            let pivot_row = aug[col].clone();
            for (cell, p) in aug[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *cell -= &factor * p;
            }
        }
    }
    Ok(())
}

/// In-place reduced row echelon form over the first `cols` columns.
/// Returns the pivot column of each nonzero row; rows past the rank are zero.
fn reduce_to_echelon(work: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == work.len() {
            break;
        }
        let Some(p) = (row..work.len()).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(p, row);
        let inv = work[row][col].recip();
        for c in col..work[row].len() {
            work[row][c] *= &inv;
        }
        for r in 0..work.len() {
            if r == row || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for c in col..work[r].len() {
                let delta = &factor * &work[row][c];
                work[r][c] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Solves a possibly overdetermined system `m * x = rhs`.
///
/// Returns `Some(x)` only when the system is consistent and `m` has full
/// column rank, i.e. the solution exists and is unique.
pub fn solve_unique(m: &RatMatrix, rhs: &RatVector) -> Option<RatVector> {
    assert_eq!(m.rows(), rhs.len(), "solve_unique: rhs length");
    let n = m.cols();
    let mut work: Vec<Vec<Rational>> = (0..m.rows())
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = reduce_to_echelon(&mut work, n);
    if pivots.len() < n {
        return None;
    }
    if work[n..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| work[i][n].clone()).collect())
}
