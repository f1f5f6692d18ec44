//! Dense row-major matrices over a [`Scalar`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Column of ones.
    pub fn ones(n: usize) -> Self {
        Matrix {
            rows: n,
            cols: 1,
            data: vec![T::one(); n],
        }
    }

    pub fn scalar(v: T) -> Self {
        Matrix {
            rows: 1,
            cols: 1,
            data: vec![v],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, Error> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(Error::Dimension("matrix must be non-empty".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != m) {
            return Err(Error::Dimension(format!(
                "row {} has {} entries, expected {m}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Ok(Matrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    /// Row sums as a column vector.
    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().cloned().fold(T::zero(), |a, b| a + b))
            .collect()
    }

    /// The common row sum, if every row has the same sum.
    pub fn constant_row_sum(&self) -> Option<T> {
        let sums = self.row_sums();
        let first = sums.first()?.clone();
        sums.iter().all(|s| s.approx_eq(&first)).then_some(first)
    }

    /// Sub-matrix picking the given rows and columns (0-based).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, Error> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs[(l, j)].clone();
                    let cell = &mut out[(i, j)];
                    *cell = cell.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, Error> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, Error> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &Self, f: impl Fn(T, T) -> T) -> Result<Self, Error> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        })
    }

    /// `self^e`, square matrices only; `A^0 = I`.
    pub fn pow(&self, mut e: usize) -> Self {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "inverse of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        T::invert(self)
    }

    /// `I - self`.
    pub fn one_minus(&self) -> Self {
        &Self::identity(self.rows) - self
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.approx_eq(b))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Sum of all entries.
    pub fn total(&self) -> T {
        self.data.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Stacks `[[a, b], [c, d]]` into one matrix.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, Error> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Dimension("incompatible block shapes".into()));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = match (i < a.rows, j < a.cols) {
                    (true, true) => a[(i, j)].clone(),
                    (true, false) => b[(i, j - a.cols)].clone(),
                    (false, true) => c[(i - a.rows, j)].clone(),
                    (false, false) => d[(i - a.rows, j - a.cols)].clone(),
                };
            }
        }
        Ok(out)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix product shape")
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_add(rhs).expect("matrix sum shape")
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_sub(rhs).expect("matrix difference shape")
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.data.chunks(self.cols.max(1)))
            .finish()
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Gauss-Jordan elimination, choosing the pivot with the largest
/// [`Scalar::pivot_weight`] among the nonzero candidates.
pub(crate) fn gauss_jordan_inverse<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>, Error> {
    let n = m.rows();
    let mut a = m.clone();
    let mut inv: Matrix<T> = Matrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[(r, col)].is_zero())
            .max_by(|&x, &y| {
                a[(x, col)]
                    .pivot_weight()
                    .total_cmp(&a[(y, col)].pivot_weight())
            })
            .ok_or(Error::Singular { column: col + 1 })?;
        swap_rows(&mut a, col, pivot);
        swap_rows(&mut inv, col, pivot);
        let p = a[(col, col)].clone();
        for j in 0..n {
            a[(col, j)] = a[(col, j)].clone() / p.clone();
            inv[(col, j)] = inv[(col, j)].clone() / p.clone();
        }
        for r in 0..n {
            if r == col || a[(r, col)].is_zero() {
                continue;
            }
            let f = a[(r, col)].clone();
            for j in 0..n {
                a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                inv[(r, j)] = inv[(r, j)].clone() - f.clone() * inv[(col, j)].clone();
            }
        }
    }
    Ok(inv)
}

fn swap_rows<T>(m: &mut Matrix<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols;
    for j in 0..cols {
        m.data.swap(a * cols + j, b * cols + j);
    }
}

/// Exact inverse of a rational matrix.
///
/// Each row is scaled to integers by the lcm of its denominators, then a
/// fraction-free Gauss-Jordan pass runs on `[A | I]` over `BigInt`: every
/// update `(p * x - f * y) / prev` divides exactly, and at the end the left
/// block is `d * I` with the right block equal to `d * A^-1`.
pub(crate) fn fraction_free_inverse(m: &Matrix<BigRational>) -> Result<Matrix<BigRational>, Error> {
    let n = m.rows();
    let mut row_scale = Vec::with_capacity(n);
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let mut row: Vec<BigInt> = m
            .row(i)
            .iter()
            .map(|r| r.numer() * (&l / r.denom()))
            .collect();
        row.extend((0..n).map(|j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }));
        a.push(row);
        row_scale.push(l);
    }

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| a[r][k].bits())
            .ok_or(Error::Singular { column: k + 1 })?;
        a.swap(k, pivot);
        let pivot_row = a[k].clone();
        let p = pivot_row[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let f = row[k].clone();
            for (x, pk) in row.iter_mut().zip(&pivot_row) {
                let num = &p * &*x - &f * pk;
                debug_assert!((&num % &prev).is_zero());
                *x = num / &prev;
            }
        }
        prev = p;
    }
    // left block is now prev * I
    let d = prev;
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // (D A)^-1 = A^-1 D^-1, so A^-1 = (D A)^-1 D
            inv[(i, j)] = BigRational::new(&a[i][n + j] * &row_scale[j], d.clone());
        }
    }
    Ok(inv)
}
