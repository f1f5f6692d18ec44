//! Signed Stirling numbers of the first kind and their moment generating
//! generalisation
//!
//! ```text
//! c(i, j, k) = sum_{r=j}^{i} binom(r, j) (-k)^(r-j) s(i, r)
//! ```
//!
//! with `s(i+1, j) = s(i, j-1) - i s(i, j)`, `s(0, 0) = 1` and
//! `s(i, 0) = s(0, j) = 0` otherwise. The `c` family inverts the `b` family:
//! `sum_r b(i, r, k1) / r! * c(r, j, k2) = binom(i, j) (k1 - k2)^(i-j)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::msn::MsnTable;
use crate::scalar::{binom, factorial, pow, Scalar};

/// Triangle `s(i, j)` for `0 <= i, j <= i_max`.
pub fn stirling1_triangle(i_max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); i_max + 1]; i_max + 1];
    s[0][0] = BigInt::one();
    for i in 0..i_max {
        for j in 1..=i_max {
            s[i + 1][j] = &s[i][j - 1] - BigInt::from(i) * &s[i][j];
        }
    }
    s
}

pub fn stirling1(i: usize, j: usize) -> BigInt {
    if j > i {
        return BigInt::zero();
    }
    stirling1_triangle(i)[i][j].clone()
}

pub fn msn1<T: Scalar>(i: usize, j: usize, k: &T) -> T {
    let s = stirling1_triangle(i);
    msn1_from(&s, i, j, k)
}

fn msn1_from<T: Scalar>(s: &[Vec<BigInt>], i: usize, j: usize, k: &T) -> T {
    let neg_k = -k.clone();
    (j..=i).fold(T::zero(), |acc, r| {
        acc + T::from_bigint(&(binom(r as i64, j as i64) * &s[i][r])) * pow(&neg_k, r - j)
    })
}

/// Both kinds side by side for one `k`.
#[derive(Debug, Clone)]
pub struct Msn1Table<T> {
    k: T,
    i_max: usize,
    s_values: Vec<Vec<BigInt>>,
    c_values: Vec<Vec<T>>,
}

impl<T: Scalar> Msn1Table<T> {
    pub fn new(i_max: usize, k: T) -> Self {
        let s_values = stirling1_triangle(i_max);
        let c_values = (0..=i_max)
            .map(|i| (0..=i).map(|j| msn1_from(&s_values, i, j, &k)).collect())
            .collect();
        Msn1Table {
            k,
            i_max,
            s_values,
            c_values,
        }
    }

    pub fn k(&self) -> &T {
        &self.k
    }

    pub fn i_max(&self) -> usize {
        self.i_max
    }

    pub fn s(&self, i: usize, j: usize) -> &BigInt {
        &self.s_values[i][j]
    }

    /// `c(i, j, k)`, zero above the diagonal.
    pub fn c(&self, i: usize, j: usize) -> T {
        self.c_values[i].get(j).cloned().unwrap_or_else(T::zero)
    }
}

/// `sum_{r=j}^{i} b(i, r, k1) / r! * c(r, j, k2)`.
pub fn inversion_product<T: Scalar>(i: usize, j: usize, k1: &T, k2: &T) -> T {
    if j > i {
        return T::zero();
    }
    let b = MsnTable::new(i, k1.clone());
    let c = Msn1Table::new(i, k2.clone());
    (j..=i).fold(T::zero(), |acc, r| {
        acc + b.get(i, r) / T::from_bigint(&factorial(r)) * c.c(r, j)
    })
}

/// Lower-triangular `(b(i, r, k) / r!)` for `0 <= i, r <= i_max`.
pub fn scaled_msn_matrix<T: Scalar>(i_max: usize, k: &T) -> Matrix<T> {
    let b = MsnTable::new(i_max, k.clone());
    let mut m = Matrix::zeros(i_max + 1, i_max + 1);
    for i in 0..=i_max {
        for r in 0..=i {
            m[(i, r)] = b.get(i, r) / T::from_bigint(&factorial(r));
        }
    }
    m
}

/// Lower-triangular `(c(r, j, k))` for `0 <= r, j <= i_max`.
pub fn msn1_matrix<T: Scalar>(i_max: usize, k: &T) -> Matrix<T> {
    let c = Msn1Table::new(i_max, k.clone());
    let mut m = Matrix::zeros(i_max + 1, i_max + 1);
    for r in 0..=i_max {
        for j in 0..=r {
            m[(r, j)] = c.c(r, j);
        }
    }
    m
}
