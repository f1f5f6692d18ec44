//! Moment generating Stirling numbers of the second kind,
//!
//! ```text
//! b(i, j, k) = sum_{r=0}^{j} binom(j, r) (-1)^(j-r) (r + k)^i
//! ```
//!
//! At `k = 0` these are `S(i, j) * j!` with `S` the Stirling numbers of the
//! second kind. For integer `k >= 0`, `b(i, j, k)` counts the maps from an
//! `i`-set into a `(j + k)`-set that hit every one of the first `j` targets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Error;
use crate::scalar::{binom, factorial, pow, sign, Scalar};

/// `b(i, j, k)` straight from the defining alternating sum.
pub fn msn_direct<T: Scalar>(i: usize, j: usize, k: &T) -> T {
    (0..=j).fold(T::zero(), |acc, r| {
        let term = T::from_bigint(&binom(j as i64, r as i64))
            * pow(&(T::from_i64(r as i64) + k.clone()), i);
        acc + sign::<T>(j - r) * term
    })
}

/// Lower-triangular table of `b(i, j, k)` for one fixed `k`.
///
/// Filled from `b(i, 0, k) = k^i` and
/// `b(i+1, j+1, k) = (j+1) b(i, j, k) + (j+1+k) b(i, j+1, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MsnTable<T> {
    k: T,
    i_max: usize,
    j_max: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> MsnTable<T> {
    pub fn new(i_max: usize, k: T) -> Self {
        Self::with_j_max(i_max, i_max, k)
    }

    pub fn with_j_max(i_max: usize, j_max: usize, k: T) -> Self {
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(i_max + 1);
        rows.push(vec![T::one()]);
        for i in 0..i_max {
            let prev = &rows[i];
            let width = (i + 1).min(j_max) + 1;
            let mut next = Vec::with_capacity(width);
            next.push(pow(&k, i + 1));
            for j1 in 1..width {
                let j = j1 - 1;
                let left = prev.get(j).cloned().unwrap_or_else(T::zero);
                let up = prev.get(j1).cloned().unwrap_or_else(T::zero);
                let jj = T::from_i64(j1 as i64);
                next.push(jj.clone() * left + (jj + k.clone()) * up);
            }
            rows.push(next);
        }
        MsnTable {
            k,
            i_max,
            j_max,
            rows,
        }
    }

    pub fn k(&self) -> &T {
        &self.k
    }

    pub fn i_max(&self) -> usize {
        self.i_max
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    /// `b(i, j, k)`; zero whenever `j > i` or `j > j_max`.
    ///
    /// # Panics
    /// If `i > i_max`.
    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(i <= self.i_max, "row {i} beyond table size {}", self.i_max);
        self.rows[i].get(j).cloned().unwrap_or_else(T::zero)
    }

    /// Row `i`, entries `j = 0..=min(i, j_max)`.
    pub fn row(&self, i: usize) -> &[T] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }
}

/// `[b(i, 0, k), ..., b(i, i, k)]`.
pub fn msn_row<T: Scalar>(i: usize, k: &T) -> Vec<T> {
    MsnTable::new(i, k.clone()).rows[i].clone()
}

/// `b(i, j, k)` for integer `k >= 0` through the shift formula
/// `b(i, j, k) = sum_{r=0}^{k} binom(k, r) b(i, j + r, 0)`.
pub fn msn_shift<T: Scalar>(i: usize, j: usize, k: &T) -> Result<T, Error> {
    let kk = k
        .to_bigint_exact()
        .filter(|v| *v >= BigInt::zero())
        .ok_or_else(|| Error::Domain(format!("shift formula needs an integer k >= 0, got {k}")))?;
    let kk: usize = kk
        .try_into()
        .map_err(|_| Error::Domain(format!("k = {k} is too large")))?;
    let base = MsnTable::with_j_max(i, j + kk, T::zero());
    Ok((0..=kk).fold(T::zero(), |acc, r| {
        acc + T::from_bigint(&binom(kk as i64, r as i64)) * base.get(i, j + r)
    }))
}

/// Stirling number of the second kind, `S(i, j) = b(i, j, 0) / j!`.
pub fn stirling2(i: usize, j: usize) -> BigInt {
    if j > i {
        return BigInt::zero();
    }
    let table = MsnTable::with_j_max(i, j, BigRational::zero());
    let v = table.get(i, j) / BigRational::from_integer(factorial(j));
    v.to_integer()
}

/// Full triangle `S(i, j)` for `0 <= j <= i <= i_max`.
pub fn stirling2_triangle(i_max: usize) -> Vec<Vec<BigInt>> {
    let table = MsnTable::new(i_max, BigRational::zero());
    table
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, v)| (v / BigRational::from_integer(factorial(j))).to_integer())
                .collect()
        })
        .collect()
}
