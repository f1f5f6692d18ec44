//! Truncated formal power series and the generating functions of the MSNs.

use std::ops::{Add, Mul};

use crate::error::Error;
use crate::msn::MsnTable;
use crate::scalar::{binom_gen, factorial, pow, Scalar};

/// Power series modulo `x^(order+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> TruncatedSeries<T> {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, T::one())
    }

    /// `c * x^n`, truncated.
    pub fn monomial(order: usize, n: usize, c: T) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = c;
        }
        s
    }

    /// Takes the first `order + 1` coefficients, zero-padding if short.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<T>) -> Self {
        coeffs.resize(order + 1, T::zero());
        TruncatedSeries { coeffs }
    }

    /// `1 / (1 - c x) = sum c^n x^n`.
    pub fn geometric(order: usize, c: &T) -> Self {
        TruncatedSeries {
            coeffs: (0..=order).map(|n| pow(c, n)).collect(),
        }
    }

    /// `e^(c x)`.
    pub fn exp_linear(order: usize, c: &T) -> Self {
        TruncatedSeries {
            coeffs: (0..=order)
                .map(|n| pow(c, n) / T::from_bigint(&factorial(n)))
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn powi(&self, e: usize) -> Self {
        (0..e).fold(Self::one(self.order()), |acc, _| &acc * self)
    }

    /// `exp(f)` for a series with zero constant term, via `g' = f' g`.
    pub fn exp(&self) -> Result<Self, Error> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "exp of a formal series needs a zero constant term".into(),
            ));
        }
        let n = self.order();
        let mut g = vec![T::zero(); n + 1];
        g[0] = T::one();
        for m in 1..=n {
            let mut acc = T::zero();
            for l in 1..=m {
                acc = acc + T::from_i64(l as i64) * self.coeffs[l].clone() * g[m - l].clone();
            }
            g[m] = acc / T::from_i64(m as i64);
        }
        Ok(TruncatedSeries { coeffs: g })
    }

    /// Coefficients multiplied by `n!`, i.e. the sequence an exponential
    /// generating function encodes.
    pub fn egf_sequence(&self) -> Vec<T> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.clone() * T::from_bigint(&factorial(n)))
            .collect()
    }
}

impl<T: Scalar> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn add(self, rhs: &TruncatedSeries<T>) -> TruncatedSeries<T> {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=order)
                .map(|n| self.coeffs[n].clone() + rhs.coeffs[n].clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn mul(self, rhs: &TruncatedSeries<T>) -> TruncatedSeries<T> {
        let order = self.order().min(rhs.order());
        let mut out = vec![T::zero(); order + 1];
        for (a, x) in self.coeffs.iter().enumerate().take(order + 1) {
            if x.is_zero() {
                continue;
            }
            for (b, y) in rhs.coeffs.iter().enumerate().take(order + 1 - a) {
                out[a + b] = out[a + b].clone() + x.clone() * y.clone();
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

/// Ordinary generating function of `i -> b(i, j, k)`,
/// `j! x^j / prod_{r=0}^{j} (1 - (k + r) x)`, expanded as a product of
/// geometric series.
pub fn ogf_coeffs<T: Scalar>(j: usize, k: &T, order: usize) -> TruncatedSeries<T> {
    let mut s = TruncatedSeries::monomial(order, j, T::from_bigint(&factorial(j)));
    for r in 0..=j {
        let c = k.clone() + T::from_i64(r as i64);
        s = &s * &TruncatedSeries::geometric(order, &c);
    }
    s
}

/// Exponential generating function `(e^x - 1)^j e^(k x)` for integer `k`.
pub fn egf_coeffs<T: Scalar>(j: usize, k: &T, order: usize) -> Result<TruncatedSeries<T>, Error> {
    if k.to_bigint_exact().is_none() {
        return Err(Error::Domain(format!(
            "exponential generating function needs an integer k, got {k}"
        )));
    }
    Ok(&exp_minus_one(order).powi(j) * &TruncatedSeries::exp_linear(order, k))
}

/// `e^x - 1`.
pub fn exp_minus_one<T: Scalar>(order: usize) -> TruncatedSeries<T> {
    let mut s = TruncatedSeries::exp_linear(order, &T::one());
    s.coeffs[0] = T::zero();
    s
}

/// `sum_j b(i, j, k) binom(x, j)`, which equals `(x + k)^i`.
pub fn binomial_gf_value<T: Scalar>(i: usize, k: &T, x: &T) -> T {
    let table = MsnTable::new(i, k.clone());
    (0..=i).fold(T::zero(), |acc, j| acc + table.get(i, j) * binom_gen(x, j))
}

/// Coefficients of `(e^x - 1)^j exp(e^x y)` as a table indexed `[k][i]`,
/// the coefficient of `x^i y^k`, for `k <= k_max` and `i <= order`.
///
/// `exp(e^x y) = sum_k e^(k x) y^k / k!`, so each `y`-slice is a univariate
/// product.
pub fn double_egf_in_k<T: Scalar>(j: usize, k_max: usize, order: usize) -> Vec<TruncatedSeries<T>> {
    let base = exp_minus_one::<T>(order).powi(j);
    (0..=k_max)
        .map(|k| {
            let inv_kf = T::one() / T::from_bigint(&factorial(k));
            (&base * &TruncatedSeries::exp_linear(order, &T::from_i64(k as i64))).scale(&inv_kf)
        })
        .collect()
}

/// Coefficients of `e^(k x) exp((e^x - 1) z)` as a table indexed `[j][i]`,
/// the coefficient of `x^i z^j`.
pub fn double_egf_in_j<T: Scalar>(k: i64, j_max: usize, order: usize) -> Vec<TruncatedSeries<T>> {
    let ekx = TruncatedSeries::exp_linear(order, &T::from_i64(k));
    let em1 = exp_minus_one::<T>(order);
    let mut power = TruncatedSeries::one(order);
    let mut out = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let inv_jf = T::one() / T::from_bigint(&factorial(j));
        out.push((&ekx * &power).scale(&inv_jf));
        power = &power * &em1;
    }
    out
}
