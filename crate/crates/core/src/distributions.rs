//! Raw, factorial and central moments of discrete distributions through
//! MSN closed forms.
//!
//! Central moments only change the third MSN parameter: wherever a raw
//! moment formula uses `b(m, j, k)`, the central one uses `b(m, j, k - M_1)`.
//!
//! Negative binomial variables count trials, so their support starts at
//! `k`. `PhaseType(a, A)` is the shifted discrete phase type law: mass
//! `1 - a e` at 1 and `P(X = n) = a A^(n-2) (I - A) e` for `n >= 2`, the
//! recurrence time of the absorbing-free chain `[[A, (I-A) e], [a, 1 - a e]]`
//! to its last state.

use crate::chain::PartitionedChain;
use crate::error::Error;
use crate::matrix::Matrix;
use crate::moments::{anb_sum, check_probability, moment_anb, moment_nb, moment_r1_closed, nb_sum};
use crate::msn::msn_row;
use crate::msn1::stirling1_triangle;
use crate::scalar::{binom, factorial, in_unit_interval, pow, Scalar};

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum DistributionSpec<T> {
    Binomial { n: usize, p: T },
    Poisson { lambda: T },
    NegBinomial { p: T, k: usize },
    AltNegBinomial { p: T, q: T, k: usize },
    DiscreteUniform { n: usize },
    PhaseType { a: Matrix<T>, a_mat: Matrix<T> },
    Recurrence(PartitionedChain<T>),
}

impl<T: Scalar> DistributionSpec<T> {
    pub fn name(&self) -> &'static str {
        match self {
            DistributionSpec::Binomial { .. } => "binomial",
            DistributionSpec::Poisson { .. } => "poisson",
            DistributionSpec::NegBinomial { .. } => "negbinomial",
            DistributionSpec::AltNegBinomial { .. } => "altnegbinomial",
            DistributionSpec::DiscreteUniform { .. } => "uniform",
            DistributionSpec::PhaseType { .. } => "phasetype",
            DistributionSpec::Recurrence(_) => "recurrence",
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        match self {
            DistributionSpec::Binomial { n, p } => {
                positive("n", *n)?;
                check_probability("p", p, true, true)
            }
            DistributionSpec::Poisson { lambda } => {
                if *lambda > T::zero() {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("lambda = {lambda} must be positive")))
                }
            }
            DistributionSpec::NegBinomial { p, k } => {
                positive("k", *k)?;
                check_probability("p", p, false, true)
            }
            DistributionSpec::AltNegBinomial { p, q, k } => {
                positive("k", *k)?;
                check_probability("p", p, false, true)?;
                check_probability("q", q, true, false)
            }
            DistributionSpec::DiscreteUniform { n } => positive("N", *n),
            DistributionSpec::PhaseType { a, a_mat } => phase_type_chain(a, a_mat).map(|_| ()),
            DistributionSpec::Recurrence(c) => {
                if c.m_size() == 1 {
                    Ok(())
                } else {
                    Err(Error::Precondition(format!(
                        "recurrence law needs |M| = 1, got {}",
                        c.m_size()
                    )))
                }
            }
        }
    }
}

fn positive(name: &str, v: usize) -> Result<(), Error> {
    if v == 0 {
        Err(Error::Domain(format!("{name} must be a positive integer")))
    } else {
        Ok(())
    }
}

/// The chain `[[A, (I-A) e], [a, 1 - a e]]` with `M` the states of `A`.
pub fn phase_type_chain<T: Scalar>(
    a: &Matrix<T>,
    a_mat: &Matrix<T>,
) -> Result<PartitionedChain<T>, Error> {
    let d = a_mat.rows();
    if !a_mat.is_square() || a.rows() != 1 || a.cols() != d || d == 0 {
        return Err(Error::Dimension(format!(
            "phase type needs a 1 x d row and a d x d matrix, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            a_mat.rows(),
            a_mat.cols()
        )));
    }
    if let Some(v) = a.iter().chain(a_mat.iter()).find(|v| !in_unit_interval(*v)) {
        return Err(Error::Domain(format!(
            "phase type entry {v} outside [0, 1]"
        )));
    }
    let mass = a.total();
    if mass > T::one() {
        return Err(Error::Domain(format!("a e = {mass} exceeds 1")));
    }
    let exit: Vec<T> = a_mat.row_sums().into_iter().map(|s| T::one() - s).collect();
    if let Some((row, _)) = exit.iter().enumerate().find(|(_, v)| **v < T::zero()) {
        return Err(Error::Domain(format!(
            "row {} of A sums to more than 1",
            row + 1
        )));
    }
    let mut rows = a_mat.to_rows();
    for (r, e) in rows.iter_mut().zip(exit) {
        r.push(e);
    }
    let mut last = a.row(0).to_vec();
    last.push(T::one() - mass);
    rows.push(last);
    let p = Matrix::from_rows(rows)?;
    let m: Vec<usize> = (1..=d).collect();
    PartitionedChain::partition(p, &m).map_err(|e| match e {
        Error::Precondition(_) => Error::Precondition("I - A is not invertible".into()),
        other => other,
    })
}

fn b_sum<T: Scalar>(m: usize, k: &T, weight: impl Fn(usize) -> T) -> T {
    msn_row(m, k)
        .into_iter()
        .enumerate()
        .fold(T::zero(), |acc, (j, b)| acc + b * weight(j))
}

fn tq<T: Scalar>(n: usize) -> T {
    T::from_i64(n as i64)
}

fn bc<T: Scalar>(n: usize, r: usize) -> T {
    T::from_bigint(&binom(n as i64, r as i64))
}

fn fact<T: Scalar>(n: usize) -> T {
    T::from_bigint(&factorial(n))
}

/// `sum_j b(m, j, k) P^j (I - P)^-(j+skip)`, used for both the recurrence
/// and the phase type laws.
fn geometric_block_sum<T: Scalar>(
    m: usize,
    k: &T,
    p: &Matrix<T>,
    inv: &Matrix<T>,
    skip: usize,
) -> Matrix<T> {
    let n = p.rows();
    let mut pj = Matrix::identity(n);
    let mut invj = inv.pow(skip);
    let mut acc = Matrix::zeros(n, n);
    for b in msn_row(m, k) {
        acc = &acc + &(&pj * &invj).scale(&b);
        pj = &pj * p;
        invj = &invj * inv;
    }
    acc
}

/// `E[X^m]`.
pub fn raw_moment<T: Scalar>(d: &DistributionSpec<T>, m: usize) -> Result<T, Error> {
    d.validate()?;
    Ok(match d {
        DistributionSpec::Binomial { n, p } => b_sum(m, &T::zero(), |j| bc::<T>(*n, j) * pow(p, j)),
        DistributionSpec::Poisson { lambda } => b_sum(m, &T::zero(), |j| pow(lambda, j) / fact(j)),
        DistributionSpec::NegBinomial { p, k } => moment_nb(p, *k, m)?,
        DistributionSpec::AltNegBinomial { p, q, k } => moment_anb(p, q, *k, m)?,
        DistributionSpec::DiscreteUniform { n } => {
            b_sum(m, &T::zero(), |j| bc::<T>(*n, j + 1)) / tq(*n)
        }
        DistributionSpec::PhaseType { a, a_mat } => {
            let c = phase_type_chain(a, a_mat)?;
            moment_r1_closed(&c.swapped(), m)?[(0, 0)].clone()
        }
        DistributionSpec::Recurrence(c) => moment_r1_closed(c, m)?[(0, 0)].clone(),
    })
}

/// `[E[X^0], ..., E[X^m_max]]`.
pub fn raw_moments<T: Scalar>(d: &DistributionSpec<T>, m_max: usize) -> Result<Vec<T>, Error> {
    (0..=m_max).map(|m| raw_moment(d, m)).collect()
}

/// Exact mean of each law in closed form.
pub fn mean<T: Scalar>(d: &DistributionSpec<T>) -> Result<T, Error> {
    d.validate()?;
    Ok(match d {
        DistributionSpec::Binomial { n, p } => tq::<T>(*n) * p.clone(),
        DistributionSpec::Poisson { lambda } => lambda.clone(),
        DistributionSpec::NegBinomial { p, k } => tq::<T>(*k) / p.clone(),
        DistributionSpec::AltNegBinomial { p, q, k } => {
            (tq::<T>(*k - 1) * (p.clone() - q.clone()) + tq(*k)) / p.clone()
        }
        DistributionSpec::DiscreteUniform { n } => (tq::<T>(*n) - T::one()) / tq(2),
        DistributionSpec::PhaseType { a, a_mat } => {
            let c = phase_type_chain(a, a_mat)?;
            let inv = c.inv_m()?;
            T::one() + (&(a * inv) * &Matrix::ones(a_mat.rows())).total()
        }
        DistributionSpec::Recurrence(c) => {
            let inv = c.inv_mbar()?;
            T::one() + (&(c.p_m_mbar() * inv) * &Matrix::ones(c.mbar_size())).total()
        }
    })
}

fn require_unit_head<T: Scalar>(seq: &[T], what: &str) -> Result<(), Error> {
    match seq.first() {
        Some(v) if v.is_one() => Ok(()),
        Some(v) => Err(Error::Precondition(format!("{what}[0] = {v}, expected 1"))),
        None => Err(Error::Precondition(format!("{what} is empty"))),
    }
}

/// `F_m = sum_j s(m, j) M_j`, the inverse of `M_m = sum_j b(m, j, 0) F_j / j!`.
pub fn factorial_moments_from_raw<T: Scalar>(raw: &[T]) -> Result<Vec<T>, Error> {
    require_unit_head(raw, "raw")?;
    let s = stirling1_triangle(raw.len() - 1);
    Ok((0..raw.len())
        .map(|m| {
            (0..=m).fold(T::zero(), |acc, j| {
                acc + T::from_bigint(&s[m][j]) * raw[j].clone()
            })
        })
        .collect())
}

/// `M_m = sum_j b(m, j, 0) F_j / j!`.
pub fn raw_from_factorial<T: Scalar>(fm: &[T]) -> Vec<T> {
    (0..fm.len())
        .map(|m| b_sum(m, &T::zero(), |j| fm[j].clone() / fact(j)))
        .collect()
}

/// `C_m = sum_j binom(m, j) (-M_1)^(m-j) M_j`.
pub fn central_from_raw<T: Scalar>(raw: &[T]) -> Result<Vec<T>, Error> {
    require_unit_head(raw, "raw")?;
    let neg_mean = -raw.get(1).cloned().unwrap_or_else(T::zero);
    Ok((0..raw.len())
        .map(|m| {
            (0..=m).fold(T::zero(), |acc, j| {
                acc + bc::<T>(m, j) * pow(&neg_mean, m - j) * raw[j].clone()
            })
        })
        .collect())
}

/// `C_m = sum_j b(m, j, -M_1) F_j / j!` with `M_1 = F_1`.
pub fn central_via_factorial<T: Scalar>(fm: &[T], m: usize) -> Result<T, Error> {
    require_unit_head(fm, "F")?;
    if fm.len() <= m {
        return Err(Error::Precondition(format!(
            "{} factorial moments given, order {m} requested",
            fm.len()
        )));
    }
    let neg_mean = -fm.get(1).cloned().unwrap_or_else(T::zero);
    Ok(b_sum(m, &neg_mean, |j| fm[j].clone() / fact(j)))
}

/// `E[(X - M_1)^m]` from the distribution specific MSN closed form.
pub fn central_closed<T: Scalar>(d: &DistributionSpec<T>, m: usize) -> Result<T, Error> {
    let mu = mean(d)?;
    let shift = -mu.clone();
    Ok(match d {
        DistributionSpec::Binomial { n, p } => b_sum(m, &shift, |j| bc::<T>(*n, j) * pow(p, j)),
        DistributionSpec::Poisson { lambda } => b_sum(m, &shift, |j| pow(lambda, j) / fact(j)),
        DistributionSpec::NegBinomial { p, k } => {
            let ratio = (T::one() - p.clone()) / p.clone();
            nb_sum(&ratio, *k, m, &shift)
        }
        DistributionSpec::AltNegBinomial { p, q, k } => {
            let ratio = (T::one() - p.clone()) / p.clone();
            anb_sum(q, &ratio, *k, m, &shift)
        }
        DistributionSpec::DiscreteUniform { n } => {
            b_sum(m, &shift, |j| bc::<T>(*n, j + 1)) / tq(*n)
        }
        DistributionSpec::PhaseType { a, a_mat } => {
            let c = phase_type_chain(a, a_mat)?;
            let inv = c.inv_m()?;
            let k = T::from_i64(2) - mu.clone();
            let body = geometric_block_sum(m, &k, a_mat, inv, 0);
            let tail = (&(a * &body) * &Matrix::ones(a_mat.rows())).total();
            (T::one() - a.total()) * pow(&(T::one() - mu), m) + tail
        }
        DistributionSpec::Recurrence(c) => {
            let inv = c.inv_mbar()?;
            let k = T::from_i64(2) - mu.clone();
            let body = geometric_block_sum(m, &k, c.p_mbar(), inv, 1);
            let tail = (&(c.p_m_mbar() * &body) * c.p_mbar_m()).total();
            c.p_m()[(0, 0)].clone() * pow(&(T::one() - mu), m) + tail
        }
    })
}
