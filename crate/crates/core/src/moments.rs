//! Distributions and moments of passage and recurrence times.
//!
//! For a chain started in `M`, `N_k` is the `k`-th time `r >= 1` with
//! `X_r` in `Mbar` and `R_k` the `k`-th time with `X_r` in `M`. The barred
//! variables exchange the roles of `M` and `Mbar`. Moments are matrices:
//! entry `(a, b)` of `M_m(N_k)` is `E[N_k^m ; X_{N_k} = b | X_0 = a]`, so it
//! is `|M| x |Mbar|` for `N_k` and `|M| x |M|` for `R_k`.
//!
//! [`moment_recursive`] and [`moment_k_convolved`] only use first-step
//! analysis and the convolution of independent excursions; the MSN closed
//! forms are checked against them.

use std::fmt;
use std::str::FromStr;

use crate::chain::{PartitionedChain, Side};
use crate::error::Error;
use crate::matrix::Matrix;
use crate::msn::msn_row;
use crate::scalar::{binom, in_unit_interval, pow, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    N,
    R,
    NBar,
    RBar,
}

impl Variable {
    pub fn label(self) -> &'static str {
        match self {
            Variable::N => "N",
            Variable::R => "R",
            Variable::NBar => "Nbar",
            Variable::RBar => "Rbar",
        }
    }

    fn is_barred(self) -> bool {
        matches!(self, Variable::NBar | Variable::RBar)
    }

    fn unbarred(self) -> Self {
        match self {
            Variable::NBar => Variable::N,
            Variable::RBar => Variable::R,
            v => v,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "N" => Ok(Variable::N),
            "R" => Ok(Variable::R),
            "Nbar" | "N̄" => Ok(Variable::NBar),
            "Rbar" | "R̄" => Ok(Variable::RBar),
            _ => Err(Error::Parse(format!(
                "unknown variable {s:?} (expected N, R, Nbar, Rbar)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// First-step recursion, `k = 1` only.
    Recursive,
    /// MSN closed forms.
    Closed,
    /// Closed forms for chains that are `M`- and `Mbar`-commutable.
    Commutable,
    /// Convolution of `k = 1` moments.
    Convolved,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Recursive => "recursive",
            Method::Closed => "closed",
            Method::Commutable => "commutable",
            Method::Convolved => "convolved",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "recursive" => Ok(Method::Recursive),
            "closed" => Ok(Method::Closed),
            "commutable" => Ok(Method::Commutable),
            "convolved" => Ok(Method::Convolved),
            _ => Err(Error::Parse(format!(
                "unknown method {s:?} (expected recursive, closed, commutable, convolved)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentResult<T> {
    pub variable: Variable,
    pub k: usize,
    pub m: usize,
    pub value: Matrix<T>,
}

fn bc<T: Scalar>(n: usize, r: usize) -> T {
    T::from_bigint(&binom(n as i64, r as i64))
}

fn sum_matrices<T: Scalar>(
    rows: usize,
    cols: usize,
    terms: impl Iterator<Item = Matrix<T>>,
) -> Matrix<T> {
    terms.fold(Matrix::zeros(rows, cols), |acc, t| &acc + &t)
}

fn require_k(k: usize) -> Result<(), Error> {
    if k == 0 {
        return Err(Error::Domain("k must be a positive integer".into()));
    }
    Ok(())
}

/// `P(N_1 = n) = P_M^(n-1) P_MMbar`.
pub fn dist_n1<T: Scalar>(c: &PartitionedChain<T>, n: usize) -> Result<Matrix<T>, Error> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    Ok(&c.p_m().pow(n - 1) * c.p_m_mbar())
}

/// `P(R_1 = 1) = P_M`, `P(R_1 = n) = P_MMbar P_Mbar^(n-2) P_MbarM`.
pub fn dist_r1<T: Scalar>(c: &PartitionedChain<T>, n: usize) -> Result<Matrix<T>, Error> {
    match n {
        0 => Err(Error::Domain("n must be >= 1".into())),
        1 => Ok(c.p_m().clone()),
        _ => Ok(&(c.p_m_mbar() * &c.p_mbar().pow(n - 2)) * c.p_mbar_m()),
    }
}

/// `M_0(N_1), ..., M_{m_max}(N_1)` from
/// `M_m(N_1) = (I - P_M)^-1 (P_MMbar + P_M sum_{j<m} binom(m, j) M_j(N_1))`.
pub fn n1_moments<T: Scalar>(
    c: &PartitionedChain<T>,
    m_max: usize,
) -> Result<Vec<Matrix<T>>, Error> {
    let inv = c.inv_m()?;
    let (rows, cols) = (c.m_size(), c.mbar_size());
    let mut out: Vec<Matrix<T>> = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let lower = sum_matrices(rows, cols, (0..m).map(|j| out[j].scale(&bc(m, j))));
        let rhs = c.p_m_mbar() + &(c.p_m() * &lower);
        out.push(inv * &rhs);
    }
    Ok(out)
}

/// `M_m(R_1) = P_M + P_MMbar sum_{j<=m} binom(m, j) M_j(Nbar_1)`.
pub fn r1_moments<T: Scalar>(
    c: &PartitionedChain<T>,
    m_max: usize,
) -> Result<Vec<Matrix<T>>, Error> {
    let nbar = n1_moments(&c.swapped(), m_max)?;
    let (rows, cols) = (c.mbar_size(), c.m_size());
    Ok((0..=m_max)
        .map(|m| {
            let inner = sum_matrices(rows, cols, (0..=m).map(|j| nbar[j].scale(&bc(m, j))));
            c.p_m() + &(c.p_m_mbar() * &inner)
        })
        .collect())
}

fn base_moments<T: Scalar>(
    c: &PartitionedChain<T>,
    variable: Variable,
    m_max: usize,
) -> Result<Vec<Matrix<T>>, Error> {
    match variable {
        Variable::N => n1_moments(c, m_max),
        Variable::R => r1_moments(c, m_max),
        Variable::NBar => n1_moments(&c.swapped(), m_max),
        Variable::RBar => r1_moments(&c.swapped(), m_max),
    }
}

/// `M_m` of `N_1`, `R_1`, `Nbar_1` or `Rbar_1` by first-step recursion.
pub fn moment_recursive<T: Scalar>(
    c: &PartitionedChain<T>,
    variable: Variable,
    m: usize,
) -> Result<Matrix<T>, Error> {
    Ok(base_moments(c, variable, m)?.swap_remove(m))
}

/// `M_m(N_1) = sum_j b(m, j, 1) P_M^j (I - P_M)^-(j+1) P_MMbar`.
pub fn moment_n1_closed<T: Scalar>(c: &PartitionedChain<T>, m: usize) -> Result<Matrix<T>, Error> {
    let inv = c.inv_m()?;
    let b = msn_row(m, &T::one());
    let n = c.m_size();
    let mut pm_j = Matrix::identity(n);
    let mut inv_j1 = inv.clone();
    let mut acc = Matrix::zeros(n, n);
    for bj in &b {
        acc = &acc + &(&pm_j * &inv_j1).scale(bj);
        pm_j = &pm_j * c.p_m();
        inv_j1 = &inv_j1 * inv;
    }
    Ok(&acc * c.p_m_mbar())
}

/// `M_m(R_1) = P_M + P_MMbar sum_j b(m, j, 2) P_Mbar^j (I - P_Mbar)^-(j+1) P_MbarM`.
pub fn moment_r1_closed<T: Scalar>(c: &PartitionedChain<T>, m: usize) -> Result<Matrix<T>, Error> {
    let inv = c.inv_mbar()?;
    let b = msn_row(m, &T::from_i64(2));
    let n = c.mbar_size();
    let mut pb_j = Matrix::identity(n);
    let mut inv_j1 = inv.clone();
    let mut acc = Matrix::zeros(n, n);
    for bj in &b {
        acc = &acc + &(&pb_j * &inv_j1).scale(bj);
        pb_j = &pb_j * c.p_mbar();
        inv_j1 = &inv_j1 * inv;
    }
    Ok(c.p_m() + &(&(c.p_m_mbar() * &acc) * c.p_mbar_m()))
}

fn convolve<T: Scalar>(left: &[Matrix<T>], right: &[Matrix<T>], m: usize) -> Matrix<T> {
    let (rows, cols) = (left[0].rows(), right[0].cols());
    sum_matrices(
        rows,
        cols,
        (0..=m).map(|j| (&left[j] * &right[m - j]).scale(&bc(m, j))),
    )
}

/// `M_0, ..., M_{m_max}` of `R_k` or `N_k`, by
/// `M_m(R_k) = sum_j binom(m, j) M_j(R_{k-1}) M_{m-j}(R_1)` and
/// `M_m(N_k) = sum_j binom(m, j) M_{m-j}(N_1) M_j(Rbar_{k-1})`.
pub fn convolved_moments<T: Scalar>(
    c: &PartitionedChain<T>,
    variable: Variable,
    k: usize,
    m_max: usize,
) -> Result<Vec<Matrix<T>>, Error> {
    require_k(k)?;
    match variable {
        Variable::R => {
            let r1 = r1_moments(c, m_max)?;
            let mut cur = r1.clone();
            for _ in 1..k {
                cur = (0..=m_max).map(|m| convolve(&cur, &r1, m)).collect();
            }
            Ok(cur)
        }
        Variable::N => {
            let n1 = n1_moments(c, m_max)?;
            if k == 1 {
                return Ok(n1);
            }
            let rbar = convolved_moments(&c.swapped(), Variable::R, k - 1, m_max)?;
            Ok((0..=m_max).map(|m| convolve(&n1, &rbar, m)).collect())
        }
        barred => convolved_moments(&c.swapped(), barred.unbarred(), k, m_max),
    }
}

pub fn moment_k_convolved<T: Scalar>(
    c: &PartitionedChain<T>,
    variable: Variable,
    k: usize,
    m: usize,
) -> Result<Matrix<T>, Error> {
    Ok(convolved_moments(c, variable, k, m)?.swap_remove(m))
}

fn require_commutable<T: Scalar>(c: &PartitionedChain<T>) -> Result<(), Error> {
    for side in [Side::M, Side::MBar] {
        if !c.is_commutable(side) {
            return Err(Error::NotCommutable { side: side.label() });
        }
    }
    Ok(())
}

/// `M_m(R_k)` for `M`- and `Mbar`-commutable chains:
///
/// ```text
/// k^m P_M^k + sum_{r=1}^{k} binom(k, r) P_M^(k-r) P_MMbar Q^(r-1)
///     sum_j binom(j+r-1, j) b(m, j, k+r) P_Mbar^j (I - P_Mbar)^-(j+r) P_MbarM
/// ```
pub fn moment_rk_commutable<T: Scalar>(
    c: &PartitionedChain<T>,
    k: usize,
    m: usize,
) -> Result<Matrix<T>, Error> {
    require_k(k)?;
    require_commutable(c)?;
    let inv = c.inv_mbar()?;
    let q = c.q();
    let nb = c.mbar_size();
    let mut acc = c.p_m().pow(k).scale(&pow(&T::from_i64(k as i64), m));
    for r in 1..=k {
        let b = msn_row(m, &T::from_i64((k + r) as i64));
        let mut pb_j = Matrix::identity(nb);
        let mut inv_jr = inv.pow(r);
        let mut inner = Matrix::zeros(nb, nb);
        for (j, bj) in b.iter().enumerate() {
            let coeff = bc::<T>(j + r - 1, j) * bj.clone();
            inner = &inner + &(&pb_j * &inv_jr).scale(&coeff);
            pb_j = &pb_j * c.p_mbar();
            inv_jr = &inv_jr * inv;
        }
        let head = &(&c.p_m().pow(k - r) * c.p_m_mbar()) * &q.pow(r - 1);
        let term = &(&head * &inner) * c.p_mbar_m();
        acc = &acc + &term.scale(&bc(k, r));
    }
    Ok(acc)
}

/// `M_m(N_k)` for `M`- and `Mbar`-commutable chains:
///
/// ```text
/// sum_{r=0}^{k-1} binom(k-1, r) sum_j b(m, j, k+r) binom(j+r, j)
///     P_M^j (I - P_M)^-(j+r+1) P_MMbar P_Mbar^(k-1-r) Q^r
/// ```
pub fn moment_nk_commutable<T: Scalar>(
    c: &PartitionedChain<T>,
    k: usize,
    m: usize,
) -> Result<Matrix<T>, Error> {
    require_k(k)?;
    require_commutable(c)?;
    let inv = c.inv_m()?;
    let q = c.q();
    let nm = c.m_size();
    let mut acc = Matrix::zeros(nm, c.mbar_size());
    for r in 0..k {
        let b = msn_row(m, &T::from_i64((k + r) as i64));
        let mut pm_j = Matrix::identity(nm);
        let mut inv_p = inv.pow(r + 1);
        let mut inner = Matrix::zeros(nm, nm);
        for (j, bj) in b.iter().enumerate() {
            let coeff = bc::<T>(j + r, j) * bj.clone();
            inner = &inner + &(&pm_j * &inv_p).scale(&coeff);
            pm_j = &pm_j * c.p_m();
            inv_p = &inv_p * inv;
        }
        let tail = &(c.p_m_mbar() * &c.p_mbar().pow(k - 1 - r)) * &q.pow(r);
        acc = &acc + &(&inner * &tail).scale(&bc(k - 1, r));
    }
    Ok(acc)
}

fn ratio_of_row_sum<T: Scalar>(s: Option<&T>, block: &str) -> Result<T, Error> {
    let s =
        s.ok_or_else(|| Error::Precondition(format!("rows of {block} do not have a common sum")))?;
    if s.is_one() {
        return Err(Error::Precondition(format!("row sum of {block} equals 1")));
    }
    Ok(s.clone() / (T::one() - s.clone()))
}

/// `M_m(R_k)` when `|M| = 1`, `P_M = (1-p)` and `P_Mbar` has common row
/// sum `s != 1`:
///
/// ```text
/// sum_{r=0}^{k} binom(k, r) p^r (1-p)^(k-r)
///     sum_j binom(j+r-1, j) b(m, j, k+r) (s / (1-s))^j
/// ```
pub fn moment_rk_scalar<T: Scalar>(
    c: &PartitionedChain<T>,
    k: usize,
    m: usize,
) -> Result<T, Error> {
    require_k(k)?;
    if c.m_size() != 1 {
        return Err(Error::Precondition(format!(
            "|M| must be 1, got {}",
            c.m_size()
        )));
    }
    let ratio = ratio_of_row_sum(c.s_mbar(), "P_Mbar")?;
    let stay = c.p_m()[(0, 0)].clone();
    let p = T::one() - stay.clone();
    Ok((0..=k).fold(T::zero(), |acc, r| {
        let b = msn_row(m, &T::from_i64((k + r) as i64));
        let inner = b.iter().enumerate().fold(T::zero(), |s, (j, bj)| {
            s + T::from_bigint(&binom(j as i64 + r as i64 - 1, j as i64))
                * bj.clone()
                * pow(&ratio, j)
        });
        acc + bc::<T>(k, r) * pow(&p, r) * pow(&stay, k - r) * inner
    }))
}

/// `M_m(Rbar_k)` when `|Mbar| = 1`, `P_Mbar = (0)` and `P_M` has common
/// row sum `s != 1`: `sum_j binom(j+k-1, j) b(m, j, 2k) (s / (1-s))^j`.
pub fn moment_renewal<T: Scalar>(c: &PartitionedChain<T>, k: usize, m: usize) -> Result<T, Error> {
    require_k(k)?;
    if c.mbar_size() != 1 {
        return Err(Error::Precondition(format!(
            "|Mbar| must be 1, got {}",
            c.mbar_size()
        )));
    }
    if !c.p_mbar().is_zero() {
        return Err(Error::Precondition("P_Mbar must be (0)".into()));
    }
    let ratio = ratio_of_row_sum(c.s_m(), "P_M")?;
    let b = msn_row(m, &T::from_i64(2 * k as i64));
    Ok(b.iter().enumerate().fold(T::zero(), |acc, (j, bj)| {
        acc + bc::<T>(j + k - 1, j) * bj.clone() * pow(&ratio, j)
    }))
}

/// `sum_{r=0}^{k-1} binom(k-1, r) (1-q)^r q^(k-1-r)
///     sum_j b(m, j, k+r+shift) binom(j+r, j) ratio^j`.
///
/// Combining the `q` powers keeps `q = 0` well defined.
pub(crate) fn anb_sum<T: Scalar>(q: &T, ratio: &T, k: usize, m: usize, shift: &T) -> T {
    let one_minus_q = T::one() - q.clone();
    (0..k).fold(T::zero(), |acc, r| {
        let b = msn_row(m, &(T::from_i64((k + r) as i64) + shift.clone()));
        let inner = b.iter().enumerate().fold(T::zero(), |s, (j, bj)| {
            s + bj.clone() * bc::<T>(j + r, j) * pow(ratio, j)
        });
        acc + bc::<T>(k - 1, r) * pow(&one_minus_q, r) * pow(q, k - 1 - r) * inner
    })
}

/// `sum_j binom(j+k-1, k-1) b(m, j, k+shift) ratio^j`.
pub(crate) fn nb_sum<T: Scalar>(ratio: &T, k: usize, m: usize, shift: &T) -> T {
    let b = msn_row(m, &(T::from_i64(k as i64) + shift.clone()));
    b.iter().enumerate().fold(T::zero(), |acc, (j, bj)| {
        acc + bc::<T>(j + k - 1, k - 1) * bj.clone() * pow(ratio, j)
    })
}

/// `M_m(N_k)` when `|Mbar| = 1`, `P_Mbar = (q)` and `P_M` has common row sum
/// `s != 1`. The moment is the same for every start state, so the result
/// is that scalar times `e_M`.
pub fn moment_nk_row_sum<T: Scalar>(
    c: &PartitionedChain<T>,
    k: usize,
    m: usize,
) -> Result<Matrix<T>, Error> {
    require_k(k)?;
    if c.mbar_size() != 1 {
        return Err(Error::Precondition(format!(
            "|Mbar| must be 1, got {}",
            c.mbar_size()
        )));
    }
    let ratio = ratio_of_row_sum(c.s_m(), "P_M")?;
    let q = c.p_mbar()[(0, 0)].clone();
    let v = anb_sum(&q, &ratio, k, m, &T::zero());
    Ok(Matrix::ones(c.m_size()).scale(&v))
}

pub(crate) fn check_probability<T: Scalar>(
    name: &str,
    v: &T,
    allow_zero: bool,
    allow_one: bool,
) -> Result<(), Error> {
    let ok = in_unit_interval(v) && (allow_zero || !v.is_zero()) && (allow_one || !v.is_one());
    if ok {
        Ok(())
    } else {
        let lo = if allow_zero { "[0" } else { "(0" };
        let hi = if allow_one { "1]" } else { "1)" };
        Err(Error::Domain(format!("{name} = {v} outside {lo}, {hi}")))
    }
}

/// Moments of the alternating negative binomial law: the time of the
/// `k`-th visit to `Mbar` for the two-state chain `[[1-p, p], [1-q, q]]`.
pub fn moment_anb<T: Scalar>(p: &T, q: &T, k: usize, m: usize) -> Result<T, Error> {
    require_k(k)?;
    check_probability("p", p, false, true)?;
    check_probability("q", q, true, false)?;
    let ratio = (T::one() - p.clone()) / p.clone();
    Ok(anb_sum(q, &ratio, k, m, &T::zero()))
}

/// Moments of the negative binomial law counting trials up to the `k`-th
/// success, so the support starts at `k`.
pub fn moment_nb<T: Scalar>(p: &T, k: usize, m: usize) -> Result<T, Error> {
    require_k(k)?;
    check_probability("p", p, false, true)?;
    let ratio = (T::one() - p.clone()) / p.clone();
    Ok(nb_sum(&ratio, k, m, &T::zero()))
}

fn closed<T: Scalar>(
    c: &PartitionedChain<T>,
    variable: Variable,
    k: usize,
    m: usize,
) -> Result<Matrix<T>, Error> {
    if variable.is_barred() {
        if variable == Variable::RBar && k > 1 && c.mbar_size() == 1 && c.p_mbar().is_zero() {
            return moment_renewal(c, k, m).map(Matrix::scalar);
        }
        return closed(&c.swapped(), variable.unbarred(), k, m);
    }
    match (variable, k) {
        (Variable::N, 1) => moment_n1_closed(c, m),
        (Variable::R, 1) => moment_r1_closed(c, m),
        (Variable::N, _) => moment_nk_row_sum(c, k, m),
        _ => moment_rk_scalar(c, k, m).map(Matrix::scalar),
    }
}

fn commutable<T: Scalar>(
    c: &PartitionedChain<T>,
    variable: Variable,
    k: usize,
    m: usize,
) -> Result<Matrix<T>, Error> {
    match variable {
        Variable::N => moment_nk_commutable(c, k, m),
        Variable::R => moment_rk_commutable(c, k, m),
        barred => commutable(&c.swapped(), barred.unbarred(), k, m),
    }
}

/// `M_m` of the `k`-th passage or recurrence time by the chosen method.
pub fn moment<T: Scalar>(
    c: &PartitionedChain<T>,
    variable: Variable,
    k: usize,
    m: usize,
    method: Method,
) -> Result<MomentResult<T>, Error> {
    require_k(k)?;
    let value = match method {
        Method::Recursive if k == 1 => moment_recursive(c, variable, m)?,
        Method::Recursive => {
            return Err(Error::Precondition(
                "the recursive method covers k = 1 only; use convolved".into(),
            ))
        }
        Method::Closed => closed(c, variable, k, m)?,
        Method::Commutable => commutable(c, variable, k, m)?,
        Method::Convolved => moment_k_convolved(c, variable, k, m)?,
    };
    Ok(MomentResult {
        variable,
        k,
        m,
        value,
    })
}
