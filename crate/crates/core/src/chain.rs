//! Stochastic matrices split by a state subset `M` into four blocks
//!
//! ```text
//!     | P_M      P_MMbar |
//! P = |                  |
//!     | P_MbarM  P_Mbar  |
//! ```
//!
//! State indices in the public interface are 1-based.

use crate::error::Error;
use crate::matrix::Matrix;
use crate::scalar::{in_unit_interval, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    M,
    MBar,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::M => "M",
            Side::MBar => "Mbar",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PartitionedChain<T> {
    p: Matrix<T>,
    m_states: Vec<usize>,
    mbar_states: Vec<usize>,
    p_m: Matrix<T>,
    p_m_mbar: Matrix<T>,
    p_mbar_m: Matrix<T>,
    p_mbar: Matrix<T>,
    // (I - P_M)^-1 and (I - P_Mbar)^-1 where they exist
    inv_m: Result<Matrix<T>, Error>,
    inv_mbar: Result<Matrix<T>, Error>,
    s_m: Option<T>,
    s_mbar: Option<T>,
}

impl<T: Scalar> PartitionedChain<T> {
    /// Validates `p` and splits it by the 1-based state set `m`.
    ///
    /// Rejects non-stochastic rows, an empty `M` or complement, and a
    /// singular `I - P_M`.
    pub fn partition(p: Matrix<T>, m: &[usize]) -> Result<Self, Error> {
        validate_stochastic(&p)?;
        let chain = Self::split(p, m)?;
        if let Err(e) = &chain.inv_m {
            return Err(Error::Precondition(format!(
                "I - P_M is not invertible: {e}"
            )));
        }
        Ok(chain)
    }

    fn split(p: Matrix<T>, m: &[usize]) -> Result<Self, Error> {
        let n = p.rows();
        let mut m_states: Vec<usize> = m.to_vec();
        m_states.sort_unstable();
        m_states.dedup();
        if m_states.is_empty() {
            return Err(Error::Partition("M is empty".into()));
        }
        if let Some(&bad) = m_states.iter().find(|&&s| s == 0 || s > n) {
            return Err(Error::Partition(format!("state {bad} outside 1..={n}")));
        }
        let mbar_states: Vec<usize> = (1..=n).filter(|s| !m_states.contains(s)).collect();
        if mbar_states.is_empty() {
            return Err(Error::Partition("complement of M is empty".into()));
        }
        let mi: Vec<usize> = m_states.iter().map(|s| s - 1).collect();
        let bi: Vec<usize> = mbar_states.iter().map(|s| s - 1).collect();
        let p_m = p.select(&mi, &mi);
        let p_m_mbar = p.select(&mi, &bi);
        let p_mbar_m = p.select(&bi, &mi);
        let p_mbar = p.select(&bi, &bi);
        let inv_m = p_m.one_minus().inverse();
        let inv_mbar = p_mbar.one_minus().inverse();
        let s_m = p_m.constant_row_sum();
        let s_mbar = p_mbar.constant_row_sum();
        Ok(PartitionedChain {
            p,
            m_states,
            mbar_states,
            p_m,
            p_m_mbar,
            p_mbar_m,
            p_mbar,
            inv_m,
            inv_mbar,
            s_m,
            s_mbar,
        })
    }

    /// The same chain with the roles of `M` and its complement exchanged.
    ///
    /// The swapped view is not re-validated: operations that need the new
    /// `(I - P_M)^-1` report a singular-matrix error if it does not exist.
    pub fn swapped(&self) -> Self {
        PartitionedChain {
            p: self.p.clone(),
            m_states: self.mbar_states.clone(),
            mbar_states: self.m_states.clone(),
            p_m: self.p_mbar.clone(),
            p_m_mbar: self.p_mbar_m.clone(),
            p_mbar_m: self.p_m_mbar.clone(),
            p_mbar: self.p_m.clone(),
            inv_m: self.inv_mbar.clone(),
            inv_mbar: self.inv_m.clone(),
            s_m: self.s_mbar.clone(),
            s_mbar: self.s_m.clone(),
        }
    }

    pub fn p(&self) -> &Matrix<T> {
        &self.p
    }

    pub fn m_states(&self) -> &[usize] {
        &self.m_states
    }

    pub fn mbar_states(&self) -> &[usize] {
        &self.mbar_states
    }

    pub fn m_size(&self) -> usize {
        self.m_states.len()
    }

    pub fn mbar_size(&self) -> usize {
        self.mbar_states.len()
    }

    pub fn p_m(&self) -> &Matrix<T> {
        &self.p_m
    }

    pub fn p_m_mbar(&self) -> &Matrix<T> {
        &self.p_m_mbar
    }

    pub fn p_mbar_m(&self) -> &Matrix<T> {
        &self.p_mbar_m
    }

    pub fn p_mbar(&self) -> &Matrix<T> {
        &self.p_mbar
    }

    /// `Q = P_MbarM P_MMbar`.
    pub fn q(&self) -> Matrix<T> {
        &self.p_mbar_m * &self.p_m_mbar
    }

    /// `Qbar = P_MMbar P_MbarM`.
    pub fn q_bar(&self) -> Matrix<T> {
        &self.p_m_mbar * &self.p_mbar_m
    }

    /// Common row sum of `P_M`, if any.
    pub fn s_m(&self) -> Option<&T> {
        self.s_m.as_ref()
    }

    /// Common row sum of `P_Mbar`, if any.
    pub fn s_mbar(&self) -> Option<&T> {
        self.s_mbar.as_ref()
    }

    /// `(I - P_M)^-1`.
    pub fn inv_m(&self) -> Result<&Matrix<T>, Error> {
        self.inv_m.as_ref().map_err(Clone::clone)
    }

    /// `(I - P_Mbar)^-1`.
    pub fn inv_mbar(&self) -> Result<&Matrix<T>, Error> {
        self.inv_mbar.as_ref().map_err(Clone::clone)
    }

    /// Puts the four blocks back into the original state order.
    pub fn reassemble(&self) -> Matrix<T> {
        let n = self.m_size() + self.mbar_size();
        let mut out = Matrix::zeros(n, n);
        let place = |states: &[usize], s: usize| states.iter().position(|&x| x == s);
        for r in 1..=n {
            for c in 1..=n {
                let v = match (place(&self.m_states, r), place(&self.m_states, c)) {
                    (Some(a), Some(b)) => self.p_m[(a, b)].clone(),
                    (Some(a), None) => {
                        self.p_m_mbar[(a, place(&self.mbar_states, c).unwrap())].clone()
                    }
                    (None, Some(b)) => {
                        self.p_mbar_m[(place(&self.mbar_states, r).unwrap(), b)].clone()
                    }
                    (None, None) => self.p_mbar[(
                        place(&self.mbar_states, r).unwrap(),
                        place(&self.mbar_states, c).unwrap(),
                    )]
                        .clone(),
                };
                out[(r - 1, c - 1)] = v;
            }
        }
        out
    }

    /// `M`-commutability (or `Mbar` for [`Side::MBar`]):
    /// `P_MMbar P_Mbar^s P_MbarM P_M^r = P_M^r P_MMbar P_Mbar^s P_MbarM`
    /// for all `r, s >= 0`.
    ///
    /// By Cayley-Hamilton every power of `P_M` (resp. `P_Mbar`) is a linear
    /// combination of the powers below its dimension, and the condition is
    /// linear in each power, so `r < |M|` and `s < |Mbar|` suffice.
    pub fn is_commutable(&self, side: Side) -> bool {
        match side {
            Side::M => self.commutable_up_to(self.m_size(), self.mbar_size()),
            Side::MBar => self.swapped().is_commutable(Side::M),
        }
    }

    /// The commutability condition checked for `r < r_max`, `s < s_max`.
    pub fn commutable_up_to(&self, r_max: usize, s_max: usize) -> bool {
        let mut pm_r = Matrix::identity(self.m_size());
        let mut pmb_s_list = Vec::with_capacity(s_max);
        let mut pmb_s = Matrix::identity(self.mbar_size());
        for _ in 0..s_max {
            // P_MMbar P_Mbar^s P_MbarM
            pmb_s_list.push(&(&self.p_m_mbar * &pmb_s) * &self.p_mbar_m);
            pmb_s = &pmb_s * &self.p_mbar;
        }
        for _ in 0..r_max {
            for inner in &pmb_s_list {
                if !(inner * &pm_r).approx_eq(&(&pm_r * inner)) {
                    return false;
                }
            }
            pm_r = &pm_r * &self.p_m;
        }
        true
    }
}

fn validate_stochastic<T: Scalar>(p: &Matrix<T>) -> Result<(), Error> {
    if !p.is_square() {
        return Err(Error::Dimension(format!(
            "transition matrix is {}x{}, expected square",
            p.rows(),
            p.cols()
        )));
    }
    for i in 0..p.rows() {
        if let Some(v) = p.row(i).iter().find(|v| !in_unit_interval(*v)) {
            return Err(Error::NotStochastic {
                row: i + 1,
                reason: format!("entry {v} outside [0, 1]"),
            });
        }
        let sum = p.row(i).iter().cloned().fold(T::zero(), |a, b| a + b);
        if !sum.approx_eq(&T::one()) {
            return Err(Error::NotStochastic {
                row: i + 1,
                reason: format!("row sum {sum} != 1"),
            });
        }
    }
    Ok(())
}
