//! Oracles shared by the integration tests.
//!
//! Nothing here calls the library's closed forms: moments come from the
//! first-step recursion and the convolution of independent excursions,
//! counts from explicit enumeration.

#![allow(dead_code)]

use mgstirling::chain::PartitionedChain;
use mgstirling::scalar::{int, rational};
use mgstirling::{Matrix, Rational, Variable};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = Rational;

pub fn q(n: i64) -> Q {
    int(n)
}

pub fn r(n: i64, d: i64) -> Q {
    rational(n, d)
}

/// The real test set used throughout: `{-5, -3, -1, -1/2, 0, 1/3, 1, 2, 5}`.
pub fn k_set() -> Vec<Q> {
    vec![
        q(-5),
        q(-3),
        q(-1),
        r(-1, 2),
        q(0),
        r(1, 3),
        q(1),
        q(2),
        q(5),
    ]
}

pub fn choose(n: usize, k: usize) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    Q::from_integer(acc)
}

pub fn qpow(x: &Q, e: usize) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

pub fn chain(rows: Vec<Vec<Q>>, m: &[usize]) -> PartitionedChain<Q> {
    PartitionedChain::partition(Matrix::from_rows(rows).expect("square"), m).expect("valid chain")
}

/// `[[1-p, p], [1-q, q]]` with `M = {1}`.
pub fn two_state(p: Q, qq: Q) -> PartitionedChain<Q> {
    chain(vec![vec![Q::one() - &p, p], vec![Q::one() - &qq, qq]], &[1])
}

fn solve_left_inverse(a: &Matrix<Q>) -> Matrix<Q> {
    let n = a.rows();
    let one_minus = &Matrix::identity(n) - a;
    one_minus.inverse().expect("I - block invertible")
}

/// `E[N_1^m ; X_{N_1} = .]` for `m = 0..=m_max` from the first-step equation
/// `(I - P_M) M_m = P_MMbar + P_M sum_{j<m} binom(m, j) M_j`.
pub fn n1_oracle(c: &PartitionedChain<Q>, m_max: usize) -> Vec<Matrix<Q>> {
    let inv = solve_left_inverse(c.p_m());
    let mut out: Vec<Matrix<Q>> = Vec::new();
    for m in 0..=m_max {
        let mut rhs = c.p_m_mbar().clone();
        for (j, mj) in out.iter().enumerate() {
            rhs = &rhs + &(c.p_m() * mj).scale(&choose(m, j));
        }
        out.push(&inv * &rhs);
    }
    out
}

/// `R_1 = 1` with `P_M`, else `1 + Nbar_1`:
/// `M_m(R_1) = P_M + P_MMbar sum_j binom(m, j) M_j(Nbar_1)`.
pub fn r1_oracle(c: &PartitionedChain<Q>, m_max: usize) -> Vec<Matrix<Q>> {
    let nbar = n1_oracle(&c.swapped(), m_max);
    (0..=m_max)
        .map(|m| {
            let mut inner = Matrix::zeros(c.mbar_size(), c.m_size());
            for (j, nj) in nbar.iter().enumerate().take(m + 1) {
                inner = &inner + &nj.scale(&choose(m, j));
            }
            c.p_m() + &(c.p_m_mbar() * &inner)
        })
        .collect()
}

fn convolve(left: &[Matrix<Q>], right: &[Matrix<Q>], m_max: usize) -> Vec<Matrix<Q>> {
    (0..=m_max)
        .map(|m| {
            let mut acc = Matrix::zeros(left[0].rows(), right[0].cols());
            for j in 0..=m {
                acc = &acc + &(&left[j] * &right[m - j]).scale(&choose(m, j));
            }
            acc
        })
        .collect()
}

/// Moments of `R_k` as `R_{k-1} + R_1`.
pub fn rk_oracle(c: &PartitionedChain<Q>, k: usize, m_max: usize) -> Vec<Matrix<Q>> {
    let r1 = r1_oracle(c, m_max);
    let mut acc = r1.clone();
    for _ in 1..k {
        acc = convolve(&acc, &r1, m_max);
    }
    acc
}

/// Moments of `N_k` as `N_1 + Rbar_{k-1}`.
pub fn nk_oracle(c: &PartitionedChain<Q>, k: usize, m_max: usize) -> Vec<Matrix<Q>> {
    let n1 = n1_oracle(c, m_max);
    if k == 1 {
        return n1;
    }
    convolve(&n1, &rk_oracle(&c.swapped(), k - 1, m_max), m_max)
}

pub fn oracle(c: &PartitionedChain<Q>, v: Variable, k: usize, m_max: usize) -> Vec<Matrix<Q>> {
    match v {
        Variable::N => nk_oracle(c, k, m_max),
        Variable::R => rk_oracle(c, k, m_max),
        Variable::NBar => nk_oracle(&c.swapped(), k, m_max),
        Variable::RBar => rk_oracle(&c.swapped(), k, m_max),
    }
}

/// Random weights `w_1..w_n >= 0` over a random denominator `d <= 12`
/// summing to `total * d / d`, i.e. to `total`.
fn random_row(rng: &mut ChaCha8Rng, n: usize, total: &Q) -> Vec<Q> {
    let d: i64 = rng.random_range(2..=12);
    let mut cuts: Vec<i64> = (0..n - 1).map(|_| rng.random_range(0..=d)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out = Vec::with_capacity(n);
    for c in cuts.iter().chain(std::iter::once(&d)) {
        out.push(r(c - prev, d) * total);
        prev = *c;
    }
    out
}

/// A random stochastic chain with `|M| = m` and `|Mbar| = mbar`, entries
/// with denominators at most 12, both `I - P_M` and `I - P_Mbar` invertible.
pub fn random_chain(rng: &mut ChaCha8Rng, m: usize, mbar: usize) -> PartitionedChain<Q> {
    loop {
        let n = m + mbar;
        let rows: Vec<Vec<Q>> = (0..n).map(|_| random_row(rng, n, &Q::one())).collect();
        let states: Vec<usize> = (1..=m).collect();
        if let Ok(c) = PartitionedChain::partition(Matrix::from_rows(rows).unwrap(), &states) {
            if c.inv_mbar().is_ok() {
                return c;
            }
        }
    }
}

/// A chain whose `P_M` has common row sum `s_m` (when given) and whose
/// `P_Mbar` has common row sum `s_mbar` (when given).
pub fn row_sum_chain(
    rng: &mut ChaCha8Rng,
    m: usize,
    mbar: usize,
    s_m: Option<Q>,
    s_mbar: Option<Q>,
) -> PartitionedChain<Q> {
    loop {
        let mut rows = Vec::new();
        for (own, other, s) in [(m, mbar, &s_m), (mbar, m, &s_mbar)] {
            for _ in 0..own {
                let row = match s {
                    Some(s) => {
                        let mut inside = random_row(rng, own, s);
                        inside.extend(random_row(rng, other, &(Q::one() - s)));
                        inside
                    }
                    None => random_row(rng, own + other, &Q::one()),
                };
                rows.push(row);
            }
        }
        // rows are laid out [M-block | Mbar-block] for M rows and
        // [Mbar-block | M-block] for Mbar rows; put the latter in state order
        for row in rows.iter_mut().skip(m) {
            row.rotate_left(mbar);
        }
        let states: Vec<usize> = (1..=m).collect();
        if let Ok(c) = PartitionedChain::partition(Matrix::from_rows(rows).unwrap(), &states) {
            if c.inv_mbar().is_ok() {
                return c;
            }
        }
    }
}

/// `alpha I + beta J` (J all ones) of size n.
pub fn ij_block(n: usize, alpha: &Q, beta: &Q) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { alpha + beta } else { beta.clone() })
                .collect()
        })
        .collect()
}

/// Every block lies in the commutative algebra spanned by `I` and `J`, so
/// the chain is both `M`- and `Mbar`-commutable.
pub fn ij_chain(
    n: usize,
    pm: (Q, Q),
    pmmbar: (Q, Q),
    pmbarm: (Q, Q),
    pmbar: (Q, Q),
) -> PartitionedChain<Q> {
    let b = |(a, bb): (Q, Q)| ij_block(n, &a, &bb);
    let (a, bm, cm, d) = (b(pm), b(pmmbar), b(pmbarm), b(pmbar));
    let mut rows = Vec::new();
    for i in 0..n {
        rows.push(a[i].iter().chain(bm[i].iter()).cloned().collect());
    }
    for i in 0..n {
        rows.push(cm[i].iter().chain(d[i].iter()).cloned().collect());
    }
    let states: Vec<usize> = (1..=n).collect();
    chain(rows, &states)
}

/// `S(i, j)` by the set partition recurrence.
pub fn stirling2_oracle(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for i in 1..=n {
        for j in 1..=i {
            s[i][j] = BigInt::from(j) * &s[i - 1][j] + &s[i - 1][j - 1];
        }
    }
    s
}

/// `hist[t]` = number of maps `{1..i} -> {1..n}` whose image contains
/// exactly `{1..t}` as its longest covered prefix.
pub fn prefix_cover_histogram(i: usize, n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    if n == 0 {
        if i == 0 {
            hist[0] = 1;
        }
        return hist;
    }
    let mut digits = vec![0usize; i];
    loop {
        let mut seen = 0u64;
        for &d in &digits {
            seen |= 1 << d;
        }
        hist[seen.trailing_ones() as usize] += 1;
        let mut pos = 0;
        loop {
            if pos == i {
                return hist;
            }
            digits[pos] += 1;
            if digits[pos] < n {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Number of maps `{1..i} -> {1..j+k}` whose image contains `{1..j}`.
pub fn surjection_oracle(i: usize, j: usize, k: usize) -> u64 {
    prefix_cover_histogram(i, j + k)[j..].iter().sum()
}

/// `C_m = sum_j binom(m, j) (-M_1)^(m-j) M_j`.
pub fn central_oracle(raw: &[Q]) -> Vec<Q> {
    let neg = -raw[1].clone();
    (0..raw.len())
        .map(|m| {
            (0..=m)
                .map(|j| choose(m, j) * qpow(&neg, m - j) * &raw[j])
                .sum()
        })
        .collect()
}
