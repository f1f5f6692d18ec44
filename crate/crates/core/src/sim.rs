//! Monte Carlo estimates of passage and recurrence time moments.
//!
//! Transition rows are converted to `f64` cumulative sums once. Randomness
//! comes from `ChaCha8Rng` seeded with `seed_from_u64(seed)`; replications
//! are split into [`CHUNKS`] fixed chunks, chunk `c` drawing from stream `c`.
//! Chunk statistics are merged in chunk order, so the output depends only
//! on the configuration and not on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::PartitionedChain;
use crate::error::Error;
use crate::matrix::Matrix;
use crate::moments::{moment_k_convolved, Variable};
use crate::scalar::Scalar;

pub const CHUNKS: usize = 64;
pub const MAX_MOMENT: usize = 4;
/// Largest tolerated fraction of runs cut off at `max_steps`.
pub const MAX_TRUNCATED_FRACTION: f64 = 0.01;

#[derive(Debug, Clone)]
pub struct SimConfig<T> {
    pub chain: PartitionedChain<T>,
    /// Initial distribution over the start block (`M`, or `Mbar` for the
    /// barred variables), in increasing state order.
    pub start: Vec<T>,
    pub variable: Variable,
    pub k: usize,
    pub replications: usize,
    pub seed: u64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub m: usize,
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub replications: usize,
    pub completed: usize,
    pub truncated: usize,
    pub estimates: Vec<Estimate>,
}

/// Running mean and centred second moment of `T^1..T^4`.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    n: u64,
    mean: [f64; MAX_MOMENT],
    m2: [f64; MAX_MOMENT],
    truncated: u64,
}

impl Accumulator {
    fn push(&mut self, t: f64) {
        self.n += 1;
        let n = self.n as f64;
        let mut x = 1.0;
        for i in 0..MAX_MOMENT {
            x *= t;
            let delta = x - self.mean[i];
            self.mean[i] += delta / n;
            self.m2[i] += delta * (x - self.mean[i]);
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        self.truncated += other.truncated;
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            let truncated = self.truncated;
            *self = *other;
            self.truncated = truncated;
            return;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        for i in 0..MAX_MOMENT {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * nb / n;
            self.m2[i] += other.m2[i] + delta * delta * na * nb / n;
        }
        self.n += other.n;
    }
}

struct Walker {
    cumulative: Vec<Vec<f64>>,
    target: Vec<bool>,
    start_states: Vec<usize>,
    start_cumulative: Vec<f64>,
    k: usize,
    max_steps: usize,
}

/// Running sums with everything from the last positive weight on set to
/// infinity, so rounding can never select a zero-weight state.
fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let weights: Vec<f64> = weights.collect();
    let mut acc = 0.0;
    let mut out: Vec<f64> = weights
        .iter()
        .map(|w| {
            acc += w;
            acc
        })
        .collect();
    if let Some(last) = weights.iter().rposition(|&w| w > 0.0) {
        out[last..].iter_mut().for_each(|c| *c = f64::INFINITY);
    }
    out
}

fn sample(cum: &[f64], u: f64) -> usize {
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

impl Walker {
    /// `None` if the run hits `max_steps`.
    fn run(&self, rng: &mut ChaCha8Rng) -> Option<usize> {
        let mut state = self.start_states[sample(&self.start_cumulative, rng.random())];
        let mut hits = 0;
        for step in 1..=self.max_steps {
            state = sample(&self.cumulative[state], rng.random());
            if self.target[state] {
                hits += 1;
                if hits == self.k {
                    return Some(step);
                }
            }
        }
        None
    }
}

fn build_walker<T: Scalar>(cfg: &SimConfig<T>) -> Result<Walker, Error> {
    if cfg.k == 0 {
        return Err(Error::Domain("k must be a positive integer".into()));
    }
    if cfg.replications == 0 {
        return Err(Error::Domain("replications must be positive".into()));
    }
    if cfg.max_steps == 0 {
        return Err(Error::Domain("max_steps must be positive".into()));
    }
    let (start_block, other_block) = match cfg.variable {
        Variable::N | Variable::R => (cfg.chain.m_states(), cfg.chain.mbar_states()),
        Variable::NBar | Variable::RBar => (cfg.chain.mbar_states(), cfg.chain.m_states()),
    };
    if cfg.start.len() != start_block.len() {
        return Err(Error::Dimension(format!(
            "start vector has {} entries, start block has {} states",
            cfg.start.len(),
            start_block.len()
        )));
    }
    if cfg.start.iter().any(|v| *v < T::zero()) {
        return Err(Error::Precondition(
            "start vector has a negative entry".into(),
        ));
    }
    let total = cfg.start.iter().cloned().fold(T::zero(), |a, b| a + b);
    if !total.approx_eq(&T::one()) {
        return Err(Error::Precondition(format!(
            "start vector sums to {total}, expected 1"
        )));
    }
    let target_block = match cfg.variable {
        Variable::N | Variable::NBar => other_block,
        Variable::R | Variable::RBar => start_block,
    };
    let p = cfg.chain.p();
    let n = p.rows();
    let mut target = vec![false; n];
    for &s in target_block {
        target[s - 1] = true;
    }
    Ok(Walker {
        cumulative: (0..n)
            .map(|i| cumulative(p.row(i).iter().map(Scalar::to_f64)))
            .collect(),
        target,
        start_states: start_block.iter().map(|s| s - 1).collect(),
        start_cumulative: cumulative(cfg.start.iter().map(Scalar::to_f64)),
        k: cfg.k,
        max_steps: cfg.max_steps,
    })
}

/// Estimates `E[T^m]`, `m = 1..4`, for the configured passage or recurrence
/// time `T`, with standard errors of the sample means.
///
/// Fails with [`Error::Truncated`] when more than 1% of the runs hit
/// `max_steps`; truncated runs never enter the estimates.
pub fn simulate<T: Scalar>(cfg: &SimConfig<T>) -> Result<SimReport, Error> {
    let walker = build_walker(cfg)?;
    let base = cfg.replications / CHUNKS;
    let extra = cfg.replications % CHUNKS;
    let chunks: Vec<Accumulator> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let reps = base + usize::from(c < extra);
            let mut acc = Accumulator::default();
            for _ in 0..reps {
                match walker.run(&mut rng) {
                    Some(t) => acc.push(t as f64),
                    None => acc.truncated += 1,
                }
            }
            acc
        })
        .collect();
    let total = chunks.iter().fold(Accumulator::default(), |mut a, c| {
        a.merge(c);
        a
    });
    let truncated = total.truncated as usize;
    if truncated as f64 > MAX_TRUNCATED_FRACTION * cfg.replications as f64 {
        return Err(Error::Truncated {
            truncated,
            replications: cfg.replications,
        });
    }
    let n = total.n as f64;
    let estimates = (0..MAX_MOMENT)
        .map(|i| {
            let var = if total.n > 1 {
                total.m2[i] / (n - 1.0)
            } else {
                0.0
            };
            Estimate {
                m: i + 1,
                mean: total.mean[i],
                std_error: (var / n).sqrt(),
            }
        })
        .collect();
    Ok(SimReport {
        replications: cfg.replications,
        completed: total.n as usize,
        truncated,
        estimates,
    })
}

/// `start . M_m . e`, the exact value the estimate of order `m` targets.
pub fn exact_moment<T: Scalar>(cfg: &SimConfig<T>, m: usize) -> Result<T, Error> {
    let moment = moment_k_convolved(&cfg.chain, cfg.variable, cfg.k, m)?;
    let start = Matrix::from_rows(vec![cfg.start.clone()])?;
    Ok((&(&start * &moment) * &Matrix::ones(moment.cols())).total())
}

/// Uniform start vector over the start block of `variable`.
pub fn uniform_start<T: Scalar>(chain: &PartitionedChain<T>, variable: Variable) -> Vec<T> {
    let n = match variable {
        Variable::N | Variable::R => chain.m_size(),
        Variable::NBar | Variable::RBar => chain.mbar_size(),
    };
    vec![T::one() / T::from_i64(n as i64); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};
    use num_rational::BigRational;

    fn chain(rows: Vec<Vec<BigRational>>, m: &[usize]) -> PartitionedChain<BigRational> {
        PartitionedChain::partition(Matrix::from_rows(rows).unwrap(), m).unwrap()
    }

    fn config(
        c: PartitionedChain<BigRational>,
        variable: Variable,
        k: usize,
        reps: usize,
    ) -> SimConfig<BigRational> {
        SimConfig {
            start: uniform_start(&c, variable),
            chain: c,
            variable,
            k,
            replications: reps,
            seed: 42,
            max_steps: 10_000,
        }
    }

    #[test]
    fn geometric_mean() {
        let c = chain(
            vec![
                vec![rational(1, 2), rational(1, 2)],
                vec![rational(1, 2), rational(1, 2)],
            ],
            &[1],
        );
        let cfg = config(c, Variable::N, 1, 100_000);
        let r = simulate(&cfg).unwrap();
        let est = &r.estimates[0];
        assert!((est.mean - 2.0).abs() < 5.0 * est.std_error, "{est:?}");
        assert_eq!(exact_moment(&cfg, 1).unwrap(), int(2));
    }

    #[test]
    fn deterministic_passage() {
        let c = chain(
            vec![
                vec![int(0), int(0), int(1), int(0)],
                vec![int(0), int(0), int(0), int(1)],
                vec![rational(1, 2), rational(1, 2), int(0), int(0)],
                vec![rational(1, 2), rational(1, 2), int(0), int(0)],
            ],
            &[1, 2],
        );
        let r = simulate(&config(c, Variable::N, 1, 1_000)).unwrap();
        for e in &r.estimates {
            assert_eq!(e.mean, 1.0);
            assert_eq!(e.std_error, 0.0);
        }
    }

    #[test]
    fn same_seed_same_output() {
        let c = chain(
            vec![
                vec![rational(1, 2), rational(1, 2)],
                vec![rational(2, 3), rational(1, 3)],
            ],
            &[1],
        );
        let cfg = config(c, Variable::R, 2, 5_000);
        assert_eq!(simulate(&cfg).unwrap(), simulate(&cfg).unwrap());
    }

    #[test]
    fn truncation_is_reported() {
        let c = chain(
            vec![
                vec![rational(99, 100), rational(1, 100)],
                vec![int(1), int(0)],
            ],
            &[1],
        );
        let mut cfg = config(c, Variable::N, 1, 1_000);
        cfg.max_steps = 5;
        assert!(matches!(simulate(&cfg), Err(Error::Truncated { .. })));
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (1..50).map(|v| (v * 7 % 13) as f64).collect();
        let mut whole = Accumulator::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (Accumulator::default(), Accumulator::default());
        xs[..20].iter().for_each(|&x| a.push(x));
        xs[20..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        for i in 0..MAX_MOMENT {
            assert!((a.mean[i] - whole.mean[i]).abs() <= 1e-9 * whole.mean[i].abs());
            assert!((a.m2[i] - whole.m2[i]).abs() <= 1e-9 * whole.m2[i].abs());
        }
    }
}
