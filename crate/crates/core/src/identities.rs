//! The catalogue of MSN identities, checked with exact arithmetic.
//!
//! Every identity is evaluated over its own parameter grid and reports the
//! number of cases checked and failed. Grids are bounded by `i_max` for the
//! first two parameters and use the fixed set [`test_set`] for real `k`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::msn::{msn_direct, msn_shift, MsnTable};
use crate::msn1::{msn1_matrix, scaled_msn_matrix, stirling1_triangle, Msn1Table};
use crate::scalar::{binom, binom_gen, factorial, int, multinom, pow, rational, sign, Scalar};
use crate::series::{
    binomial_gf_value, double_egf_in_j, double_egf_in_k, egf_coeffs, ogf_coeffs, TruncatedSeries,
};

type Q = BigRational;

/// `{-5, -3, -1, -1/2, 0, 1/3, 1, 2, 5}`.
pub fn test_set() -> Vec<Q> {
    vec![
        int(-5),
        int(-3),
        int(-1),
        rational(-1, 2),
        int(0),
        rational(1, 3),
        int(1),
        int(2),
        int(5),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityResult {
    pub name: &'static str,
    pub formula: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl IdentityResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn eq(&mut self, lhs: Q, rhs: Q, ctx: impl FnOnce() -> String) {
        self.cases += 1;
        if lhs != rhs {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(format!("{}: {lhs} != {rhs}", ctx()));
            }
        }
    }
}

/// Memoised `b(i, j, k)` over many values of `k`.
struct Bank {
    rows: usize,
    tables: RefCell<HashMap<Q, MsnTable<Q>>>,
}

impl Bank {
    fn new(rows: usize) -> Self {
        Bank {
            rows,
            tables: RefCell::new(HashMap::new()),
        }
    }

    fn b(&self, i: usize, j: usize, k: &Q) -> Q {
        let mut tables = self.tables.borrow_mut();
        tables
            .entry(k.clone())
            .or_insert_with(|| MsnTable::new(self.rows, k.clone()))
            .get(i, j)
    }
}

fn q(n: usize) -> Q {
    int(n as i64)
}

fn qi(n: i64) -> Q {
    int(n)
}

fn bq(n: i64, r: i64) -> Q {
    Q::from_integer(binom(n, r))
}

fn fact(n: usize) -> Q {
    Q::from_integer(factorial(n))
}

fn sum(range: impl Iterator<Item = Q>) -> Q {
    range.fold(Q::zero(), |a, b| a + b)
}

/// All `(i_1, ..., i_parts)` of nonnegative integers summing to `total`.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Counts of maps `{1..i} -> {1..n}` whose image contains `{1..j}`, for
/// every `j <= n`, by enumerating all `n^i` maps.
pub fn surjection_counts(i: usize, n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    if n == 0 {
        counts[0] = u64::from(i == 0);
        return counts;
    }
    let total = (n as u64).pow(i as u32);
    for code in 0..total {
        let mut c = code;
        let mut image = 0u32;
        for _ in 0..i {
            image |= 1 << (c % n as u64);
            c /= n as u64;
        }
        for (j, slot) in counts.iter_mut().enumerate() {
            let want = (1u32 << j) - 1;
            if image & want == want {
                *slot += 1;
            }
        }
    }
    counts
}

struct Battery {
    i_max: usize,
    ks: Vec<Q>,
    bank: Bank,
    results: Vec<IdentityResult>,
}

impl Battery {
    fn record(
        &mut self,
        name: &'static str,
        formula: &'static str,
        f: impl FnOnce(&Self, &mut Tally),
    ) {
        let mut t = Tally::default();
        f(self, &mut t);
        self.results.push(IdentityResult {
            name,
            formula,
            cases: t.cases,
            failures: t.failures,
            first_failure: t.first_failure,
        });
    }

    fn b(&self, i: usize, j: usize, k: &Q) -> Q {
        self.bank.b(i, j, k)
    }
}

/// Runs every identity with the first two parameters bounded by `i_max`
/// (capped further where an identity has its own smaller grid).
pub fn run_battery(i_max: usize) -> Vec<IdentityResult> {
    let mut bat = Battery {
        i_max,
        ks: test_set(),
        bank: Bank::new(i_max + 2),
        results: Vec::new(),
    };
    basic_values(&mut bat);
    recurrences(&mut bat);
    first_parameter_sums(&mut bat);
    convolutions(&mut bat);
    expansions(&mut bat);
    alternating_sums(&mut bat);
    third_parameter(&mut bat);
    multinomial(&mut bat);
    first_kind(&mut bat);
    generating_functions(&mut bat);
    bat.results
}

fn basic_values(bat: &mut Battery) {
    let n = bat.i_max;
    bat.record(
        "definition vs table",
        "b(i,j,k) = sum_r binom(j,r) (-1)^(j-r) (r+k)^i",
        |s, t| {
            for k in &s.ks {
                for i in 0..=n {
                    for j in 0..=n {
                        t.eq(s.b(i, j, k), msn_direct(i, j, k), || {
                            format!("i={i} j={j} k={k}")
                        });
                    }
                }
            }
        },
    );
    bat.record(
        "boundary values",
        "b(0,j,k) = [j=0], b(i,0,k) = k^i",
        |s, t| {
            for k in &s.ks {
                for j in 0..=n {
                    let want = if j == 0 { Q::one() } else { Q::zero() };
                    t.eq(s.b(0, j, k), want, || format!("j={j} k={k}"));
                }
                for i in 0..=n {
                    t.eq(s.b(i, 0, k), pow(k, i), || format!("i={i} k={k}"));
                }
            }
        },
    );
    bat.record("stirling slice", "b(i,j,0) = S(i,j) j!", |s, t| {
        // S(i+1, j) = S(i, j-1) + j S(i, j)
        let mut st = vec![vec![BigInt::zero(); n + 2]; n + 1];
        st[0][0] = BigInt::one();
        for i in 0..n {
            for j in 1..=n {
                st[i + 1][j] = &st[i][j - 1] + BigInt::from(j) * &st[i][j];
            }
        }
        for (i, row) in st.iter().enumerate() {
            for (j, v) in row.iter().enumerate().take(n + 1) {
                let want = Q::from_integer(v * factorial(j));
                t.eq(s.b(i, j, &Q::zero()), want, || format!("i={i} j={j}"));
            }
        }
    });
    bat.record(
        "second parameter one",
        "b(i,1,k) = (k+1)^i - k^i",
        |s, t| {
            for k in &s.ks {
                for i in 0..=n {
                    t.eq(s.b(i, 1, k), pow(&(k + Q::one()), i) - pow(k, i), || {
                        format!("i={i} k={k}")
                    });
                }
            }
        },
    );
    bat.record(
        "vanishing above diagonal",
        "b(i,j,k) = 0 for i < j",
        |s, t| {
            for k in &s.ks {
                for i in 0..=n {
                    for j in i + 1..=n + 1 {
                        t.eq(s.b(i, j, k), Q::zero(), || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record("diagonal", "b(i,i,k) = i!", |s, t| {
        for k in &s.ks {
            for i in 0..=n {
                t.eq(s.b(i, i, k), fact(i), || format!("i={i} k={k}"));
            }
        }
    });
    bat.record("subdiagonal", "b(i+1,i,k) = (i+1)! (i+2k)/2", |s, t| {
        for k in &s.ks {
            for i in 0..n {
                let want = fact(i + 1) * (q(i) + qi(2) * k) / qi(2);
                t.eq(s.b(i + 1, i, k), want, || format!("i={i} k={k}"));
            }
        }
    });
    bat.record(
        "unit shift at k=1",
        "(j+1) b(i,j,1) = b(i+1,j+1,0)",
        |s, t| {
            for i in 0..n {
                for j in 0..=n {
                    t.eq(
                        q(j + 1) * s.b(i, j, &Q::one()),
                        s.b(i + 1, j + 1, &Q::zero()),
                        || format!("i={i} j={j}"),
                    );
                }
            }
        },
    );
    bat.record(
        "first parameter one",
        "b(1,j,k) = k, 1, 0 for j = 0, 1, >1",
        |s, t| {
            for k in &s.ks {
                for j in 0..=n {
                    let want = match j {
                        0 => k.clone(),
                        1 => Q::one(),
                        _ => Q::zero(),
                    };
                    t.eq(s.b(1, j, k), want, || format!("j={j} k={k}"));
                }
            }
        },
    );
    bat.record("reflection", "b(i,j,k-j) = (-1)^(i+j) b(i,j,-k)", |s, t| {
        for k in &s.ks {
            for i in 0..=n {
                for j in 0..=n {
                    let lhs = s.b(i, j, &(k - q(j)));
                    t.eq(lhs, sign::<Q>(i + j) * s.b(i, j, &(-k)), || {
                        format!("i={i} j={j} k={k}")
                    });
                }
            }
        }
    });
    bat.record(
        "odd vanishing",
        "b(i,2k,-k) = 0 for integer k >= 0, i odd",
        |s, t| {
            for k in 0..=n / 2 {
                for i in (1..=n).step_by(2) {
                    t.eq(s.b(i, 2 * k, &-q(k)), Q::zero(), || format!("i={i} k={k}"));
                }
            }
        },
    );
}

fn recurrences(bat: &mut Battery) {
    let n = bat.i_max;
    bat.record(
        "third parameter step",
        "b(i,j,k+1) = b(i,j,k) + b(i,j+1,k)",
        |s, t| {
            for k in &s.ks {
                for i in 0..=n {
                    for j in 0..=n {
                        t.eq(
                            s.b(i, j, &(k + Q::one())),
                            s.b(i, j, k) + s.b(i, j + 1, k),
                            || format!("i={i} j={j} k={k}"),
                        );
                    }
                }
            }
        },
    );
    bat.record(
        "row recurrence",
        "b(i+1,j+1,k) = (j+1) b(i,j,k) + (j+1+k) b(i,j+1,k)",
        |s, t| {
            for k in &s.ks {
                for i in 0..n {
                    for j in 0..n {
                        let rhs = q(j + 1) * msn_direct(i, j, k)
                            + (q(j + 1) + k) * msn_direct(i, j + 1, k);
                        t.eq(msn_direct(i + 1, j + 1, k), rhs, || {
                            format!("i={i} j={j} k={k}")
                        });
                    }
                }
            }
        },
    );
    bat.record(
        "mixed recurrence",
        "b(i+1,j+1,k) = (j+1) b(i,j,k+1) + k b(i,j+1,k)",
        |s, t| {
            for k in &s.ks {
                for i in 0..n {
                    for j in 0..n {
                        let rhs = q(j + 1) * s.b(i, j, &(k + Q::one())) + k * s.b(i, j + 1, k);
                        t.eq(s.b(i + 1, j + 1, k), rhs, || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
}

fn first_parameter_sums(bat: &mut Battery) {
    let n = bat.i_max;
    bat.record(
        "sum raising j",
        "b(i,j+1,k) = sum_{r<i} binom(i,r) b(r,j,k)",
        |s, t| {
            for k in &s.ks {
                for i in 0..=n {
                    for j in 0..n {
                        let rhs = sum((0..i).map(|r| bq(i as i64, r as i64) * s.b(r, j, k)));
                        t.eq(s.b(i, j + 1, k), rhs, || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record(
        "sum raising k",
        "b(i,j,k+1) = sum_{r<=i} binom(i,r) b(r,j,k)",
        |s, t| {
            for k in &s.ks {
                for i in 0..=n {
                    for j in 0..=n {
                        let rhs = sum((0..=i).map(|r| bq(i as i64, r as i64) * s.b(r, j, k)));
                        t.eq(s.b(i, j, &(k + Q::one())), rhs, || {
                            format!("i={i} j={j} k={k}")
                        });
                    }
                }
            }
        },
    );
    bat.record(
        "sum raising i and j",
        "b(i+1,j+1,k) = (j+1) sum_r binom(i,r) b(r,j,k) + k b(i,j+1,k)",
        |s, t| {
            for k in &s.ks {
                for i in 0..n {
                    for j in 0..n {
                        let inner = sum((0..=i).map(|r| bq(i as i64, r as i64) * s.b(r, j, k)));
                        let rhs = q(j + 1) * inner + k * s.b(i, j + 1, k);
                        t.eq(s.b(i + 1, j + 1, k), rhs, || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record(
        "geometric sum over i",
        "b(i+1,j+1,k) = (j+1) sum_{r=j}^{i} b(r,j,k) (j+k+1)^(i-r)",
        |s, t| {
            for k in &s.ks {
                for i in 0..n {
                    for j in 0..n {
                        let base = q(j + 1) + k;
                        let inner = sum((j..=i).map(|r| s.b(r, j, k) * pow(&base, i - r)));
                        t.eq(s.b(i + 1, j + 1, k), q(j + 1) * inner, || {
                            format!("i={i} j={j} k={k}")
                        });
                    }
                }
            }
        },
    );
    bat.record(
        "geometric sum over i, shifted k",
        "b(i+1,j+1,k) = (j+1) sum_{r=j}^{i} b(r,j,k+1) k^(i-r)",
        |s, t| {
            for k in &s.ks {
                for i in 0..n {
                    for j in 0..n {
                        let k1 = k + Q::one();
                        let inner = sum((j..=i).map(|r| s.b(r, j, &k1) * pow(k, i - r)));
                        t.eq(s.b(i + 1, j + 1, k), q(j + 1) * inner, || {
                            format!("i={i} j={j} k={k}")
                        });
                    }
                }
            }
        },
    );
}

fn convolutions(bat: &mut Battery) {
    let n = bat.i_max;
    let jsum = 8.min(n);
    bat.record(
        "convolution",
        "b(i,j1+j2,k1+k2) = sum_r binom(i,r) b(r,j1,k1) b(i-r,j2,k2)",
        |s, t| {
            for k1 in &s.ks {
                for k2 in &s.ks {
                    let k12 = k1 + k2;
                    for j1 in 0..=jsum {
                        for j2 in 0..=jsum - j1 {
                            for i in 0..=n {
                                let rhs = sum((0..=i).map(|r| {
                                    bq(i as i64, r as i64) * s.b(r, j1, k1) * s.b(i - r, j2, k2)
                                }));
                                t.eq(s.b(i, j1 + j2, &k12), rhs, || {
                                    format!("i={i} j1={j1} j2={j2} k1={k1} k2={k2}")
                                });
                            }
                        }
                    }
                }
            }
        },
    );
    bat.record(
        "convolution with opposite shifts",
        "b(i,j1+j2,0) = sum_r binom(i,r) b(r,j1,k) b(i-r,j2,-k)",
        |s, t| {
            for k in &s.ks {
                let nk = -k;
                for j1 in 0..=jsum {
                    for j2 in 0..=jsum - j1 {
                        for i in 0..=n {
                            let rhs = sum((0..=i).map(|r| {
                                bq(i as i64, r as i64) * s.b(r, j1, k) * s.b(i - r, j2, &nk)
                            }));
                            t.eq(s.b(i, j1 + j2, &Q::zero()), rhs, || {
                                format!("i={i} j1={j1} j2={j2} k={k}")
                            });
                        }
                    }
                }
            }
        },
    );
    bat.record(
        "unshift",
        "b(i,j,0) = sum_r binom(i,r) k^r b(i-r,j,-k)",
        |s, t| {
            for k in &s.ks {
                for i in 0..=n {
                    for j in 0..=n {
                        let rhs = sum((0..=i)
                            .map(|r| bq(i as i64, r as i64) * pow(k, r) * s.b(i - r, j, &-k)));
                        t.eq(s.b(i, j, &Q::zero()), rhs, || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record(
        "shift from zero",
        "b(i,j,k) = sum_r binom(i,r) k^(i-r) b(r,j,0)",
        |s, t| {
            for k in &s.ks {
                for i in 0..=n {
                    for j in 0..=n {
                        let rhs = sum((0..=i).map(|r| {
                            bq(i as i64, r as i64) * pow(k, i - r) * s.b(r, j, &Q::zero())
                        }));
                        t.eq(s.b(i, j, k), rhs, || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record(
        "additive shift",
        "b(i,j,k1+k2) = sum_r binom(i,r) k1^(i-r) b(r,j,k2)",
        |s, t| {
            for k1 in &s.ks {
                for k2 in &s.ks {
                    let k12 = k1 + k2;
                    for i in 0..=n {
                        for j in 0..=n {
                            let rhs = sum((0..=i)
                                .map(|r| bq(i as i64, r as i64) * pow(k1, i - r) * s.b(r, j, k2)));
                            t.eq(s.b(i, j, &k12), rhs, || {
                                format!("i={i} j={j} k1={k1} k2={k2}")
                            });
                        }
                    }
                }
            }
        },
    );
    bat.record(
        "lowered j",
        "j b(i,j-1,k+1) = sum_r binom(i,r) k^(i-r) b(r+1,j,0)",
        |s, t| {
            for k in &s.ks {
                for i in 0..=n {
                    for j in 1..=n {
                        let rhs = sum((0..=i).map(|r| {
                            bq(i as i64, r as i64) * pow(k, i - r) * s.b(r + 1, j, &Q::zero())
                        }));
                        t.eq(q(j) * s.b(i, j - 1, &(k + Q::one())), rhs, || {
                            format!("i={i} j={j} k={k}")
                        });
                    }
                }
            }
        },
    );
}

fn expansions(bat: &mut Battery) {
    let n = bat.i_max;
    bat.record(
        "power expansion",
        "(n+k)^i = sum_r binom(n,r) b(i,r,k)",
        |s, t| {
            for k in &s.ks {
                for m in 0..=10 {
                    for i in 0..=n {
                        let rhs = sum((0..=i).map(|r| bq(m, r as i64) * s.b(i, r, k)));
                        t.eq(pow(&(qi(m) + k), i), rhs, || format!("n={m} i={i} k={k}"));
                    }
                }
            }
        },
    );
    bat.record(
        "power expansion, offset",
        "(n+k)^i = sum_r binom(n+l,r) b(i,r,k-l) for n+l >= 0",
        |s, t| {
            for k in &s.ks {
                for l in -3i64..=3 {
                    for m in 0..=10i64 {
                        if m + l < 0 {
                            continue;
                        }
                        for i in 0..=n {
                            let kl = k - qi(l);
                            let rhs = sum((0..=i).map(|r| bq(m + l, r as i64) * s.b(i, r, &kl)));
                            t.eq(pow(&(qi(m) + k), i), rhs, || {
                                format!("n={m} l={l} i={i} k={k}")
                            });
                        }
                    }
                }
            }
        },
    );
    bat.record(
        "power expansion, scaled",
        "(l n+k)^i = sum_r binom(n,r) b(i,r,(l-1) n+k) for l >= 0",
        |s, t| {
            for k in &s.ks {
                for l in 0..=3i64 {
                    for m in 0..=10i64 {
                        let kk = qi((l - 1) * m) + k;
                        for i in 0..=n {
                            let rhs = sum((0..=i).map(|r| bq(m, r as i64) * s.b(i, r, &kk)));
                            t.eq(pow(&(qi(l * m) + k), i), rhs, || {
                                format!("n={m} l={l} i={i} k={k}")
                            });
                        }
                    }
                }
            }
        },
    );
}

fn alternating_sums(bat: &mut Battery) {
    let n = bat.i_max;
    bat.record(
        "alternating sum over j",
        "sum_{r<=j} (-1)^(j-r) b(i,r,k) = b(i,j+1,k-1) + (-1)^j (k-1)^i",
        |s, t| {
            for k in &s.ks {
                let km1 = k - Q::one();
                for i in 0..=n {
                    for j in 0..=n {
                        let lhs = sum((0..=j).map(|r| sign::<Q>(j - r) * s.b(i, r, k)));
                        let rhs = s.b(i, j + 1, &km1) + sign::<Q>(j) * pow(&km1, i);
                        t.eq(lhs, rhs, || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record(
        "alternating sum at k=1",
        "sum_{r<=j} (-1)^(j-r) b(i,r,1) = b(i,j+1,0) for i, j >= 1",
        |s, t| {
            for i in 1..=n {
                for j in 1..=n {
                    let lhs = sum((0..=j).map(|r| sign::<Q>(j - r) * s.b(i, r, &Q::one())));
                    t.eq(lhs, s.b(i, j + 1, &Q::zero()), || format!("i={i} j={j}"));
                }
            }
        },
    );
    bat.record(
        "alternating row sum below diagonal",
        "sum_{r<i} (-1)^(i-1-r) b(i,r,k) = i! + (-1)^(i-1) (k-1)^i",
        |s, t| {
            for k in &s.ks {
                for i in 1..=n {
                    let lhs = sum((0..i).map(|r| sign::<Q>(i - 1 - r) * s.b(i, r, k)));
                    let rhs = fact(i) + sign::<Q>(i - 1) * pow(&(k - Q::one()), i);
                    t.eq(lhs, rhs, || format!("i={i} k={k}"));
                }
            }
        },
    );
    bat.record(
        "alternating row sum",
        "sum_r (-1)^r b(i,r,k) = (k-1)^i",
        |s, t| {
            for k in &s.ks {
                for i in 0..=n {
                    let lhs = sum((0..=i).map(|r| sign::<Q>(r) * s.b(i, r, k)));
                    t.eq(lhs, pow(&(k - Q::one()), i), || format!("i={i} k={k}"));
                }
            }
        },
    );
    bat.record(
        "alternating row sum at k=0",
        "sum_r (-1)^(i-r) b(i,r,0) = 1",
        |s, t| {
            for i in 0..=n {
                let lhs = sum((0..=i).map(|r| sign::<Q>(i - r) * s.b(i, r, &Q::zero())));
                t.eq(lhs, Q::one(), || format!("i={i}"));
            }
        },
    );
    let int_ks: Vec<i64> = bat
        .ks
        .iter()
        .filter_map(|k| k.to_bigint_exact())
        .map(|k| i64::try_from(k).expect("small test value"))
        .collect();
    bat.record(
        "binomial inversion to k=0",
        "sum_{r=j}^{i} (-1)^(i-r) binom(r+k-1,r-j) b(i,r,k) = b(i,j,0) for integer k >= 1-j",
        |s, t| {
            for &k in &int_ks {
                for i in 0..=n {
                    for j in 0..=i {
                        if k < 1 - j as i64 {
                            continue;
                        }
                        let lhs = sum((j..=i).map(|r| {
                            sign::<Q>(i - r)
                                * bq(r as i64 + k - 1, (r - j) as i64)
                                * s.b(i, r, &qi(k))
                        }));
                        t.eq(lhs, s.b(i, j, &Q::zero()), || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record(
        "binomial inversion from k=0",
        "sum_{r=j}^{i} (-1)^(i-r) binom(r+k-1,r-j) b(i,r,0) = b(i,j,k) for integer k >= 1-j",
        |s, t| {
            for &k in &int_ks {
                for i in 0..=n {
                    for j in 0..=i {
                        if k < 1 - j as i64 {
                            continue;
                        }
                        let lhs = sum((j..=i).map(|r| {
                            sign::<Q>(i - r)
                                * bq(r as i64 + k - 1, (r - j) as i64)
                                * s.b(i, r, &Q::zero())
                        }));
                        t.eq(lhs, s.b(i, j, &qi(k)), || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
}

fn third_parameter(bat: &mut Battery) {
    let n = bat.i_max;
    bat.record(
        "integer shift",
        "b(i,j,k1+k2) = sum_{r<=k2} binom(k2,r) b(i,j+r,k1) for integer k2 >= 0",
        |s, t| {
            for k1 in &s.ks {
                for k2 in 0..=5usize {
                    let k12 = k1 + q(k2);
                    for i in 0..=n {
                        for j in 0..=n {
                            let rhs =
                                sum((0..=k2).map(|r| bq(k2 as i64, r as i64) * s.b(i, j + r, k1)));
                            t.eq(s.b(i, j, &k12), rhs, || {
                                format!("i={i} j={j} k1={k1} k2={k2}")
                            });
                        }
                    }
                }
            }
        },
    );
    bat.record(
        "multiple shift",
        "b(i,j,l k) = sum_{r<=min(i-j,(l-1)k)} binom((l-1)k,r) b(i,j+r,k)",
        |s, t| {
            for l in [2usize, 3] {
                for k in 0..=5usize {
                    for i in 0..=n {
                        for j in 0..=n {
                            let top = (l - 1) * k;
                            let upper = if j > i { None } else { Some((i - j).min(top)) };
                            let rhs = match upper {
                                None => Q::zero(),
                                Some(u) => sum((0..=u)
                                    .map(|r| bq(top as i64, r as i64) * s.b(i, j + r, &q(k)))),
                            };
                            t.eq(s.b(i, j, &q(l * k)), rhs, || {
                                format!("i={i} j={j} k={k} l={l}")
                            });
                        }
                    }
                }
            }
        },
    );
    bat.record(
        "shift formula",
        "b(i,j,k) via the k=0 table equals the definition",
        |s, t| {
            for k in 0..=5usize {
                for i in 0..=n {
                    for j in 0..=n {
                        let v = msn_shift(i, j, &q(k)).expect("nonnegative integer k");
                        t.eq(v, s.b(i, j, &q(k)), || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record(
        "shift inversion",
        "b(i,j+k2,k1) = sum_r binom(k2,r) (-1)^(k2-r) b(i,j,k1+r)",
        |s, t| {
            for k1 in &s.ks {
                for k2 in 0..=5usize {
                    for i in 0..=n {
                        for j in 0..=n {
                            let rhs = sum((0..=k2).map(|r| {
                                bq(k2 as i64, r as i64)
                                    * sign::<Q>(k2 - r)
                                    * s.b(i, j, &(k1 + q(r)))
                            }));
                            t.eq(s.b(i, j + k2, k1), rhs, || {
                                format!("i={i} j={j} k1={k1} k2={k2}")
                            });
                        }
                    }
                }
            }
        },
    );
    bat.record(
        "alternating sum over k",
        "sum_{r<=i-j} binom(i-j,r) (-1)^(i-j-r) b(i,j,r) = i!",
        |s, t| {
            for i in 0..=n {
                for j in 0..=i {
                    let d = i - j;
                    let lhs = sum((0..=d)
                        .map(|r| bq(d as i64, r as i64) * sign::<Q>(d - r) * s.b(i, j, &q(r))));
                    t.eq(lhs, fact(i), || format!("i={i} j={j}"));
                }
            }
        },
    );
    bat.record(
        "full alternating sum over k",
        "sum_{r<=i} binom(i,r) (-1)^(i-r) b(i,j,r) = 0 for 0 < j <= i",
        |s, t| {
            for i in 1..=n {
                for j in 1..=i {
                    let lhs = sum((0..=i)
                        .map(|r| bq(i as i64, r as i64) * sign::<Q>(i - r) * s.b(i, j, &q(r))));
                    t.eq(lhs, Q::zero(), || format!("i={i} j={j}"));
                }
            }
        },
    );
    bat.record(
        "telescoped k",
        "b(i,j,k+1) = b(i,j,1) + sum_{r=1}^{k} b(i,j+1,r)",
        |s, t| {
            for k in 0..=6usize {
                for i in 0..=n {
                    for j in 0..=n {
                        let rhs = s.b(i, j, &Q::one()) + sum((1..=k).map(|r| s.b(i, j + 1, &q(r))));
                        t.eq(s.b(i, j, &q(k + 1)), rhs, || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record("power as sum", "sum_{r<k} b(i,1,r) = k^i", |s, t| {
        for k in 1..=6usize {
            for i in 1..=n {
                let lhs = sum((0..k).map(|r| s.b(i, 1, &q(r))));
                t.eq(lhs, pow(&q(k), i), || format!("i={i} k={k}"));
            }
        }
    });
    bat.record(
        "power difference as sum",
        "sum_{r<k} b(i,1,l+r) = (k+l)^i - l^i",
        |s, t| {
            for l in 1..=4usize {
                for k in 1..=6usize {
                    for i in 1..=n {
                        let lhs = sum((0..k).map(|r| s.b(i, 1, &q(l + r))));
                        t.eq(lhs, pow(&q(k + l), i) - pow(&q(l), i), || {
                            format!("i={i} k={k} l={l}")
                        });
                    }
                }
            }
        },
    );
}

fn multinomial(bat: &mut Battery) {
    let i_top = 8.min(bat.i_max);
    let ks = [int(-1), rational(1, 3), int(2)];
    bat.record(
        "multinomial product",
        "b(i,j_1+..+j_l,k_1+..+k_l) = sum multinom(i; i_1..i_l) prod b(i_r,j_r,k_r)",
        |s, t| {
            for l in [2usize, 3] {
                let js = compositions_bounded(l, 2);
                let kss = tuples(&ks, l);
                for jv in &js {
                    for kv in &kss {
                        let jt: usize = jv.iter().sum();
                        let kt = sum(kv.iter().cloned());
                        for i in 0..=i_top {
                            let rhs = sum(compositions(i, l).into_iter().map(|parts| {
                                let coef =
                                    Q::from_integer(multinom(i, &parts).expect("parts sum to i"));
                                parts
                                    .iter()
                                    .zip(jv)
                                    .zip(kv)
                                    .fold(coef, |acc, ((&ir, &jr), kr)| acc * s.b(ir, jr, kr))
                            }));
                            t.eq(s.b(i, jt, &kt), rhs, || format!("i={i} j={jv:?} k={kv:?}"));
                        }
                    }
                }
            }
        },
    );
    bat.record(
        "multinomial with k unit blocks",
        "b(i,j_1+..+j_l,k) = sum multinom(i; i_1..i_(l+k)) prod_{r<=l} b(i_r,j_r,0)",
        |s, t| {
            for jt in 0..=4usize {
                for j1 in 0..=jt {
                    let jv = [j1, jt - j1];
                    for k in 0..=3usize {
                        for i in 0..=i_top {
                            let rhs = sum(compositions(i, 2 + k).into_iter().map(|parts| {
                                let coef =
                                    Q::from_integer(multinom(i, &parts).expect("parts sum to i"));
                                coef * s.b(parts[0], jv[0], &Q::zero())
                                    * s.b(parts[1], jv[1], &Q::zero())
                            }));
                            t.eq(s.b(i, jt, &q(k)), rhs, || format!("i={i} j={jv:?} k={k}"));
                        }
                    }
                }
            }
        },
    );
    bat.record(
        "multinomial count",
        "b(i,j,k) = sum_{i_1..i_j > 0} multinom(i; i_1..i_(j+k))",
        |s, t| {
            for j in 0..=4usize {
                for k in 0..=3usize {
                    for i in 0..=i_top {
                        let rhs = sum(compositions(i, j + k)
                            .into_iter()
                            .filter(|parts| parts[..j].iter().all(|&p| p > 0))
                            .map(|parts| {
                                Q::from_integer(multinom(i, &parts).expect("parts sum to i"))
                            }));
                        t.eq(s.b(i, j, &q(k)), rhs, || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    let i_top = 7.min(bat.i_max);
    bat.record(
        "counting maps",
        "b(i,j,k) = #{f: [i] -> [j+k] with [j] in the image}",
        |s, t| {
            for nn in 0..=7usize {
                for i in 0..=i_top {
                    let counts = surjection_counts(i, nn);
                    for (j, &c) in counts.iter().enumerate() {
                        let k = nn - j;
                        t.eq(s.b(i, j, &q(k)), Q::from_integer(BigInt::from(c)), || {
                            format!("i={i} j={j} k={k}")
                        });
                    }
                }
            }
        },
    );
}

fn compositions_bounded(parts: usize, max: usize) -> Vec<Vec<usize>> {
    (0..=parts * max)
        .flat_map(|total| compositions(total, parts))
        .filter(|c| c.iter().all(|&x| x <= max))
        .collect()
}

fn tuples(values: &[Q], len: usize) -> Vec<Vec<Q>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for v in values {
        for mut rest in tuples(values, len - 1) {
            rest.insert(0, v.clone());
            out.push(rest);
        }
    }
    out
}

fn first_kind(bat: &mut Battery) {
    let n = 10.min(bat.i_max);
    bat.record("first kind at k=0", "c(i,j,0) = s(i,j)", |_, t| {
        let st = stirling1_triangle(n);
        let c = Msn1Table::new(n, Q::zero());
        for (i, row) in st.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.eq(c.c(i, j), Q::from_integer(v.clone()), || {
                    format!("i={i} j={j}")
                });
            }
        }
    });
    bat.record(
        "inversion",
        "sum_r b(i,r,k1)/r! c(r,j,k2) = binom(i,j) (k1-k2)^(i-j)",
        |s, t| {
            let bs: Vec<_> = s.ks.iter().map(|k| scaled_msn_matrix(n, k)).collect();
            let cs: Vec<_> = s.ks.iter().map(|k| msn1_matrix(n, k)).collect();
            for (a, k1) in s.ks.iter().enumerate() {
                for (b, k2) in s.ks.iter().enumerate() {
                    let prod = &bs[a] * &cs[b];
                    let d = k1 - k2;
                    for i in 0..=n {
                        for j in 0..=n {
                            let want = if j > i {
                                Q::zero()
                            } else {
                                bq(i as i64, j as i64) * pow(&d, i - j)
                            };
                            t.eq(prod[(i, j)].clone(), want, || {
                                format!("i={i} j={j} k1={k1} k2={k2}")
                            });
                        }
                    }
                }
            }
        },
    );
}

fn generating_functions(bat: &mut Battery) {
    let order = bat.i_max;
    bat.record(
        "ordinary generating function",
        "sum_i b(i,j,k) x^i = j! x^j / prod_{r=0}^{j} (1-(k+r)x)",
        |s, t| {
            for k in &s.ks {
                for j in 0..=5 {
                    let f = ogf_coeffs(j, k, order);
                    for i in 0..=order {
                        t.eq(f.coeff(i), s.b(i, j, k), || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record(
        "exponential generating function",
        "sum_i b(i,j,k) x^i/i! = (e^x-1)^j e^(kx)",
        |s, t| {
            for k in -3i64..=3 {
                for j in 0..=5 {
                    let f = egf_coeffs(j, &qi(k), order)
                        .expect("integer k")
                        .egf_sequence();
                    for (i, v) in f.into_iter().enumerate() {
                        t.eq(v, s.b(i, j, &qi(k)), || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    let i_top = 8.min(order);
    bat.record(
        "double generating function in k",
        "sum_{i,k} b(i,j,k) x^i/i! y^k/k! = (e^x-1)^j exp(e^x y)",
        |s, t| {
            for j in 0..=3 {
                let slices = double_egf_in_k::<Q>(j, 5, i_top);
                for (k, slice) in slices.iter().enumerate() {
                    for i in 0..=i_top {
                        let want = s.b(i, j, &q(k)) / (fact(i) * fact(k));
                        t.eq(slice.coeff(i), want, || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    bat.record(
        "double generating function in j",
        "sum_{i,j} b(i,j,k) x^i/i! z^j/j! = e^(kx) exp((e^x-1) z)",
        |s, t| {
            for k in 0..=4i64 {
                let slices = double_egf_in_j::<Q>(k, i_top, i_top);
                for (j, slice) in slices.iter().enumerate() {
                    for i in 0..=i_top {
                        let want = s.b(i, j, &qi(k)) / (fact(i) * fact(j));
                        t.eq(slice.coeff(i), want, || format!("i={i} j={j} k={k}"));
                    }
                }
            }
        },
    );
    let xs = [rational(1, 2), int(1), int(2), rational(-2, 5), int(7)];
    bat.record(
        "binomial generating function",
        "sum_j b(i,j,k) binom(x,j) = (x+k)^i",
        |s, t| {
            for k in &s.ks {
                for x in &xs {
                    for i in 0..=order {
                        t.eq(binomial_gf_value(i, k, x), pow(&(x + k), i), || {
                            format!("i={i} k={k} x={x}")
                        });
                    }
                }
            }
        },
    );
    bat.record(
        "double binomial generating function",
        "sum_{i,j} b(i,j,k) y^i/i! binom(x,j) = e^((x+k) y)",
        |s, t| {
            for k in &s.ks {
                for x in &xs[..3] {
                    let lhs: Vec<Q> = (0..=i_top)
                        .map(|i| sum((0..=i).map(|j| s.b(i, j, k) * binom_gen(x, j))) / fact(i))
                        .collect();
                    let lhs = TruncatedSeries::from_coeffs(i_top, lhs);
                    let rhs = TruncatedSeries::exp_linear(i_top, &(x + k));
                    for i in 0..=i_top {
                        t.eq(lhs.coeff(i), rhs.coeff(i), || format!("i={i} k={k} x={x}"));
                    }
                }
            }
        },
    );
}
