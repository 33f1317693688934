//! Closed-form size analytics for the network constructions.
//!
//! Every formula is evaluated in exact rational arithmetic. `log` is the
//! base-2 logarithm and is only taken of powers of two.

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Q = Ratio<i128>;

/// How a formula relates to counted values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaKind {
    Exact,
    UpperBound,
    LowerBound,
    /// Floors and ceilings omitted; compared with a relative tolerance.
    Approximate,
}

impl FormulaKind {
    pub fn label(self) -> &'static str {
        match self {
            FormulaKind::Exact => "exact",
            FormulaKind::UpperBound => "upper bound",
            FormulaKind::LowerBound => "lower bound",
            FormulaKind::Approximate => "approximate (floors omitted)",
        }
    }
}

/// Registry entry.
#[derive(Clone, Copy, Debug)]
pub struct FormulaInfo {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub expr: &'static str,
    pub domain: &'static str,
    pub counts: &'static str,
    pub kind: FormulaKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("unknown formula `{0}`")]
    Unknown(String),
    #[error("formula `{name}` expects {expected} parameter(s)")]
    Arity { name: String, expected: usize },
    #[error("parameters outside the domain of `{name}`: {domain}")]
    Domain { name: String, domain: String },
}

/// All formulas, in ledger order.
pub const REGISTRY: &[FormulaInfo] = &[
    FormulaInfo {
        name: "oe_sort_size",
        params: &["n"],
        expr: "n/4 * log n * (log n - 1) + n - 1",
        domain: "n power of 2",
        counts: "2-sorters of oe_sort(n)",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "oe_merge_size",
        params: &["n"],
        expr: "n/2 * (log n - 1) + 1",
        domain: "n power of 2, n >= 2",
        counts: "2-sorters of oe_merge2(n)",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "bit_merge_size",
        params: &["n"],
        expr: "n log n / 2",
        domain: "n power of 2",
        counts: "2-sorters of the bitonic merger",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "half_bit_merge_size",
        params: &["n"],
        expr: "n log n / 2 - n/2",
        domain: "n power of 2, n >= 2",
        counts: "2-sorters of the half-bitonic merger",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "pw_merge_size",
        params: &["k"],
        expr: "k log k - k + 1",
        domain: "k power of 2",
        counts: "2-sorters of the classic pairwise merger",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "pw_bit_merge_size",
        params: &["k"],
        expr: "k log k / 2 + k/2",
        domain: "k power of 2, k >= 2",
        counts: "2-sorters of the bitonic pairwise merger",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "pw_hbit_merge_size",
        params: &["k"],
        expr: "k log k / 2",
        domain: "k power of 2",
        counts: "2-sorters of the half-bitonic pairwise merger",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "bit_sel_size",
        params: &["n", "k"],
        expr: "n/4 log^2 k + n/4 log k + 2n - k/2 log k - k - n/k",
        domain: "n, k powers of 2, k < n",
        counts: "2-sorters of bit_sel(n, k)",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "pw_sel_half_saving",
        params: &["N"],
        expr: "N (log N - 4) / 2 + log N + 2",
        domain: "N power of 2, N >= 4",
        counts: "|pw_sel classic(N, N/2)| - |pw_sel half-bitonic(N, N/2)|",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "pw_sel_size_difference",
        params: &["n", "k"],
        expr: "C(n,k)(n+1)/2 - S(n,k)(n-2k+1)/2 - 2^k (k-1) - 1, S(n,k) = sum_{j=0..k} C(n-k+j, j) 2^(k-j)",
        domain: "0 <= k <= n (exponents: N = 2^n, K = 2^k)",
        counts: "|pw_sel classic(N, K)| - |pw_sel half-bitonic(N, K)|",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "pw_hbit_sel_upper_bound",
        params: &["n", "k"],
        expr: "2^(n-2)((k - m/2 - 7/4)^2 + 9k/2 + 79/16) + 2^k (3/2)^m (k/2 - m/6) - 2^k (k+1) - 2^(n-k) (3/2)^m, m = min(k, n-k)",
        domain: "0 <= k <= n (exponents: N = 2^n, K = 2^k)",
        counts: "comparators of pw_sel half-bitonic(N, K), max^N counted as N-1",
        kind: FormulaKind::UpperBound,
    },
    FormulaInfo {
        name: "oe2_merge_vars",
        params: &["k"],
        expr: "2k log k + 2",
        domain: "k power of 2, k >= 2",
        counts: "variables of the odd-even merger of two k-sequences",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "oe2_merge_clauses",
        params: &["k"],
        expr: "3k log k + 3",
        domain: "k power of 2, k >= 2",
        counts: "clauses of the odd-even merger of two k-sequences",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "oe4_merge_vars_bound",
        params: &["k"],
        expr: "(k - 2) log k + 5k - 1",
        domain: "k power of 2, s = 4k",
        counts: "variables of oe4_merge over four k-columns",
        kind: FormulaKind::UpperBound,
    },
    FormulaInfo {
        name: "oe4_merge_clauses_bound",
        params: &["k"],
        expr: "(5/2 k - 5) log k + 21k - 6",
        domain: "k power of 2, s = 4k",
        counts: "clauses of oe4_merge over four k-columns",
        kind: FormulaKind::UpperBound,
    },
    FormulaInfo {
        name: "fourw_merge_sorters2",
        params: &["k"],
        expr: "13k/12 - 1",
        domain: "k power of 2, columns (k, k/2, k/3, k/4) floored",
        counts: "2-sorters in the halving loop of the 4-wise merger",
        kind: FormulaKind::Approximate,
    },
    FormulaInfo {
        name: "fourw_merge_sorters3",
        params: &["k"],
        expr: "k/2 - 1",
        domain: "k power of 2, columns (k, k/2, k/3, k/4) floored",
        counts: "3-sorters in the halving loop of the 4-wise merger",
        kind: FormulaKind::Approximate,
    },
    FormulaInfo {
        name: "fourw_merge_sorters4",
        params: &["k"],
        expr: "k/4 log k - 13k/24",
        domain: "k power of 2, columns (k, k/2, k/3, k/4) floored",
        counts: "4-sorters in the halving loop of the 4-wise merger",
        kind: FormulaKind::Approximate,
    },
    FormulaInfo {
        name: "fourw_merge_vars",
        params: &["k"],
        expr: "k log k + 7k/6 - 5",
        domain: "k power of 2, columns (k, k/2, k/3, k/4) floored",
        counts: "variables of the halving-loop sorters of the 4-wise merger, every output encoded",
        kind: FormulaKind::Approximate,
    },
    FormulaInfo {
        name: "fourw_merge_clauses",
        params: &["k"],
        expr: "15/4 k log k - 33k/24 - 10",
        domain: "k power of 2, columns (k, k/2, k/3, k/4) floored",
        counts: "clauses of the halving-loop sorters of the 4-wise merger, every output encoded",
        kind: FormulaKind::Approximate,
    },
    FormulaInfo {
        name: "oe2_oe4_vars_gap",
        params: &["n", "k"],
        expr: "(n - k)(5k + 2)/(3k) log(k/2) + 3(n/k - 1)",
        domain: "n, k powers of 4, 1 <= k <= n/4",
        counts: "V(oe2 selection) - V(oe4 selection)",
        kind: FormulaKind::LowerBound,
    },
    FormulaInfo {
        name: "selector_clauses",
        params: &["n", "m"],
        expr: "sum_{p=1..m} C(n, p)",
        domain: "1 <= m <= n",
        counts: "clauses of a direct m-selector of order n",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "sequential_clauses",
        params: &["n", "k"],
        expr: "2nk + n - 3k - 1",
        domain: "1 <= k < n",
        counts: "clauses of the sequential counter",
        kind: FormulaKind::Exact,
    },
    FormulaInfo {
        name: "binomial_clauses",
        params: &["n", "k"],
        expr: "C(n, k + 1)",
        domain: "0 <= k < n",
        counts: "clauses of the binomial encoding",
        kind: FormulaKind::Exact,
    },
];

pub fn info(name: &str) -> Option<&'static FormulaInfo> {
    REGISTRY.iter().find(|f| f.name == name)
}

fn q(v: i128) -> Q {
    Q::from_integer(v)
}

fn frac(a: i128, b: i128) -> Q {
    Q::new(a, b)
}

fn log2_exact(v: i128) -> Option<i128> {
    if v >= 1 && (v as u128).is_power_of_two() {
        Some(v.trailing_zeros() as i128)
    } else {
        None
    }
}

/// Binomial coefficient, 0 outside `0 <= k <= n`.
pub fn binom(n: i128, k: i128) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: i128 = 1;
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

fn pow(base: Q, e: i128) -> Q {
    let mut r = Q::one();
    for _ in 0..e {
        r *= base;
    }
    r
}

/// Evaluates a registered formula.
pub fn closed_form(name: &str, params: &[i64]) -> Result<Q, FormulaError> {
    let info = info(name).ok_or_else(|| FormulaError::Unknown(name.to_string()))?;
    if params.len() != info.params.len() {
        return Err(FormulaError::Arity { name: name.into(), expected: info.params.len() });
    }
    let bad = || FormulaError::Domain { name: name.into(), domain: info.domain.into() };
    let p: Vec<i128> = params.iter().map(|&v| v as i128).collect();
    let lg = |v: i128| log2_exact(v).ok_or_else(bad);
    let out = match name {
        "oe_sort_size" => {
            let (n, l) = (p[0], lg(p[0])?);
            frac(n * l * (l - 1), 4) + q(n - 1)
        }
        "oe_merge_size" => {
            let (n, l) = (p[0], lg(p[0])?);
            if n < 2 {
                return Err(bad());
            }
            frac(n * (l - 1), 2) + Q::one()
        }
        "bit_merge_size" | "pw_hbit_merge_size" => {
            let (n, l) = (p[0], lg(p[0])?);
            frac(n * l, 2)
        }
        "half_bit_merge_size" => {
            let (n, l) = (p[0], lg(p[0])?);
            if n < 2 {
                return Err(bad());
            }
            frac(n * l, 2) - frac(n, 2)
        }
        "pw_merge_size" => {
            let (k, l) = (p[0], lg(p[0])?);
            q(k * l - k + 1)
        }
        "pw_bit_merge_size" => {
            let (k, l) = (p[0], lg(p[0])?);
            if k < 2 {
                return Err(bad());
            }
            frac(k * l, 2) + frac(k, 2)
        }
        "bit_sel_size" => {
            let (n, k) = (p[0], p[1]);
            lg(n)?;
            let lk = lg(k)?;
            if k >= n {
                return Err(bad());
            }
            frac(n * lk * lk, 4) + frac(n * lk, 4) + q(2 * n) - frac(k * lk, 2) - q(k) - frac(n, k)
        }
        "pw_sel_half_saving" => {
            let (n, l) = (p[0], lg(p[0])?);
            if n < 4 {
                return Err(bad());
            }
            frac(n * (l - 4), 2) + q(l + 2)
        }
        "pw_sel_size_difference" => {
            let (n, k) = (p[0], p[1]);
            if k < 0 || k > n {
                return Err(bad());
            }
            let s: i128 = (0..=k).map(|j| binom(n - k + j, j) * (1i128 << (k - j))).sum();
            frac(binom(n, k) * (n + 1), 2) - frac(s * (n - 2 * k + 1), 2) - q((1i128 << k) * (k - 1)) - Q::one()
        }
        "pw_hbit_sel_upper_bound" => {
            let (n, k) = (p[0], p[1]);
            if k < 0 || k > n || n > 60 {
                return Err(bad());
            }
            let m = k.min(n - k);
            let three_halves = pow(frac(3, 2), m);
            let sq = q(k) - frac(m, 2) - frac(7, 4);
            let two = |e: i128| -> Q { if e >= 0 { q(1i128 << e) } else { frac(1, 1i128 << (-e)) } };
            two(n - 2) * (sq * sq + frac(9 * k, 2) + frac(79, 16)) + two(k) * three_halves * (frac(k, 2) - frac(m, 6))
                - two(k) * q(k + 1)
                - two(n - k) * three_halves
        }
        "oe2_merge_vars" => {
            let (k, l) = (p[0], lg(p[0])?);
            q(2 * k * l + 2)
        }
        "oe2_merge_clauses" => {
            let (k, l) = (p[0], lg(p[0])?);
            q(3 * k * l + 3)
        }
        "oe4_merge_vars_bound" => {
            let (k, l) = (p[0], lg(p[0])?);
            q((k - 2) * l + 5 * k - 1)
        }
        "oe4_merge_clauses_bound" => {
            let (k, l) = (p[0], lg(p[0])?);
            (frac(5 * k, 2) - q(5)) * q(l) + q(21 * k - 6)
        }
        "fourw_merge_sorters2" => frac(13 * p[0], 12) - Q::one(),
        "fourw_merge_sorters3" => frac(p[0], 2) - Q::one(),
        "fourw_merge_sorters4" => {
            let (k, l) = (p[0], lg(p[0])?);
            frac(k * l, 4) - frac(13 * k, 24)
        }
        "fourw_merge_vars" => {
            let (k, l) = (p[0], lg(p[0])?);
            q(k * l) + frac(7 * k, 6) - q(5)
        }
        "fourw_merge_clauses" => {
            let (k, l) = (p[0], lg(p[0])?);
            frac(15 * k * l, 4) - frac(33 * k, 24) - q(10)
        }
        "oe2_oe4_vars_gap" => {
            let (n, k) = (p[0], p[1]);
            if k < 2 || 4 * k > n {
                return Err(bad());
            }
            let l = lg(k / 2)?;
            frac((n - k) * (5 * k + 2), 3 * k) * q(l) + q(3) * (frac(n, k) - Q::one())
        }
        "selector_clauses" => {
            let (n, m) = (p[0], p[1]);
            if m < 1 || m > n {
                return Err(bad());
            }
            q((1..=m).map(|i| binom(n, i)).sum())
        }
        "sequential_clauses" => {
            let (n, k) = (p[0], p[1]);
            if k < 1 || k >= n {
                return Err(bad());
            }
            q(2 * n * k + n - 3 * k - 1)
        }
        "binomial_clauses" => {
            let (n, k) = (p[0], p[1]);
            if k < 0 || k >= n {
                return Err(bad());
            }
            q(binom(n, k + 1))
        }
        _ => return Err(FormulaError::Unknown(name.to_string())),
    };
    Ok(out)
}

/// Integer value of an exact formula result.
pub fn as_integer(v: &Q) -> Option<i128> {
    if v.denom().is_one() {
        Some(*v.numer())
    } else {
        None
    }
}

/// `|counted - formula| <= tol * |formula|`.
pub fn within(counted: i128, formula: &Q, tol: Q) -> bool {
    let diff = q(counted) - formula;
    let diff = if diff < Q::zero() { -diff } else { diff };
    let base = if *formula < Q::zero() { -*formula } else { *formula };
    diff <= tol * base
}
