//! Exact cardinality oracles and closed-form bounds for window-constrained
//! sequence families.
//!
//! Counts are exact arbitrary-precision integers. Bounds whose formulas
//! involve irrational constants are evaluated in double precision as
//! base-q logarithms; comparisons against exact counts are meant to be done
//! in log domain.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::debruijn;
use crate::error::{Error, Result};
use crate::seq::{failure_table, Params, SymbolSeq};

/// Exact nonnegative count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub value: BigUint,
}

impl CountResult {
    pub fn new(value: BigUint) -> Self {
        CountResult { value }
    }

    pub fn from_u64(value: u64) -> Self {
        CountResult {
            value: BigUint::from(value),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Base-2 logarithm of the count, `-inf` for zero. Accurate to roughly
    /// one unit in the last place of an `f64`.
    pub fn log2(&self) -> f64 {
        log2_biguint(&self.value)
    }

    /// Base-q logarithm of the count.
    pub fn logq(&self, q: u8) -> f64 {
        self.log2() / (q as f64).log2()
    }
}

impl fmt::Display for CountResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

fn log2_biguint(value: &BigUint) -> f64 {
    if value.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = value.bits();
    if bits <= 64 {
        return (value.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (value >> shift).to_u64().unwrap();
    (top as f64).log2() + shift as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

/// A cardinality bound carried as a base-q logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub logq_value: f64,
    pub kind: BoundKind,
    pub exact: bool,
}

/// Asymptotic-rate window for coverage constraints, parameterized by the
/// surplus ratio `alpha` (sequence length `n = q^ell + ell - 1 + alpha * q^ell`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBounds {
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
}

fn validate_alphabet(q: u8) -> Result<()> {
    if !(2..=crate::seq::MAX_ALPHABET).contains(&q) {
        return Err(Error::validation(format!(
            "alphabet size must be in [2, {}], got {q}",
            crate::seq::MAX_ALPHABET
        )));
    }
    Ok(())
}

fn checked_pow(q: u8, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(q as u64)?;
    }
    Some(acc)
}

fn biguint_pow(base: u64, exp: usize) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

// ---------------------------------------------------------------------------
// Pattern automaton and avoidance counting
// ---------------------------------------------------------------------------

/// KMP matching automaton of `v`: states are prefix-match lengths `0..=ell`,
/// state `ell` (a completed match) is absorbing.
pub(crate) fn pattern_automaton(v: &[u8], q: u8) -> Vec<Vec<usize>> {
    let ell = v.len();
    let fail = failure_table(v);
    let mut delta = vec![vec![0usize; q as usize]; ell + 1];
    for state in 0..=ell {
        for c in 0..q as usize {
            delta[state][c] = if state == ell {
                ell
            } else if v[state] as usize == c {
                state + 1
            } else if state == 0 {
                0
            } else {
                delta[fail[state - 1]][c]
            };
        }
    }
    delta
}

/// Number of length-`n` sequences over `v`'s alphabet with no window equal
/// to `v`. Dynamic program over prefix-match states, `O(n * |v| * q)`.
pub fn avoid_count(n: usize, v: &SymbolSeq) -> Result<CountResult> {
    if v.is_empty() {
        return Err(Error::validation("avoided tuple must be non-empty"));
    }
    let ell = v.len();
    let q = v.q() as usize;
    let delta = pattern_automaton(v.symbols(), v.q());
    let mut cur = vec![BigUint::zero(); ell];
    cur[0] = BigUint::one();
    let mut next = vec![BigUint::zero(); ell];
    for _ in 0..n {
        for slot in next.iter_mut() {
            slot.set_zero();
        }
        for (state, count) in cur.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            for c in 0..q {
                let to = delta[state][c];
                if to < ell {
                    next[to] += count;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(CountResult::new(cur.into_iter().sum()))
}

/// Per-state completion counts used for exact uniform sampling: `levels[j][s]`
/// is the number of ways to append `j` symbols from match-state `s` without
/// ever completing an occurrence of `v`.
pub(crate) struct AvoidSuffixCounts {
    pub(crate) delta: Vec<Vec<usize>>,
    pub(crate) ell: usize,
    pub(crate) levels: Vec<Vec<BigUint>>,
}

pub(crate) fn avoid_suffix_counts(v: &SymbolSeq, n: usize) -> AvoidSuffixCounts {
    let ell = v.len();
    let q = v.q();
    let delta = pattern_automaton(v.symbols(), q);
    let mut levels = Vec::with_capacity(n + 1);
    levels.push(vec![BigUint::one(); ell]);
    for j in 1..=n {
        let mut level = vec![BigUint::zero(); ell];
        for (state, slot) in level.iter_mut().enumerate() {
            for c in 0..q as usize {
                let to = delta[state][c];
                if to < ell {
                    *slot += &levels[j - 1][to];
                }
            }
        }
        levels.push(level);
    }
    AvoidSuffixCounts { delta, ell, levels }
}

/// Number of sequences of length `2 * |v|` that contain `v` as a window at
/// least once (the complement of avoidance at that length).
pub fn containing_count(v: &SymbolSeq) -> Result<CountResult> {
    let ell = v.len();
    if ell < 2 {
        return Err(Error::validation(
            "containing count requires a tuple of length >= 2",
        ));
    }
    let avoid = avoid_count(2 * ell, v)?;
    let total = biguint_pow(v.q() as u64, 2 * ell);
    Ok(CountResult::new(total - avoid.value))
}

/// Closed-form lower bound on [`containing_count`]:
/// `(ell + 1) * (q - 1)^2 * q^(ell - 2) / 2`, evaluated in double precision
/// so it stays meaningful for `ell < 2` as well.
pub fn containing_count_lower_bound(ell: usize, q: u8) -> f64 {
    let qf = q as f64;
    0.5 * (ell as f64 + 1.0) * (qf - 1.0) * (qf - 1.0) * qf.powi(ell as i32 - 2)
}

/// Upper bound on the avoidance count for any tuple of length `ell`:
/// base-q exponent `n - c1 * (n - 2*ell) / q^ell` with
/// `c1 = (q-1)^2 * log_q(e) / (4 q^2)`.
pub fn avoid_upper_bound(n: usize, ell: usize, q: u8) -> Result<BoundValue> {
    Params::new(n, ell, q)?;
    let qf = q as f64;
    let c1 = (qf - 1.0) * (qf - 1.0) / (qf.ln() * 4.0 * qf * qf);
    let exponent = n as f64 - c1 * (n as f64 - 2.0 * ell as f64) / qf.powi(ell as i32);
    Ok(BoundValue {
        logq_value: exponent,
        kind: BoundKind::Upper,
        exact: false,
    })
}

// ---------------------------------------------------------------------------
// Coverage counting
// ---------------------------------------------------------------------------

const STATE_BUDGET: usize = 1 << 22;
const MAX_TUPLE_SPACE: u64 = 64;

/// Exact number of length-`n` sequences containing every `ell`-tuple over
/// `q` symbols as a window.
///
/// Dynamic program over (last `ell - 1` symbols, set of tuples seen); only
/// reachable states are stored. The subset component limits this to small
/// tuple spaces (`q^ell <= 64`); a state budget guards the rest.
pub fn covering_count(n: usize, ell: usize, q: u8) -> Result<CountResult> {
    validate_alphabet(q)?;
    if ell == 0 {
        return Err(Error::validation("window length must be >= 1"));
    }
    let tuple_count = checked_pow(q, ell)
        .filter(|&t| t <= MAX_TUPLE_SPACE)
        .ok_or_else(|| {
            Error::validation(format!(
                "tuple space q^ell exceeds the exact-counting budget of {MAX_TUPLE_SPACE}"
            ))
        })? as usize;
    // Shorter sequences cannot host q^ell distinct windows.
    if n < tuple_count + ell - 1 {
        return Ok(CountResult::new(BigUint::zero()));
    }
    let prefix_count = tuple_count / q as usize;
    let full: u64 = if tuple_count == 64 {
        u64::MAX
    } else {
        (1u64 << tuple_count) - 1
    };

    let mut states: HashMap<(u32, u64), BigUint> = HashMap::new();
    for prefix in 0..prefix_count {
        states.insert((prefix as u32, 0), BigUint::one());
    }
    for _ in (ell - 1)..n {
        let mut next: HashMap<(u32, u64), BigUint> = HashMap::with_capacity(states.len() * 2);
        for ((prefix, mask), count) in &states {
            for c in 0..q as usize {
                let tuple = *prefix as usize * q as usize + c;
                let key = ((tuple % prefix_count) as u32, mask | (1u64 << tuple));
                match next.get_mut(&key) {
                    Some(slot) => *slot += count,
                    None => {
                        next.insert(key, count.clone());
                    }
                }
            }
        }
        if next.len() > STATE_BUDGET {
            return Err(Error::validation(format!(
                "coverage DP exceeded the state budget of {STATE_BUDGET} entries"
            )));
        }
        states = next;
    }
    let total = states
        .into_iter()
        .filter(|((_, mask), _)| *mask == full)
        .map(|(_, count)| count)
        .sum();
    Ok(CountResult::new(total))
}

/// Independent coverage-count oracle: enumerates all `q^n` sequences and
/// tests the window condition directly. Only for tiny instances.
pub fn covering_count_bruteforce(n: usize, ell: usize, q: u8) -> Result<CountResult> {
    validate_alphabet(q)?;
    if ell == 0 {
        return Err(Error::validation("window length must be >= 1"));
    }
    let space = checked_pow(q, n).ok_or_else(|| {
        Error::validation("enumeration space q^n overflows the brute-force budget")
    })?;
    if space > 1 << 26 {
        return Err(Error::validation(
            "enumeration space q^n exceeds the brute-force budget of 2^26",
        ));
    }
    let threshold = checked_pow(q, ell).and_then(|t| t.checked_add(ell as u64 - 1));
    match threshold {
        Some(t) if (n as u64) >= t => {}
        _ => return Ok(CountResult::new(BigUint::zero())),
    }
    let tuple_count = checked_pow(q, ell).unwrap() as usize;
    let full: u64 = if tuple_count == 64 {
        u64::MAX
    } else {
        (1u64 << tuple_count) - 1
    };

    fn walk(
        depth: usize,
        window: usize,
        mask: u64,
        n: usize,
        ell: usize,
        q: usize,
        tuple_count: usize,
        full: u64,
        hits: &mut u64,
    ) {
        if depth == n {
            if mask == full {
                *hits += 1;
            }
            return;
        }
        for c in 0..q {
            let window = (window * q + c) % tuple_count;
            let mask = if depth + 1 >= ell {
                mask | (1u64 << window)
            } else {
                mask
            };
            walk(depth + 1, window, mask, n, ell, q, tuple_count, full, hits);
        }
    }

    let mut hits = 0u64;
    walk(0, 0, 0, n, ell, q as usize, tuple_count, full, &mut hits);
    Ok(CountResult::from_u64(hits))
}

/// Exact lower bound on the coverage count: any full-coverage core of length
/// `q^ell + ell - 1` followed by `k` free symbols, i.e.
/// `(q!)^(q^(ell-1)) * q^k`. Returns 0 when `n` is below the threshold.
pub fn covering_lower_bound(n: usize, ell: usize, q: u8) -> Result<CountResult> {
    validate_alphabet(q)?;
    if ell == 0 {
        return Err(Error::validation("window length must be >= 1"));
    }
    let threshold = checked_pow(q, ell)
        .and_then(|t| t.checked_add(ell as u64 - 1))
        .ok_or_else(|| Error::validation("q^ell overflows"))?;
    if (n as u64) < threshold {
        return Ok(CountResult::new(BigUint::zero()));
    }
    let k = n - threshold as usize;
    let db = debruijn::debruijn_count(ell, q)?;
    guard_result_bits((k as f64) * (q as f64).log2())?;
    Ok(CountResult::new(db.value * biguint_pow(q as u64, k)))
}

/// Exact upper bound on the binary coverage count via path enumeration over
/// coverage graphs with `t = n - 2^ell - ell + 1` surplus edges:
/// `2^(2^(ell-1) + t) * C(2^ell + t - 1, t)`.
pub fn covering_upper_bound(n: usize, ell: usize) -> Result<CountResult> {
    if ell == 0 || ell > 32 {
        return Err(Error::validation("window length must be in [1, 32]"));
    }
    let threshold = (1u64 << ell) + ell as u64 - 1;
    if (n as u64) < threshold {
        return Err(Error::validation(format!(
            "upper bound needs n >= 2^ell + ell - 1 = {threshold}, got {n}"
        )));
    }
    let t = n as u64 - threshold;
    let exp = (1u64 << (ell - 1)) + t;
    guard_result_bits(exp as f64)?;
    let power = BigUint::one() << (exp as usize);
    let binom = binomial((1u64 << ell) + t - 1, t);
    Ok(CountResult::new(power * binom))
}

/// Exact binomial coefficient.
fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Refuses results that would not fit comfortably in memory.
fn guard_result_bits(bits: f64) -> Result<()> {
    const LIMIT: f64 = (1u64 << 24) as f64;
    if !(bits <= LIMIT) {
        return Err(Error::validation(
            "result would exceed the big-integer size guard (2^24 bits)",
        ));
    }
    Ok(())
}

pub(crate) fn guard_bits(bits: f64) -> Result<()> {
    guard_result_bits(bits)
}

// ---------------------------------------------------------------------------
// Rates and aggregate bounds
// ---------------------------------------------------------------------------

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Asymptotic-rate bounds for binary coverage constraints with surplus
/// `alpha * 2^ell`: lower `(2a+1)/(2a+2)`, upper
/// `min(H(a/(a+1)) + (2a+1)/(2a+2), 1)`.
pub fn rate_bounds(alpha: f64) -> Result<RateBounds> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::validation("alpha must be a finite nonnegative real"));
    }
    let lower = (2.0 * alpha + 1.0) / (2.0 * alpha + 2.0);
    let upper = (binary_entropy(alpha / (alpha + 1.0)) + lower).min(1.0);
    Ok(RateBounds {
        alpha,
        lower,
        upper,
    })
}

/// Rate lower bound for window length trailing `log_q n` by a constant `c`:
/// `1 + q^-(c+1) * log_q(q!) - q^-c`. Formula evaluator only; there is no
/// finite-size exact oracle for it.
pub fn rate_lower_bound_log_gap(c: f64, q: u8) -> Result<f64> {
    validate_alphabet(q)?;
    if !c.is_finite() || c < 0.0 {
        return Err(Error::validation("gap must be a finite nonnegative real"));
    }
    let qf = q as f64;
    let log_q_fact = (1..=q as u64).map(|i| (i as f64).ln()).sum::<f64>() / qf.ln();
    Ok(1.0 + qf.powf(-(c + 1.0)) * log_q_fact - qf.powf(-c))
}

/// Exact number of non-covering sequences next to its union bound over all
/// per-tuple avoidance counts. The first component is
/// `q^n - covering_count(n, ell, q)`; the second is `sum_v avoid_count(n, v)`.
pub fn union_bound_gap(n: usize, ell: usize, q: u8) -> Result<(CountResult, CountResult)> {
    let covering = covering_count(n, ell, q)?;
    let exact_gap = biguint_pow(q as u64, n) - covering.value;
    let tuple_count = checked_pow(q, ell).unwrap();
    let mut bound = BigUint::zero();
    for index in 0..tuple_count {
        let v = debruijn::tuple_from_index(index, ell, q)?;
        bound += avoid_count(n, &v)?.value;
    }
    Ok((CountResult::new(exact_gap), CountResult::new(bound)))
}
