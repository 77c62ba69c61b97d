//! De Bruijn sequence generation and window-coverage inspection.

use num_bigint::BigUint;

use crate::counting::{guard_bits, CountResult};
use crate::error::{Error, Result};
use crate::seq::SymbolSeq;

/// Presence bitmap over all `q^ell` tuples of a sequence's windows.
#[derive(Debug, Clone)]
pub struct CoverageMap {
    ell: usize,
    q: u8,
    bits: Vec<u64>,
    present: usize,
    total: usize,
}

impl CoverageMap {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    /// Number of distinct tuples over the alphabet, `q^ell`.
    pub fn total_tuples(&self) -> usize {
        self.total
    }

    pub fn missing_count(&self) -> usize {
        self.total - self.present
    }

    pub fn is_covering(&self) -> bool {
        self.present == self.total
    }

    pub fn contains_index(&self, index: u64) -> bool {
        let i = index as usize;
        i < self.total && self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// Smallest absent tuple in lexicographic order, as its index.
    pub fn first_missing_index(&self) -> Option<u64> {
        for (word_idx, &word) in self.bits.iter().enumerate() {
            if word != u64::MAX {
                let bit = (!word).trailing_zeros() as usize;
                let index = word_idx * 64 + bit;
                if index < self.total {
                    return Some(index as u64);
                }
            }
        }
        None
    }

    /// Up to `limit` absent tuple indices, ascending.
    pub fn missing_indices(&self, limit: usize) -> Vec<u64> {
        let mut out = Vec::new();
        for index in 0..self.total as u64 {
            if !self.contains_index(index) {
                out.push(index);
                if out.len() == limit {
                    break;
                }
            }
        }
        out
    }
}

/// Tuple with the given lexicographic index (big-endian digits, `ell` wide).
pub fn tuple_from_index(index: u64, ell: usize, q: u8) -> Result<SymbolSeq> {
    let space = (q as u64).checked_pow(ell as u32);
    if space.is_none_or(|s| index >= s) {
        return Err(Error::validation(format!(
            "tuple index {index} out of range for q^ell"
        )));
    }
    let mut symbols = vec![0u8; ell];
    let mut rest = index;
    for slot in symbols.iter_mut().rev() {
        *slot = (rest % q as u64) as u8;
        rest /= q as u64;
    }
    SymbolSeq::new(symbols, q)
}

const MAX_COVERAGE_SPACE: u64 = 1 << 26;

/// Exact presence bitmap of every `ell`-window of `x`. One pass; a window
/// length exceeding `|x|` is a valid query that reports everything missing.
pub fn coverage(x: &SymbolSeq, ell: usize, q: u8) -> Result<CoverageMap> {
    if q != x.q() {
        return Err(Error::validation(format!(
            "alphabet mismatch: sequence has q = {}, query has q = {q}",
            x.q()
        )));
    }
    coverage_slice(x.symbols(), ell, q)
}

pub(crate) fn coverage_slice(x: &[u8], ell: usize, q: u8) -> Result<CoverageMap> {
    if ell == 0 {
        return Err(Error::validation("window length must be >= 1"));
    }
    let space = (q as u64)
        .checked_pow(ell as u32)
        .filter(|&s| s <= MAX_COVERAGE_SPACE)
        .ok_or_else(|| {
            Error::validation(format!(
                "tuple space q^ell exceeds the coverage budget of {MAX_COVERAGE_SPACE}"
            ))
        })? as usize;
    let mut map = CoverageMap {
        ell,
        q,
        bits: vec![0u64; space.div_ceil(64)],
        present: 0,
        total: space,
    };
    let mut window = 0usize;
    for (i, &sym) in x.iter().enumerate() {
        window = (window * q as usize + sym as usize) % space;
        if i + 1 >= ell {
            let word = &mut map.bits[window / 64];
            let bit = 1u64 << (window % 64);
            if *word & bit == 0 {
                *word |= bit;
                map.present += 1;
            }
        }
    }
    Ok(map)
}

const MAX_DEBRUIJN_ORDER: usize = 24;

/// The lexicographically least binary de Bruijn sequence of order `ell`:
/// concatenation of the Lyndon words of length dividing `ell` in increasing
/// order, followed by the `(ell - 1)`-prefix to close the final windows.
/// Output length is `2^ell + ell - 1` and every binary `ell`-tuple occurs
/// exactly once.
pub fn gen_debruijn(ell: usize) -> Result<SymbolSeq> {
    if ell == 0 || ell > MAX_DEBRUIJN_ORDER {
        return Err(Error::validation(format!(
            "de Bruijn order must be in [1, {MAX_DEBRUIJN_ORDER}]"
        )));
    }
    let mut cycle: Vec<u8> = Vec::with_capacity((1 << ell) + ell - 1);
    let mut word: Vec<u8> = vec![0];
    loop {
        if ell % word.len() == 0 {
            cycle.extend_from_slice(&word);
        }
        // Next Lyndon word of length <= ell: extend periodically, strip
        // trailing maximal symbols, increment.
        let len = word.len();
        while word.len() < ell {
            let next = word[word.len() - len];
            word.push(next);
        }
        while word.last() == Some(&1) {
            word.pop();
        }
        if word.is_empty() {
            break;
        }
        *word.last_mut().unwrap() = 1;
    }
    debug_assert_eq!(cycle.len(), 1 << ell);
    if ell > 1 {
        cycle.extend_from_within(0..ell - 1);
    }
    Ok(SymbolSeq::binary(cycle).unwrap())
}

/// Exact number of (acyclic) de Bruijn sequences of order `ell`:
/// `(q!)^(q^(ell-1))`.
pub fn debruijn_count(ell: usize, q: u8) -> Result<CountResult> {
    if !(2..=crate::seq::MAX_ALPHABET).contains(&q) {
        return Err(Error::validation(format!(
            "alphabet size must be in [2, {}], got {q}",
            crate::seq::MAX_ALPHABET
        )));
    }
    if ell == 0 {
        return Err(Error::validation("order must be >= 1"));
    }
    let exponent = (q as u64)
        .checked_pow(ell as u32 - 1)
        .ok_or_else(|| Error::validation("q^(ell-1) overflows"))?;
    let factorial: u64 = (1..=q as u64).product();
    guard_bits(exponent as f64 * (factorial as f64).log2())?;
    let value = BigUint::from(factorial).pow(
        u32::try_from(exponent)
            .map_err(|_| Error::validation("q^(ell-1) exceeds the exponent guard"))?,
    );
    Ok(CountResult::new(value))
}
