//! Finite sequences over a small alphabet, plus the window toolkit the rest
//! of the crate is built on: slicing, minimal periods, and the fixed-width
//! binary index codec.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported alphabet. Sequences are serialized one digit per
/// symbol, so the alphabet has to fit in '0'..='9'.
pub const MAX_ALPHABET: u8 = 10;

/// Immutable sequence over the alphabet `{0, ..., q-1}`.
///
/// All slicing operations return owned copies; a `SymbolSeq` is never
/// mutated after construction, so values can be shared freely across
/// threads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolSeq {
    symbols: Vec<u8>,
    q: u8,
}

impl SymbolSeq {
    /// Builds a sequence, checking every symbol against the alphabet.
    pub fn new(symbols: Vec<u8>, q: u8) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&q) {
            return Err(Error::validation(format!(
                "alphabet size must be in [2, {MAX_ALPHABET}], got {q}"
            )));
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::validation(format!(
                "symbol {bad} out of range for alphabet size {q}"
            )));
        }
        Ok(SymbolSeq { symbols, q })
    }

    /// Binary sequence from a vector of 0/1 values.
    pub fn binary(symbols: Vec<u8>) -> Result<Self> {
        SymbolSeq::new(symbols, 2)
    }

    /// Sequence consisting of `len` copies of `symbol`.
    pub fn constant(symbol: u8, len: usize, q: u8) -> Result<Self> {
        SymbolSeq::new(vec![symbol; len], q)
    }

    /// Parses the one-line text form: one digit per symbol, no separators.
    /// A trailing newline (or CRLF) is accepted and ignored.
    pub fn parse(text: &str, q: u8) -> Result<Self> {
        let line = text.strip_suffix('\n').unwrap_or(text);
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut symbols = Vec::with_capacity(line.len());
        for ch in line.chars() {
            let digit = ch
                .to_digit(10)
                .ok_or_else(|| Error::validation(format!("invalid symbol character {ch:?}")))?;
            symbols.push(digit as u8);
        }
        SymbolSeq::new(symbols, q)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.symbols.get(i).copied()
    }

    /// First `k` symbols.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        self.substring(0, k)
    }

    /// Last `k` symbols.
    pub fn suffix(&self, k: usize) -> Result<Self> {
        if k > self.len() {
            return Err(Error::validation(format!(
                "suffix length {k} exceeds sequence length {}",
                self.len()
            )));
        }
        self.substring(self.len() - k, k)
    }

    /// `k` symbols starting at position `i`.
    pub fn substring(&self, i: usize, k: usize) -> Result<Self> {
        if i.checked_add(k).is_none_or(|end| end > self.len()) {
            return Err(Error::validation(format!(
                "substring at ({i}, {k}) runs past sequence length {}",
                self.len()
            )));
        }
        Ok(SymbolSeq {
            symbols: self.symbols[i..i + k].to_vec(),
            q: self.q,
        })
    }

    /// Concatenation; both operands must share the alphabet.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.q != other.q {
            return Err(Error::validation(format!(
                "alphabet mismatch in concatenation: {} vs {}",
                self.q, other.q
            )));
        }
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        Ok(SymbolSeq { symbols, q: self.q })
    }

    /// The sequence repeated `times` times.
    pub fn repeat(&self, times: usize) -> Self {
        SymbolSeq {
            symbols: self.symbols.repeat(times),
            q: self.q,
        }
    }

    pub(crate) fn from_raw(symbols: Vec<u8>, q: u8) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < q));
        SymbolSeq { symbols, q }
    }
}

impl fmt::Display for SymbolSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            write!(f, "{}", s)?;
        }
        Ok(())
    }
}

// Keeps Debug output readable in test failures: `SymbolSeq(q=2, 0101)`.
impl fmt::Debug for SymbolSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolSeq(q={}, {})", self.q, self)
    }
}

/// Common parameter triple for length-`n` sequences inspected through
/// windows of length `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub n: usize,
    pub ell: usize,
    pub q: u8,
}

impl Params {
    pub fn new(n: usize, ell: usize, q: u8) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&q) {
            return Err(Error::validation(format!(
                "alphabet size must be in [2, {MAX_ALPHABET}], got {q}"
            )));
        }
        if ell < 1 || ell > n {
            return Err(Error::validation(format!(
                "window length must satisfy 1 <= ell <= n, got ell={ell}, n={n}"
            )));
        }
        Ok(Params { n, ell, q })
    }
}

/// Minimal period of a non-empty sequence: the smallest `p >= 1` with
/// `s[i] == s[i + p]` for all valid `i`. Always in `[1, |s|]`.
pub fn period(s: &SymbolSeq) -> Result<usize> {
    if s.is_empty() {
        return Err(Error::validation("period of the empty sequence is undefined"));
    }
    Ok(period_slice(s.symbols()))
}

/// Border-table period: period = len - (longest proper border). Linear time.
pub(crate) fn period_slice(s: &[u8]) -> usize {
    debug_assert!(!s.is_empty());
    let border = failure_table(s);
    s.len() - border[s.len() - 1]
}

/// KMP failure table: `table[i]` is the length of the longest proper border
/// of `s[..=i]`.
pub(crate) fn failure_table(s: &[u8]) -> Vec<usize> {
    let mut table = vec![0usize; s.len()];
    let mut matched = 0;
    for i in 1..s.len() {
        while matched > 0 && s[matched] != s[i] {
            matched = table[matched - 1];
        }
        if s[matched] == s[i] {
            matched += 1;
        }
        table[i] = matched;
    }
    table
}

/// Start position of the rightmost occurrence of `needle` in `hay`, if any.
/// KMP scan, `O(|hay| + |needle|)`.
pub(crate) fn find_last(needle: &[u8], hay: &[u8]) -> Option<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return None;
    }
    let table = failure_table(needle);
    let mut last = None;
    let mut matched = 0;
    for (i, &sym) in hay.iter().enumerate() {
        while matched > 0 && needle[matched] != sym {
            matched = table[matched - 1];
        }
        if needle[matched] == sym {
            matched += 1;
        }
        if matched == needle.len() {
            last = Some(i + 1 - needle.len());
            matched = table[matched - 1];
        }
    }
    last
}

pub(crate) fn contains_window(hay: &[u8], needle: &[u8]) -> bool {
    find_last(needle, hay).is_some()
}

/// Fixed-width big-endian binary representation of `value` (most significant
/// bit first). Fails if the value does not fit in `width` bits.
pub fn index_encode(value: u64, width: usize) -> Result<SymbolSeq> {
    if width == 0 {
        return Err(Error::validation("index width must be positive"));
    }
    if width < 64 && value >> width != 0 {
        return Err(Error::validation(format!(
            "index {value} does not fit in {width} bits"
        )));
    }
    let mut symbols = vec![0u8; width];
    for (k, slot) in symbols.iter_mut().rev().enumerate() {
        if k < 64 {
            *slot = ((value >> k) & 1) as u8;
        }
    }
    Ok(SymbolSeq::from_raw(symbols, 2))
}

/// Inverse of [`index_encode`]: reads a binary sequence as a big-endian
/// integer.
pub fn index_decode(s: &SymbolSeq) -> Result<u64> {
    if s.q() != 2 {
        return Err(Error::validation("index decoding requires a binary sequence"));
    }
    if s.is_empty() {
        return Err(Error::validation("index width must be positive"));
    }
    index_decode_slice(s.symbols())
}

pub(crate) fn index_decode_slice(bits: &[u8]) -> Result<u64> {
    let mut value: u64 = 0;
    for &b in bits {
        if value >> 63 != 0 {
            return Err(Error::validation("index value exceeds 64 bits"));
        }
        value = (value << 1) | u64::from(b);
    }
    Ok(value)
}
