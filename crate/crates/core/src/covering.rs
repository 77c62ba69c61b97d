//! Single-redundancy-symbol encoding into coverage-complete sequences.
//!
//! `encode` maps any `n-1`-bit word to an `n`-bit sequence containing every
//! binary `ell`-tuple as a window. As long as some tuple is missing, the
//! intermediate sequence avoids that tuple, so the avoidance codec can
//! shorten it; the freed space eventually fits a de Bruijn sequence that
//! supplies every tuple wholesale.
//!
//! Decoding peels those layers back. The fast path greedily inverts the
//! layer markers; because the final padding step can truncate the layered
//! sequence and append junk that the greedy pass may misparse, every
//! candidate is verified by re-encoding, with a fallback that replays the
//! deterministic layer-length schedule exactly.

use crate::avoid::{
    self, build_context, compress_stream_raw, decompress_stream_with_segments, segment_count,
};
use crate::debruijn::{coverage_slice, gen_debruijn, tuple_from_index};
use crate::error::{Error, Result};
use crate::seq::SymbolSeq;

/// Deterministic sequence of intermediate lengths the encoder walks through:
/// `L_0 = n`, and a layer over length `L` leaves `ell + 1 + L - B(L)`
/// symbols, with `B(L) = floor((L-1) / block_len)`. The list stops at the
/// first length where the encoder's loop guard fails.
#[derive(Debug, Clone)]
pub struct LengthSchedule {
    pub n: usize,
    pub ell: usize,
    pub block_len: usize,
    pub db_len: usize,
    pub lengths: Vec<usize>,
}

impl LengthSchedule {
    /// Most layers any encoding of this shape can apply.
    pub fn max_layers(&self) -> usize {
        self.lengths.len() - 1
    }
}

/// Checks the parameter envelope for single-redundancy encoding:
/// `ell >= 6`, the tuple length certified by the avoidance codec, and
/// `2^(ell+6) * log2(n) <= n` (i.e. `ell <= log2 n - log2 log2 n - 6`).
fn validate_params(n: usize, ell: usize) -> Result<()> {
    if ell < avoid::MIN_TUPLE_LEN {
        return Err(Error::validation(format!(
            "tuple length {ell} below the minimum supported length {}",
            avoid::MIN_TUPLE_LEN
        )));
    }
    if !avoid::is_supported_tuple_len(ell) {
        return Err(Error::validation(format!(
            "tuple length {ell} is not certified by the avoidance codec"
        )));
    }
    if n < 4 {
        return Err(Error::validation("sequence length must be at least 4"));
    }
    let block_len = (1u64 << (ell + 6)) as f64;
    if block_len * (n as f64).log2() > n as f64 {
        return Err(Error::validation(format!(
            "tuple length {ell} too large for n = {n}: need 2^(ell+6) * log2(n) <= n"
        )));
    }
    Ok(())
}

/// The layer-length schedule for `(n, ell)`.
pub fn length_schedule(n: usize, ell: usize) -> Result<LengthSchedule> {
    validate_params(n, ell)?;
    let block_len = 1usize << (ell + 6);
    let db_len = (1usize << ell) + ell - 1;
    let floor = n - db_len;
    let mut lengths = vec![n];
    let mut len = n;
    while len > floor {
        let next = ell + 1 + len - segment_count(len, block_len);
        if next >= len {
            return Err(Error::invariant(
                "layer schedule fails to shrink; parameter validation is inconsistent",
            ));
        }
        lengths.push(next);
        len = next;
    }
    Ok(LengthSchedule {
        n,
        ell,
        block_len,
        db_len,
        lengths,
    })
}

/// Encodes an `(n-1)`-symbol word into an `n`-symbol sequence that contains
/// every binary `ell`-tuple as a window. Uses exactly one redundancy symbol.
pub fn encode(w: &SymbolSeq, ell: usize) -> Result<SymbolSeq> {
    if w.q() != 2 {
        return Err(Error::validation("encoding is binary-only"));
    }
    let n = w.len() + 1;
    let schedule = length_schedule(n, ell)?;
    let db = gen_debruijn(ell)?;

    let mut x = Vec::with_capacity(n);
    x.push(0u8);
    x.extend_from_slice(w.symbols());

    let mut layers = 0;
    loop {
        let cov = coverage_slice(&x, ell, 2)?;
        if cov.is_covering() || x.len() <= n - schedule.db_len {
            break;
        }
        if layers >= schedule.max_layers() {
            return Err(Error::invariant(
                "encoder exceeded the layer schedule without terminating",
            ));
        }
        let missing = cov
            .first_missing_index()
            .expect("non-covering sequence has a missing tuple");
        let tuple = tuple_from_index(missing, ell, 2)?;
        let ctx = build_context(&tuple)?;
        let compressed = compress_stream_raw(&ctx, &x)?;
        let mut next = Vec::with_capacity(compressed.len() + ell + 1);
        next.push(1u8);
        next.extend_from_slice(tuple.symbols());
        next.extend_from_slice(&compressed);
        x = next;
        layers += 1;
    }

    x.extend_from_slice(db.symbols());
    x.resize(n, 1u8);
    Ok(SymbolSeq::binary(x).unwrap())
}

/// Decodes an `n`-symbol output of [`encode`] back to the original
/// `(n-1)`-symbol word. Every candidate is verified by re-encoding; an input
/// that no candidate explains is rejected as malformed.
pub fn decode(x: &SymbolSeq, ell: usize) -> Result<SymbolSeq> {
    if x.q() != 2 {
        return Err(Error::validation("decoding is binary-only"));
    }
    let n = x.len();
    let schedule = length_schedule(n, ell)?;

    if let Some(w) = greedy_candidate(x.symbols(), &schedule) {
        if verified(&w, x, ell) {
            return Ok(w);
        }
    }
    for layers in 0..schedule.lengths.len() {
        if let Some(w) = schedule_candidate(x.symbols(), &schedule, layers) {
            if verified(&w, x, ell) {
                return Ok(w);
            }
        }
    }
    Err(Error::malformed(
        "no layer interpretation re-encodes to this sequence",
    ))
}

fn verified(w: &SymbolSeq, x: &SymbolSeq, ell: usize) -> bool {
    encode(w, ell).map(|re| re == *x).unwrap_or(false)
}

/// Fast-path candidate: peel layer markers greedily, recovering segment
/// counts from lengths alone. Padding junk can defeat this; the caller
/// verifies the result.
fn greedy_candidate(x: &[u8], schedule: &LengthSchedule) -> Option<SymbolSeq> {
    let ell = schedule.ell;
    let mut cur = x.to_vec();
    for _ in 0..=schedule.max_layers() {
        match cur.first()? {
            0 => {
                if cur.len() < schedule.n {
                    return None;
                }
                let w = cur[1..schedule.n].to_vec();
                return Some(SymbolSeq::binary(w).unwrap());
            }
            _ => {
                if cur.len() < ell + 1 {
                    return None;
                }
                let tuple = SymbolSeq::binary(cur[1..=ell].to_vec()).unwrap();
                let ctx = build_context(&tuple).ok()?;
                let rest = &cur[ell + 1..];
                if rest.is_empty() {
                    return None;
                }
                let segments = avoid::recover_segment_count(rest.len(), ctx.block_len());
                cur = decompress_stream_with_segments(&ctx, rest, segments).ok()?;
            }
        }
    }
    None
}

/// Fallback candidate assuming the encoder applied exactly `layers` layers:
/// truncate the padding away and invert each layer at its scheduled length.
fn schedule_candidate(
    x: &[u8],
    schedule: &LengthSchedule,
    layers: usize,
) -> Option<SymbolSeq> {
    let ell = schedule.ell;
    let final_len = *schedule.lengths.get(layers)?;
    let mut cur = x.get(..final_len)?.to_vec();
    for layer in (1..=layers).rev() {
        if cur.first() != Some(&1) || cur.len() < ell + 1 {
            return None;
        }
        let tuple = SymbolSeq::binary(cur[1..=ell].to_vec()).unwrap();
        let ctx = build_context(&tuple).ok()?;
        let rest = &cur[ell + 1..];
        let segments = segment_count(schedule.lengths[layer - 1], schedule.block_len);
        let restored = decompress_stream_with_segments(&ctx, rest, segments).ok()?;
        if restored.len() != schedule.lengths[layer - 1] {
            return None;
        }
        cur = restored;
    }
    if cur.first() != Some(&0) || cur.len() != schedule.n {
        return None;
    }
    Some(SymbolSeq::binary(cur[1..].to_vec()).unwrap())
}

/// Largest tuple length for which the whole coverage-constrained family
/// keeps its redundancy within one symbol: the largest `ell >= 1` with
/// `c1 * (n - 2*ell) / q^ell - ell >= log_q(q / (q-1))`,
/// `c1 = (q-1)^2 * log_q(e) / (4 q^2)`. Returns 0 when no length qualifies.
pub fn max_tuple_len_single_symbol(n: u64, q: u8) -> Result<usize> {
    if !(2..=crate::seq::MAX_ALPHABET).contains(&q) {
        return Err(Error::validation(format!(
            "alphabet size must be in [2, {}], got {q}",
            crate::seq::MAX_ALPHABET
        )));
    }
    if n < 4 {
        return Err(Error::validation("threshold scan needs n >= 4"));
    }
    let qf = q as f64;
    let c1 = (qf - 1.0) * (qf - 1.0) / (qf.ln() * 4.0 * qf * qf);
    let rhs = (qf / (qf - 1.0)).ln() / qf.ln();
    let mut best = 0;
    for ell in 1..=64usize {
        if 2 * ell as u64 >= n {
            break;
        }
        let lhs = c1 * (n as f64 - 2.0 * ell as f64) / qf.powi(ell as i32) - ell as f64;
        if lhs >= rhs {
            best = ell;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::debruijn::coverage;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn random_word(n: usize, seed: u64) -> SymbolSeq {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let symbols = (0..n - 1).map(|_| (rng.next_u32() & 1) as u8).collect();
        SymbolSeq::binary(symbols).unwrap()
    }

    #[test]
    fn parameter_validation() {
        // 2^13 * 16 > 2^16, so ell = 7 is out of range at n = 2^16.
        assert!(matches!(
            length_schedule(1 << 16, 7),
            Err(Error::Validation(_))
        ));
        assert!(length_schedule(1 << 16, 6).is_ok());
        assert!(matches!(
            length_schedule(1 << 16, 5),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn schedule_shape() {
        let schedule = length_schedule(1 << 16, 6).unwrap();
        assert_eq!(schedule.lengths[0], 1 << 16);
        // First layer removes floor((n-1)/4096) = 15 symbols, re-adds 7.
        assert_eq!(schedule.lengths[1], (1 << 16) - 8);
        for pair in schedule.lengths.windows(2) {
            assert!(pair[1] < pair[0]);
            assert!(pair[0] - pair[1] >= 2);
        }
        let floor = schedule.n - schedule.db_len;
        assert!(*schedule.lengths.last().unwrap() <= floor);
        for len in &schedule.lengths[..schedule.lengths.len() - 1] {
            assert!(*len > floor);
        }
    }

    #[test]
    fn already_covering_input_costs_nothing() {
        // A word whose 0-prefixed form is covering encodes with zero layers.
        let n = 1 << 16;
        let db = gen_debruijn(6).unwrap();
        let mut w = db.symbols().to_vec();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        while w.len() < n - 1 {
            w.push((rng.next_u32() & 1) as u8);
        }
        let w = SymbolSeq::binary(w).unwrap();
        let x = encode(&w, 6).unwrap();
        assert_eq!(x.get(0), Some(0));
        assert_eq!(&x.symbols()[1..], w.symbols());
        assert_eq!(decode(&x, 6).unwrap(), w);
    }

    #[test]
    fn roundtrip_random_words() {
        let n = 1 << 16;
        for seed in 0..8 {
            let w = random_word(n, seed);
            let x = encode(&w, 6).unwrap();
            assert_eq!(x.len(), n);
            assert!(coverage(&x, 6, 2).unwrap().is_covering());
            assert_eq!(decode(&x, 6).unwrap(), w, "seed {seed}");
        }
    }

    #[test]
    fn roundtrip_degenerate_words() {
        let n = 1 << 16;
        let all_zero = SymbolSeq::constant(0, n - 1, 2).unwrap();
        let all_one = SymbolSeq::constant(1, n - 1, 2).unwrap();
        let alternating =
            SymbolSeq::binary((0..n - 1).map(|i| (i % 2) as u8).collect()).unwrap();
        for w in [all_zero, all_one, alternating] {
            let x = encode(&w, 6).unwrap();
            assert_eq!(x.len(), n);
            assert!(coverage(&x, 6, 2).unwrap().is_covering());
            assert_eq!(decode(&x, 6).unwrap(), w);
        }
    }

    #[test]
    fn decode_rejects_non_codewords() {
        // All-ones is covering-free junk: its greedy parse and every layer
        // hypothesis fail re-encoding.
        let n = 1 << 16;
        let junk = SymbolSeq::constant(1, n, 2).unwrap();
        assert!(matches!(decode(&junk, 6), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn threshold_scan_values() {
        assert_eq!(max_tuple_len_single_symbol(1 << 20, 2).unwrap(), 12);
        assert_eq!(max_tuple_len_single_symbol(4, 2).unwrap(), 0);
        // Nondecreasing in n.
        let mut prev = 0;
        for exp in 4..=22 {
            let here = max_tuple_len_single_symbol(1u64 << exp, 2).unwrap();
            assert!(here >= prev);
            prev = here;
        }
    }
}
