//! Seeded fixture builders shared by the benchmark targets.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use covseq::avoid::{build_context, AvoidSampler, AvoiderContext};
use covseq::SymbolSeq;

/// The alternating tuple of the given length, e.g. `010101` for 6.
pub fn alternating_tuple(ell: usize) -> SymbolSeq {
    SymbolSeq::binary((0..ell).map(|k| (k % 2) as u8).collect()).unwrap()
}

/// Context plus a sampled avoiding block of exactly the context block size.
pub fn sampled_block(ell: usize, seed: u64) -> (AvoiderContext, SymbolSeq) {
    let tuple = alternating_tuple(ell);
    let ctx = build_context(&tuple).unwrap();
    let sampler = AvoidSampler::new(&tuple, ctx.block_len()).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let block = sampler.sample(&mut rng);
    (ctx, block)
}

/// Seeded random word of length `n - 1` for the covering encoder.
pub fn random_word(n: usize, seed: u64) -> SymbolSeq {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    SymbolSeq::binary((0..n - 1).map(|_| (rng.next_u32() & 1) as u8).collect()).unwrap()
}
