use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use covseq::avoid::{compress_block, decompress_block};
use covseq::covering::{decode, encode};
use covseq::debruijn::gen_debruijn;
use covseq_bench::{random_word, sampled_block};

fn bench_block_codec(c: &mut Criterion) {
    let mut group = c.benchmark_group("block_codec");
    for ell in [6usize, 8] {
        let (ctx, block) = sampled_block(ell, 42);
        let compressed = compress_block(&ctx, &block).unwrap();
        group.bench_function(format!("compress_ell{ell}"), |b| {
            b.iter(|| compress_block(&ctx, &block).unwrap())
        });
        group.bench_function(format!("decompress_ell{ell}"), |b| {
            b.iter(|| decompress_block(&ctx, &compressed).unwrap())
        });
    }
    group.finish();
}

fn bench_debruijn(c: &mut Criterion) {
    c.bench_function("gen_debruijn_16", |b| b.iter(|| gen_debruijn(16).unwrap()));
}

fn bench_covering_codec(c: &mut Criterion) {
    let n = 1 << 16;
    let word = random_word(n, 7);
    let encoded = encode(&word, 6).unwrap();
    let mut group = c.benchmark_group("covering_codec");
    group.sample_size(20);
    group.bench_function("encode_n65536_ell6", |b| {
        b.iter_batched(|| word.clone(), |w| encode(&w, 6).unwrap(), BatchSize::LargeInput)
    });
    group.bench_function("decode_n65536_ell6", |b| {
        b.iter_batched(
            || encoded.clone(),
            |x| decode(&x, 6).unwrap(),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

criterion_group!(benches, bench_block_codec, bench_debruijn, bench_covering_codec);
criterion_main!(benches);
