use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use engelcf::batch::{check_state, verify_batch, verify_batch_sequential, VerifyCase};
use engelcf::{EngelState, Rational, SeedConfig};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RULES: [&str; 6] = ["1", "2", "n", "n+1", "x", "2*n"];

fn cases(count: usize, terms: usize) -> Vec<VerifyCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..count)
        .map(|i| {
            let q: u64 = rng.random_range(1..=1000);
            let p = loop {
                let p = rng.random_range(1..=q);
                if p.gcd(&q) == 1 {
                    break p;
                }
            };
            let seed = Rational::new(p, q).unwrap();
            VerifyCase {
                config: SeedConfig::new(seed, RULES[i % RULES.len()].parse().unwrap()),
                terms,
            }
        })
        .collect()
}

fn batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_batch");
    group.sample_size(10);
    for count in [8, 32] {
        let input = cases(count, 6);
        group.bench_with_input(BenchmarkId::new("parallel", count), &input, |b, input| {
            b.iter(|| verify_batch(black_box(input), 100_000))
        });
        group.bench_with_input(BenchmarkId::new("sequential", count), &input, |b, input| {
            b.iter(|| verify_batch_sequential(black_box(input), 100_000))
        });
    }
    group.finish();
}

fn single_state(c: &mut Criterion) {
    let cfg = SeedConfig::parse("6/7", "n").unwrap();
    let state = EngelState::generate(cfg, 8, 1_000_000).unwrap();
    c.bench_function("check_state 6/7 n N=8", |b| {
        b.iter(|| check_state(black_box(&state)))
    });
}

criterion_group!(benches, batch, single_state);
criterion_main!(benches);
