//! Shared fixtures for the criterion benchmarks.

use stackstab::rng::Seed;
use stackstab::synth::{gen_synthetic, SyntheticSpec};
use stackstab::Dataset;

pub fn blobs(m: usize) -> Dataset {
    gen_synthetic(
        &SyntheticSpec::Blobs {
            m,
            d: 4,
            separation: 2.0,
        },
        Seed(1),
    )
    .unwrap()
}

pub fn linear(m: usize, d: usize) -> Dataset {
    gen_synthetic(
        &SyntheticSpec::Linear {
            m,
            d,
            noise_std: 0.5,
        },
        Seed(2),
    )
    .unwrap()
}
