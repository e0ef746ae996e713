//! Bootstrap and subsample resampling.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::Seed;

/// The indices one resampling draw selected, in draw order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResampleIndices {
    pub indices: Vec<usize>,
    pub with_replacement: bool,
}

impl ResampleIndices {
    /// Number of distinct training examples the draw contains (`d(r)`).
    pub fn distinct_count(&self) -> usize {
        let mut seen = self.indices.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// Size-m uniform draw with replacement; the bootstrap replicate of `data`.
pub fn bootstrap_sample(data: &Dataset, seed: Seed) -> Result<(Dataset, ResampleIndices)> {
    let m = data.len();
    let mut stream = seed.stream("bootstrap", 0);
    let indices: Vec<usize> = (0..m).map(|_| stream.next_below(m)).collect();
    let replicate = data.reindex(&indices)?;
    Ok((
        replicate,
        ResampleIndices {
            indices,
            with_replacement: true,
        },
    ))
}

/// `p <= m` distinct indices, uniform over size-p subsets (partial
/// Fisher-Yates), in shuffled order.
pub fn subsample(data: &Dataset, p: usize, seed: Seed) -> Result<(Dataset, ResampleIndices)> {
    let m = data.len();
    if p == 0 || p > m {
        return Err(Error::invalid_param(
            "p",
            format!("subsample size must satisfy 1 <= p <= m, got p={p}, m={m}"),
        ));
    }
    let mut stream = seed.stream("subsample", 0);
    let mut pool: Vec<usize> = (0..m).collect();
    for i in 0..p {
        let j = i + stream.next_below(m - i);
        pool.swap(i, j);
    }
    pool.truncate(p);
    let replicate = data.reindex(&pool)?;
    Ok((
        replicate,
        ResampleIndices {
            indices: pool,
            with_replacement: false,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Example, Task};

    fn toy(m: usize) -> Dataset {
        let examples = (0..m)
            .map(|i| Example::new(vec![i as f64], i as f64))
            .collect();
        Dataset::new(examples, Task::Regression).unwrap()
    }

    #[test]
    fn bootstrap_of_singleton_is_forced() {
        let d = toy(1);
        let (_, idx) = bootstrap_sample(&d, Seed(0)).unwrap();
        assert_eq!(idx.indices, vec![0]);
    }

    #[test]
    fn bootstrap_is_deterministic_per_seed() {
        let d = toy(5);
        let (a, ia) = bootstrap_sample(&d, Seed(99)).unwrap();
        let (b, ib) = bootstrap_sample(&d, Seed(99)).unwrap();
        assert_eq!(ia, ib);
        assert_eq!(a, b);
        let (_, ic) = bootstrap_sample(&d, Seed(100)).unwrap();
        assert_ne!(ia.indices, ic.indices);
    }

    #[test]
    fn bootstrap_indices_in_range_and_length_m() {
        let d = toy(20);
        for s in 0..50 {
            let (_, idx) = bootstrap_sample(&d, Seed(s)).unwrap();
            assert_eq!(idx.indices.len(), 20);
            assert!(idx.indices.iter().all(|&i| i < 20));
        }
    }

    // Expected distinct fraction for m=20 is 1 - (1 - 1/20)^20 = 0.641514...,
    // the closed-form mean of d(r)/m.
    #[test]
    fn bootstrap_distinct_fraction_matches_expectation() {
        let d = toy(20);
        let draws = 100_000;
        let mut total_distinct = 0usize;
        for s in 0..draws {
            let (_, idx) = bootstrap_sample(&d, Seed(s)).unwrap();
            total_distinct += idx.distinct_count();
        }
        let frac = total_distinct as f64 / (draws as f64 * 20.0);
        let expected = 1.0 - (1.0 - 1.0 / 20.0_f64).powi(20);
        assert!(
            (frac - expected).abs() < 0.01,
            "got {frac}, expected {expected}"
        );
    }

    #[test]
    fn subsample_full_size_is_a_permutation() {
        let d = toy(8);
        let (_, idx) = subsample(&d, 8, Seed(3)).unwrap();
        let mut sorted = idx.indices.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn subsample_indices_distinct() {
        let d = toy(10);
        for s in 0..100 {
            let (_, idx) = subsample(&d, 4, Seed(s)).unwrap();
            assert_eq!(idx.distinct_count(), 4);
            assert!(idx.indices.iter().all(|&i| i < 10));
        }
    }

    #[test]
    fn subsample_p_one_is_uniform() {
        let d = toy(3);
        let draws = 30_000;
        let mut counts = [0usize; 3];
        for s in 0..draws {
            let (_, idx) = subsample(&d, 1, Seed(s)).unwrap();
            counts[idx.indices[0]] += 1;
        }
        for &c in &counts {
            let frac = c as f64 / draws as f64;
            assert!((frac - 1.0 / 3.0).abs() < 0.02, "frequency {frac}");
        }
    }

    #[test]
    fn subsample_rejects_bad_sizes() {
        let d = toy(3);
        assert!(subsample(&d, 0, Seed(0)).is_err());
        assert!(subsample(&d, 4, Seed(0)).is_err());
    }
}
