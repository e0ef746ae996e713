//! Bagging and subbagging.

use crate::data::{Dataset, Task};
use crate::ensembles::{Aggregation, EnsembleModel};
use crate::error::{Error, Result};
use crate::learners::{train, LearnerSpec, TrainedModel};
use crate::rng::Seed;
use crate::sampling::{bootstrap_sample, subsample, ResampleIndices};

fn aggregation_for(data: &Dataset) -> Aggregation {
    match data.task() {
        Task::Regression => Aggregation::Mean,
        Task::Binary | Task::Multiclass => Aggregation::Plurality {
            labels: data.labels().to_vec(),
        },
    }
}

fn train_members<F>(
    spec: &LearnerSpec,
    t: usize,
    mut draw: F,
) -> Result<(Vec<TrainedModel>, Vec<ResampleIndices>)>
where
    F: FnMut(usize) -> Result<(Dataset, ResampleIndices)>,
{
    let mut members = Vec::with_capacity(t);
    let mut indices = Vec::with_capacity(t);
    for member in 0..t {
        let wrap = |e: Error| Error::MemberTraining {
            member,
            source: Box::new(e),
        };
        let (replicate, idx) = draw(member).map_err(wrap)?;
        members.push(train(spec, &replicate, None).map_err(wrap)?);
        indices.push(idx);
    }
    Ok((members, indices))
}

/// Train `t` members on independent bootstrap replicates and aggregate by
/// mean (regression) or plurality (classification).
pub fn bagging_train(
    spec: &LearnerSpec,
    data: &Dataset,
    t: usize,
    seed: Seed,
) -> Result<EnsembleModel> {
    if t == 0 {
        return Err(Error::invalid_param("t", "bagging requires T >= 1"));
    }
    let (members, indices) = train_members(spec, t, |i| {
        bootstrap_sample(data, seed.derive("member", i as u64))
    })?;
    EnsembleModel::new(members, indices, aggregation_for(data))
}

/// As bagging, but each replicate is a size-`p` subsample drawn without
/// replacement. Replicates are drawn independently of each other.
pub fn subbagging_train(
    spec: &LearnerSpec,
    data: &Dataset,
    t: usize,
    p: usize,
    seed: Seed,
) -> Result<EnsembleModel> {
    if t == 0 {
        return Err(Error::invalid_param("t", "subbagging requires T >= 1"));
    }
    if p == 0 || p > data.len() {
        return Err(Error::invalid_param(
            "p",
            format!(
                "subsample size must satisfy 1 <= p <= m, got p={p}, m={}",
                data.len()
            ),
        ));
    }
    let (members, indices) = train_members(spec, t, |i| {
        subsample(data, p, seed.derive("member", i as u64))
    })?;
    EnsembleModel::new(members, indices, aggregation_for(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Example;
    use crate::synth::{gen_synthetic, SyntheticSpec};
    use crate::Predict;

    #[test]
    fn singleton_dataset_forces_identity_resample() {
        // m = 1: the only possible bootstrap is the identity, so the T=1
        // bagged model must equal the single base model.
        let data = Dataset::new(vec![Example::new(vec![0.5], 2.0)], Task::Regression).unwrap();
        let bagged = bagging_train(&LearnerSpec::knn(1), &data, 1, Seed(3)).unwrap();
        let single = train(&LearnerSpec::knn(1), &data, None).unwrap();
        for x in [-1.0, 0.0, 0.5, 2.0] {
            assert_eq!(bagged.predict(&[x]).unwrap(), single.predict(&[x]).unwrap());
        }
    }

    #[test]
    fn constant_label_data_votes_that_label() {
        let examples = (0..8)
            .map(|i| Example::new(vec![i as f64, -(i as f64)], 1.0))
            .collect();
        let data = Dataset::new(examples, Task::Binary).unwrap();
        let bagged = bagging_train(&LearnerSpec::knn(3), &data, 7, Seed(11)).unwrap();
        for x in [[-5.0, 0.0], [0.0, 0.0], [9.0, 1.0]] {
            assert_eq!(bagged.predict(&x).unwrap(), 1.0);
        }
    }

    #[test]
    fn regression_bagging_matches_explicit_member_average() {
        let data = gen_synthetic(
            &SyntheticSpec::Linear {
                m: 30,
                d: 2,
                noise_std: 0.5,
            },
            Seed(6),
        )
        .unwrap();
        let t = 50;
        let bagged = bagging_train(&LearnerSpec::knn(2), &data, t, Seed(9)).unwrap();
        let probe = vec![0.3, -0.7];
        let by_hand: f64 = bagged
            .members
            .iter()
            .map(|m| m.predict(&probe).unwrap() * (1.0 / t as f64))
            .sum();
        let got = bagged.predict(&probe).unwrap();
        assert!((got - by_hand).abs() < 1e-12);
    }

    #[test]
    fn bagging_is_deterministic_per_seed() {
        let data = gen_synthetic(
            &SyntheticSpec::Blobs {
                m: 20,
                d: 2,
                separation: 2.0,
            },
            Seed(1),
        )
        .unwrap();
        let a = bagging_train(&LearnerSpec::knn(3), &data, 5, Seed(42)).unwrap();
        let b = bagging_train(&LearnerSpec::knn(3), &data, 5, Seed(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn full_size_subsamples_give_identical_ridge_members() {
        // p = m trains members on permutations of D; ridge is
        // permutation-invariant, so every member equals the full-data model.
        let data = gen_synthetic(
            &SyntheticSpec::Linear {
                m: 25,
                d: 3,
                noise_std: 0.4,
            },
            Seed(14),
        )
        .unwrap();
        let spec = LearnerSpec::ridge(0.5);
        let ensemble = subbagging_train(&spec, &data, 4, data.len(), Seed(8)).unwrap();
        let full = match train(&spec, &data, None).unwrap() {
            TrainedModel::Ridge(r) => r,
            _ => unreachable!(),
        };
        for member in &ensemble.members {
            let TrainedModel::Ridge(r) = member else {
                unreachable!()
            };
            for (a, b) in r.weights().iter().zip(full.weights()) {
                assert!((a - b).abs() < 1e-9);
            }
            assert!((r.intercept() - full.intercept()).abs() < 1e-9);
        }
    }

    #[test]
    fn single_point_subsamples_vote_majority_of_sampled_labels() {
        let data = gen_synthetic(
            &SyntheticSpec::Blobs {
                m: 12,
                d: 2,
                separation: 3.0,
            },
            Seed(2),
        )
        .unwrap();
        let t = 9;
        let ensemble = subbagging_train(&LearnerSpec::knn(1), &data, t, 1, Seed(5)).unwrap();
        // Each member is a 1-NN on a single point: a constant at that label.
        let sampled_labels: Vec<f64> = ensemble
            .member_indices
            .iter()
            .map(|idx| data.example(idx.indices[0]).y)
            .collect();
        let expected = crate::voting::plurality(&[-1.0, 1.0], sampled_labels);
        assert_eq!(ensemble.predict(&[0.0, 0.0]).unwrap(), expected);
    }

    #[test]
    fn subbagging_validates_p() {
        let data = gen_synthetic(
            &SyntheticSpec::Blobs {
                m: 6,
                d: 2,
                separation: 3.0,
            },
            Seed(2),
        )
        .unwrap();
        assert!(subbagging_train(&LearnerSpec::knn(1), &data, 3, 0, Seed(0)).is_err());
        assert!(subbagging_train(&LearnerSpec::knn(1), &data, 3, 7, Seed(0)).is_err());
    }
}
