//! k-nearest neighbors.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Task};
use crate::voting;

/// A fitted k-NN model: the whole training set plus `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    k: usize,
    xs: Vec<Vec<f64>>,
    ys: Vec<f64>,
    task: Task,
    labels: Vec<f64>,
}

pub(super) fn fit(k: usize, data: &Dataset) -> KnnModel {
    KnnModel {
        k,
        xs: data.iter().map(|e| e.x.clone()).collect(),
        ys: data.iter().map(|e| e.y).collect(),
        task: data.task(),
        labels: data.labels().to_vec(),
    }
}

impl KnnModel {
    pub fn dim(&self) -> usize {
        self.xs[0].len()
    }

    pub fn training_size(&self) -> usize {
        self.xs.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Mean label of the `min(k, m)` nearest training points (Euclidean).
    /// Distance ties break by training index, so predictions on datasets
    /// with all-distinct pairwise distances are permutation-invariant.
    /// Binary labels are +-1, so the mean is a score in [-1, 1]; multiclass
    /// aggregates by plurality instead.
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut order: Vec<(f64, usize)> = self
            .xs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d2: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, i)
            })
            .collect();
        order.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let k = self.k.min(order.len());
        let neighbors = order[..k].iter().map(|&(_, i)| self.ys[i]);
        match self.task {
            Task::Regression | Task::Binary => neighbors.sum::<f64>() / k as f64,
            Task::Multiclass => voting::plurality(&self.labels, neighbors),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Dataset, Example, Task};
    use crate::rng::Seed;

    fn planar(points: &[([f64; 2], f64)], task: Task) -> Dataset {
        Dataset::new(
            points
                .iter()
                .map(|(x, y)| Example::new(x.to_vec(), *y))
                .collect(),
            task,
        )
        .unwrap()
    }

    #[test]
    fn one_nn_at_a_training_point_returns_its_label() {
        let d = planar(
            &[([0.0, 0.0], 1.0), ([2.0, 0.0], -1.0), ([0.0, 2.0], 1.0)],
            Task::Binary,
        );
        let m = fit(1, &d);
        for e in d.iter() {
            assert_eq!(m.predict(&e.x), e.y);
        }
    }

    #[test]
    fn three_nn_binary_score_is_vote_fraction() {
        let d = planar(
            &[
                ([0.0, 0.0], 1.0),
                ([0.1, 0.0], 1.0),
                ([0.0, 0.1], -1.0),
                ([5.0, 5.0], -1.0),
            ],
            Task::Binary,
        );
        let m = fit(3, &d);
        let score = m.predict(&[0.0, 0.0]);
        assert!((score - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn distance_ties_break_by_training_index() {
        // Two equidistant neighbors with different labels; k = 1 must pick
        // the earlier one.
        let d = planar(&[([1.0, 0.0], 1.0), ([-1.0, 0.0], -1.0)], Task::Binary);
        let m = fit(1, &d);
        assert_eq!(m.predict(&[0.0, 0.0]), 1.0);
    }

    #[test]
    fn k_larger_than_m_uses_all_points() {
        let d = planar(&[([0.0, 0.0], 2.0), ([1.0, 0.0], 4.0)], Task::Regression);
        let m = fit(10, &d);
        assert_eq!(m.predict(&[0.5, 0.0]), 3.0);
    }

    #[test]
    fn prediction_is_permutation_invariant_on_distinct_distances() {
        let spec = crate::synth::SyntheticSpec::Blobs {
            m: 15,
            d: 3,
            separation: 2.0,
        };
        let data = crate::synth::gen_synthetic(&spec, Seed(8)).unwrap();
        let model = fit(3, &data);

        let mut perm: Vec<usize> = (0..data.len()).collect();
        Seed(77).stream("perm", 0).shuffle(&mut perm);
        let shuffled = data.reindex(&perm).unwrap();
        let model_shuffled = fit(3, &shuffled);

        let mut probe = Seed(5).stream("probe", 0);
        for _ in 0..20 {
            let x: Vec<f64> = (0..3).map(|_| probe.next_gaussian()).collect();
            assert_eq!(model.predict(&x), model_shuffled.predict(&x));
        }
    }

    #[test]
    fn multiclass_plurality_with_smallest_tie() {
        let d = planar(
            &[([0.0, 0.0], 0.0), ([0.1, 0.0], 1.0), ([5.0, 5.0], 2.0)],
            Task::Multiclass,
        );
        let m = fit(2, &d);
        // Neighbors are classes {0, 1}: tie, smallest class index wins.
        assert_eq!(m.predict(&[0.05, 0.0]), 0.0);
    }
}
