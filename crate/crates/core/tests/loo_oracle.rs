//! Leave-one-out error against hand-computed fixtures.

use stackstab::learners::LearnerSpec;
use stackstab::loss::LossKind;
use stackstab::recipe::RecipeSpec;
use stackstab::risk::loo_error;
use stackstab::rng::Seed;
use stackstab::{Dataset, Example, Task};

/// Four planar points with all-distinct pairwise distances. The leave-one-out
/// prediction of 1-NN at each point is the label of its nearest *other*
/// point, worked out by hand:
///   p0=(0,0) -> nearest other p1 (d=1), label 2
///   p1=(1,0) -> nearest other p0 (d=1), label 1
///   p2=(3,0) -> nearest other p3 (d=1), label 20
///   p3=(3,1) -> nearest other p2 (d=1), label 10
/// Squared losses: (1-2)^2, (2-1)^2, (10-20)^2, (20-10)^2 -> mean 50.5.
#[test]
fn one_nn_loo_matches_hand_computation() {
    let data = Dataset::new(
        vec![
            Example::new(vec![0.0, 0.0], 1.0),
            Example::new(vec![1.0, 0.0], 2.0),
            Example::new(vec![3.0, 0.0], 10.0),
            Example::new(vec![3.0, 1.0], 20.0),
        ],
        Task::Regression,
    )
    .unwrap();
    let recipe = RecipeSpec::learner(LearnerSpec::knn(1));
    let loo = loo_error(&recipe, &data, &LossKind::Squared, Seed(0)).unwrap();
    assert!((loo - 50.5).abs() < 1e-12, "loo = {loo}");
}

#[test]
fn loo_is_seed_stable_for_deterministic_recipes() {
    let data = Dataset::new(
        vec![
            Example::new(vec![0.0, 0.0], 1.0),
            Example::new(vec![1.0, 0.0], 2.0),
            Example::new(vec![3.0, 0.0], 10.0),
        ],
        Task::Regression,
    )
    .unwrap();
    let recipe = RecipeSpec::learner(LearnerSpec::knn(1));
    let a = loo_error(&recipe, &data, &LossKind::Squared, Seed(1)).unwrap();
    let b = loo_error(&recipe, &data, &LossKind::Squared, Seed(2)).unwrap();
    assert_eq!(a, b);
}

/// LOO of a randomized recipe retrains all internal resampling per fold, so
/// the fold models differ across master seeds but each run is reproducible.
#[test]
fn loo_of_bagged_recipe_is_reproducible() {
    let data = stackstab::synth::gen_synthetic(
        &stackstab::SyntheticSpec::Blobs {
            m: 14,
            d: 2,
            separation: 2.0,
        },
        Seed(3),
    )
    .unwrap();
    let recipe = RecipeSpec::Bagging {
        base: LearnerSpec::knn(1),
        t: 7,
    };
    let a = loo_error(&recipe, &data, &LossKind::Classification01, Seed(5)).unwrap();
    let b = loo_error(&recipe, &data, &LossKind::Classification01, Seed(5)).unwrap();
    assert_eq!(a, b);
    assert!((0.0..=1.0).contains(&a));
}
