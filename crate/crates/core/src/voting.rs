//! Vote aggregation helpers shared by k-NN and the ensembles.

/// Map a real-valued binary score to a vote in {-1, +1}. A score of exactly
/// zero votes for the smaller class, matching the plurality tie rule.
#[inline]
pub fn binary_vote(score: f64) -> f64 {
    if score > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Plurality winner among `votes`, restricted to the declared label set.
/// Ties break toward the smallest class index. Votes are matched to the
/// nearest declared label so that score-valued inputs still count.
pub fn plurality(labels: &[f64], votes: impl IntoIterator<Item = f64>) -> f64 {
    debug_assert!(!labels.is_empty(), "plurality needs a declared label set");
    let mut counts = vec![0usize; labels.len()];
    for v in votes {
        let mut best = 0usize;
        let mut best_dist = f64::INFINITY;
        for (i, &l) in labels.iter().enumerate() {
            let dist = (v - l).abs();
            if dist < best_dist {
                best_dist = dist;
                best = i;
            }
        }
        counts[best] += 1;
    }
    let mut winner = 0usize;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[winner] {
            winner = i;
        }
    }
    labels[winner]
}
