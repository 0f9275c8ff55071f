//! The five-pattern, five-measure worked example learned end to end.

use ahprank::learner::measure_ranks;
use ahprank::{
    kendall_w, run_passive, FeedbackRanking, PatternCollection, PatternId, ScalingMode,
};

fn first_five() -> PatternCollection {
    let rows = [
        [0.47, 0.47, 0.76, 0.56, 0.59],
        [0.48, 0.66, 0.65, 0.1, 0.05],
        [0.75, 0.72, 0.78, 0.70, 0.61],
        [0.50, 0.68, 0.77, 0.50, 0.35],
        [0.62, 0.62, 0.66, 0.57, 0.27],
    ];
    PatternCollection::from_rows(
        (1..=5).map(|i| format!("M{i}")).collect(),
        rows.iter().enumerate().map(|(i, r)| (i as PatternId + 1, None, r.to_vec())).collect(),
        ScalingMode::Identity,
    )
    .unwrap()
}

#[test]
fn concordances_and_gaps_from_one_ranking() {
    let c = first_five();
    let user = FeedbackRanking::new(vec![3, 1, 5, 2, 4]).unwrap();
    // rank sums worked out by hand, W = 3·α / (n³ − n) with n = 5
    let want_k = [0.65, 0.5, 0.7, 0.9, 0.85];
    let ranks = measure_ranks(&c, &user).unwrap();
    for (r, want) in ranks.iter().zip(want_k) {
        assert!((kendall_w(r, &user.to_ranks()).unwrap() - want).abs() < 1e-12);
    }

    let out = run_passive(&[user], &c).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            assert!((out.state.get(i, j) - (want_k[i] - want_k[j])).abs() < 1e-12);
        }
    }
    let w = out.weights.as_slice();
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    // M4 agrees most with the user, M2 least
    let best = (0..5).max_by(|a, b| w[*a].total_cmp(&w[*b])).unwrap();
    let worst = (0..5).min_by(|a, b| w[*a].total_cmp(&w[*b])).unwrap();
    assert_eq!((best, worst), (3, 1));
}
