// Scoring ten patterns with fixed weights and comparing against a user order.

use ahprank::{rank_by_gw, spearman, PatternCollection, PatternId, RankAssignment, ScalingMode, WeightVector};

fn main() -> ahprank::Result<()> {
    let rows = [
        [0.47, 0.47, 0.76, 0.56, 0.59],
        [0.48, 0.66, 0.65, 0.1, 0.05],
        [0.75, 0.72, 0.78, 0.70, 0.61],
        [0.50, 0.68, 0.77, 0.50, 0.35],
        [0.62, 0.62, 0.66, 0.57, 0.27],
        [0.80, 0.49, 0.50, 0.65, 0.60],
        [0.95, 0.48, 0.79, 0.30, 0.80],
        [0.56, 0.65, 0.63, 0.69, 0.40],
        [0.02, 0.1, 0.05, 0.8, 0.25],
        [0.57, 0.50, 0.80, 0.4, 0.02],
    ];
    let collection = PatternCollection::from_rows(
        (1..=5).map(|i| format!("M{i}")).collect(),
        rows.iter().enumerate().map(|(i, r)| (i as PatternId + 1, None, r.to_vec())).collect(),
        ScalingMode::Identity,
    )?;
    let w = WeightVector::new(vec![0.24, 0.24, 0.065, 0.065, 0.39])?;

    let scored = rank_by_gw(collection.records(), &w)?;
    for (rank, (id, g)) in scored.iter().enumerate() {
        println!("{:>2}. P{id:<2} g_w = {g:.4}", rank + 1);
    }
    let learned = RankAssignment::from_order(&scored.iter().map(|(id, _)| *id).collect::<Vec<_>>())?;
    let user = RankAssignment::from_order(&[7, 3, 6, 1, 8, 10, 5, 2, 4, 9])?;
    println!("spearman against the user: {:.4}", spearman(&learned, &user)?);
    Ok(())
}
