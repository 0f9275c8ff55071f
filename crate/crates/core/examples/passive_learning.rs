// Learning weights from a handful of complete rankings.

use ahprank::{run_passive, FeedbackOracle, PatternId, RandEmu};
use ahprank::synthetic::measure_collection;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ahprank::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let collection = measure_collection(500, 4, &mut rng)?;
    let mut user = RandEmu::random(4, &mut rng);
    println!("hidden weights {:?}", user.weights());

    // five rankings of eight patterns each
    let mut rankings = Vec::new();
    for _ in 0..5 {
        let shown: Vec<PatternId> = sample(&mut rng, collection.len(), 8)
            .into_iter()
            .map(|i| collection.records()[i].id)
            .collect();
        rankings.extend(user.rank(&collection, &shown)?);
    }
    let out = run_passive(&rankings, &collection)?;
    for (i, w) in out.trace.iter().enumerate() {
        println!("after ranking {}: {:?}", i + 1, w.as_slice());
    }
    Ok(())
}
