// Active learning against an emulated user, step by step and in one call.

use ahprank::learner::{rank_by_gw, write_trace_csv};
use ahprank::synthetic::measure_collection;
use ahprank::{
    run_active, spearman, ActiveLearner, FeedbackOracle, LearnerConfig, QueryStrategy, RandEmu, RankAssignment,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ahprank::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let collection = measure_collection(3000, 5, &mut rng)?;
    let mut user = RandEmu::random(5, &mut rng);
    let target = user.rank(&collection, &collection.ids())?.expect("emulators always answer");
    let target = target.to_ranks();

    let config = LearnerConfig {
        theta: 500,
        max_queries: 15,
        seed: 3,
        strategy: QueryStrategy::Sbg,
    };

    // the state machine a front end would drive
    let mut learner = ActiveLearner::new(config.clone(), collection.measure_count())?;
    while let Some((a, b)) = learner.next_query(&collection)? {
        let answer = user.rank(&collection, &[a, b])?.expect("emulators always answer");
        learner.answer(&collection, answer)?;
        let order: Vec<_> = rank_by_gw(collection.records(), learner.weights())?
            .into_iter()
            .map(|(id, _)| id)
            .collect();
        let rho = spearman(&RankAssignment::from_order(&order)?, &target)?;
        println!("t={:>2} query ({a}, {b}) rho {rho:.4}", learner.iteration());
    }

    // the same run through the driver gives the same weights
    let out = run_active(&mut user, &collection, &config)?;
    assert_eq!(&out.weights, learner.weights());
    println!("target  {:?}", user.weights());
    println!("learned {:?}", out.weights.as_slice());
    write_trace_csv(&out.trace, collection.measure_names(), std::io::stdout())?;
    Ok(())
}
