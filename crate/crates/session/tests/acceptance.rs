//! Replay check: a session driven over HTTP ends with the same weights as the
//! offline learner fed the same answers.

mod common;

use ahprank::{run_active, LearnerConfig, QueryStrategy, RandEmu, ScriptedOracle};
use ahprank_session::{AnswerView, QueryView, SessionView, Status};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn criterion_9_replay_equivalence() {
    let collection = common::collection();
    let base = common::spawn(ahprank_session::AppState::new().with_dataset("synthetic", collection.clone())).await;
    let client = reqwest::Client::new();

    let created: SessionView = client
        .post(format!("{base}/sessions"))
        .json(&json!({ "dataset": "synthetic", "theta": 200, "max_queries": 10, "seed": 99 }))
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();
    let id = created.id;

    // the client harness answers from the measure values in each payload
    let user = RandEmu::random(5, &mut ChaCha8Rng::seed_from_u64(7));
    let names = created.measures;
    let mut answers = Vec::new();
    for _ in 0..10 {
        let q: QueryView = client
            .get(format!("{base}/sessions/{id}/query"))
            .send()
            .await
            .unwrap()
            .json()
            .await
            .unwrap();
        let score = |p: &ahprank_session::PatternView| {
            user.score(&names.iter().map(|n| p.scaled[n]).collect::<Vec<_>>())
        };
        let [a, b] = &q.pair;
        let preferred = if score(a) > score(b) || (score(a) == score(b) && a.id < b.id) { a.id } else { b.id };
        let _: AnswerView = client
            .post(format!("{base}/sessions/{id}/answer"))
            .json(&json!({ "preferred": preferred }))
            .send()
            .await
            .unwrap()
            .json()
            .await
            .unwrap();
        answers.push(preferred);
    }
    let state: SessionView = client
        .get(format!("{base}/sessions/{id}"))
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();

    let config = LearnerConfig {
        theta: 200,
        max_queries: 10,
        seed: 99,
        strategy: QueryStrategy::Sbg,
    };
    let offline = run_active(&mut ScriptedOracle::new(answers), &collection, &config).unwrap();
    let bits = |w: &[f64]| w.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    let ok = state.status == Status::Finished
        && state.iteration == 10
        && !offline.aborted
        && bits(&state.weights) == bits(offline.weights.as_slice());
    println!(
        "criterion 9: {} session {:?} vs offline {:?}",
        if ok { "PASS" } else { "FAIL" },
        state.weights,
        offline.weights.as_slice()
    );
    assert!(ok);
}
