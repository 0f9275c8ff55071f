// Serves a synthetic dataset and answers its queries over HTTP with an
// emulated user, the way a browser client would.

use std::net::SocketAddr;
use std::sync::Arc;

use ahprank::synthetic::measure_collection;
use ahprank::RandEmu;
use ahprank_session::{router, AnswerView, AppState, QueryView, SessionView};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let collection = measure_collection(1000, 4, &mut ChaCha8Rng::seed_from_u64(1))?;
    let app = Arc::new(AppState::new().with_dataset("demo", collection));
    let listener = tokio::net::TcpListener::bind(SocketAddr::from(([127, 0, 0, 1], 0))).await?;
    let base = format!("http://{}", listener.local_addr()?);
    let server = tokio::spawn(async move { axum::serve(listener, router(app, None)).await });

    let client = reqwest::Client::new();
    let session: SessionView = client
        .post(format!("{base}/sessions"))
        .json(&json!({ "max_queries": 8, "theta": 200, "seed": 5 }))
        .send()
        .await?
        .json()
        .await?;
    let user = RandEmu::random(4, &mut ChaCha8Rng::seed_from_u64(2));
    println!("session {} target {:?}", session.id, user.weights());

    loop {
        let resp = client.get(format!("{base}/sessions/{}/query", session.id)).send().await?;
        if resp.status() == reqwest::StatusCode::GONE {
            break;
        }
        let q: QueryView = resp.json().await?;
        let score = |i: usize| {
            let values: Vec<f64> = session.measures.iter().map(|m| q.pair[i].scaled[m]).collect();
            user.score(&values)
        };
        let preferred = if score(0) >= score(1) { q.pair[0].id } else { q.pair[1].id };
        let a: AnswerView = client
            .post(format!("{base}/sessions/{}/answer", session.id))
            .json(&json!({ "preferred": preferred }))
            .send()
            .await?
            .json()
            .await?;
        println!("t={} preferred {preferred} weights {:?}", a.iteration, a.weights);
    }

    let top: Vec<ahprank_session::PatternView> = client
        .get(format!("{base}/sessions/{}/ranking?k=3", session.id))
        .send()
        .await?
        .json()
        .await?;
    for p in top {
        println!("pattern {} {:?}", p.id, p.scaled);
    }
    server.abort();
    Ok(())
}
