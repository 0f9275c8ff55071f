use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use ahprank::synthetic::measure_collection;
use ahprank::PatternCollection;
use ahprank_session::{router, AppState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn collection() -> PatternCollection {
    measure_collection(2000, 5, &mut ChaCha8Rng::seed_from_u64(2024)).unwrap()
}

/// Starts a server on an ephemeral port and returns its base URL.
pub async fn spawn(app: AppState) -> String {
    spawn_with_assets(app, None).await
}

pub async fn spawn_with_assets(app: AppState, assets: Option<PathBuf>) -> String {
    let listener = tokio::net::TcpListener::bind(SocketAddr::from(([127, 0, 0, 1], 0)))
        .await
        .unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move {
        axum::serve(listener, router(Arc::new(app), assets)).await.unwrap();
    });
    format!("http://{addr}")
}
