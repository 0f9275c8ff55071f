//! Synthetic inputs for experiments and tests.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::collection::{PatternCollection, ScalingMode};
use crate::dataset::{Item, Itemset, TransactionDb};
use crate::error::{Error, Result};
use crate::ranking::PatternId;

/// `n` patterns with `m` measure values drawn uniformly from `[0, 1)`,
/// ids `0..n`, identity scaling.
pub fn measure_collection<R: Rng>(n: usize, m: usize, rng: &mut R) -> Result<PatternCollection> {
    let names = (1..=m).map(|i| format!("M{i}")).collect();
    let rows = (0..n)
        .map(|i| (i as PatternId, None, (0..m).map(|_| rng.gen::<f64>()).collect()))
        .collect();
    PatternCollection::from_rows(names, rows, ScalingMode::Identity)
}

/// Independent item noise plus a few planted itemsets that co-occur.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DbConfig {
    pub transactions: usize,
    pub items: usize,
    /// Range for each item's background probability.
    pub item_prob: (f64, f64),
    pub planted: usize,
    /// Inclusive size range of planted itemsets.
    pub planted_size: (usize, usize),
    /// Range for the probability that a transaction contains a planted itemset.
    pub planted_prob: (f64, f64),
}

impl Default for DbConfig {
    fn default() -> Self {
        DbConfig {
            transactions: 2000,
            items: 30,
            item_prob: (0.05, 0.4),
            planted: 8,
            planted_size: (2, 4),
            planted_prob: (0.05, 0.3),
        }
    }
}

pub fn transaction_db<R: Rng>(config: &DbConfig, rng: &mut R) -> Result<TransactionDb> {
    let (lo, hi) = config.planted_size;
    if config.items == 0 || lo == 0 || lo > hi || hi > config.items {
        return Err(Error::arg("invalid synthetic database shape"));
    }
    for (a, b) in [config.item_prob, config.planted_prob] {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a > b {
            return Err(Error::arg("probability ranges must lie in [0,1] and be ordered"));
        }
    }
    let draw = |rng: &mut R, (a, b): (f64, f64)| if a == b { a } else { rng.gen_range(a..b) };
    let probs: Vec<f64> = (0..config.items).map(|_| draw(rng, config.item_prob)).collect();
    let planted: Vec<(Vec<Item>, f64)> = (0..config.planted)
        .map(|_| {
            let size = rng.gen_range(lo..=hi);
            let items = index::sample(rng, config.items, size).into_iter().map(|i| i as Item).collect();
            (items, draw(rng, config.planted_prob))
        })
        .collect();

    let transactions = (0..config.transactions).map(|_| {
        let mut t: Vec<Item> = (0..config.items)
            .filter(|&i| rng.gen::<f64>() < probs[i])
            .map(|i| i as Item)
            .collect();
        for (items, p) in &planted {
            if rng.gen::<f64>() < *p {
                t.extend(items);
            }
        }
        Itemset::new(t)
    });
    Ok(TransactionDb::from_transactions(transactions.collect::<Vec<_>>()))
}
