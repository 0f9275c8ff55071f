//! Feedback sources: user emulators and wrappers that perturb them.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ahp::WeightVector;
use crate::collection::PatternCollection;
use crate::dataset::TransactionDb;
use crate::error::{Error, Result};
use crate::learner::FeedbackRanking;
use crate::mining::{contingency, AssociationRule};
use crate::ranking::PatternId;

/// Something that can order a presented set of patterns, most preferred
/// first. `Ok(None)` means the source gave up (a user closing the session).
pub trait FeedbackOracle {
    fn rank(&mut self, collection: &PatternCollection, presented: &[PatternId]) -> Result<Option<FeedbackRanking>>;
}

impl<O: FeedbackOracle + ?Sized> FeedbackOracle for Box<O> {
    fn rank(&mut self, collection: &PatternCollection, presented: &[PatternId]) -> Result<Option<FeedbackRanking>> {
        (**self).rank(collection, presented)
    }
}

impl<O: FeedbackOracle + ?Sized> FeedbackOracle for &mut O {
    fn rank(&mut self, collection: &PatternCollection, presented: &[PatternId]) -> Result<Option<FeedbackRanking>> {
        (**self).rank(collection, presented)
    }
}

/// Orders ids by descending key, ties by ascending id.
fn rank_by_key(presented: &[PatternId], mut key: impl FnMut(PatternId) -> Result<f64>) -> Result<FeedbackRanking> {
    let mut scored = presented
        .iter()
        .map(|id| Ok((*id, key(*id)?)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0)));
    FeedbackRanking::new(scored.into_iter().map(|(id, _)| id).collect())
}

/// Linear target: descending `Σ w_i · scaled_i`.
#[derive(Clone, Debug)]
pub struct RandEmu {
    weights: Vec<f64>,
}

impl RandEmu {
    pub fn new(weights: WeightVector) -> Self {
        RandEmu {
            weights: weights.into_inner(),
        }
    }

    /// Non-negative target weights, normalized; zeros are allowed here.
    pub fn from_raw(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::arg("emulator weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::arg("emulator weights must not all be zero"));
        }
        Ok(RandEmu {
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    /// Draws `w_i` uniformly in `(0, 1]` and normalizes.
    pub fn random<R: Rng>(m: usize, rng: &mut R) -> Self {
        let raw: Vec<f64> = (0..m).map(|_| 1.0 - rng.gen::<f64>()).collect();
        RandEmu::new(WeightVector::normalized(raw).expect("draws are positive"))
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn score(&self, scaled: &[f64]) -> f64 {
        self.weights.iter().zip(scaled).map(|(w, v)| w * v).sum()
    }
}

impl FeedbackOracle for RandEmu {
    fn rank(&mut self, collection: &PatternCollection, presented: &[PatternId]) -> Result<Option<FeedbackRanking>> {
        if collection.measure_count() != self.weights.len() {
            return Err(Error::arg("emulator weights do not match the measure count"));
        }
        rank_by_key(presented, |id| Ok(self.score(&collection.require(id)?.scaled))).map(Some)
    }
}

/// Lexicographic target over raw measure values.
#[derive(Clone, Debug)]
pub struct LexEmu {
    order: Vec<usize>,
}

impl LexEmu {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, v)| i != *v) {
            return Err(Error::arg("lexicographic order must be a permutation of the measures"));
        }
        Ok(LexEmu { order })
    }

    pub fn random<R: Rng>(m: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);
        LexEmu { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `Less` when `a` is preferred.
    pub fn compare(&self, a: &[f64], b: &[f64]) -> Ordering {
        for &i in &self.order {
            match b[i].partial_cmp(&a[i]).unwrap_or(Ordering::Equal) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }
}

impl FeedbackOracle for LexEmu {
    fn rank(&mut self, collection: &PatternCollection, presented: &[PatternId]) -> Result<Option<FeedbackRanking>> {
        if self.order.len() != collection.measure_count() {
            return Err(Error::arg("lexicographic order does not match the measure count"));
        }
        let mut recs = presented
            .iter()
            .map(|id| collection.require(*id))
            .collect::<Result<Vec<_>>>()?;
        recs.sort_by(|a, b| self.compare(&a.measures, &b.measures).then(a.id.cmp(&b.id)));
        FeedbackRanking::new(recs.into_iter().map(|r| r.id).collect()).map(Some)
    }
}

/// `(freq(X∪Y) − freq(X)·freq(Y)/N)² / (freq(X)·freq(Y)/N)`, and 0 when
/// `freq(X)·freq(Y) = 0`.
pub fn chi_square(db: &TransactionDb, rule: &AssociationRule) -> f64 {
    let t = contingency(db, rule);
    let fx = t.freq_body() as f64;
    let fy = t.freq_head() as f64;
    if fx * fy == 0.0 || t.n == 0 {
        return 0.0;
    }
    let expected = fx * fy / t.n as f64;
    (t.f11 as f64 - expected).powi(2) / expected
}

/// χ² target; patterns must carry their rule.
#[derive(Clone, Debug)]
pub struct ChiEmu {
    db: Arc<TransactionDb>,
}

impl ChiEmu {
    pub fn new(db: Arc<TransactionDb>) -> Self {
        ChiEmu { db }
    }

    pub fn score(&self, collection: &PatternCollection, id: PatternId) -> Result<f64> {
        let rec = collection.require(id)?;
        let rule = rec
            .rule
            .as_ref()
            .ok_or_else(|| Error::arg(format!("pattern {id} has no rule to score")))?;
        Ok(chi_square(&self.db, rule))
    }
}

impl FeedbackOracle for ChiEmu {
    fn rank(&mut self, collection: &PatternCollection, presented: &[PatternId]) -> Result<Option<FeedbackRanking>> {
        let this = &*self;
        rank_by_key(presented, |id| this.score(collection, id)).map(Some)
    }
}

/// Reverses the inner answer with probability `err`, independently per query.
#[derive(Debug)]
pub struct WithMistakes<O> {
    inner: O,
    err: f64,
    rng: ChaCha8Rng,
    flips: Vec<bool>,
}

impl<O> WithMistakes<O> {
    pub fn new(inner: O, err: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&err) {
            return Err(Error::arg(format!("error rate {err} outside [0,1]")));
        }
        Ok(WithMistakes {
            inner,
            err,
            rng: ChaCha8Rng::seed_from_u64(seed),
            flips: Vec::new(),
        })
    }

    /// Which answers so far were flipped.
    pub fn flips(&self) -> &[bool] {
        &self.flips
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: FeedbackOracle> FeedbackOracle for WithMistakes<O> {
    fn rank(&mut self, collection: &PatternCollection, presented: &[PatternId]) -> Result<Option<FeedbackRanking>> {
        let Some(answer) = self.inner.rank(collection, presented)? else {
            return Ok(None);
        };
        let flip = self.err > 0.0 && self.rng.gen::<f64>() < self.err;
        self.flips.push(flip);
        Ok(Some(if flip { answer.reversed() } else { answer }))
    }
}

/// Answers the first `switch_after` queries with `first`, the rest with `second`.
#[derive(Debug)]
pub struct WithSwap<A, B> {
    first: A,
    second: B,
    switch_after: usize,
    answered: usize,
}

impl<A, B> WithSwap<A, B> {
    pub fn new(first: A, second: B, switch_after: usize) -> Self {
        WithSwap {
            first,
            second,
            switch_after,
            answered: 0,
        }
    }

    pub fn answered(&self) -> usize {
        self.answered
    }
}

impl<A: FeedbackOracle, B: FeedbackOracle> FeedbackOracle for WithSwap<A, B> {
    fn rank(&mut self, collection: &PatternCollection, presented: &[PatternId]) -> Result<Option<FeedbackRanking>> {
        let out = if self.answered < self.switch_after {
            self.first.rank(collection, presented)?
        } else {
            self.second.rank(collection, presented)?
        };
        if out.is_some() {
            self.answered += 1;
        }
        Ok(out)
    }
}

/// Replays recorded preferences: each entry names the preferred pattern of
/// the next pairwise query. Runs dry → abort.
#[derive(Clone, Debug, Default)]
pub struct ScriptedOracle {
    answers: VecDeque<PatternId>,
}

impl ScriptedOracle {
    pub fn new(answers: impl IntoIterator<Item = PatternId>) -> Self {
        ScriptedOracle {
            answers: answers.into_iter().collect(),
        }
    }
}

impl FeedbackOracle for ScriptedOracle {
    fn rank(&mut self, _collection: &PatternCollection, presented: &[PatternId]) -> Result<Option<FeedbackRanking>> {
        let Some(preferred) = self.answers.pop_front() else {
            return Ok(None);
        };
        if !presented.contains(&preferred) {
            return Err(Error::arg(format!("scripted answer {preferred} was not presented")));
        }
        let mut order = vec![preferred];
        order.extend(presented.iter().copied().filter(|id| *id != preferred));
        FeedbackRanking::new(order).map(Some)
    }
}

/// Serializable description of an emulated user.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EmulatorSpec {
    /// Random linear weights drawn from `seed`, unless given explicitly.
    Rand {
        seed: u64,
        #[serde(default)]
        weights: Option<Vec<f64>>,
    },
    /// Lexicographic order over measure indices; random from `seed` if absent.
    Lex {
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        order: Option<Vec<usize>>,
    },
    Chi,
}

impl EmulatorSpec {
    /// `db` is required for the χ² emulator.
    pub fn build(&self, m: usize, db: Option<Arc<TransactionDb>>) -> Result<Box<dyn FeedbackOracle + Send>> {
        Ok(match self {
            EmulatorSpec::Rand { seed, weights } => match weights {
                Some(w) => Box::new(RandEmu::from_raw(w.clone())?),
                None => Box::new(RandEmu::random(m, &mut ChaCha8Rng::seed_from_u64(*seed))),
            },
            EmulatorSpec::Lex { seed, order } => match order {
                Some(o) => Box::new(LexEmu::new(o.clone())?),
                None => Box::new(LexEmu::random(m, &mut ChaCha8Rng::seed_from_u64(*seed))),
            },
            EmulatorSpec::Chi => {
                let db = db.ok_or_else(|| Error::arg("the chi-square emulator needs a transaction database"))?;
                Box::new(ChiEmu::new(db))
            }
        })
    }
}
