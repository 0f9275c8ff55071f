//! The ranking learner.
//!
//! Each piece of feedback is a ranking of a few patterns. For every measure
//! we compute Kendall's W between the measure's own ordering of those
//! patterns and the user's ordering, fold the pairwise differences into a
//! [`DeltaState`], and re-derive the measure weights from the resulting
//! comparison matrix. Patterns are then scored by `g_w(P) = Σ w_i·scaled_i(P)`.
//!
//! Two drivers are provided: [`run_passive`] consumes a fixed list of
//! rankings, and [`ActiveLearner`] / [`run_active`] repeatedly sample the
//! collection, pick the most informative pair and ask for its order.

use std::cmp::Ordering;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ahp::{build_matrix, evm_weights, DeltaState, WeightVector};
use crate::collection::{PatternCollection, PatternRecord};
use crate::error::{Error, Result};
use crate::oracles::FeedbackOracle;
use crate::ranking::{kendall_w, PatternId, RankAssignment};

/// A user's strict order over presented patterns, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PatternId>", into = "Vec<PatternId>")]
pub struct FeedbackRanking(Vec<PatternId>);

impl FeedbackRanking {
    pub fn new(ids: Vec<PatternId>) -> Result<Self> {
        if ids.len() < 2 {
            return Err(Error::arg("a ranking needs at least two patterns"));
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::arg("a ranking must not repeat a pattern"));
        }
        Ok(FeedbackRanking(ids))
    }

    pub fn ids(&self) -> &[PatternId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        FeedbackRanking(self.0.iter().rev().copied().collect())
    }

    pub fn to_ranks(&self) -> RankAssignment {
        RankAssignment::from_order(&self.0).expect("validated at construction")
    }
}

impl TryFrom<Vec<PatternId>> for FeedbackRanking {
    type Error = Error;

    fn try_from(ids: Vec<PatternId>) -> Result<Self> {
        FeedbackRanking::new(ids)
    }
}

impl From<FeedbackRanking> for Vec<PatternId> {
    fn from(r: FeedbackRanking) -> Self {
        r.0
    }
}

/// Per-measure rankings of the patterns in `ranking`, by raw value.
pub fn measure_ranks(collection: &PatternCollection, ranking: &FeedbackRanking) -> Result<Vec<RankAssignment>> {
    let records = ranking
        .ids()
        .iter()
        .map(|id| collection.require(*id))
        .collect::<Result<Vec<_>>>()?;
    (0..collection.measure_count())
        .map(|i| {
            let scores: Vec<(PatternId, f64)> = records.iter().map(|r| (r.id, r.measures[i])).collect();
            RankAssignment::rank_by(&scores, true)
        })
        .collect()
}

/// Folds one ranking into `state` given each measure's ranks over the same
/// patterns, and returns the refreshed weights.
pub fn learn_weights_from_ranks(
    state: &mut DeltaState,
    user: &RankAssignment,
    measure_ranks: &[RankAssignment],
) -> Result<WeightVector> {
    if user.len() < 2 {
        return Err(Error::arg("a ranking needs at least two patterns"));
    }
    if measure_ranks.len() != state.criteria() {
        return Err(Error::arg(format!(
            "{} measure rankings for {} criteria",
            measure_ranks.len(),
            state.criteria()
        )));
    }
    let concordance = measure_ranks
        .iter()
        .map(|r| kendall_w(r, user))
        .collect::<Result<Vec<_>>>()?;
    state.absorb(&concordance)?;
    Ok(evm_weights(&build_matrix(state))?.weights)
}

pub fn learn_weights(
    state: &mut DeltaState,
    ranking: &FeedbackRanking,
    collection: &PatternCollection,
) -> Result<WeightVector> {
    let ranks = measure_ranks(collection, ranking)?;
    learn_weights_from_ranks(state, &ranking.to_ranks(), &ranks)
}

/// `g_w(P) = Σ w_i · scaled_i(P)`.
pub fn score_gw(record: &PatternRecord, weights: &WeightVector) -> Result<f64> {
    if record.scaled.len() != weights.len() {
        return Err(Error::arg(format!(
            "pattern {} has {} measures, weights have {}",
            record.id,
            record.scaled.len(),
            weights.len()
        )));
    }
    Ok(dot(&record.scaled, weights.as_slice()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sensitivity of a pair: `|Δg_w / Σ_l (M_l(P1) − M_l(P2))|` over scaled
/// values; `0/0 = 0`, `x/0 = +∞`.
pub fn sigma(p1: &PatternRecord, p2: &PatternRecord, weights: &WeightVector) -> Result<f64> {
    let gap = score_gw(p1, weights)? - score_gw(p2, weights)?;
    if p1.scaled.len() != p2.scaled.len() {
        return Err(Error::arg("patterns have different measure counts"));
    }
    let spread: f64 = p1.scaled.iter().zip(&p2.scaled).map(|(a, b)| a - b).sum();
    Ok(match (gap == 0.0, spread == 0.0) {
        (true, true) => 0.0,
        (false, true) => f64::INFINITY,
        _ => (gap / spread).abs(),
    })
}

/// Ids ordered by descending `g_w`, ties by ascending id.
pub fn rank_by_gw<'a>(
    records: impl IntoIterator<Item = &'a PatternRecord>,
    weights: &WeightVector,
) -> Result<Vec<(PatternId, f64)>> {
    let mut scored = records
        .into_iter()
        .map(|r| Ok((r.id, score_gw(r, weights)?)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0)));
    Ok(scored)
}

/// The adjacent pair (in descending `g_w` order) with the smallest σ. The
/// first pair in scan order wins ties; if every σ is infinite the top pair is
/// returned.
pub fn select_query(sample: &[&PatternRecord], weights: &WeightVector) -> Result<(PatternId, PatternId)> {
    if sample.len() < 2 {
        return Err(Error::arg("need at least two patterns to form a query"));
    }
    let mut sorted: Vec<(&PatternRecord, f64)> = sample
        .iter()
        .map(|r| Ok((*r, score_gw(r, weights)?)))
        .collect::<Result<Vec<_>>>()?;
    sorted.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.id.cmp(&b.0.id)));

    let mut best = (sorted[0].0.id, sorted[1].0.id);
    let mut best_sigma = f64::INFINITY;
    for pair in sorted.windows(2) {
        let s = sigma(pair[0].0, pair[1].0, weights)?;
        if s < best_sigma {
            best_sigma = s;
            best = (pair[0].0.id, pair[1].0.id);
        }
    }
    Ok(best)
}

/// Uniform sample of `min(theta, n)` distinct ids, without replacement.
pub fn sample_patterns<R: Rng>(collection: &PatternCollection, theta: usize, rng: &mut R) -> Result<Vec<PatternId>> {
    if theta < 2 {
        return Err(Error::arg("sample size must be at least 2"));
    }
    if collection.is_empty() {
        return Err(Error::arg("cannot sample from an empty collection"));
    }
    let n = collection.len();
    let records = collection.records();
    Ok(index::sample(rng, n, theta.min(n))
        .into_iter()
        .map(|k| records[k].id)
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PassiveOutcome {
    pub weights: WeightVector,
    /// Weights after each absorbed ranking.
    pub trace: Vec<WeightVector>,
    pub state: DeltaState,
}

/// Learns from every ranking in order, starting from zero gaps.
pub fn run_passive(rankings: &[FeedbackRanking], collection: &PatternCollection) -> Result<PassiveOutcome> {
    if rankings.is_empty() {
        return Err(Error::arg("passive learning needs at least one ranking"));
    }
    let mut state = DeltaState::new(collection.measure_count());
    let mut trace = Vec::with_capacity(rankings.len());
    for (index, ranking) in rankings.iter().enumerate() {
        let w = learn_weights(&mut state, ranking, collection).map_err(|e| Error::InvalidRanking {
            index,
            source: Box::new(e),
        })?;
        trace.push(w);
    }
    Ok(PassiveOutcome {
        weights: trace.last().cloned().expect("non-empty"),
        trace,
        state,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryStrategy {
    /// Minimal-σ adjacent pair of a random sample.
    #[default]
    Sbg,
    /// Two distinct patterns drawn uniformly from the whole collection.
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    /// Sample size per query.
    #[serde(default = "default_theta")]
    pub theta: usize,
    /// Query budget `T`.
    pub max_queries: usize,
    pub seed: u64,
    #[serde(default)]
    pub strategy: QueryStrategy,
}

fn default_theta() -> usize {
    1000
}

impl LearnerConfig {
    pub fn new(max_queries: usize, seed: u64) -> Self {
        LearnerConfig {
            theta: default_theta(),
            max_queries,
            seed,
            strategy: QueryStrategy::Sbg,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta < 2 {
            return Err(Error::arg("theta must be at least 2"));
        }
        if self.max_queries < 1 {
            return Err(Error::arg("the query budget must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActiveStep {
    /// 1-based.
    pub iteration: usize,
    pub query: (PatternId, PatternId),
    pub response: FeedbackRanking,
    pub weights: WeightVector,
}

/// Step-wise active learning state machine: `next_query`, then `answer`,
/// repeated until the budget is spent or [`stop`](Self::stop) is called.
#[derive(Clone, Debug)]
pub struct ActiveLearner {
    config: LearnerConfig,
    state: DeltaState,
    weights: WeightVector,
    rng: ChaCha8Rng,
    pending: Option<(PatternId, PatternId)>,
    trace: Vec<ActiveStep>,
    stopped: bool,
}

impl ActiveLearner {
    pub fn new(config: LearnerConfig, measure_count: usize) -> Result<Self> {
        config.validate()?;
        if measure_count < 2 {
            return Err(Error::arg("at least two measures are required"));
        }
        Ok(ActiveLearner {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            state: DeltaState::new(measure_count),
            weights: WeightVector::uniform(measure_count),
            pending: None,
            trace: Vec::new(),
            stopped: false,
        })
    }

    pub fn config(&self) -> &LearnerConfig {
        &self.config
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn state(&self) -> &DeltaState {
        &self.state
    }

    /// Answered queries so far.
    pub fn iteration(&self) -> usize {
        self.trace.len()
    }

    pub fn trace(&self) -> &[ActiveStep] {
        &self.trace
    }

    pub fn pending(&self) -> Option<(PatternId, PatternId)> {
        self.pending
    }

    pub fn is_finished(&self) -> bool {
        self.stopped || self.trace.len() >= self.config.max_queries
    }

    /// Ends the session early; a pending query is dropped.
    pub fn stop(&mut self) {
        self.stopped = true;
        self.pending = None;
    }

    /// The pair to present next. Repeated calls return the same pair until it
    /// is answered; `None` once finished.
    pub fn next_query(&mut self, collection: &PatternCollection) -> Result<Option<(PatternId, PatternId)>> {
        if self.is_finished() {
            return Ok(None);
        }
        if let Some(q) = self.pending {
            return Ok(Some(q));
        }
        if collection.measure_count() != self.state.criteria() {
            return Err(Error::arg("collection does not match the learner's measure count"));
        }
        if collection.len() < 2 {
            return Err(Error::arg("need at least two patterns to form a query"));
        }
        let query = match self.config.strategy {
            QueryStrategy::Sbg => {
                let ids = sample_patterns(collection, self.config.theta, &mut self.rng)?;
                let sample = ids
                    .iter()
                    .map(|id| collection.require(*id))
                    .collect::<Result<Vec<_>>>()?;
                select_query(&sample, &self.weights)?
            }
            QueryStrategy::Random => {
                let picks = index::sample(&mut self.rng, collection.len(), 2);
                let records = collection.records();
                (records[picks.index(0)].id, records[picks.index(1)].id)
            }
        };
        self.pending = Some(query);
        Ok(Some(query))
    }

    /// Learns from the user's order of the pending pair.
    pub fn answer(&mut self, collection: &PatternCollection, response: FeedbackRanking) -> Result<&WeightVector> {
        let Some((a, b)) = self.pending else {
            return Err(Error::arg("no pending query to answer"));
        };
        let mut got = response.ids().to_vec();
        got.sort_unstable();
        let mut want = vec![a, b];
        want.sort_unstable();
        if got != want {
            return Err(Error::arg(format!("response {:?} does not rank the pending pair ({a}, {b})", response.ids())));
        }
        let weights = learn_weights(&mut self.state, &response, collection)?;
        self.pending = None;
        self.weights = weights.clone();
        self.trace.push(ActiveStep {
            iteration: self.trace.len() + 1,
            query: (a, b),
            response,
            weights,
        });
        Ok(&self.weights)
    }

    /// Shorthand for a pairwise answer naming the preferred pattern.
    pub fn prefer(&mut self, collection: &PatternCollection, preferred: PatternId) -> Result<&WeightVector> {
        let Some((a, b)) = self.pending else {
            return Err(Error::arg("no pending query to answer"));
        };
        let other = if preferred == a {
            b
        } else if preferred == b {
            a
        } else {
            return Err(Error::arg(format!("pattern {preferred} is not part of the pending query")));
        };
        self.answer(collection, FeedbackRanking::new(vec![preferred, other])?)
    }
}

#[derive(Clone, Debug)]
pub struct ActiveOutcome {
    pub weights: WeightVector,
    pub trace: Vec<ActiveStep>,
    pub aborted: bool,
    /// Learner-side time per iteration: query selection plus weight update,
    /// excluding the oracle.
    pub latencies: Vec<Duration>,
}

/// Runs `config.max_queries` query/answer rounds against `oracle`, starting
/// from uniform weights. An oracle abort ends the run early.
pub fn run_active<O: FeedbackOracle + ?Sized>(
    oracle: &mut O,
    collection: &PatternCollection,
    config: &LearnerConfig,
) -> Result<ActiveOutcome> {
    let mut learner = ActiveLearner::new(config.clone(), collection.measure_count())?;
    let mut latencies = Vec::with_capacity(config.max_queries);
    let mut aborted = false;
    loop {
        let started = Instant::now();
        let Some((a, b)) = learner.next_query(collection)? else {
            break;
        };
        let mut spent = started.elapsed();
        let Some(response) = oracle.rank(collection, &[a, b])? else {
            aborted = true;
            break;
        };
        let started = Instant::now();
        learner.answer(collection, response)?;
        spent += started.elapsed();
        latencies.push(spent);
    }
    Ok(ActiveOutcome {
        weights: learner.weights().clone(),
        trace: learner.trace,
        aborted,
        latencies,
    })
}

/// `iteration, <measure weights…>, query_a, query_b, response` rows; the
/// response is `|`-joined, preferred first.
pub fn write_trace_csv<W: Write>(trace: &[ActiveStep], measure_names: &[String], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["iteration".to_string()];
    header.extend(measure_names.iter().map(|n| format!("w_{n}")));
    header.extend(["query_a", "query_b", "response"].map(String::from));
    w.write_record(&header)?;
    for step in trace {
        let mut row = vec![step.iteration.to_string()];
        row.extend(step.weights.as_slice().iter().map(|v| v.to_string()));
        row.push(step.query.0.to_string());
        row.push(step.query.1.to_string());
        row.push(
            step.response
                .ids()
                .iter()
                .map(|id| id.to_string())
                .collect::<Vec<_>>()
                .join("|"),
        );
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
